#ifndef BOHMLAB_ERRORS_HPP
#define BOHMLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bohmlab {

// Base class for all domain errors thrown by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvertedBounds : Error {
    using Error::Error;
};
struct NotPowerOfTwo : Error {
    using Error::Error;
};
struct PacketEscapesGrid : Error {
    using Error::Error;
};
struct AllPointsMasked : Error {
    using Error::Error;
};
struct UnstableStep : Error {
    using Error::Error;
};
struct InconsistentGrids : Error {
    using Error::Error;
};
struct GridMismatch : Error {
    using Error::Error;
};
struct SeedOutOfRange : Error {
    using Error::Error;
};
struct UnresolvableKernel : Error {
    using Error::Error;
};
struct SolverDiverged : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};
struct TaskError : Error {
    using Error::Error;
};

}  // namespace bohmlab

#endif
