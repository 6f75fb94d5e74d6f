#include "bohmlab/propagator.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

#include "bohmlab/parallel.hpp"
#include "bohmlab/states.hpp"

namespace bohmlab {

using RowMajorMat =
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

double short_time_action(double q, double q_final, double epsilon, const Potential& pot,
                         const PhysicalParams& params) {
    if (!(epsilon > 0.0)) throw Error("short_time_action: epsilon must be positive");
    const double d = q_final - q;
    return params.mass * d * d / (2.0 * epsilon) -
           epsilon * pot.value(0.5 * (q + q_final), params);
}

MomentumTAs momentum_TAs(double q, double q_final, double epsilon, const Potential& pot,
                         const PhysicalParams& params) {
    if (!(epsilon > 0.0)) throw Error("momentum_TAs: epsilon must be positive");
    const double kin = params.mass * (q_final - q) / epsilon;
    const double dv = 0.5 * epsilon * pot.derivative(0.5 * (q + q_final), params);
    // S = m(q'-q)^2/2eps - eps V(mid):
    //   -dS/dq  = m(q'-q)/eps + eps V'(mid)/2
    //   +dS/dq' = m(q'-q)/eps - eps V'(mid)/2
    return {kin + dv, kin - dv};
}

MidpointSample midpoint_momentum(double q, double q_final, double epsilon,
                                 const PhysicalParams& params) {
    if (!(epsilon > 0.0)) throw Error("midpoint_momentum: epsilon must be positive");
    MidpointSample s;
    s.q = q;
    s.q_final = q_final;
    s.Q = 0.5 * (q + q_final);
    s.epsilon = epsilon;
    s.p_backward = params.mass * (s.Q - q) / epsilon;
    s.p_forward = params.mass * (q_final - s.Q) / epsilon;
    return s;
}

KernelMatrix::KernelMatrix(SpatialGrid grid, double epsilon)
    : grid_(grid), epsilon_(epsilon), values_(grid.n_points * grid.n_points, cplx(0.0, 0.0)) {}

double KernelMatrix::alias_displacement(const PhysicalParams& params) const {
    return 2.0 * std::numbers::pi * params.hbar * epsilon_ / (params.mass * grid_.dq);
}

WaveField KernelMatrix::apply(const WaveField& psi) const {
    if (psi.grid != grid_) throw GridMismatch("KernelMatrix::apply: grids differ");
    const auto n = static_cast<Eigen::Index>(size());
    Eigen::Map<const RowMajorMat> K(values_.data(), n, n);
    Eigen::Map<const Eigen::VectorXcd> x(psi.values.data(), n);

    WaveField out;
    out.grid = grid_;
    out.time = psi.time + epsilon_;
    out.values.resize(size());
    Eigen::Map<Eigen::VectorXcd> y(out.values.data(), n);
    y.noalias() = K * x;
    return out;
}

KernelMatrix build_kernel(const SpatialGrid& grid, double epsilon, const Potential& pot,
                          const PhysicalParams& params, bool banded, std::size_t n_threads) {
    if (!(epsilon > 0.0)) throw Error("build_kernel: epsilon must be positive");
    if (grid.n_points > 8192)
        throw Error("build_kernel: dense kernel limited to n_points <= 8192");

    const double width = std::sqrt(params.hbar * epsilon / params.mass);
    if (width < 0.5 * grid.dq)
        throw UnresolvableKernel("build_kernel: sqrt(hbar eps/m) = " + std::to_string(width) +
                                 " is below dq/2 = " + std::to_string(0.5 * grid.dq));

    KernelMatrix K(grid, epsilon);
    if (width < grid.dq)
        K.warnings().push_back("kernel scale sqrt(hbar eps/m) below dq; quadrature unresolved");

    const double amp = std::sqrt(params.mass / (2.0 * std::numbers::pi * params.hbar * epsilon));
    // 1/sqrt(i) with the e^{i pi/4} branch of sqrt(i)
    const cplx norm = amp * std::exp(cplx(0.0, -std::numbers::pi / 4.0));
    const double band = banded ? 8.0 * width : -1.0;
    const std::size_t n = grid.n_points;

    parallel_chunks(n, n_threads, [&](std::size_t, std::size_t b, std::size_t e) {
        for (std::size_t j = b; j < e; ++j) {
            const double qj = grid.q(j);
            for (std::size_t k = 0; k < n; ++k) {
                const double qk = grid.q(k);
                if (banded && std::abs(qj - qk) > band) continue;
                const double s = short_time_action(qk, qj, epsilon, pot, params);
                K.at(j, k) = norm * std::exp(cplx(0.0, s / params.hbar)) * grid.dq;
            }
        }
    });
    return K;
}

KernelMatrix compose_chain(std::span<const KernelMatrix> kernels) {
    if (kernels.empty()) throw Error("compose_chain: empty chain");
    for (const auto& k : kernels)
        if (k.grid() != kernels.front().grid())
            throw GridMismatch("compose_chain: kernels on different grids");

    const auto n = static_cast<Eigen::Index>(kernels.front().size());
    RowMajorMat acc = Eigen::Map<const RowMajorMat>(kernels.front().values().data(), n, n);
    for (std::size_t i = 1; i < kernels.size(); ++i) {
        Eigen::Map<const RowMajorMat> K(kernels[i].values().data(), n, n);
        RowMajorMat next(n, n);
        next.noalias() = K * acc;  // later slices act on the left
        acc.swap(next);
    }

    double total = 0.0;
    for (const auto& k : kernels) {
        total += k.epsilon();
    }
    KernelMatrix result(kernels.front().grid(), total);
    Eigen::Map<RowMajorMat>(result.values().data(), n, n) = acc;
    for (const auto& k : kernels)
        result.warnings().insert(result.warnings().end(), k.warnings().begin(),
                                 k.warnings().end());
    return result;
}

WaveField apply_free_kernel_fft(const SpatialGrid& grid, double epsilon,
                                const PhysicalParams& params, const WaveField& psi) {
    if (psi.grid != grid) throw GridMismatch("apply_free_kernel_fft: grids differ");
    const std::size_t n = grid.n_points;
    const std::size_t padded = 2 * n;  // power of two since n is

    const double amp = std::sqrt(params.mass / (2.0 * std::numbers::pi * params.hbar * epsilon));
    const cplx norm = amp * std::exp(cplx(0.0, -std::numbers::pi / 4.0));
    const double chirp = params.mass / (2.0 * params.hbar * epsilon);

    // circulant embedding of the Toeplitz symbol c_d, d in (-n, n)
    std::vector<cplx> sym(padded, cplx(0.0, 0.0));
    for (std::size_t d = 0; d < n; ++d) {
        const double x = static_cast<double>(d) * grid.dq;
        sym[d] = norm * std::exp(cplx(0.0, chirp * x * x)) * grid.dq;
    }
    for (std::size_t d = 1; d < n; ++d) sym[padded - d] = sym[d];  // even symbol

    std::vector<cplx> buf(padded, cplx(0.0, 0.0));
    for (std::size_t j = 0; j < n; ++j) buf[j] = psi.values[j];

    fft(sym);
    fft(buf);
    for (std::size_t j = 0; j < padded; ++j) buf[j] *= sym[j];
    ifft(buf);

    WaveField out;
    out.grid = grid;
    out.time = psi.time + epsilon;
    out.values.assign(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(n));
    return out;
}

double unitarity_deviation(const KernelMatrix& kernel, const PhysicalParams& params,
                           std::size_t n_samples) {
    const SpatialGrid& grid = kernel.grid();
    const auto n = static_cast<Eigen::Index>(kernel.size());
    Eigen::Map<const RowMajorMat> K(kernel.values().data(), n, n);

    const double span = grid.length();
    double worst = 0.0;
    for (std::size_t s = 0; s < n_samples; ++s) {
        const double center =
            grid.q_min + span * (0.38 + 0.24 * static_cast<double>(s) /
                                            std::max<std::size_t>(1, n_samples - 1));
        const WaveField psi = gaussian_packet(grid, params, center, 0.05 * span, 0.0);
        Eigen::Map<const Eigen::VectorXcd> x(psi.values.data(), n);
        Eigen::VectorXcd y = K * x;
        Eigen::VectorXcd back = K.adjoint() * y;
        const double dev = std::sqrt((back - x).squaredNorm() * grid.dq);
        worst = std::max(worst, dev);
    }
    return worst;
}

}  // namespace bohmlab
