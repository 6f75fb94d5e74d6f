#ifndef BOHMLAB_RUNNER_HPP
#define BOHMLAB_RUNNER_HPP

#include <string>
#include <vector>

#include "bohmlab/config.hpp"

namespace bohmlab {

struct Metric {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    std::string comparison = "<=";  // value <comparison> tolerance
    bool pass = false;
};

struct RunReport {
    std::string task;
    std::string config_echo;
    std::vector<Metric> metrics;
    std::vector<std::string> warnings;
    std::vector<std::string> artifacts;
    double wall_time_s = 0.0;
    std::string error;  // non-empty when the task aborted

    bool all_pass() const;
    std::string to_json() const;
};

// Executes the configured task, writes all artifacts under cfg.output_dir
// (including the report itself as report.json), and returns the report.
// Failures are captured in the report rather than thrown.
RunReport run_task(const RunConfig& cfg);

std::vector<std::string> task_catalog();

}  // namespace bohmlab

#endif
