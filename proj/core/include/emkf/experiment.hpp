#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "emkf/config.hpp"
#include "emkf/regret.hpp"

namespace emkf {

struct EpsResult {
  double eps = 0.0;
  std::vector<AgentSummary> agents;  // in config agent order
  std::vector<RunFailure> failures;
};

struct ExperimentResult {
  std::vector<EpsResult> sweep;
  bool ok() const;
};

/// Runs the suite for every eps value, writing `trace.csv` (or per-run CSVs)
/// and `summary.json` into the output directory as configured. Progress and
/// failures go to `log`. Throws std::runtime_error when the output directory
/// cannot be created or written.
ExperimentResult run_experiment(const ExperimentConfig& cfg, std::ostream& log);

/// summary.json document for a finished sweep.
std::string summary_json(const ExperimentConfig& cfg, const ExperimentResult& result);

/// Full CLI: parse, run, report. Returns the process exit code.
int experiment_main(int argc, const char* const* argv, std::ostream& out,
                    std::ostream& err);

}  // namespace emkf
