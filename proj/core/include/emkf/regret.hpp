#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "emkf/linalg.hpp"

namespace emkf {

/// One row of an experiment trace.
struct StepRecord {
  int t = 0;
  std::string agent;
  int arm = 0;
  double reward = 0.0;
  int oracle_arm = 0;
  double inst_regret = 0.0;
  double cum_regret = 0.0;
  std::optional<double> est_err;  // ‖x_t − x̂_t‖, filtering agents only
  double a3_monitor = 0.0;        // t · ‖B_{a_t}⁻¹‖₂ before the update
  double x_norm = 0.0;
  double xhat_norm = 0.0;         // norm of the context the agent acted on
  bool decomposition_ok = true;
};

using Trace = std::vector<StepRecord>;

/// argmax_a <x, μ_a>, lowest index on ties.
int oracle_arm(const VectorXd& x, std::span<const VectorXd> mu);

/// <x, μ_{a*}> − <x, μ_a>
double inst_regret(const VectorXd& x, std::span<const VectorXd> mu, int arm);

/// Checks Δ_a ≤ 2 M₁ ‖x − x̂‖ + Δ̂_a with M₁ = max_a ‖μ_a‖ and
/// Δ̂_a = max_b <x̂, μ_b> − <x̂, μ_a>. Holds for every input by
/// Cauchy–Schwarz; `tol` absorbs floating-point rounding only.
bool decomposition_check(const VectorXd& x, const VectorXd& x_hat,
                         std::span<const VectorXd> mu, int arm,
                         double tol = 1e-9);

/// Powers of two up to T, plus T itself.
std::vector<int> checkpoints(int horizon);

/// (R(T) − R(⌊T/2⌋)) / (R(⌊T/2⌋) − R(0)). NaN when the denominator is zero.
double slope_ratio(std::span<const double> cum_regret);

struct CheckpointStats {
  int t = 0;
  double mean_cum_regret = 0.0;
  double std_cum_regret = 0.0;     // population std over seeds
  std::optional<double> mean_est_err_rate;  // mean over seeds of Σ_{s≤t}‖ε_s‖ / t
};

struct AgentSummary {
  std::string agent;
  int runs = 0;
  int horizon = 0;
  std::vector<CheckpointStats> checkpoints;
  double slope_ratio = 0.0;                 // of the seed-mean R(t) curve
  std::optional<double> mean_sum_est_err;   // mean over seeds of Σ_t ‖ε_t‖
  double max_x_norm = 0.0;
  double max_xhat_norm = 0.0;
  double max_a3_monitor = 0.0;
  long decomposition_violations = 0;
  std::vector<double> mean_cum_regret;      // full seed-mean curve
};

/// Aggregates traces of one agent over seeds. Traces must share a horizon.
/// Aggregation is order independent: callers pass traces keyed by seed.
AgentSummary summarize(const std::string& agent,
                       const std::map<std::uint64_t, Trace>& traces_by_seed);

}  // namespace emkf
