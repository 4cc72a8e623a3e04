#include "emkf/regret.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "emkf/errors.hpp"

namespace emkf {

int oracle_arm(const VectorXd& x, std::span<const VectorXd> mu) {
  if (mu.empty()) throw std::invalid_argument("no arms");
  int best = 0;
  double best_value = x.dot(mu[0]);
  for (std::size_t a = 1; a < mu.size(); ++a) {
    const double value = x.dot(mu[a]);
    if (value > best_value) {
      best_value = value;
      best = static_cast<int>(a);
    }
  }
  return best;
}

double inst_regret(const VectorXd& x, std::span<const VectorXd> mu, int arm) {
  if (arm < 0 || static_cast<std::size_t>(arm) >= mu.size()) {
    throw std::out_of_range("arm index out of range");
  }
  const int best = oracle_arm(x, mu);
  return x.dot(mu[static_cast<std::size_t>(best)]) -
         x.dot(mu[static_cast<std::size_t>(arm)]);
}

bool decomposition_check(const VectorXd& x, const VectorXd& x_hat,
                         std::span<const VectorXd> mu, int arm, double tol) {
  if (x.size() != x_hat.size()) throw DimensionError("x and x_hat differ in length");
  double m1 = 0.0;
  for (const auto& m : mu) m1 = std::max(m1, m.norm());
  const double lhs = inst_regret(x, mu, arm);
  const double estimated_gap = inst_regret(x_hat, mu, arm);
  const double rhs = 2.0 * m1 * (x - x_hat).norm() + estimated_gap;
  const double scale = 1.0 + std::abs(lhs) + std::abs(rhs);
  return lhs <= rhs + tol * scale;
}

std::vector<int> checkpoints(int horizon) {
  std::vector<int> out;
  for (long p = 1; p <= horizon; p *= 2) out.push_back(static_cast<int>(p));
  if (out.empty() || out.back() != horizon) out.push_back(horizon);
  return out;
}

double slope_ratio(std::span<const double> cum_regret) {
  const auto horizon = cum_regret.size();
  if (horizon == 0) return std::numeric_limits<double>::quiet_NaN();
  const auto half = horizon / 2;
  const double r_end = cum_regret[horizon - 1];
  const double r_half = half == 0 ? 0.0 : cum_regret[half - 1];
  if (r_half == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (r_end - r_half) / r_half;
}

AgentSummary summarize(const std::string& agent,
                       const std::map<std::uint64_t, Trace>& traces_by_seed) {
  if (traces_by_seed.empty()) throw std::invalid_argument("summarize: no traces");
  const auto horizon = traces_by_seed.begin()->second.size();
  if (horizon == 0) throw std::invalid_argument("summarize: empty trace");
  for (const auto& [seed, trace] : traces_by_seed) {
    if (trace.size() != horizon) {
      throw std::invalid_argument("summarize: traces differ in horizon");
    }
  }

  AgentSummary s;
  s.agent = agent;
  s.runs = static_cast<int>(traces_by_seed.size());
  s.horizon = static_cast<int>(horizon);
  const double n = static_cast<double>(s.runs);

  s.mean_cum_regret.assign(horizon, 0.0);
  bool has_err = true;
  double sum_err_total = 0.0;
  // Running Σ‖ε‖ per seed, evaluated at checkpoints.
  const auto cps = checkpoints(s.horizon);
  std::vector<double> err_rate_sum(cps.size(), 0.0);

  for (const auto& [seed, trace] : traces_by_seed) {
    double running_err = 0.0;
    std::size_t cp = 0;
    for (std::size_t i = 0; i < horizon; ++i) {
      const StepRecord& r = trace[i];
      s.mean_cum_regret[i] += r.cum_regret;
      s.max_x_norm = std::max(s.max_x_norm, r.x_norm);
      s.max_xhat_norm = std::max(s.max_xhat_norm, r.xhat_norm);
      s.max_a3_monitor = std::max(s.max_a3_monitor, r.a3_monitor);
      if (!r.decomposition_ok) ++s.decomposition_violations;
      if (r.est_err) {
        running_err += *r.est_err;
      } else {
        has_err = false;
      }
      if (cp < cps.size() && static_cast<int>(i + 1) == cps[cp]) {
        err_rate_sum[cp] += running_err / cps[cp];
        ++cp;
      }
    }
    sum_err_total += running_err;
  }
  for (double& v : s.mean_cum_regret) v /= n;

  for (std::size_t c = 0; c < cps.size(); ++c) {
    CheckpointStats cs;
    cs.t = cps[c];
    const auto idx = static_cast<std::size_t>(cs.t - 1);
    cs.mean_cum_regret = s.mean_cum_regret[idx];
    double var = 0.0;
    for (const auto& [seed, trace] : traces_by_seed) {
      const double dev = trace[idx].cum_regret - cs.mean_cum_regret;
      var += dev * dev;
    }
    cs.std_cum_regret = std::sqrt(var / n);
    if (has_err) cs.mean_est_err_rate = err_rate_sum[c] / n;
    s.checkpoints.push_back(cs);
  }
  s.slope_ratio = slope_ratio(s.mean_cum_regret);
  if (has_err) s.mean_sum_est_err = sum_err_total / n;
  return s;
}

}  // namespace emkf
