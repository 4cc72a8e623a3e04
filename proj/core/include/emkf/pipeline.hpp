#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "emkf/lin_env.hpp"
#include "emkf/regret.hpp"

namespace emkf {

enum class AgentKind {
  kEmkfTs,    // Kalman filter + windowed M-step + Thompson sampling
  kEmkfUcb,   // Kalman filter + windowed M-step + LinUCB
  kOracleTs,  // Thompson sampling on the true latent context
  kTsPco,     // Thompson sampling on the raw partial observation
};

std::string_view agent_name(AgentKind kind);
std::optional<AgentKind> parse_agent(std::string_view name);
bool uses_filter(AgentKind kind);

/// Starting transition estimate D̂₀ for the filtering agents (Q̂₀ = I).
enum class InitialModel {
  kIdentity,  // D̂₀ = I
  kUniform,   // D̂₀ = 11ᵀ/d
};

std::string_view initial_model_name(InitialModel m);
std::optional<InitialModel> parse_initial_model(std::string_view name);

/// D̂₀ for the given choice and dimension.
MatrixXd initial_transition(InitialModel m, int d);

struct EnvParams {
  int d = 20;
  int k = 10;
  int arms = 15;
  double eps = 0.5;
  double sigma = 1.0;
  double s_obs = 0.1;
};

struct RunConfig {
  int horizon = 5000;
  int window = 50;
  EnvParams env;
  double delta = 0.1;
  double exploration_scale = 1.0;
  double ucb_alpha = 0.0;     // <= 0 selects default_ucb_alpha(T, K)
  bool pco_zero_pad = false;  // TS-PCO on [y; 0] in dimension d instead of y
  double ridge = 1e-6;
  double q_min = 1e-6;
  // With A = I_{k×d}, a diagonal D̂₀ keeps P block diagonal, so the unobserved
  // coordinates never receive gain and the M-step learns zero rows for them.
  InitialModel init_model = InitialModel::kUniform;

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

/// Bookkeeping of what an agent looked at during an episode.
struct EpisodeDiagnostics {
  long latent_reads = 0;       // reads of the true x_t through the feed
  long observation_reads = 0;  // reads of y_t through the feed
  std::vector<int> mstep_rounds;
};

/// Runs one episode of T rounds. Round t: the environment transitions and
/// emits y_t, the agent builds its context and picks an arm, the reward is
/// revealed, and the chosen arm's statistics are updated.
///
/// The ground truth comes from generate_ground_truth(cfg.env, seed) unless
/// supplied. Environment noise depends only on the seed, so agents sharing a
/// seed see identical contexts, observations and reward noise.
Trace run_episode(const RunConfig& cfg, AgentKind agent, std::uint64_t seed,
                  EpisodeDiagnostics* diagnostics = nullptr);
Trace run_episode(const RunConfig& cfg, AgentKind agent, std::uint64_t seed,
                  const GroundTruth& gt,
                  EpisodeDiagnostics* diagnostics = nullptr);

GroundTruth ground_truth_for(const RunConfig& cfg, std::uint64_t seed);

struct RunKey {
  AgentKind agent;
  std::uint64_t seed;
  auto operator<=>(const RunKey&) const = default;
};

struct RunFailure {
  RunKey key;
  std::string message;
};

struct SuiteResult {
  std::map<RunKey, Trace> traces;
  std::vector<RunFailure> failures;

  /// Traces of one agent keyed by seed.
  std::map<std::uint64_t, Trace> by_seed(AgentKind agent) const;
};

/// Runs agents × seeds on up to `workers` threads. A failing run is recorded
/// with its key and the rest of the suite continues.
SuiteResult run_suite(const RunConfig& cfg, std::span<const AgentKind> agents,
                      std::span<const std::uint64_t> seeds, int workers = 1);

}  // namespace emkf
