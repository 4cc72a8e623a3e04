#include "emkf/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "emkf/bandit.hpp"
#include "emkf/kalman_filter.hpp"
#include "emkf/sysid_em.hpp"

namespace emkf {

std::string_view agent_name(AgentKind kind) {
  switch (kind) {
    case AgentKind::kEmkfTs: return "EMKF_TS";
    case AgentKind::kEmkfUcb: return "EMKF_UCB";
    case AgentKind::kOracleTs: return "ORACLE_TS";
    case AgentKind::kTsPco: return "TS_PCO";
  }
  return "UNKNOWN";
}

std::optional<AgentKind> parse_agent(std::string_view name) {
  for (auto kind : {AgentKind::kEmkfTs, AgentKind::kEmkfUcb,
                    AgentKind::kOracleTs, AgentKind::kTsPco}) {
    if (agent_name(kind) == name) return kind;
  }
  return std::nullopt;
}

std::string_view initial_model_name(InitialModel m) {
  return m == InitialModel::kIdentity ? "identity" : "uniform";
}

std::optional<InitialModel> parse_initial_model(std::string_view name) {
  if (name == "identity") return InitialModel::kIdentity;
  if (name == "uniform") return InitialModel::kUniform;
  return std::nullopt;
}

MatrixXd initial_transition(InitialModel m, int d) {
  if (m == InitialModel::kIdentity) return MatrixXd::Identity(d, d);
  return MatrixXd::Constant(d, d, 1.0 / d);
}

bool uses_filter(AgentKind kind) {
  return kind == AgentKind::kEmkfTs || kind == AgentKind::kEmkfUcb;
}

void RunConfig::validate() const {
  if (horizon < 1) throw std::invalid_argument("T must be >= 1");
  if (window < 1) throw std::invalid_argument("L must be >= 1");
  if (env.d < 1 || env.k < 1 || env.k > env.d || env.arms < 1) {
    throw std::invalid_argument("need d >= 1, 1 <= k <= d, K >= 1");
  }
  if (!(env.eps > 0.0)) throw std::invalid_argument("eps must be > 0");
  if (!(env.sigma >= 0.0)) throw std::invalid_argument("sigma must be >= 0");
  if (!(env.s_obs >= 0.0)) throw std::invalid_argument("s_obs must be >= 0");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
  if (!(exploration_scale >= 0.0)) {
    throw std::invalid_argument("exploration_scale must be >= 0");
  }
  if (!(ridge >= 0.0) || !(q_min >= 0.0)) {
    throw std::invalid_argument("ridge and q_min must be >= 0");
  }
}

GroundTruth ground_truth_for(const RunConfig& cfg, std::uint64_t seed) {
  return generate_ground_truth(cfg.env.d, cfg.env.k, cfg.env.arms, cfg.env.eps,
                               cfg.env.sigma, seed, cfg.env.s_obs);
}

namespace {

// The only path from the environment to an agent. Counts every read so tests
// can confirm which signals each agent consumed.
class RoundFeed {
 public:
  RoundFeed(const Environment& env, EpisodeDiagnostics& diag)
      : env_(env), diag_(diag) {}

  const VectorXd& latent() {
    ++diag_.latent_reads;
    return env_.context();
  }
  const VectorXd& observation() {
    ++diag_.observation_reads;
    return env_.observation();
  }

 private:
  const Environment& env_;
  EpisodeDiagnostics& diag_;
};

struct Decision {
  int arm = 0;
  double a3_monitor = 0.0;
  double context_norm = 0.0;
  VectorXd lifted_context;  // context expressed in R^d for regret bookkeeping
};

enum class Policy { kThompson, kUcb };

class Agent {
 public:
  Agent(int dim, int arms, Policy policy, const RunConfig& cfg, std::uint64_t seed)
      : policy_(policy), rng_(seed, Stream::kAgent) {
    arms_.reserve(static_cast<std::size_t>(arms));
    for (int a = 0; a < arms; ++a) arms_.emplace_back(dim);
    ts_.sigma = cfg.env.sigma;
    ts_.delta = cfg.delta;
    ts_.d = dim;
    ts_.exploration_scale = cfg.exploration_scale;
    ucb_.alpha = cfg.ucb_alpha > 0.0 ? cfg.ucb_alpha
                                     : default_ucb_alpha(cfg.horizon, arms);
  }
  virtual ~Agent() = default;

  // Builds the context for round t; also performs any per-round estimation.
  virtual VectorXd context(RoundFeed& feed, int t, EpisodeDiagnostics& diag) = 0;
  virtual VectorXd lift(const VectorXd& context) const { return context; }
  virtual std::optional<VectorXd> estimate() const { return std::nullopt; }

  Decision decide(RoundFeed& feed, int t, EpisodeDiagnostics& diag) {
    context_ = context(feed, t, diag);
    Decision out;
    out.arm = policy_ == Policy::kThompson ? ts_select(arms_, context_, t, ts_, rng_)
                                           : ucb_select(arms_, context_, ucb_);
    out.a3_monitor = t * arms_[static_cast<std::size_t>(out.arm)].inverse_norm();
    out.context_norm = context_.norm();
    out.lifted_context = lift(context_);
    return out;
  }

  void learn(int arm, double reward) {
    arms_[static_cast<std::size_t>(arm)].update(context_, reward);
  }

 private:
  Policy policy_;
  Rng rng_;
  std::vector<ArmStats> arms_;
  TsConfig ts_;
  UcbConfig ucb_;
  VectorXd context_;
};

class FilteringAgent final : public Agent {
 public:
  FilteringAgent(const GroundTruth& gt, Policy policy, const RunConfig& cfg,
                 std::uint64_t seed)
      : Agent(gt.d(), gt.arms(), policy, cfg, seed),
        filter_(gt.A, gt.Sigma, initial_transition(cfg.init_model, gt.d()),
                MatrixXd::Identity(gt.d(), gt.d())),
        sysid_(gt.d(), SysIdOptions{cfg.window, cfg.ridge, cfg.q_min, -1}) {}

  VectorXd context(RoundFeed& feed, int t, EpisodeDiagnostics& diag) override {
    const VectorXd& x_hat = filter_.filter_round(feed.observation());
    sysid_.push(x_hat);
    // The new model takes effect from the next round's prediction.
    if (auto est = sysid_.maybe_mstep(t)) {
      filter_.set_model(est->D_hat, est->Q_hat);
      diag.mstep_rounds.push_back(t);
    }
    return x_hat;
  }

  std::optional<VectorXd> estimate() const override { return filter_.state().x; }

 private:
  KalmanFilter filter_;
  SysIdAccumulator sysid_;
};

class OracleAgent final : public Agent {
 public:
  OracleAgent(const GroundTruth& gt, const RunConfig& cfg, std::uint64_t seed)
      : Agent(gt.d(), gt.arms(), Policy::kThompson, cfg, seed) {}

  VectorXd context(RoundFeed& feed, int, EpisodeDiagnostics&) override {
    return feed.latent();
  }
};

class PartialObservationAgent final : public Agent {
 public:
  PartialObservationAgent(const GroundTruth& gt, const RunConfig& cfg,
                          std::uint64_t seed)
      : Agent(cfg.pco_zero_pad ? gt.d() : gt.k(), gt.arms(), Policy::kThompson,
              cfg, seed),
        A_(gt.A),
        zero_pad_(cfg.pco_zero_pad) {}

  VectorXd context(RoundFeed& feed, int, EpisodeDiagnostics&) override {
    const VectorXd& y = feed.observation();
    if (!zero_pad_) return y;
    VectorXd padded = VectorXd::Zero(A_.cols());
    padded.head(y.size()) = y;
    return padded;
  }

  VectorXd lift(const VectorXd& context) const override {
    if (zero_pad_) return context;
    return A_.transpose() * context;
  }

 private:
  MatrixXd A_;
  bool zero_pad_;
};

std::unique_ptr<Agent> make_agent(AgentKind kind, const GroundTruth& gt,
                                  const RunConfig& cfg, std::uint64_t seed) {
  switch (kind) {
    case AgentKind::kEmkfTs:
      return std::make_unique<FilteringAgent>(gt, Policy::kThompson, cfg, seed);
    case AgentKind::kEmkfUcb:
      return std::make_unique<FilteringAgent>(gt, Policy::kUcb, cfg, seed);
    case AgentKind::kOracleTs:
      return std::make_unique<OracleAgent>(gt, cfg, seed);
    case AgentKind::kTsPco:
      return std::make_unique<PartialObservationAgent>(gt, cfg, seed);
  }
  throw std::invalid_argument("unknown agent kind");
}

}  // namespace

Trace run_episode(const RunConfig& cfg, AgentKind agent, std::uint64_t seed,
                  EpisodeDiagnostics* diagnostics) {
  return run_episode(cfg, agent, seed, ground_truth_for(cfg, seed), diagnostics);
}

Trace run_episode(const RunConfig& cfg, AgentKind agent, std::uint64_t seed,
                  const GroundTruth& gt, EpisodeDiagnostics* diagnostics) {
  cfg.validate();
  EpisodeDiagnostics local;
  EpisodeDiagnostics& diag = diagnostics ? *diagnostics : local;

  Environment env(gt, seed);
  auto learner = make_agent(agent, gt, cfg, seed);
  RoundFeed feed(env, diag);
  const std::span<const VectorXd> mu(gt.mu);
  const std::string name(agent_name(agent));

  Trace trace;
  trace.reserve(static_cast<std::size_t>(cfg.horizon));
  double cumulative = 0.0;
  for (int t = 1; t <= cfg.horizon; ++t) {
    env.step();
    const Decision decision = learner->decide(feed, t, diag);
    const double reward = env.reward(decision.arm);
    learner->learn(decision.arm, reward);

    const VectorXd& x = env.context();
    StepRecord rec;
    rec.t = t;
    rec.agent = name;
    rec.arm = decision.arm;
    rec.reward = reward;
    rec.oracle_arm = oracle_arm(x, mu);
    rec.inst_regret = inst_regret(x, mu, decision.arm);
    cumulative += rec.inst_regret;
    rec.cum_regret = cumulative;
    if (auto x_hat = learner->estimate()) rec.est_err = (x - *x_hat).norm();
    rec.a3_monitor = decision.a3_monitor;
    rec.x_norm = x.norm();
    rec.xhat_norm = decision.context_norm;
    rec.decomposition_ok =
        decomposition_check(x, decision.lifted_context, mu, decision.arm);
    trace.push_back(std::move(rec));
  }
  return trace;
}

std::map<std::uint64_t, Trace> SuiteResult::by_seed(AgentKind agent) const {
  std::map<std::uint64_t, Trace> out;
  for (const auto& [key, trace] : traces) {
    if (key.agent == agent) out.emplace(key.seed, trace);
  }
  return out;
}

SuiteResult run_suite(const RunConfig& cfg, std::span<const AgentKind> agents,
                      std::span<const std::uint64_t> seeds, int workers) {
  if (agents.empty() || seeds.empty()) {
    throw std::invalid_argument("run_suite needs at least one agent and one seed");
  }
  std::vector<RunKey> jobs;
  for (auto agent : agents) {
    for (auto seed : seeds) jobs.push_back({agent, seed});
  }

  SuiteResult result;
  std::mutex collector;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const RunKey key = jobs[i];
      try {
        Trace trace = run_episode(cfg, key.agent, key.seed);
        std::lock_guard lock(collector);
        result.traces.insert_or_assign(key, std::move(trace));
      } catch (const std::exception& e) {
        std::lock_guard lock(collector);
        result.failures.push_back({key, e.what()});
      }
    }
  };

  const int n = std::clamp(workers, 1, static_cast<int>(jobs.size()));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
  }
  std::sort(result.failures.begin(), result.failures.end(),
            [](const RunFailure& a, const RunFailure& b) { return a.key < b.key; });
  return result;
}

}  // namespace emkf
