#include "emkf/experiment.hpp"

#include <fstream>
#include <ostream>
#include <stdexcept>

#include "emkf/errors.hpp"
#include "emkf/trace_io.hpp"
#include "json.hpp"

namespace emkf {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

ordered_json optional_number(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::string run_file_name(double eps, AgentKind agent, std::uint64_t seed) {
  return "trace_eps" + format_double(eps) + "_" + std::string(agent_name(agent)) +
         "_seed" + std::to_string(seed) + ".csv";
}

}  // namespace

bool ExperimentResult::ok() const {
  for (const auto& e : sweep) {
    if (!e.failures.empty()) return false;
  }
  return true;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, std::ostream& log) {
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec || !fs::is_directory(cfg.output_dir)) {
    throw std::runtime_error("cannot create output directory '" +
                             cfg.output_dir.string() + "'");
  }

  std::ofstream long_csv;
  if (cfg.csv && !cfg.per_run_csv) {
    long_csv = open_output(cfg.output_dir / "trace.csv");
    long_csv << kCsvHeader << '\n';
  }

  ExperimentResult result;
  for (double eps : cfg.eps_sweep) {
    RunConfig run = cfg.run;
    run.env.eps = eps;
    log << "eps=" << format_double(eps) << ": " << cfg.agents.size()
        << " agents x " << cfg.seeds.size() << " seeds, T=" << run.horizon << '\n';

    SuiteResult suite = run_suite(run, cfg.agents, cfg.seeds, cfg.jobs);

    EpsResult eps_result;
    eps_result.eps = eps;
    eps_result.failures = suite.failures;
    for (const auto& f : suite.failures) {
      log << "run failed (eps=" << format_double(eps) << ", agent="
          << agent_name(f.key.agent) << ", seed=" << f.key.seed
          << "): " << f.message << '\n';
    }

    for (AgentKind agent : cfg.agents) {
      for (std::uint64_t seed : cfg.seeds) {
        const auto it = suite.traces.find(RunKey{agent, seed});
        if (it == suite.traces.end() || !cfg.csv) continue;
        if (cfg.per_run_csv) {
          auto out = open_output(cfg.output_dir / run_file_name(eps, agent, seed));
          out << kCsvHeader << '\n';
          write_csv_rows(out, it->second, eps, seed);
        } else {
          write_csv_rows(long_csv, it->second, eps, seed);
        }
      }
      auto traces = suite.by_seed(agent);
      if (!traces.empty()) {
        eps_result.agents.push_back(summarize(std::string(agent_name(agent)), traces));
      }
    }
    result.sweep.push_back(std::move(eps_result));
  }
  if (long_csv.is_open()) {
    long_csv.flush();
    if (!long_csv) throw std::runtime_error("failed writing trace.csv");
  }

  if (cfg.json) {
    auto out = open_output(cfg.output_dir / "summary.json");
    out << summary_json(cfg, result) << '\n';
    if (!out) throw std::runtime_error("failed writing summary.json");
  }
  return result;
}

std::string summary_json(const ExperimentConfig& cfg, const ExperimentResult& result) {
  ordered_json doc;
  ordered_json conf;
  conf["d"] = cfg.run.env.d;
  conf["k"] = cfg.run.env.k;
  conf["K"] = cfg.run.env.arms;
  conf["sigma"] = cfg.run.env.sigma;
  conf["s_obs"] = cfg.run.env.s_obs;
  conf["T"] = cfg.run.horizon;
  conf["L"] = cfg.run.window;
  conf["delta"] = cfg.run.delta;
  conf["exploration_scale"] = cfg.run.exploration_scale;
  conf["ucb_alpha"] = cfg.run.ucb_alpha;
  conf["ridge"] = cfg.run.ridge;
  conf["q_min"] = cfg.run.q_min;
  conf["pco_zero_pad"] = cfg.run.pco_zero_pad;
  conf["init_model"] = std::string(initial_model_name(cfg.run.init_model));
  conf["seeds"] = cfg.seeds;
  conf["eps"] = cfg.eps_sweep;
  ordered_json agents = ordered_json::array();
  for (auto a : cfg.agents) agents.push_back(std::string(agent_name(a)));
  conf["agents"] = agents;
  doc["config"] = conf;

  ordered_json results = ordered_json::array();
  ordered_json failures = ordered_json::array();
  for (const auto& e : result.sweep) {
    for (const auto& s : e.agents) {
      ordered_json entry;
      entry["eps"] = e.eps;
      entry["agent"] = s.agent;
      entry["runs"] = s.runs;
      entry["horizon"] = s.horizon;
      entry["slope_ratio"] = s.slope_ratio;
      entry["mean_sum_est_err"] = optional_number(s.mean_sum_est_err);
      entry["max_x_norm"] = s.max_x_norm;
      entry["max_xhat_norm"] = s.max_xhat_norm;
      entry["max_a3_monitor"] = s.max_a3_monitor;
      entry["decomposition_violations"] = s.decomposition_violations;
      ordered_json cps = ordered_json::array();
      for (const auto& c : s.checkpoints) {
        ordered_json cp;
        cp["t"] = c.t;
        cp["mean_cum_regret"] = c.mean_cum_regret;
        cp["std_cum_regret"] = c.std_cum_regret;
        cp["mean_est_err_rate"] = optional_number(c.mean_est_err_rate);
        cps.push_back(cp);
      }
      entry["checkpoints"] = cps;
      results.push_back(entry);
    }
    for (const auto& f : e.failures) {
      failures.push_back({{"eps", e.eps},
                          {"agent", std::string(agent_name(f.key.agent))},
                          {"seed", f.key.seed},
                          {"error", f.message}});
    }
  }
  doc["results"] = results;
  doc["failures"] = failures;
  return doc.dump(2);
}

int experiment_main(int argc, const char* const* argv, std::ostream& out,
                    std::ostream& err) {
  ExperimentConfig cfg;
  try {
    cfg = parse_config(argc, argv);
  } catch (const HelpRequested& h) {
    out << h.what();
    return 0;
  } catch (const ConfigError& e) {
    err << "config error [" << e.field() << "]: " << e.what() << '\n';
    return 2;
  }

  try {
    const ExperimentResult result = run_experiment(cfg, out);
    if (!result.ok()) {
      err << "one or more runs failed; see log above\n";
      return 1;
    }
    for (const auto& e : result.sweep) {
      for (const auto& s : e.agents) {
        out << "eps=" << format_double(e.eps) << " " << s.agent
            << " R(T)=" << s.mean_cum_regret.back()
            << " slope_ratio=" << s.slope_ratio << '\n';
      }
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace emkf
