#include "emkf/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <cctype>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

#include "CLI11.hpp"
#include "emkf/errors.hpp"

namespace emkf {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& field, const std::string& text) {
  const std::string s = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError(field, "expected a number, got '" + text + "'");
  }
  return v;
}

long long to_integer(const std::string& field, const std::string& text) {
  const std::string s = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError(field, "expected an integer, got '" + text + "'");
  }
  return v;
}

int to_int(const std::string& field, const std::string& text, long long lo) {
  const long long v = to_integer(field, text);
  if (v < lo || v > std::numeric_limits<int>::max()) {
    throw ConfigError(field, "out of range: " + text + " (minimum " +
                                 std::to_string(lo) + ")");
  }
  return static_cast<int>(v);
}

bool to_bool(const std::string& field, const std::string& text) {
  std::string s = trim(text);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw ConfigError(field, "expected a boolean, got '" + text + "'");
}

void require(bool ok, const std::string& field, const std::string& message) {
  if (!ok) throw ConfigError(field, message);
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "d",     "k",     "K",          "sigma",      "s_obs",
      "T",     "L",     "delta",      "exploration_scale",
      "ucb_alpha", "ridge", "q_min",  "pco_zero_pad", "init_model",
      "seeds", "agents", "eps",       "out",        "jobs",
      "csv",   "json",  "per_run_csv"};
  return keys;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& field,
                                           const std::string& text) {
  std::vector<std::uint64_t> seeds;
  for (const auto& item : split_list(text)) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      const long long v = to_integer(field, item);
      require(v >= 0, field, "seeds must be >= 0");
      seeds.push_back(static_cast<std::uint64_t>(v));
      continue;
    }
    const long long lo = to_integer(field, item.substr(0, dots));
    const long long hi = to_integer(field, item.substr(dots + 2));
    require(lo >= 0 && lo <= hi, field, "bad seed range '" + item + "'");
    for (long long s = lo; s <= hi; ++s) seeds.push_back(static_cast<std::uint64_t>(s));
  }
  require(!seeds.empty(), field, "at least one seed is required");
  return seeds;
}

KeyValues read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path.string() + "'");
  KeyValues values;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config", path.string() + ":" + std::to_string(lineno) +
                                      ": expected key = value");
    }
    values[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return values;
}

ExperimentConfig config_from_key_values(const KeyValues& values,
                                        std::optional<std::string> env_out) {
  const auto& known = config_keys();
  for (const auto& [key, value] : values) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError(key, "unknown key");
    }
  }
  auto get = [&](const std::string& key) -> const std::string* {
    const auto it = values.find(key);
    return it == values.end() ? nullptr : &it->second;
  };

  ExperimentConfig cfg;
  cfg.run.env = EnvParams{};
  cfg.seeds = parse_seed_list("seeds", "0..19");
  cfg.agents = {AgentKind::kEmkfTs, AgentKind::kEmkfUcb, AgentKind::kOracleTs,
                AgentKind::kTsPco};
  cfg.eps_sweep = {0.1, 0.5, 1.0};

  RunConfig& run = cfg.run;
  if (auto v = get("d")) run.env.d = to_int("d", *v, 1);
  if (auto v = get("k")) run.env.k = to_int("k", *v, 1);
  if (auto v = get("K")) run.env.arms = to_int("K", *v, 1);
  if (auto v = get("sigma")) run.env.sigma = to_double("sigma", *v);
  if (auto v = get("s_obs")) run.env.s_obs = to_double("s_obs", *v);
  if (auto v = get("T")) run.horizon = to_int("T", *v, 1);
  if (auto v = get("L")) run.window = to_int("L", *v, 1);
  if (auto v = get("delta")) run.delta = to_double("delta", *v);
  if (auto v = get("exploration_scale")) {
    run.exploration_scale = to_double("exploration_scale", *v);
  }
  if (auto v = get("ucb_alpha")) run.ucb_alpha = to_double("ucb_alpha", *v);
  if (auto v = get("ridge")) run.ridge = to_double("ridge", *v);
  if (auto v = get("q_min")) run.q_min = to_double("q_min", *v);
  if (auto v = get("pco_zero_pad")) run.pco_zero_pad = to_bool("pco_zero_pad", *v);
  if (auto v = get("init_model")) {
    const auto m = parse_initial_model(trim(*v));
    require(m.has_value(), "init_model", "expected 'identity' or 'uniform'");
    run.init_model = *m;
  }
  if (auto v = get("seeds")) cfg.seeds = parse_seed_list("seeds", *v);
  if (auto v = get("agents")) {
    cfg.agents.clear();
    for (const auto& name : split_list(*v)) {
      const auto kind = parse_agent(name);
      require(kind.has_value(), "agents", "unknown agent '" + name + "'");
      require(std::find(cfg.agents.begin(), cfg.agents.end(), *kind) == cfg.agents.end(),
              "agents", "duplicate agent '" + name + "'");
      cfg.agents.push_back(*kind);
    }
    require(!cfg.agents.empty(), "agents", "at least one agent is required");
  }
  if (auto v = get("eps")) {
    cfg.eps_sweep.clear();
    for (const auto& item : split_list(*v)) cfg.eps_sweep.push_back(to_double("eps", item));
    require(!cfg.eps_sweep.empty(), "eps", "at least one value is required");
  }
  if (auto v = get("jobs")) cfg.jobs = to_int("jobs", *v, 1);
  if (auto v = get("csv")) cfg.csv = to_bool("csv", *v);
  if (auto v = get("json")) cfg.json = to_bool("json", *v);
  if (auto v = get("per_run_csv")) cfg.per_run_csv = to_bool("per_run_csv", *v);

  if (auto v = get("out")) {
    cfg.output_dir = *v;
  } else if (env_out && !env_out->empty()) {
    cfg.output_dir = *env_out;
  } else {
    cfg.output_dir = "results";
  }

  require(run.env.k <= run.env.d, "k", "must satisfy 1 <= k <= d");
  require(run.env.sigma >= 0.0, "sigma", "must be >= 0");
  require(run.env.s_obs >= 0.0, "s_obs", "must be >= 0");
  require(run.delta > 0.0 && run.delta < 1.0, "delta", "must lie in (0, 1)");
  require(run.exploration_scale >= 0.0, "exploration_scale", "must be >= 0");
  require(run.ucb_alpha >= 0.0, "ucb_alpha", "must be >= 0 (0 selects the default)");
  require(run.ridge >= 0.0, "ridge", "must be >= 0");
  require(run.q_min >= 0.0, "q_min", "must be >= 0");
  for (double e : cfg.eps_sweep) require(e > 0.0, "eps", "must be > 0");
  require(!cfg.output_dir.empty(), "out", "must not be empty");

  run.env.eps = cfg.eps_sweep.front();
  return cfg;
}

ExperimentConfig parse_config(int argc, const char* const* argv) {
  CLI::App app{"EMKF-Bandit experiment runner"};
  std::string config_path;
  app.add_option("--config", config_path, "flat key = value config file");

  std::map<std::string, std::string> raw;
  for (const auto& key : config_keys()) {
    app.add_option("--" + key, raw[key], "override '" + key + "'")
        ->allow_extra_args(false);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw ConfigError("flags", e.what());
  }

  KeyValues values;
  if (!config_path.empty()) values = read_config_file(config_path);
  for (const auto& key : config_keys()) {
    if (app.count("--" + key) > 0) values[key] = raw[key];
  }
  std::optional<std::string> env_out;
  if (const char* e = std::getenv("EMKF_OUT")) env_out = e;
  return config_from_key_values(values, env_out);
}

}  // namespace emkf
