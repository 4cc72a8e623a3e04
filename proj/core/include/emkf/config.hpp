#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "emkf/pipeline.hpp"

namespace emkf {

struct ExperimentConfig {
  RunConfig run;  // run.env.eps is overwritten with each sweep value
  std::vector<std::uint64_t> seeds;
  std::vector<AgentKind> agents;
  std::vector<double> eps_sweep;
  std::filesystem::path output_dir;
  int jobs = 1;
  bool csv = true;
  bool json = true;
  bool per_run_csv = false;  // one file per (eps, agent, seed) instead of trace.csv
};

using KeyValues = std::map<std::string, std::string>;

/// Every recognised key, in documentation order.
const std::vector<std::string>& config_keys();

/// Reads a flat `key = value` file. Blank lines and `#` comments are ignored.
/// Throws ConfigError (field "config") if the file cannot be read or a line
/// has no '='.
KeyValues read_config_file(const std::filesystem::path& path);

/// Builds and validates a config from key/value pairs layered over the
/// defaults. `env_out` is the EMKF_OUT fallback used when `out` is absent.
/// Throws ConfigError naming the offending field.
ExperimentConfig config_from_key_values(const KeyValues& values,
                                        std::optional<std::string> env_out = std::nullopt);

/// Thrown by parse_config for --help; what() is the usage text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Command-line front end: `--config FILE` plus one `--<key> VALUE` flag per
/// key. Flags override file values. Throws ConfigError.
ExperimentConfig parse_config(int argc, const char* const* argv);

/// Parses "0,1,5" and ranges "0..19" (inclusive), mixed freely.
std::vector<std::uint64_t> parse_seed_list(const std::string& field,
                                           const std::string& text);

}  // namespace emkf
