#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "emkf/regret.hpp"

namespace emkf {

/// 17 significant digits; round-trips exactly.
std::string format_double(double value);

/// `t,agent,eps,seed,arm,reward,inst_regret,cum_regret,est_err,a3_monitor,x_norm,xhat_norm`
inline constexpr const char* kCsvHeader =
    "t,agent,eps,seed,arm,reward,inst_regret,cum_regret,est_err,a3_monitor,"
    "x_norm,xhat_norm";

/// Writes one data row per record; est_err is left empty when absent.
void write_csv_rows(std::ostream& out, const Trace& trace, double eps,
                    std::uint64_t seed);

struct CsvRow {
  int t = 0;
  std::string agent;
  double eps = 0.0;
  std::uint64_t seed = 0;
  int arm = 0;
  double reward = 0.0;
  double inst_regret = 0.0;
  double cum_regret = 0.0;
  std::optional<double> est_err;
  double a3_monitor = 0.0;
  double x_norm = 0.0;
  double xhat_norm = 0.0;
};

/// Parses a CSV written by this module (header required).
std::vector<CsvRow> read_csv(std::istream& in);

}  // namespace emkf
