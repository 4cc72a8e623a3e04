#include "emkf/trace_io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace emkf {

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value,
                                       std::chars_format::general, 17);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

void write_csv_rows(std::ostream& out, const Trace& trace, double eps,
                    std::uint64_t seed) {
  const std::string eps_text = format_double(eps);
  std::string line;
  for (const StepRecord& r : trace) {
    line.clear();
    line += std::to_string(r.t);
    line += ',';
    line += r.agent;
    line += ',';
    line += eps_text;
    line += ',';
    line += std::to_string(seed);
    line += ',';
    line += std::to_string(r.arm);
    line += ',';
    line += format_double(r.reward);
    line += ',';
    line += format_double(r.inst_regret);
    line += ',';
    line += format_double(r.cum_regret);
    line += ',';
    if (r.est_err) line += format_double(*r.est_err);
    line += ',';
    line += format_double(r.a3_monitor);
    line += ',';
    line += format_double(r.x_norm);
    line += ',';
    line += format_double(r.xhat_norm);
    line += '\n';
    out << line;
  }
}

namespace {

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::runtime_error("bad number in CSV: '" + s + "'");
  }
  return v;
}

}  // namespace

std::vector<CsvRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::runtime_error("CSV header does not match the trace schema");
  }
  std::vector<CsvRow> rows;
  std::vector<std::string> cells;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    cells.clear();
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() != 12) throw std::runtime_error("CSV row has wrong arity");
    CsvRow r;
    r.t = std::stoi(cells[0]);
    r.agent = cells[1];
    r.eps = parse_double(cells[2]);
    r.seed = std::stoull(cells[3]);
    r.arm = std::stoi(cells[4]);
    r.reward = parse_double(cells[5]);
    r.inst_regret = parse_double(cells[6]);
    r.cum_regret = parse_double(cells[7]);
    if (!cells[8].empty()) r.est_err = parse_double(cells[8]);
    r.a3_monitor = parse_double(cells[9]);
    r.x_norm = parse_double(cells[10]);
    r.xhat_norm = parse_double(cells[11]);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace emkf
