#include "kuramoto2c/csv.hpp"

#include <cmath>
#include <cstdio>

#include "kuramoto2c/errors.hpp"

#ifndef KURAMOTO2C_VERSION
#define KURAMOTO2C_VERSION "0.0.0"
#endif

namespace kuramoto2c {

std::string version() { return KURAMOTO2C_VERSION; }

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& out, const CsvHeader& header, std::vector<std::string> columns)
    : out_(out), width_(columns.size()) {
  out_ << "# kuramoto2c " << version() << '\n';
  out_ << "# seed: " << header.seed << '\n';
  out_ << "# config: " << header.config_json << '\n';
  for (const auto& [k, v] : header.metadata) out_ << "# " << k << ": " << v << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
  if (!out_) throw IoError("failed to write CSV header");
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw std::logic_error("CSV row width does not match the header");
  for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
  out_ << '\n';
  if (!out_) throw IoError("failed to write CSV row");
  ++rows_;
}

}  // namespace kuramoto2c
