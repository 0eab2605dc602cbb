#pragma once

// CSV output with '#'-prefixed header lines:
//
//   # kuramoto2c <version>
//   # seed: <u64>
//   # config: <one-line JSON echo>
//   # <key>: <value>        (optional metadata)
//   col1,col2,...

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace kuramoto2c {

/// Library version string.
std::string version();

/// Shortest form with 17 significant digits ("%.17g"); nan/inf spelled out.
std::string format_double(double v);

struct CsvHeader {
  std::uint64_t seed = 0;
  std::string config_json;
  std::vector<std::pair<std::string, std::string>> metadata;
};

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const CsvHeader& header, std::vector<std::string> columns);

  /// Writes one row; the cell count must match the column count.
  void row(const std::vector<std::string>& cells);
  std::size_t rows() const noexcept { return rows_; }

 private:
  std::ostream& out_;
  std::size_t width_;
  std::size_t rows_ = 0;
};

}  // namespace kuramoto2c
