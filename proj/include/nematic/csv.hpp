#pragma once

// Diagnostics CSV: header row with the DiagnosticsRow columns in declaration
// order, one row per sample, numbers in shortest round-trip form ("nan" for
// missing values).

#include <fstream>
#include <string>
#include <vector>

#include "nematic/diagnostics.hpp"

namespace nematic::csv {

std::string header_line();
std::string format_row(const DiagnosticsRow& row);
// Shortest decimal that parses back to the same double.
std::string format_double(double v);

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DiagnosticsWriter {
 public:
  // Truncates `path` and writes the header.
  explicit DiagnosticsWriter(const std::string& path);
  void write(const DiagnosticsRow& row);
  std::size_t rows() const noexcept { return rows_; }

 private:
  std::ofstream out_;
  std::string path_;
  std::size_t rows_ = 0;
};

// Strict reader: the header must match exactly; throws CsvError otherwise.
std::vector<DiagnosticsRow> parse_diagnostics(const std::string& text);
std::vector<DiagnosticsRow> read_diagnostics(const std::string& path);

}  // namespace nematic::csv
