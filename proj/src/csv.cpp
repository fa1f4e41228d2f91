#include "nematic/csv.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace nematic::csv {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string header_line() {
  std::string line;
  for (const char* name : DiagnosticsRow::column_names()) {
    if (!line.empty()) line += ',';
    line += name;
  }
  return line;
}

std::string format_row(const DiagnosticsRow& row) {
  std::string line;
  bool first = true;
  for (double v : row.values()) {
    if (!first) line += ',';
    first = false;
    line += format_double(v);
  }
  return line;
}

DiagnosticsWriter::DiagnosticsWriter(const std::string& path) : out_(path, std::ios::trunc), path_(path) {
  if (!out_) throw CsvError("cannot open " + path + " for writing");
  out_ << header_line() << '\n';
}

void DiagnosticsWriter::write(const DiagnosticsRow& row) {
  out_ << format_row(row) << '\n';
  out_.flush();
  if (!out_) throw CsvError("failed writing " + path_);
  ++rows_;
}

std::vector<DiagnosticsRow> parse_diagnostics(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw CsvError("empty diagnostics file");
  if (line != header_line()) throw CsvError("diagnostics header does not match the expected columns");
  std::vector<DiagnosticsRow> rows;
  int number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    std::array<double, DiagnosticsRow::kColumns> values{};
    std::size_t col = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::string cell = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      if (col >= values.size()) throw CsvError("line " + std::to_string(number) + ": too many columns");
      double v = 0.0;
      if (cell == "nan") {
        v = std::numeric_limits<double>::quiet_NaN();
      } else {
        const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (ec != std::errc() || ptr != cell.data() + cell.size()) {
          throw CsvError("line " + std::to_string(number) + ": bad number `" + cell + "`");
        }
      }
      values[col++] = v;
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (col != values.size()) throw CsvError("line " + std::to_string(number) + ": too few columns");
    rows.push_back(DiagnosticsRow::from_values(values));
  }
  return rows;
}

std::vector<DiagnosticsRow> read_diagnostics(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_diagnostics(buf.str());
}

}  // namespace nematic::csv
