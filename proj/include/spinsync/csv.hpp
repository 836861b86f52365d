// csv.hpp — deterministic CSV assembly with fixed 12-significant-digit reals
#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace spinsync {

// Builds a CSV document in memory so the caller can hash and write atomically.
// Reals are rendered with 12 significant digits in scientific notation, '.'
// decimal separator, locale-independent.
class CsvBuilder {
 public:
  explicit CsvBuilder(const std::vector<std::string>& header) {
    for (size_t i = 0; i < header.size(); ++i) {
      if (i) body_ += ',';
      body_ += header[i];
    }
    body_ += '\n';
    columns_ = header.size();
  }

  CsvBuilder& real(double v) {
    char buf[40];
    if (std::isnan(v)) {
      cell("nan");
      return *this;
    }
    std::snprintf(buf, sizeof buf, "%.11e", v);
    cell(buf);
    return *this;
  }

  CsvBuilder& integer(long v) {
    cell(std::to_string(v));
    return *this;
  }

  CsvBuilder& text(const std::string& v) {
    cell(v);
    return *this;
  }

  void end_row() {
    body_ += '\n';
    in_row_ = 0;
  }

  const std::string& str() const { return body_; }
  size_t columns() const { return columns_; }

 private:
  void cell(const std::string& s) {
    if (in_row_) body_ += ',';
    body_ += s;
    ++in_row_;
  }

  std::string body_;
  size_t columns_{0};
  size_t in_row_{0};
};

}  // namespace spinsync
