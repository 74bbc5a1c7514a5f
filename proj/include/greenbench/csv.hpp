// Minimal RFC 4180 reader/writer and fixed-precision number formatting used by
// every exporter.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace greenbench::csv {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct Row {
  std::vector<std::string> fields;
  std::size_t line = 0;  // 1-based physical line where the row starts
};

/// Parses the whole document. Quoted fields may contain separators, doubled
/// quotes and line breaks. A trailing newline does not produce an empty row.
std::vector<Row> parse(std::string_view text);

/// Quotes a field when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);
std::string join(const std::vector<std::string>& fields);

/// Fixed-point formatting with exactly `decimals` digits; "-0.000" is
/// normalised to "0.000" so output bytes do not depend on the sign of zero.
std::string fixed(double value, int decimals);

/// Round-trip exact formatting (17 significant digits).
std::string exact(double value);

}  // namespace greenbench::csv
