#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace scholarscope::csv {

using Row = std::vector<std::string>;

struct Dialect {
  char delimiter = ',';
  // When false, quote characters are ordinary data (WoS tab-delimited exports).
  bool quoting = true;
};

// RFC 4180 reader. Accepts LF or CRLF line endings, quoted fields spanning
// lines, and doubled quotes inside quoted fields. A quote that appears inside
// an unquoted field is kept literally. The input is not required to end with
// a newline.
std::vector<Row> parse(std::string_view data, Dialect dialect = {});

// Quotes a field when it contains the delimiter, a quote, CR or LF, or has
// leading/trailing whitespace.
std::string escape_field(std::string_view field, char delimiter = ',');
void append_row(std::string& out, const Row& row, char delimiter = ',');
// Rows are terminated with CRLF as RFC 4180 prescribes.
std::string write(const std::vector<Row>& rows, char delimiter = ',');

}  // namespace scholarscope::csv
