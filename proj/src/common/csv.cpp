#include "scholarscope/csv.hpp"

namespace scholarscope::csv {

std::vector<Row> parse(std::string_view data, Dialect dialect) {
  std::vector<Row> rows;
  Row row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;  // distinguishes "" at end of input from nothing
  const size_t n = data.size();

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
  };

  for (size_t i = 0; i < n; ++i) {
    char c = data[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < n && data[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (dialect.quoting && c == '"' && field.empty() && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (c == dialect.delimiter) {
      end_field();
    } else if (c == '\r' && i + 1 < n && data[i + 1] == '\n') {
      end_row();
      ++i;
    } else if (c == '\n' || c == '\r') {
      end_row();
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (field_started || !field.empty() || !row.empty()) end_row();
  return rows;
}

std::string escape_field(std::string_view field, char delimiter) {
  bool needs_quotes = field.find_first_of(std::string{delimiter, '"', '\r', '\n'}) !=
                      std::string_view::npos;
  if (!field.empty() && (field.front() == ' ' || field.back() == ' ' || field.front() == '\t' ||
                         field.back() == '\t'))
    needs_quotes = true;
  if (!needs_quotes) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void append_row(std::string& out, const Row& row, char delimiter) {
  for (size_t i = 0; i < row.size(); ++i) {
    if (i) out.push_back(delimiter);
    out += escape_field(row[i], delimiter);
  }
  out += "\r\n";
}

std::string write(const std::vector<Row>& rows, char delimiter) {
  std::string out;
  for (const auto& row : rows) append_row(out, row, delimiter);
  return out;
}

}  // namespace scholarscope::csv
