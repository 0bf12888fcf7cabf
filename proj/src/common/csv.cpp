#include "cxprobe/common/csv.hpp"

#include "cxprobe/common/error.hpp"

namespace cxprobe::csv {

std::string quote(const std::string& field) {
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  return quote(field);
}

void write_row(std::ostream& out, const Row& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out << ',';
    out << escape(row[i]);
  }
  out << '\n';
}

bool read_row(std::istream& in, Row& row, std::size_t& line) {
  row.clear();
  if (in.peek() == std::char_traits<char>::eof()) return false;
  ++line;
  const std::size_t start_line = line;
  std::string field;
  bool quoted = false;
  bool field_was_quoted = false;
  char c;
  while (in.get(c)) {
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    if (c == '"' && field.empty() && !field_was_quoted) {
      quoted = true;
      field_was_quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      field_was_quoted = false;
    } else if (c == '\n') {
      if (!field.empty() && field.back() == '\r') field.pop_back();
      row.push_back(std::move(field));
      return true;
    } else {
      field += c;
    }
  }
  if (quoted) throw ParseError(start_line, "unterminated quoted field");
  if (!field.empty() && field.back() == '\r') field.pop_back();
  row.push_back(std::move(field));
  return true;
}

}  // namespace cxprobe::csv
