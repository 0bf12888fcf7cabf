#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace cxprobe::csv {

// Minimal RFC 4180 reader/writer: comma separator, double-quote quoting,
// embedded quotes doubled, quoted fields may span lines.
using Row = std::vector<std::string>;

std::string quote(const std::string& field);
std::string escape(const std::string& field);  // quotes only when needed
void write_row(std::ostream& out, const Row& row);

// Reads the next record. Returns false at end of input. Throws ParseError
// on an unterminated quoted field.
bool read_row(std::istream& in, Row& row, std::size_t& line);

}  // namespace cxprobe::csv
