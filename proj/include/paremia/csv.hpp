#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace paremia::csv {

struct Row {
  std::vector<std::string> fields;
  // 1-based line number of the first physical line of the row.
  size_t line = 0;
};

// RFC-4180 style parsing: quoted fields, "" escapes, embedded commas and
// newlines, CRLF tolerated, optional UTF-8 BOM on the first row.
// Throws paremia::DataError on a structural defect (stray quote, EOF inside
// a quoted field), reporting the line number.
std::vector<Row> parse(std::istream& in);
std::vector<Row> parse_file(const std::string& path);

std::string escape(std::string_view field);
std::string join(const std::vector<std::string>& fields);

}  // namespace paremia::csv
