#include "paremia/csv.hpp"

#include <fstream>
#include <sstream>

#include "paremia/errors.hpp"

namespace paremia::csv {

std::vector<Row> parse(std::istream& in) {
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (data.starts_with("\xEF\xBB\xBF")) data.erase(0, 3);

  std::vector<Row> rows;
  Row row;
  std::string field;
  bool in_quotes = false;
  bool row_started = false;
  size_t line = 1;
  row.line = 1;

  const auto end_field = [&] {
    row.fields.push_back(std::move(field));
    field.clear();
  };
  const auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row = Row{};
    row.line = line;
    row_started = false;
  };

  for (size_t i = 0; i < data.size(); ++i) {
    const char c = data[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < data.size() && data[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty())
          throw DataError("CSV line " + std::to_string(line) + ": stray quote inside unquoted field");
        in_quotes = true;
        row_started = true;
        break;
      case ',':
        end_field();
        row_started = true;
        break;
      case '\r':
        break;
      case '\n':
        ++line;
        if (row_started || !row.fields.empty() || !field.empty()) end_row();
        else row.line = line;
        break;
      default:
        field.push_back(c);
        row_started = true;
        break;
    }
  }
  if (in_quotes) throw DataError("CSV line " + std::to_string(row.line) + ": unterminated quoted field");
  if (row_started || !row.fields.empty() || !field.empty()) end_row();
  return rows;
}

std::vector<Row> parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  return parse(in);
}

std::string escape(std::string_view field) {
  const bool needs_quotes = field.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string join(const std::vector<std::string>& fields) {
  std::string out;
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out.push_back(',');
    out += escape(fields[i]);
  }
  return out;
}

}  // namespace paremia::csv
