#include "screenal/csv.hpp"

#include <fstream>
#include <sstream>

#include "screenal/errors.hpp"

namespace screenal::csv {

std::vector<std::vector<std::string>> parse(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool inQuotes = false;
  bool fieldWasQuoted = false;

  auto endField = [&] {
    row.push_back(std::move(field));
    field.clear();
    fieldWasQuoted = false;
  };
  auto endRow = [&] {
    endField();
    rows.push_back(std::move(row));
    row.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (inQuotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          inQuotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || fieldWasQuoted) {
          throw SchemaError("csv: stray quote inside unquoted field");
        }
        inQuotes = true;
        fieldWasQuoted = true;
        break;
      case ',':
        endField();
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') {
          endRow();
          ++i;
        } else {
          endRow();
        }
        break;
      case '\n':
        endRow();
        break;
      default:
        field.push_back(c);
    }
  }
  if (inQuotes) throw SchemaError("csv: unterminated quoted field");
  if (!field.empty() || !row.empty() || fieldWasQuoted) endRow();
  return rows;
}

std::vector<std::vector<std::string>> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("csv: cannot open file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

}  // namespace screenal::csv
