#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace screenal::csv {

// Minimal RFC-4180 reader: quoted fields may contain commas, doubled quotes
// and newlines; rows are separated by \n or \r\n.
std::vector<std::vector<std::string>> parse(std::string_view text);
std::vector<std::vector<std::string>> read_file(const std::string& path);

// Quotes the field if it contains a comma, quote or newline.
std::string escape(const std::string& field);

}  // namespace screenal::csv
