#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace approach::io::detail {

std::vector<std::string_view> split_lines(std::string_view text);
std::vector<std::string_view> split_ws(std::string_view line);
std::vector<std::string_view> split_char(std::string_view line, char sep);
bool is_blank(std::string_view line);
/// Throws kParseError on anything but a complete finite number.
double parse_double(std::string_view token, std::string_view what);
int parse_int(std::string_view token, std::string_view what);

}  // namespace approach::io::detail
