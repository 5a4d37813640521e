#pragma once

#include <string>
#include <string_view>

namespace rumor {

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double x);

/// Strict parse of a whole string; throws ConfigError naming `what`.
double parse_double(std::string_view text, std::string_view what);
long long parse_int(std::string_view text, std::string_view what);
unsigned long long parse_uint(std::string_view text, std::string_view what);
bool parse_bool(std::string_view text, std::string_view what);

}  // namespace rumor
