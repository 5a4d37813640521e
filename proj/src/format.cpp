#include "rumor/format.hpp"

#include <charconv>
#include <string>

#include "rumor/error.hpp"

namespace rumor {

namespace {

[[noreturn]] void bad(std::string_view text, std::string_view what, std::string_view kind) {
  throw ConfigError(std::string(what) + ": expected " + std::string(kind) + ", got '" +
                    std::string(text) + "'");
}

template <typename T>
T parse_number(std::string_view text, std::string_view what, std::string_view kind) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) bad(text, what, kind);
  return value;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

double parse_double(std::string_view text, std::string_view what) {
  return parse_number<double>(text, what, "a number");
}

long long parse_int(std::string_view text, std::string_view what) {
  return parse_number<long long>(text, what, "an integer");
}

unsigned long long parse_uint(std::string_view text, std::string_view what) {
  return parse_number<unsigned long long>(text, what, "a non-negative integer");
}

bool parse_bool(std::string_view text, std::string_view what) {
  if (text == "true" || text == "1" || text == "on" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "off" || text == "no") return false;
  bad(text, what, "true or false");
}

}  // namespace rumor
