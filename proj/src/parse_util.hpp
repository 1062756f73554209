#pragma once

#include <charconv>
#include <string>
#include <vector>

#include "crange/errors.hpp"
#include "crange/numerics.hpp"

namespace crange::detail {

inline std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

/// Shortest text that parses back to the same double.
inline std::string format_real(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

/// "re,im", or the bare real part when the imaginary part is zero.
inline std::string format_complex(Complex c) {
  if (c.imag() == 0.0) return format_real(c.real());
  return format_real(c.real()) + ',' + format_real(c.imag());
}

inline double parse_real(const std::string& token, const std::string& context) {
  double value = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  if (!token.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw ParseError("bad number '" + token + "' in " + context);
  }
  return value;
}

// "re,im" or a bare real.
inline Complex parse_complex(const std::string& token, const std::string& context) {
  const auto comma = token.find(',');
  if (comma == std::string::npos) return {parse_real(token, context), 0.0};
  return {parse_real(token.substr(0, comma), context),
          parse_real(token.substr(comma + 1), context)};
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace crange::detail
