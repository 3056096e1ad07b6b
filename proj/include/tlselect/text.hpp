#pragma once

// Locale-independent number formatting and parsing helpers.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "tlselect/error.hpp"

namespace tlselect::text {

/// Fixed-point rendering with `decimals` digits after the point. Always uses '.'.
inline std::string fixed(double value, int decimals = 4) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, decimals);
  if (ec != std::errc{}) return "nan";
  std::string out(buf, end);
  if (out.starts_with("-") && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
  return out;
}

/// Shortest representation that round-trips through parse_double.
inline std::string shortest(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) return "nan";
  return {buf, end};
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

/// Parses a plain decimal literal. Rejects ',' separators, hex, inf/nan and trailing junk.
inline double parse_double(std::string_view s, std::string_view what) {
  s = trim(s);
  if (s.starts_with('+')) s.remove_prefix(1);
  auto bad = [&] { return ParseError(std::string(what) + ": not a decimal number: '" + std::string(s) + "'"); };
  if (s.empty()) throw bad();
  for (char ch : s) {
    bool ok = (ch >= '0' && ch <= '9') || ch == '.' || ch == '-' || ch == 'e' || ch == 'E' || ch == '+';
    if (!ok) throw bad();
  }
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value, std::chars_format::general);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(value)) throw bad();
  return value;
}

inline std::uint64_t parse_count(std::string_view s, std::string_view what) {
  s = trim(s);
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError(std::string(what) + ": not a non-negative integer: '" + std::string(s) + "'");
  }
  return value;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::vector<double> parse_list(std::string_view s, std::string_view what) {
  std::vector<double> out;
  for (const auto& part : split(s, ',')) out.push_back(parse_double(part, what));
  return out;
}

}  // namespace tlselect::text
