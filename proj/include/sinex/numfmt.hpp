#pragma once

#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

namespace sinex {

/// Shortest decimal string that round-trips to the same double.
/// All serialized numbers in this project go through here so that
/// emitted files are byte-stable across runs and platforms.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

/// Parses an entire string as a double; rejects trailing garbage.
inline std::optional<double> parse_double(std::string_view s) {
  if (s.empty()) return std::nullopt;
  double v{};
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto head = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
  auto tail = [&](char c) { return head(c) || (c >= '0' && c <= '9'); };
  if (!head(s[0])) return false;
  for (char c : s.substr(1))
    if (!tail(c)) return false;
  return true;
}

}  // namespace sinex
