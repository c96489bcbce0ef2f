#include "cheshire/angle.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace cheshire {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_decimal(std::string_view s) {
  if (s.empty()) return std::nullopt;
  // from_chars rejects a leading '+', accept it for symmetry with '-'.
  if (s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

}  // namespace

std::string canonical_angle_literal(std::string_view text) {
  std::string out(trim(text));
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::optional<double> parse_angle(std::string_view text) {
  const std::string s = canonical_angle_literal(text);
  const auto pi_pos = s.find("pi");
  if (pi_pos == std::string::npos) return parse_decimal(s);

  std::string_view view(s);
  double sign = 1.0;
  std::string_view head = view.substr(0, pi_pos);
  std::string_view tail = view.substr(pi_pos + 2);

  if (!head.empty() && (head.front() == '-' || head.front() == '+')) {
    if (head.front() == '-') sign = -1.0;
    head.remove_prefix(1);
  }
  double factor = 1.0;
  if (!head.empty()) {
    if (head.back() != '*') return std::nullopt;
    head.remove_suffix(1);
    auto k = parse_decimal(head);
    if (!k || head.front() == '+' || head.front() == '-') return std::nullopt;
    factor = *k;
  }
  double divisor = 1.0;
  if (!tail.empty()) {
    if (tail.front() != '/') return std::nullopt;
    tail.remove_prefix(1);
    auto n = parse_decimal(tail);
    if (!n || *n == 0.0 || tail.front() == '+' || tail.front() == '-') return std::nullopt;
    divisor = *n;
  }
  return sign * factor * std::numbers::pi / divisor;
}

std::string format_real(double value) {
  if (value == 0.0) value = 0.0;  // folds -0 into +0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  return buf;
}

}  // namespace cheshire
