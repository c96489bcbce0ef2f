#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace cheshire {

// Parses an angle in radians. Accepts decimal floats ("0.5", "-1e-3") and
// pi-rational literals of the form [-][k*]pi[/n], e.g. "pi", "pi/4",
// "-pi/2", "3*pi/4". Case-insensitive. Returns nullopt on anything else.
std::optional<double> parse_angle(std::string_view text);

// Lowercased, whitespace-trimmed form of a literal accepted by parse_angle.
std::string canonical_angle_literal(std::string_view text);

// Fixed, locale-independent formatting with 10 significant digits.
// Negative zero prints as "0".
std::string format_real(double value);

}  // namespace cheshire
