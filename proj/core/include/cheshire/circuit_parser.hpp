#pragma once

// Line-oriented `.circuit` format. One statement per line, `#` starts a
// comment, tokens are separated by blanks, keywords and option keys are
// case-insensitive, names and labels are case-sensitive.
//
//   space <name> labels=<l1,l2,...>
//   bs <space> couple=<la,lb> convention=paper [when=<space>:<label>]
//   switch1234 <space> [when=<space>:<label>]
//   wavefilter <space> phi=<angle> transmit_to=<next|detector:NAME> reflect_to=<next|detector:NAME>
//   merge <spaceA,spaceB> map=<la.lb>-><label>,... leak_to=detector:NAME,... into=<space>
//   detector <name> space=<space> label=<label>
//
// `when` restricts an element to one branch of another factor. Exactly one
// wavefilter port is `next`. Merge leaks are assigned, in order, to the
// unmapped (la, lb) combinations taken row-major. Angles accept decimals and
// pi literals (pi, pi/4, -pi/2, 3*pi/4).

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cheshire/errors.hpp"
#include "cheshire/optical_network.hpp"

namespace cheshire {

enum class ParseErrorKind { UnknownElement, BadArity, UndeclaredSpace, BadNumber, DuplicateName };
std::string to_string(ParseErrorKind kind);

class ParseError : public Error {
 public:
  ParseError(ParseErrorKind kind, int line, int column, std::string message);

  ParseErrorKind kind() const { return kind_; }
  int line() const { return line_; }      // 1-based
  int column() const { return column_; }  // 1-based byte column
  const std::string& message() const { return message_; }

 private:
  ParseErrorKind kind_;
  int line_;
  int column_;
  std::string message_;
};

struct SpaceDecl {
  std::string name;
  std::vector<std::string> labels;
  int line = 0;
};

struct AngleLiteral {
  double radians = 0.0;
  std::string text;  // canonical spelling, used when rendering
  bool operator==(const AngleLiteral&) const = default;
};

struct BsSpec {
  std::string space;
  std::string label_a, label_b;
  std::string convention;
  std::optional<Condition> when;
  bool operator==(const BsSpec&) const = default;
};

struct SwitchSpec {
  std::string space;
  std::optional<Condition> when;
  bool operator==(const SwitchSpec&) const = default;
};

// nullopt = `next`
struct WaveFilterSpec {
  std::string space;
  AngleLiteral phi;
  std::optional<std::string> transmit_to;
  std::optional<std::string> reflect_to;
  bool operator==(const WaveFilterSpec&) const = default;
};

struct MergeRule {
  std::string label_a, label_b, target;
  bool operator==(const MergeRule&) const = default;
};

struct MergeSpec {
  std::string space_a, space_b;
  std::vector<MergeRule> map;
  std::vector<std::string> leak_to;
  std::string into;
  bool operator==(const MergeSpec&) const = default;
};

struct DetectorSpec {
  std::string name, space, label;
  bool operator==(const DetectorSpec&) const = default;
};

using ElementSpec = std::variant<BsSpec, SwitchSpec, WaveFilterSpec, MergeSpec, DetectorSpec>;

struct ElementLine {
  int line = 0;
  ElementSpec spec;
};

struct CircuitDoc {
  std::string source_name;
  std::vector<SpaceDecl> declarations;
  std::vector<ElementLine> elements;
};

// Throws ParseError at the first violation.
CircuitDoc parse_circuit(std::string_view text, std::string source_name = "<input>");
CircuitDoc parse_circuit_file(const std::filesystem::path& path);

// Canonical text: declarations first, then elements, lowercase keywords,
// options sorted by key, no comments, LF line endings.
std::string render_circuit(const CircuitDoc& doc);

// Equality of declarations and elements, ignoring line numbers and source name.
bool same_structure(const CircuitDoc& a, const CircuitDoc& b);

Circuit build_circuit(const CircuitDoc& doc);

}  // namespace cheshire
