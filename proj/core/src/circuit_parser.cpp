#include "cheshire/circuit_parser.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cheshire/angle.hpp"

namespace cheshire {
namespace {

struct Token {
  std::string_view text;
  int column = 0;
};

struct OptionValue {
  std::string_view value;
  int column = 0;  // column of the value, after '='
};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isalnum(c) || c == '_'; });
}

bool is_label(std::string_view s) {
  if (s.empty()) return false;
  return std::none_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isspace(c) || c == ',' || c == '=' || c == ':' || c == '.' || c == '>' || c == '#';
  });
}

// Splits on `sep`, reporting the column of each piece.
std::vector<Token> split(std::string_view s, char sep, int column) {
  std::vector<Token> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = s.find(sep, start);
    const std::size_t stop = end == std::string_view::npos ? s.size() : end;
    out.push_back({s.substr(start, stop - start), column + static_cast<int>(start)});
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

class LineParser {
 public:
  explicit LineParser(CircuitDoc& doc) : doc_(doc) {}

  void parse_line(std::string_view raw, int line_no) {
    line_ = line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);

    std::vector<Token> tokens;
    for (std::size_t i = 0; i < raw.size();) {
      if (raw[i] == ' ' || raw[i] == '\t') {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < raw.size() && raw[j] != ' ' && raw[j] != '\t') ++j;
      tokens.push_back({raw.substr(i, j - i), static_cast<int>(i) + 1});
      i = j;
    }
    if (tokens.empty()) return;

    keyword_ = tokens.front();
    positional_.clear();
    options_.clear();
    option_columns_.clear();
    for (std::size_t k = 1; k < tokens.size(); ++k) {
      const Token& t = tokens[k];
      const auto eq = t.text.find('=');
      if (eq == std::string_view::npos) {
        positional_.push_back(t);
        continue;
      }
      std::string key = lower(t.text.substr(0, eq));
      if (key.empty()) fail(ParseErrorKind::BadArity, t.column, "option without a key");
      if (options_.count(key)) fail(ParseErrorKind::BadArity, t.column, "option '" + key + "' given twice");
      options_[key] = {t.text.substr(eq + 1), t.column + static_cast<int>(eq) + 1};
      option_columns_[key] = t.column;
    }

    const std::string kw = lower(keyword_.text);
    if (kw == "space") {
      parse_space();
    } else if (kw == "bs") {
      parse_bs();
    } else if (kw == "switch1234") {
      parse_switch();
    } else if (kw == "wavefilter") {
      parse_wavefilter();
    } else if (kw == "merge") {
      parse_merge();
    } else if (kw == "detector") {
      parse_detector();
    } else {
      fail(ParseErrorKind::UnknownElement, keyword_.column, "unknown statement '" + std::string(keyword_.text) + "'");
    }
  }

 private:
  [[noreturn]] void fail(ParseErrorKind kind, int column, std::string message) const {
    throw ParseError(kind, line_, column, std::move(message));
  }

  void expect_shape(std::size_t n_positional, std::initializer_list<const char*> required,
                    std::initializer_list<const char*> optional = {}) {
    if (positional_.size() != n_positional) {
      const int col = positional_.size() > n_positional ? positional_[n_positional].column : keyword_.column;
      fail(ParseErrorKind::BadArity, col,
           lower(keyword_.text) + " takes " + std::to_string(n_positional) + " positional argument(s), got " +
               std::to_string(positional_.size()));
    }
    std::set<std::string> allowed;
    for (const char* k : required) {
      allowed.insert(k);
      if (!options_.count(k)) fail(ParseErrorKind::BadArity, keyword_.column, "missing option '" + std::string(k) + "'");
    }
    for (const char* k : optional) allowed.insert(k);
    for (const auto& [key, value] : options_) {
      if (!allowed.count(key)) fail(ParseErrorKind::BadArity, option_columns_.at(key), "unknown option '" + key + "'");
    }
  }

  const SpaceDecl& declared(std::string_view name, int column) const {
    for (const auto& d : doc_.declarations) {
      if (d.name == name) return d;
    }
    fail(ParseErrorKind::UndeclaredSpace, column, "space '" + std::string(name) + "' is not declared");
  }

  std::string label_in(const SpaceDecl& space, Token t) const {
    if (std::find(space.labels.begin(), space.labels.end(), t.text) == space.labels.end()) {
      fail(ParseErrorKind::UndeclaredSpace, t.column,
           "label '" + std::string(t.text) + "' is not declared in space '" + space.name + "'");
    }
    return std::string(t.text);
  }

  std::string fresh_detector(Token t) {
    if (!is_identifier(t.text)) fail(ParseErrorKind::BadArity, t.column, "detector name must be an identifier");
    std::string name(t.text);
    if (!detectors_.insert(name).second) fail(ParseErrorKind::DuplicateName, t.column, "detector '" + name + "' already used");
    return name;
  }

  // next | detector:NAME
  std::optional<std::string> port(const char* key) {
    const auto& [value, col] = options_.at(key);
    if (lower(value) == "next") return std::nullopt;
    const auto colon = value.find(':');
    if (colon == std::string_view::npos || lower(value.substr(0, colon)) != "detector") {
      fail(ParseErrorKind::BadArity, col, std::string(key) + " must be 'next' or 'detector:NAME'");
    }
    return fresh_detector({value.substr(colon + 1), col + static_cast<int>(colon) + 1});
  }

  std::optional<Condition> condition(const std::string& target) {
    const auto it = options_.find("when");
    if (it == options_.end()) return std::nullopt;
    const auto [value, col] = it->second;
    const auto colon = value.find(':');
    if (colon == std::string_view::npos) fail(ParseErrorKind::BadArity, col, "when must be <space>:<label>");
    const SpaceDecl& space = declared(value.substr(0, colon), col);
    if (space.name == target) fail(ParseErrorKind::BadArity, col, "an element cannot be conditioned on its own space");
    return Condition{space.name, label_in(space, {value.substr(colon + 1), col + static_cast<int>(colon) + 1})};
  }

  void parse_space() {
    expect_shape(1, {"labels"});
    const Token name = positional_[0];
    if (!is_identifier(name.text)) fail(ParseErrorKind::BadArity, name.column, "space name must be an identifier");
    for (const auto& d : doc_.declarations) {
      if (d.name == name.text) fail(ParseErrorKind::DuplicateName, name.column, "space '" + d.name + "' declared twice");
    }
    const auto [value, col] = options_.at("labels");
    SpaceDecl decl{std::string(name.text), {}, line_};
    for (const Token& l : split(value, ',', col)) {
      if (!is_label(l.text)) fail(ParseErrorKind::BadArity, l.column, "invalid basis label '" + std::string(l.text) + "'");
      if (std::find(decl.labels.begin(), decl.labels.end(), l.text) != decl.labels.end()) {
        fail(ParseErrorKind::DuplicateName, l.column, "label '" + std::string(l.text) + "' repeated");
      }
      decl.labels.emplace_back(l.text);
    }
    doc_.declarations.push_back(std::move(decl));
  }

  void parse_bs() {
    expect_shape(1, {"couple", "convention"}, {"when"});
    const SpaceDecl& space = declared(positional_[0].text, positional_[0].column);
    const auto [couple, ccol] = options_.at("couple");
    const auto labels = split(couple, ',', ccol);
    if (labels.size() != 2) fail(ParseErrorKind::BadArity, ccol, "couple needs exactly two labels");
    BsSpec spec{space.name, label_in(space, labels[0]), label_in(space, labels[1]), {}, {}};
    if (spec.label_a == spec.label_b) fail(ParseErrorKind::BadArity, labels[1].column, "couple labels must differ");
    const auto [conv, vcol] = options_.at("convention");
    spec.convention = lower(conv);
    if (spec.convention != "paper") fail(ParseErrorKind::BadArity, vcol, "unsupported convention '" + std::string(conv) + "'");
    spec.when = condition(space.name);
    doc_.elements.push_back({line_, std::move(spec)});
  }

  void parse_switch() {
    expect_shape(1, {}, {"when"});
    const SpaceDecl& space = declared(positional_[0].text, positional_[0].column);
    if (space.labels.size() != 4) fail(ParseErrorKind::BadArity, positional_[0].column, "switch1234 needs a 4-label space");
    SwitchSpec spec{space.name, condition(space.name)};
    doc_.elements.push_back({line_, std::move(spec)});
  }

  void parse_wavefilter() {
    expect_shape(1, {"phi", "transmit_to", "reflect_to"});
    const SpaceDecl& space = declared(positional_[0].text, positional_[0].column);
    if (space.labels.size() != 4) fail(ParseErrorKind::BadArity, positional_[0].column, "wavefilter needs a 4-label space");
    const auto [phi_text, pcol] = options_.at("phi");
    const auto phi = parse_angle(phi_text);
    if (!phi) fail(ParseErrorKind::BadNumber, pcol, "bad angle '" + std::string(phi_text) + "'");
    WaveFilterSpec spec{space.name, {*phi, canonical_angle_literal(phi_text)}, port("transmit_to"), port("reflect_to")};
    if (spec.transmit_to.has_value() == spec.reflect_to.has_value()) {
      fail(ParseErrorKind::BadArity, option_columns_.at("transmit_to"), "exactly one wavefilter port must be 'next'");
    }
    doc_.elements.push_back({line_, std::move(spec)});
  }

  void parse_merge() {
    expect_shape(1, {"map", "leak_to", "into"});
    const auto spaces = split(positional_[0].text, ',', positional_[0].column);
    if (spaces.size() != 2) fail(ParseErrorKind::BadArity, positional_[0].column, "merge takes two spaces");
    const SpaceDecl& a = declared(spaces[0].text, spaces[0].column);
    const SpaceDecl& b = declared(spaces[1].text, spaces[1].column);
    if (a.name == b.name) fail(ParseErrorKind::BadArity, spaces[1].column, "merge spaces must differ");
    const auto [into_name, icol] = options_.at("into");
    const SpaceDecl& into = declared(into_name, icol);
    if (into.name == a.name || into.name == b.name) fail(ParseErrorKind::BadArity, icol, "merge target must be a third space");

    MergeSpec spec{a.name, b.name, {}, {}, into.name};
    const auto [map_text, mcol] = options_.at("map");
    std::set<std::pair<std::string, std::string>> sources;
    std::set<std::string> targets;
    for (const Token& rule : split(map_text, ',', mcol)) {
      const auto arrow = rule.text.find("->");
      const auto dot = rule.text.find('.');
      if (arrow == std::string_view::npos || dot == std::string_view::npos || dot > arrow) {
        fail(ParseErrorKind::BadArity, rule.column, "map entries look like <la>.<lb>-><label>");
      }
      const int c0 = rule.column;
      MergeRule r{label_in(a, {rule.text.substr(0, dot), c0}),
                  label_in(b, {rule.text.substr(dot + 1, arrow - dot - 1), c0 + static_cast<int>(dot) + 1}),
                  label_in(into, {rule.text.substr(arrow + 2), c0 + static_cast<int>(arrow) + 2})};
      if (!sources.insert({r.label_a, r.label_b}).second) fail(ParseErrorKind::DuplicateName, c0, "combination mapped twice");
      if (!targets.insert(r.target).second) fail(ParseErrorKind::DuplicateName, c0, "target label '" + r.target + "' used twice");
      spec.map.push_back(std::move(r));
    }
    const auto [leak_text, lcol] = options_.at("leak_to");
    const auto leaks = split(leak_text, ',', lcol);
    const std::size_t unmapped = a.labels.size() * b.labels.size() - spec.map.size();
    if (leaks.size() != unmapped) {
      fail(ParseErrorKind::BadArity, lcol,
           "leak_to needs " + std::to_string(unmapped) + " detector(s), got " + std::to_string(leaks.size()));
    }
    for (const Token& l : leaks) {
      const auto colon = l.text.find(':');
      if (colon == std::string_view::npos || lower(l.text.substr(0, colon)) != "detector") {
        fail(ParseErrorKind::BadArity, l.column, "leak_to entries look like detector:NAME");
      }
      spec.leak_to.push_back(fresh_detector({l.text.substr(colon + 1), l.column + static_cast<int>(colon) + 1}));
    }
    doc_.elements.push_back({line_, std::move(spec)});
  }

  void parse_detector() {
    expect_shape(1, {"space", "label"});
    std::string name = fresh_detector(positional_[0]);
    const auto [space_name, scol] = options_.at("space");
    const SpaceDecl& space = declared(space_name, scol);
    const auto [label, lcol] = options_.at("label");
    DetectorSpec spec{std::move(name), space.name, label_in(space, {label, lcol})};
    doc_.elements.push_back({line_, std::move(spec)});
  }

  CircuitDoc& doc_;
  int line_ = 0;
  Token keyword_;
  std::vector<Token> positional_;
  std::map<std::string, OptionValue> options_;
  std::map<std::string, int> option_columns_;
  std::set<std::string> detectors_;
};

std::string render_condition(const std::optional<Condition>& when) {
  return when ? " when=" + when->factor + ":" + when->label : std::string{};
}

std::string render_port(const std::optional<std::string>& detector) {
  return detector ? "detector:" + *detector : std::string("next");
}

const SpaceLabel& lookup(const Space& spaces, const std::string& name) {
  return spaces[factor_position(spaces, name)];
}

}  // namespace

std::string to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::UnknownElement: return "UnknownElement";
    case ParseErrorKind::BadArity: return "BadArity";
    case ParseErrorKind::UndeclaredSpace: return "UndeclaredSpace";
    case ParseErrorKind::BadNumber: return "BadNumber";
    case ParseErrorKind::DuplicateName: return "DuplicateName";
  }
  return {};
}

ParseError::ParseError(ParseErrorKind kind, int line, int column, std::string message)
    : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + to_string(kind) + ": " + message),
      kind_(kind),
      line_(line),
      column_(column),
      message_(std::move(message)) {}

CircuitDoc parse_circuit(std::string_view text, std::string source_name) {
  CircuitDoc doc;
  doc.source_name = std::move(source_name);
  LineParser parser(doc);
  int line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t end = text.find('\n', start);
    const std::size_t stop = end == std::string_view::npos ? text.size() : end;
    parser.parse_line(text.substr(start, stop - start), ++line_no);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return doc;
}

CircuitDoc parse_circuit_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open circuit file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_circuit(buf.str(), path.filename().string());
}

std::string render_circuit(const CircuitDoc& doc) {
  std::string out;
  for (const auto& d : doc.declarations) {
    out += "space " + d.name + " labels=" + join(d.labels, ",") + "\n";
  }
  for (const auto& e : doc.elements) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, BsSpec>) {
            out += "bs " + x.space + " convention=" + x.convention + " couple=" + x.label_a + "," + x.label_b +
                   render_condition(x.when);
          } else if constexpr (std::is_same_v<T, SwitchSpec>) {
            out += "switch1234 " + x.space + render_condition(x.when);
          } else if constexpr (std::is_same_v<T, WaveFilterSpec>) {
            out += "wavefilter " + x.space + " phi=" + x.phi.text + " reflect_to=" + render_port(x.reflect_to) +
                   " transmit_to=" + render_port(x.transmit_to);
          } else if constexpr (std::is_same_v<T, MergeSpec>) {
            std::vector<std::string> rules, leaks;
            for (const auto& r : x.map) rules.push_back(r.label_a + "." + r.label_b + "->" + r.target);
            for (const auto& l : x.leak_to) leaks.push_back("detector:" + l);
            out += "merge " + x.space_a + "," + x.space_b + " into=" + x.into + " leak_to=" + join(leaks, ",") +
                   " map=" + join(rules, ",");
          } else {
            out += "detector " + x.name + " label=" + x.label + " space=" + x.space;
          }
        },
        e.spec);
    out += "\n";
  }
  return out;
}

bool same_structure(const CircuitDoc& a, const CircuitDoc& b) {
  if (a.declarations.size() != b.declarations.size() || a.elements.size() != b.elements.size()) return false;
  for (std::size_t i = 0; i < a.declarations.size(); ++i) {
    if (a.declarations[i].name != b.declarations[i].name || a.declarations[i].labels != b.declarations[i].labels) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.elements.size(); ++i) {
    if (!(a.elements[i].spec == b.elements[i].spec)) return false;
  }
  return true;
}

Circuit build_circuit(const CircuitDoc& doc) {
  Space spaces;
  for (const auto& d : doc.declarations) spaces.emplace_back(d.name, d.labels);

  std::vector<Element> elements;
  for (const auto& e : doc.elements) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, BsSpec>) {
            elements.push_back(make_beam_splitter(lookup(spaces, x.space), x.label_a, x.label_b, x.when));
          } else if constexpr (std::is_same_v<T, SwitchSpec>) {
            elements.push_back(make_mode_switch(lookup(spaces, x.space), x.when));
          } else if constexpr (std::is_same_v<T, WaveFilterSpec>) {
            elements.push_back(make_wave_filter(lookup(spaces, x.space), x.phi.radians, x.transmit_to, x.reflect_to));
          } else if constexpr (std::is_same_v<T, MergeSpec>) {
            const SpaceLabel& a = lookup(spaces, x.space_a);
            const SpaceLabel& b = lookup(spaces, x.space_b);
            const SpaceLabel& into = lookup(spaces, x.into);
            PathMerge merge{{a.name(), b.name()}, into,
                            Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(into.dim()),
                                                   static_cast<Eigen::Index>(a.dim() * b.dim())),
                            {}};
            std::vector<bool> mapped(a.dim() * b.dim(), false);
            for (const auto& r : x.map) {
              const std::size_t col = a.index_of(r.label_a) * b.dim() + b.index_of(r.label_b);
              merge.isometry(static_cast<Eigen::Index>(into.index_of(r.target)), static_cast<Eigen::Index>(col)) = 1.0;
              mapped[col] = true;
            }
            std::size_t next_leak = 0;
            for (std::size_t col = 0; col < mapped.size(); ++col) {
              if (!mapped[col]) merge.leaks.emplace_back(col, x.leak_to.at(next_leak++));
            }
            elements.push_back(make_merge(std::move(merge)));
          } else {
            elements.push_back(make_detector(x.name, lookup(spaces, x.space), x.label));
          }
        },
        e.spec);
  }
  return Circuit(std::move(spaces), std::move(elements));
}

}  // namespace cheshire
