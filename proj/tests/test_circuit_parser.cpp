#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cheshire/circuit_parser.hpp"
#include "cheshire/wp_states.hpp"
#include "test_support.hpp"

namespace cheshire {
namespace {

namespace fs = std::filesystem;
using std::numbers::pi;
using testing::Rng;

const fs::path kFig1 = fs::path(CHESHIRE_CIRCUITS_DIR) / "fig1.circuit";
const fs::path kFixtures = CHESHIRE_FIXTURES_DIR;

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<fs::path> corpus() {
  std::vector<fs::path> out{kFig1};
  for (const auto& e : fs::directory_iterator(kFixtures)) {
    if (e.path().extension() == ".circuit") out.push_back(e.path());
  }
  std::sort(out.begin() + 1, out.end());
  return out;
}

ParseError parse_error(std::string_view text) {
  try {
    parse_circuit(text);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no ParseError for:\n" << text;
  return ParseError(ParseErrorKind::BadArity, 0, 0, "none");
}

TEST(ParseTest, EmptyText) {
  const CircuitDoc doc = parse_circuit("");
  EXPECT_TRUE(doc.declarations.empty());
  EXPECT_TRUE(doc.elements.empty());
  EXPECT_EQ(render_circuit(doc), "");
}

TEST(ParseTest, Fig1Structure) {
  const CircuitDoc doc = parse_circuit_file(kFig1);
  ASSERT_EQ(doc.declarations.size(), 5u);
  EXPECT_EQ(doc.declarations[3].name, "modes2");
  EXPECT_EQ(doc.declarations[3].labels, (std::vector<std::string>{"1'", "2'", "3'", "4'"}));
  ASSERT_EQ(doc.elements.size(), 10u);
  const auto& bs = std::get<BsSpec>(doc.elements[0].spec);
  EXPECT_EQ(bs.label_a, "2");
  EXPECT_EQ(bs.label_b, "4");
  ASSERT_TRUE(bs.when.has_value());
  EXPECT_EQ(*bs.when, (Condition{"path1", "L1"}));
  const auto& merge = std::get<MergeSpec>(doc.elements[4].spec);
  EXPECT_EQ(merge.leak_to, (std::vector<std::string>{"D2", "D1"}));
  EXPECT_EQ(merge.into, "path");
  for (std::size_t k = 1; k < doc.elements.size(); ++k) EXPECT_LT(doc.elements[k - 1].line, doc.elements[k].line);
}

TEST(ParseTest, AngleLiterals) {
  const CircuitDoc doc = parse_circuit_file(kFixtures / "mixed_case.circuit");
  const auto& wf = std::get<WaveFilterSpec>(doc.elements[2].spec);
  EXPECT_NEAR(wf.phi.radians, 3 * pi / 4, 1e-15);
  EXPECT_EQ(wf.phi.text, "3*pi/4");
  EXPECT_EQ(wf.transmit_to, std::optional<std::string>("Dw"));
  EXPECT_FALSE(wf.reflect_to.has_value());
}

TEST(RoundTripTest, Corpus) {
  for (const auto& path : corpus()) {
    SCOPED_TRACE(path.filename().string());
    const CircuitDoc doc = parse_circuit_file(path);
    const std::string once = render_circuit(doc);
    const CircuitDoc again = parse_circuit(once);
    EXPECT_TRUE(same_structure(doc, again));
    EXPECT_EQ(render_circuit(again), once);
    EXPECT_EQ(once.find('#'), std::string::npos);
    EXPECT_EQ(once.find('\r'), std::string::npos);
  }
}

TEST(ParseErrorTest, UseBeforeDeclaration) {
  const ParseError e = parse_error("bs m couple=a,b convention=paper\nspace m labels=a,b\n");
  EXPECT_EQ(e.line(), 1);
  EXPECT_EQ(e.kind(), ParseErrorKind::UndeclaredSpace);
}

TEST(RoundTripTest, CanonicalFormSortsOptionsAndLowercases) {
  const CircuitDoc doc =
      parse_circuit("space m labels=a,b,c,d\nSPACE g labels=x,y\nSwitch1234 m WHEN=g:x\nDETECTOR D LABEL=y SPACE=g\n");
  EXPECT_EQ(render_circuit(doc),
            "space m labels=a,b,c,d\nspace g labels=x,y\nswitch1234 m when=g:x\ndetector D label=y space=g\n");
}

TEST(RoundTripTest, CrlfMatchesLf) {
  std::string text = read_file(kFig1);
  std::string crlf;
  for (char c : text) {
    if (c == '\n') crlf += '\r';
    crlf += c;
  }
  EXPECT_TRUE(same_structure(parse_circuit(text), parse_circuit(crlf)));
  EXPECT_EQ(render_circuit(parse_circuit(crlf)), render_circuit(parse_circuit(text)));
}

TEST(ParseErrorTest, UndeclaredLabel) {
  const ParseError e = parse_error("bs modes1 couple=2,9 convention=paper");
  EXPECT_EQ(e.line(), 1);
  EXPECT_TRUE(e.kind() == ParseErrorKind::UndeclaredSpace || e.kind() == ParseErrorKind::BadArity);

  const ParseError declared = parse_error("space modes1 labels=1,2,3,4\nbs modes1 couple=2,9 convention=paper");
  EXPECT_EQ(declared.line(), 2);
  EXPECT_EQ(declared.kind(), ParseErrorKind::UndeclaredSpace);
  EXPECT_EQ(declared.column(), 20);
}

TEST(ParseErrorTest, Kinds) {
  EXPECT_EQ(parse_error("mirror m").kind(), ParseErrorKind::UnknownElement);
  EXPECT_EQ(parse_error("space m labels=a,b\nswitch1234 m").kind(), ParseErrorKind::BadArity);
  EXPECT_EQ(parse_error("space m labels=a,b\nbs m couple=a convention=paper").kind(), ParseErrorKind::BadArity);
  EXPECT_EQ(parse_error("space m labels=a,b\nbs m couple=a,b convention=symmetric").kind(), ParseErrorKind::BadArity);
  EXPECT_EQ(parse_error("space m labels=a,b\nbs m couple=a,b").kind(), ParseErrorKind::BadArity);
  EXPECT_EQ(parse_error("space m labels=a,b\nbs m couple=a,b convention=paper color=red").kind(),
            ParseErrorKind::BadArity);
  EXPECT_EQ(parse_error("switch1234 nowhere").kind(), ParseErrorKind::UndeclaredSpace);
  EXPECT_EQ(parse_error("space m labels=1,2,3,4\nwavefilter m phi=half transmit_to=next reflect_to=detector:D")
                .kind(),
            ParseErrorKind::BadNumber);
  EXPECT_EQ(parse_error("space m labels=a,b\nspace m labels=c,d").kind(), ParseErrorKind::DuplicateName);
  EXPECT_EQ(parse_error("space m labels=a,a").kind(), ParseErrorKind::DuplicateName);
  EXPECT_EQ(parse_error("space m labels=a,b\ndetector D space=m label=a\ndetector D space=m label=b").kind(),
            ParseErrorKind::DuplicateName);
  EXPECT_EQ(parse_error("space m labels=1,2,3,4\nwavefilter m phi=0 transmit_to=next reflect_to=next").kind(),
            ParseErrorKind::BadArity);
}

TEST(ParseErrorTest, MessageCarriesPosition) {
  const ParseError e = parse_error("\n\n  frob x");
  EXPECT_EQ(e.line(), 3);
  EXPECT_EQ(e.column(), 3);
  EXPECT_EQ(std::string(e.what()).rfind("3:3: UnknownElement", 0), 0u) << e.what();
}

TEST(ParseErrorTest, MissingFile) {
  EXPECT_THROW(parse_circuit_file(kFixtures / "does_not_exist.circuit"), Error);
}

// Single-line corruptions of fig1. Every mutation must be reported on the
// line it touched.
struct Mutation {
  std::string text;
  ParseErrorKind kind;
};

std::vector<std::string> tokens_of(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  for (std::string t; is >> t;) out.push_back(t);
  return out;
}

std::string joined(const std::vector<std::string>& t) {
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) out += (i ? " " : "") + t[i];
  return out;
}

std::vector<Mutation> candidate_mutations(const std::string& line, const std::vector<std::string>& earlier_spaces) {
  std::vector<std::string> t = tokens_of(line);
  std::vector<Mutation> out;
  auto with = [&](std::size_t i, std::string value) {
    auto copy = t;
    copy[i] = std::move(value);
    return joined(copy);
  };
  out.push_back({with(0, "prism"), ParseErrorKind::UnknownElement});
  out.push_back({line + " bogus=1", ParseErrorKind::BadArity});
  {
    auto copy = t;
    copy.erase(copy.begin() + 1);
    out.push_back({joined(copy), ParseErrorKind::BadArity});
  }
  if (t[0] == "space") {
    if (!earlier_spaces.empty()) out.push_back({with(1, earlier_spaces.back()), ParseErrorKind::DuplicateName});
    out.push_back({line + ",X,X", ParseErrorKind::DuplicateName});
  } else if (t[0] == "detector") {
    out.push_back({with(2, "space=nowhere"), ParseErrorKind::UndeclaredSpace});
    out.push_back({with(3, "label=Q"), ParseErrorKind::UndeclaredSpace});
  } else if (t[0] == "merge") {
    out.push_back({with(1, "path1,nowhere"), ParseErrorKind::UndeclaredSpace});
  } else {
    out.push_back({with(1, "nowhere"), ParseErrorKind::UndeclaredSpace});
    if (t[0] == "wavefilter") out.push_back({with(2, "phi=1.2.3"), ParseErrorKind::BadNumber});
  }
  return out;
}

TEST(ErrorLocalityTest, HundredMutationsOfFig1) {
  const std::string text = read_file(kFig1);
  std::vector<std::string> lines;
  for (std::istringstream is(text); !is.eof();) {
    std::string l;
    std::getline(is, l);
    lines.push_back(l);
  }
  std::vector<std::size_t> statements;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (!lines[i].empty() && lines[i][0] != '#') statements.push_back(i);
  }
  ASSERT_FALSE(statements.empty());

  Rng rng(51);
  int hits = 0;
  for (int n = 0; n < 100; ++n) {
    const std::size_t target = statements[rng.index(statements.size())];
    std::vector<std::string> earlier;
    for (std::size_t i : statements) {
      if (i >= target) break;
      const auto t = tokens_of(lines[i]);
      if (t[0] == "space") earlier.push_back(t[1]);
    }
    const auto options = candidate_mutations(lines[target], earlier);
    const Mutation& m = options[rng.index(options.size())];

    auto mutated = lines;
    mutated[target] = m.text;
    std::string doc;
    for (std::size_t i = 0; i < mutated.size(); ++i) doc += mutated[i] + (i + 1 < mutated.size() ? "\n" : "");

    try {
      parse_circuit(doc);
      ADD_FAILURE() << "accepted: " << m.text;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), static_cast<int>(target) + 1) << m.text << " -> " << e.what();
      EXPECT_EQ(e.kind(), m.kind) << m.text << " -> " << e.what();
      if (e.line() == static_cast<int>(target) + 1) ++hits;
    }
  }
  EXPECT_EQ(hits, 100);
}

TEST(BuildCircuitTest, ParsedFig1MatchesPipeline) {
  const Circuit circuit = build_circuit(parse_circuit_file(kFig1));
  for (int k = 0; k <= 20; ++k) {
    const WpParams p{(pi / 2) * k / 20.0, 0.0, 0.0};
    const StateVector in = make_preselected(p, Representation::Mode);
    const DetectionResult a = run_postselection_pipeline(in, p);
    const DetectionResult b = simulate(circuit, in);
    for (const auto& [d, prob] : a.detector_probs) EXPECT_NEAR(b.detector_probs.at(d), prob, 1e-10) << d;
  }
}

TEST(BuildCircuitTest, MziFixtureSendsEverythingToOnePort) {
  const CircuitDoc doc = parse_circuit_file(kFixtures / "mzi.circuit");
  const Circuit c = build_circuit(doc);
  const StateVector in = make_basis_state(c.spaces(), {"L"});
  const DetectionResult r = simulate(c, in);
  EXPECT_NEAR(r.detector_probs.at("DL"), 1.0, 1e-12);
  EXPECT_NEAR(r.detector_probs.at("DR"), 0.0, 1e-12);
}

TEST(BuildCircuitTest, PhasesFixtureBuilds) {
  const Circuit c = build_circuit(parse_circuit_file(kFixtures / "phases.circuit"));
  EXPECT_EQ(c.detector_names(), (std::vector<std::string>{"R1", "R2", "Lxx", "Lyy", "Up"}));
}

}  // namespace
}  // namespace cheshire
