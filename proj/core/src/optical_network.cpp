#include "cheshire/optical_network.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "cheshire/errors.hpp"

namespace cheshire {
namespace {

std::string condition_suffix(const std::optional<Condition>& when) {
  return when ? "@" + when->factor + "=" + when->label : std::string{};
}

// Weight of `s` on column `column` of the row-major product over `from`.
double combination_weight(const StateVector& s, const std::vector<std::string>& from, std::size_t column) {
  std::vector<std::size_t> pos;
  for (const auto& f : from) pos.push_back(factor_position(s.space(), f));
  double w = 0.0;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    const auto digits = split_index(s.space(), i);
    std::size_t col = 0;
    for (std::size_t p : pos) col = col * s.space()[p].dim() + digits[p];
    if (col == column) w += std::norm(s.amplitudes()(static_cast<Eigen::Index>(i)));
  }
  return w;
}

const SpaceLabel& factor_named(const Space& space, std::string_view name) {
  return space[factor_position(space, name)];
}

}  // namespace

// ---------------------------------------------------------------------------
// Primitive elements

Operator sigma1234(const SpaceLabel& modes) {
  if (modes.dim() != 4) throw ShapeError("sigma1234 acts on a 4-mode factor");
  Eigen::MatrixXcd m(4, 4);
  m << 0, 1, 0, 0,
       1, 0, 0, 0,
       0, 0, 0, 1,
       0, 0, 1, 0;
  return Operator::unitary({modes}, std::move(m));
}

Operator beam_splitter(const SpaceLabel& factor, std::string_view label_a, std::string_view label_b,
                       BsConvention convention) {
  (void)convention;  // single convention
  const auto a = static_cast<Eigen::Index>(factor.index_of(label_a));
  const auto b = static_cast<Eigen::Index>(factor.index_of(label_b));
  if (a == b) throw ShapeError("beam splitter must couple two distinct labels");
  const auto d = static_cast<Eigen::Index>(factor.dim());
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(d, d);
  // column a is the image of |a>, column b the image of |b>
  m(a, a) = r;
  m(b, a) = r;
  m(a, b) = r;
  m(b, b) = -r;
  return Operator::unitary({factor}, std::move(m));
}

Operator bs_24(const SpaceLabel& modes, BsConvention convention) {
  if (modes.dim() != 4) throw ShapeError("bs_24 acts on a 4-mode factor");
  return beam_splitter(modes, modes.labels()[1], modes.labels()[3], convention);
}

WaveFilterPorts wave_filter(double phi, const SpaceLabel& modes) {
  Operator transmit = projector_onto(make_wave(phi, modes));
  Operator reflect = Operator::projector({modes}, (Operator::identity({modes}) - transmit).matrix());
  return {std::move(transmit), std::move(reflect)};
}

SpaceLabel merged_path_space() { return SpaceLabel("path", {"R", "L"}); }

PathMerge merge_paths() {
  const SpaceLabel p1 = path1_space(), p2 = path2_space(), into = merged_path_space();
  const auto col = [&](std::string_view a, std::string_view b) {
    return p1.index_of(a) * p2.dim() + p2.index_of(b);
  };
  Eigen::MatrixXcd iso = Eigen::MatrixXcd::Zero(2, 4);
  iso(static_cast<Eigen::Index>(into.index_of("R")), static_cast<Eigen::Index>(col("R1", "L2"))) = 1.0;
  iso(static_cast<Eigen::Index>(into.index_of("L")), static_cast<Eigen::Index>(col("L1", "R2"))) = 1.0;
  return PathMerge{{p1.name(), p2.name()}, into, std::move(iso),
                   {{col("R1", "R2"), "D1"}, {col("L1", "L2"), "D2"}}};
}

Operator bs5() {
  const SpaceLabel path = merged_path_space();
  return beam_splitter(path, "R", "L");
}

double DetectionResult::detector_total() const {
  double total = 0.0;
  for (const auto& [name, p] : detector_probs) total += p;
  return total;
}

double DetectionResult::total_probability() const {
  return detector_total() + surviving_state.norm_squared();
}

// ---------------------------------------------------------------------------
// Hand-built pipeline

DetectionResult run_postselection_pipeline(const StateVector& input, const WpParams& params) {
  if (input.space() != mode_space()) {
    throw ShapeError("postselection pipeline expects a state on path1 (x) path2 (x) modes1 (x) modes2");
  }
  const SpaceLabel path1 = path1_space(), path2 = path2_space();
  const SpaceLabel modes1 = modes1_space(), modes2 = modes2_space();

  DetectionResult result{{}, input, {}};
  for (const char* d : {"D1", "D2", "D3", "D4", "D5", "D6"}) result.detector_probs[d] = 0.0;
  StateVector& s = result.surviving_state;
  auto log = [&](std::string element) { result.trace.push_back({std::move(element), s.norm()}); };
  auto step = [&](const Operator& local, std::string element) {
    s = apply(embed(local, s.space()), s);
    log(std::move(element));
  };

  // Particle -> wave conversion in arms L1 and R2 only.
  step(controlled(path1, "L1", bs_24(modes1)), "BS1");
  step(controlled(path2, "R2", bs_24(modes2)), "BS2");
  step(controlled(path1, "L1", sigma1234(modes1)), "sigma1234[photon1]");
  step(controlled(path2, "R2", sigma1234(modes2)), "sigma1234[photon2]");

  // BS3/BS4 pass R1L2 and L1R2; the other combinations end at D1/D2.
  const auto split_off = [&](std::string_view a, std::string_view b, const char* detector) {
    const Operator proj = embed(tensor(label_projector(path1, a), label_projector(path2, b)), s.space());
    const StateVector hit = apply(proj, s);
    result.detector_probs[detector] += hit.norm_squared();
    s = s - hit;
  };
  split_off("R1", "R2", "D1");
  split_off("L1", "L2", "D2");
  log("BS3/BS4");

  const auto filter = [&](double phi, const SpaceLabel& modes, const char* detector, std::string element) {
    const auto ports = wave_filter(phi, modes);
    const StateVector reflected = apply(embed(ports.reflect, s.space()), s);
    result.detector_probs[detector] += reflected.norm_squared();
    s = apply(embed(ports.transmit, s.space()), s);
    log(std::move(element));
  };
  filter(params.phi1, modes1, "D3", "X3");
  filter(params.phi1p, modes2, "D4", "X4");

  const PathMerge merge = merge_paths();
  s = remap_factors(s, merge.from, merge.into, merge.isometry);
  log("merge");

  step(bs5(), "BS5");

  for (const auto& [detector, label] : {std::pair{"D5", "R"}, std::pair{"D6", "L"}}) {
    result.detector_probs[detector] += label_weight(s, "path", label);
    s = remove_label(s, "path", label);
    log(detector);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Declarative circuits

std::string to_string(ElementKind kind) {
  switch (kind) {
    case ElementKind::BeamSplitter: return "BeamSplitter";
    case ElementKind::ModeSwitch: return "ModeSwitch";
    case ElementKind::WaveFilter: return "WaveFilter";
    case ElementKind::PathMerge: return "PathMerge";
    case ElementKind::Detector: return "Detector";
  }
  return {};
}

ElementKind kind_of(const Element& e) {
  struct {
    ElementKind operator()(const UnitaryElement& u) const { return u.kind; }
    ElementKind operator()(const WaveFilterElement&) const { return ElementKind::WaveFilter; }
    ElementKind operator()(const MergeElement&) const { return ElementKind::PathMerge; }
    ElementKind operator()(const DetectorElement&) const { return ElementKind::Detector; }
  } visitor;
  return std::visit(visitor, e);
}

const std::string& name_of(const Element& e) {
  return std::visit([](const auto& x) -> const std::string& { return x.name; }, e);
}

Element make_beam_splitter(const SpaceLabel& factor, std::string label_a, std::string label_b,
                           std::optional<Condition> when, BsConvention convention) {
  std::string name = "bs(" + factor.name() + ":" + label_a + "," + label_b + ")" + condition_suffix(when);
  return UnitaryElement{ElementKind::BeamSplitter, std::move(name), factor.name(), std::move(when),
                        beam_splitter(factor, label_a, label_b, convention)};
}

Element make_mode_switch(const SpaceLabel& modes, std::optional<Condition> when) {
  std::string name = "switch1234(" + modes.name() + ")" + condition_suffix(when);
  return UnitaryElement{ElementKind::ModeSwitch, std::move(name), modes.name(), std::move(when),
                        sigma1234(modes)};
}

Element make_wave_filter(const SpaceLabel& modes, double phi, std::optional<std::string> transmit_detector,
                         std::optional<std::string> reflect_detector) {
  if (transmit_detector.has_value() == reflect_detector.has_value()) {
    throw ShapeError("wave filter needs exactly one port continuing and one port detected");
  }
  auto ports = wave_filter(phi, modes);
  return WaveFilterElement{"wavefilter(" + modes.name() + ")", modes.name(), std::move(ports.transmit),
                           std::move(ports.reflect), std::move(transmit_detector), std::move(reflect_detector)};
}

Element make_merge(PathMerge merge) {
  if (merge.isometry.rows() != static_cast<Eigen::Index>(merge.into.dim())) {
    throw ShapeError("merge isometry row count must equal the merged factor's dimension");
  }
  // Columns must be orthonormal or zero, and zero exactly on the leaked ones.
  const Eigen::MatrixXcd gram = merge.isometry.adjoint() * merge.isometry;
  for (Eigen::Index c = 0; c < gram.rows(); ++c) {
    for (Eigen::Index r = 0; r < gram.rows(); ++r) {
      const double expect = (r == c && gram(c, c).real() > 0.5) ? 1.0 : 0.0;
      if (std::abs(gram(r, c) - expect) > kExactTol) throw NormalizationError("merge map is not a partial isometry");
    }
  }
  for (const auto& [column, detector] : merge.leaks) {
    if (column >= static_cast<std::size_t>(merge.isometry.cols()) ||
        merge.isometry.col(static_cast<Eigen::Index>(column)).norm() != 0.0) {
      throw ShapeError("merge leak to " + detector + " must name an unmapped combination");
    }
  }
  std::string name = "merge(";
  for (std::size_t i = 0; i < merge.from.size(); ++i) name += (i ? "," : "") + merge.from[i];
  name += "->" + merge.into.name() + ")";
  return MergeElement{std::move(name), std::move(merge)};
}

Element make_detector(std::string name, const SpaceLabel& factor, std::string label) {
  factor.index_of(label);
  return DetectorElement{std::move(name), factor.name(), std::move(label)};
}

Circuit::Circuit(Space spaces, std::vector<Element> elements)
    : spaces_(std::move(spaces)), elements_(std::move(elements)) {
  std::set<std::string> names;
  for (const auto& f : spaces_) {
    if (!names.insert(f.name()).second) throw ShapeError("space '" + f.name() + "' declared twice");
  }
  std::set<std::string> seen_detectors;
  auto add_detector = [&](const std::string& d) {
    if (!seen_detectors.insert(d).second) throw ShapeError("detector '" + d + "' used twice");
    detectors_.push_back(d);
  };
  auto require_factor = [&](const SpaceLabel& declared_as) {
    const SpaceLabel& declared = factor_named(spaces_, declared_as.name());
    if (declared != declared_as) throw ShapeError("factor '" + declared_as.name() + "' differs from its declaration");
  };

  for (const auto& e : elements_) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, UnitaryElement>) {
            require_factor(x.unitary.space().front());
            if (x.when) factor_named(spaces_, x.when->factor).index_of(x.when->label);
          } else if constexpr (std::is_same_v<T, WaveFilterElement>) {
            require_factor(x.transmit.space().front());
            if (x.transmit_detector) add_detector(*x.transmit_detector);
            if (x.reflect_detector) add_detector(*x.reflect_detector);
          } else if constexpr (std::is_same_v<T, MergeElement>) {
            for (const auto& f : x.merge.from) factor_named(spaces_, f);
            require_factor(x.merge.into);
            for (const auto& leak : x.merge.leaks) add_detector(leak.second);
          } else {
            factor_named(spaces_, x.factor).index_of(x.label);
            add_detector(x.name);
          }
        },
        e);
  }
}

DetectionResult simulate(const Circuit& circuit, const StateVector& input) {
  DetectionResult result{{}, input, {}};
  for (const auto& d : circuit.detector_names()) result.detector_probs[d] = 0.0;
  StateVector& s = result.surviving_state;

  for (const auto& e : circuit.elements()) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, UnitaryElement>) {
            const Operator local =
                x.when ? controlled(factor_named(s.space(), x.when->factor), x.when->label, x.unitary) : x.unitary;
            s = apply(embed(local, s.space()), s);
          } else if constexpr (std::is_same_v<T, WaveFilterElement>) {
            StateVector passed = apply(embed(x.transmit, s.space()), s);
            StateVector bounced = apply(embed(x.reflect, s.space()), s);
            if (x.transmit_detector) {
              result.detector_probs[*x.transmit_detector] += passed.norm_squared();
              s = std::move(bounced);
            } else {
              result.detector_probs[*x.reflect_detector] += bounced.norm_squared();
              s = std::move(passed);
            }
          } else if constexpr (std::is_same_v<T, MergeElement>) {
            for (const auto& [column, detector] : x.merge.leaks) {
              result.detector_probs[detector] += combination_weight(s, x.merge.from, column);
            }
            s = remap_factors(s, x.merge.from, x.merge.into, x.merge.isometry);
          } else {
            result.detector_probs[x.name] += label_weight(s, x.factor, x.label);
            s = remove_label(s, x.factor, x.label);
          }
        },
        e);
    result.trace.push_back({name_of(e), s.norm()});
  }
  return result;
}

Circuit build_fig1_circuit(const WpParams& params) {
  const SpaceLabel path1 = path1_space(), path2 = path2_space();
  const SpaceLabel modes1 = modes1_space(), modes2 = modes2_space();
  const SpaceLabel path = merged_path_space();

  std::vector<Element> elements;
  elements.push_back(make_beam_splitter(modes1, "2", "4", Condition{"path1", "L1"}));
  elements.push_back(make_mode_switch(modes1, Condition{"path1", "L1"}));
  elements.push_back(make_beam_splitter(modes2, "2'", "4'", Condition{"path2", "R2"}));
  elements.push_back(make_mode_switch(modes2, Condition{"path2", "R2"}));
  elements.push_back(make_merge(merge_paths()));
  elements.push_back(make_wave_filter(modes1, params.phi1, std::nullopt, "D3"));
  elements.push_back(make_wave_filter(modes2, params.phi1p, std::nullopt, "D4"));
  elements.push_back(make_beam_splitter(path, "R", "L"));
  elements.push_back(make_detector("D5", path, "R"));
  elements.push_back(make_detector("D6", path, "L"));
  return Circuit({path1, path2, modes1, modes2, path}, std::move(elements));
}

}  // namespace cheshire
