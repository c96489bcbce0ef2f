#include "cheshire/wp_states.hpp"

#include <cmath>
#include <numbers>

#include "cheshire/errors.hpp"

namespace cheshire {
namespace {

const Complex kI{0.0, 1.0};

std::string attr_label(Attribute attr) {
  switch (attr) {
    case Attribute::W: return "W";
    case Attribute::P: return "P";
    case Attribute::Wp: return "W'";
    case Attribute::Pp: return "P'";
  }
  return {};
}

bool is_wave(Attribute attr) { return attr == Attribute::W || attr == Attribute::Wp; }

// 4x2 isometry whose columns are |W(phi)>, |P(phi)> over a mode factor.
Eigen::MatrixXcd attribute_expansion(double phi, const SpaceLabel& modes) {
  Eigen::MatrixXcd m(4, 2);
  m.col(0) = make_wave(phi, modes).amplitudes();
  m.col(1) = make_particle(phi, modes).amplitudes();
  return m;
}

}  // namespace

int photon_of(Arm arm) { return (arm == Arm::L1 || arm == Arm::R1) ? 1 : 2; }
int photon_of(Attribute attr) { return (attr == Attribute::W || attr == Attribute::P) ? 1 : 2; }

std::string to_string(Arm arm) {
  switch (arm) {
    case Arm::L1: return "L1";
    case Arm::R1: return "R1";
    case Arm::L2: return "L2";
    case Arm::R2: return "R2";
  }
  return {};
}

std::string to_string(Attribute attr) { return attr_label(attr); }

SpaceLabel path1_space() { return SpaceLabel("path1", {"L1", "R1"}); }
SpaceLabel path2_space() { return SpaceLabel("path2", {"L2", "R2"}); }
SpaceLabel attr1_space() { return SpaceLabel("attr1", {"W", "P"}); }
SpaceLabel attr2_space() { return SpaceLabel("attr2", {"W'", "P'"}); }
SpaceLabel modes1_space() { return SpaceLabel("modes1", {"1", "2", "3", "4"}); }
SpaceLabel modes2_space() { return SpaceLabel("modes2", {"1'", "2'", "3'", "4'"}); }

SpaceLabel pol_space(int photon) {
  if (photon != 1 && photon != 2) throw DomainError("photon index must be 1 or 2");
  return SpaceLabel("pol" + std::to_string(photon), {"H", "V"});
}

Space attribute_space() { return {path1_space(), path2_space(), attr1_space(), attr2_space()}; }
Space mode_space() { return {path1_space(), path2_space(), modes1_space(), modes2_space()}; }

Space representation_space(Representation rep) {
  return rep == Representation::Attribute ? attribute_space() : mode_space();
}

StateVector make_input_state(double alpha) {
  const Space pols{pol_space(1), pol_space(2)};
  return Complex(std::cos(alpha)) * make_basis_state(pols, {"V", "V"}) +
         Complex(std::sin(alpha)) * make_basis_state(pols, {"H", "H"});
}

StateVector make_wave(double phi, const SpaceLabel& modes) {
  if (modes.dim() != 4) throw ShapeError("wave state needs a 4-mode factor");
  const Space space{modes};
  const auto& l = modes.labels();
  const Complex global = std::exp(kI * (phi / 2.0));
  return (global * std::cos(phi / 2.0)) * make_basis_state(space, {l[0]}) -
         (global * kI * std::sin(phi / 2.0)) * make_basis_state(space, {l[2]});
}

StateVector make_particle(double phi, const SpaceLabel& modes) {
  if (modes.dim() != 4) throw ShapeError("particle state needs a 4-mode factor");
  const Space space{modes};
  const auto& l = modes.labels();
  const double r = 1.0 / std::sqrt(2.0);
  return Complex(r) * make_basis_state(space, {l[1]}) +
         (r * std::exp(kI * phi)) * make_basis_state(space, {l[3]});
}

StateVector toolbox_output(const StateVector& input) {
  if (input.space() != Space{pol_space(1), pol_space(2)}) {
    throw ShapeError("toolbox_output expects a pol1 (x) pol2 state");
  }
  // rows {W, P}, columns {H, V}: V -> W, H -> P
  Eigen::MatrixXcd relabel(2, 2);
  relabel << 0.0, 1.0,
             1.0, 0.0;
  const std::vector<std::string> pol1{"pol1"}, pol2{"pol2"};
  StateVector s = remap_factors(input, pol1, attr1_space(), relabel);
  return remap_factors(s, pol2, attr2_space(), relabel);
}

StateVector route_attributes(const StateVector& toolbox_state) {
  const Space in_space{attr1_space(), attr2_space()};
  if (toolbox_state.space() != in_space) {
    throw ShapeError("route_attributes expects an attr1 (x) attr2 state");
  }
  const Space out_space = attribute_space();
  const SpaceLabel attr1 = attr1_space(), attr2 = attr2_space();
  StateVector out = StateVector::zero(out_space);
  for (const auto& a1 : attr1.labels()) {
    for (const auto& a2 : attr2.labels()) {
      const std::vector<std::string> key{a1, a2};
      const Complex amp = toolbox_state.amplitude(key);
      if (amp == Complex{}) continue;
      const std::string p1 = (a1 == "W") ? "R1" : "L1";
      const std::string p2 = (a2 == "W'") ? "L2" : "R2";
      out = out + amp * make_basis_state(out_space, {p1, p2, a1, a2});
    }
  }
  return out;
}

StateVector to_mode_representation(const StateVector& attribute_state, const WpParams& params) {
  if (attribute_state.space() != attribute_space()) {
    throw ShapeError("to_mode_representation expects an attribute-representation state");
  }
  const std::vector<std::string> a1{"attr1"}, a2{"attr2"};
  StateVector s = remap_factors(attribute_state, a1, modes1_space(),
                                attribute_expansion(params.phi1, modes1_space()));
  return remap_factors(s, a2, modes2_space(), attribute_expansion(params.phi1p, modes2_space()));
}

StateVector make_preselected(const WpParams& params, Representation rep) {
  StateVector attr = route_attributes(toolbox_output(make_input_state(params.alpha)));
  if (rep == Representation::Attribute) return attr;
  return to_mode_representation(attr, params);
}

StateVector make_postselected(const WpParams& params, Representation rep) {
  WpParams at_quarter = params;
  at_quarter.alpha = std::numbers::pi / 4.0;
  return make_preselected(at_quarter, rep);
}

PrePostPair make_selection_pair(const WpParams& params, Representation rep) {
  return PrePostPair(make_preselected(params, rep), make_postselected(params, rep));
}

Operator attribute_observable(Arm arm, Attribute attr, Representation rep, const WpParams& params) {
  const int photon = photon_of(arm);
  if (photon != photon_of(attr)) {
    throw DomainError("attribute " + attr_label(attr) + " does not belong to the photon in arm " +
                      to_string(arm));
  }
  const SpaceLabel path = photon == 1 ? path1_space() : path2_space();
  const Operator on_path = label_projector(path, to_string(arm));

  Operator on_attr = [&] {
    if (rep == Representation::Attribute) {
      return label_projector(photon == 1 ? attr1_space() : attr2_space(), attr_label(attr));
    }
    const SpaceLabel modes = photon == 1 ? modes1_space() : modes2_space();
    const double phi = photon == 1 ? params.phi1 : params.phi1p;
    return projector_onto(is_wave(attr) ? make_wave(phi, modes) : make_particle(phi, modes));
  }();
  return embed(tensor(on_path, on_attr), representation_space(rep));
}

const std::array<ArmAttribute, 8>& observable_order() {
  static const std::array<ArmAttribute, 8> order{{
      {Arm::L1, Attribute::W},
      {Arm::R1, Attribute::W},
      {Arm::L1, Attribute::P},
      {Arm::R1, Attribute::P},
      {Arm::L2, Attribute::Wp},
      {Arm::R2, Attribute::Wp},
      {Arm::L2, Attribute::Pp},
      {Arm::R2, Attribute::Pp},
  }};
  return order;
}

std::string observable_name(Arm arm, Attribute attr) {
  return "Pi_" + attr_label(attr) + "^" + to_string(arm);
}

std::vector<NamedObservable> separation_observables(const WpParams& params, Representation rep) {
  std::vector<NamedObservable> out;
  for (const auto& [arm, attr] : observable_order()) {
    out.push_back({observable_name(arm, attr), attribute_observable(arm, attr, rep, params)});
  }
  return out;
}

std::vector<WeakValueReport> separation_weak_values(const WpParams& params, Representation rep) {
  const PrePostPair pair = make_selection_pair(params, rep);
  const auto observables = separation_observables(params, rep);
  return weak_value_table(pair, observables);
}

Complex find_weak_value(const std::vector<WeakValueReport>& reports, Arm arm, Attribute attr) {
  const std::string name = observable_name(arm, attr);
  for (const auto& r : reports) {
    if (r.observable_name == name) return r.value;
  }
  throw DomainError("no weak value reported for " + name);
}

ComplementaritySums complementarity_sums(const std::vector<WeakValueReport>& reports) {
  return {find_weak_value(reports, Arm::L1, Attribute::P) + find_weak_value(reports, Arm::R1, Attribute::W),
          find_weak_value(reports, Arm::R2, Attribute::Pp) + find_weak_value(reports, Arm::L2, Attribute::Wp)};
}

}  // namespace cheshire
