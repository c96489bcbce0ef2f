#include "cheshire/cheshire_single.hpp"

#include <cmath>

namespace cheshire {
namespace {

const Complex kI{0.0, 1.0};

}  // namespace

SpaceLabel mzi_path_space() { return SpaceLabel("path", {"L", "R"}); }
SpaceLabel polarization_space() { return SpaceLabel("pol", {"H", "V"}); }

Operator circular_polarization() {
  const Space pol{polarization_space()};
  const double r = 1.0 / std::sqrt(2.0);
  const StateVector up = r * make_basis_state(pol, {"H"}) + (kI * r) * make_basis_state(pol, {"V"});
  const StateVector down = r * make_basis_state(pol, {"H"}) - (kI * r) * make_basis_state(pol, {"V"});
  return projector_onto(up) - projector_onto(down);
}

QccScenario build_qcc_scenario() {
  const Space space{mzi_path_space(), polarization_space()};
  const double r = 1.0 / std::sqrt(2.0);

  StateVector pre = (kI * r) * make_basis_state(space, {"L", "H"}) + Complex(r) * make_basis_state(space, {"R", "H"});
  StateVector post = Complex(r) * make_basis_state(space, {"L", "H"}) + Complex(r) * make_basis_state(space, {"R", "V"});

  const SpaceLabel path = mzi_path_space();
  const Operator sz = circular_polarization();
  std::vector<NamedObservable> obs{
      {"Pi_L", embed(label_projector(path, "L"), space)},
      {"Pi_R", embed(label_projector(path, "R"), space)},
      {"sigma_z^L", embed(tensor(sz, label_projector(path, "L")), space)},
      {"sigma_z^R", embed(tensor(sz, label_projector(path, "R")), space)},
  };
  return QccScenario{space, PrePostPair(std::move(pre), std::move(post)), std::move(obs)};
}

std::vector<WeakValueReport> qcc_weak_values() {
  const QccScenario s = build_qcc_scenario();
  return weak_value_table(s.pair, s.observables);
}

bool matches_qcc_pattern(const std::vector<WeakValueReport>& reports, double tol) {
  if (reports.size() != std::size(kQccExpected)) return false;
  for (std::size_t k = 0; k < reports.size(); ++k) {
    if (std::abs(reports[k].value.real() - kQccExpected[k]) > tol) return false;
    if (std::abs(reports[k].value.imag()) > tol) return false;
  }
  return true;
}

}  // namespace cheshire
