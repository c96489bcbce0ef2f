#pragma once

// Single-photon quantum Cheshire cat: a horizontally polarized photon in a
// Mach-Zehnder interferometer, pre-selected in (i|L> + |R>)|H>/sqrt2 and
// post-selected in (|L>|H> + |R>|V>)/sqrt2. Its path shows up in arm L
// while its circular polarization shows up in arm R.

#include <vector>

#include "cheshire/qstate.hpp"
#include "cheshire/weakvalue.hpp"

namespace cheshire {

SpaceLabel mzi_path_space();    // "path": L, R
SpaceLabel polarization_space(); // "pol": H, V

// Circular polarization observable |up_y><up_y| - |down_y><down_y| with
// |up_y> = (|H> + i|V>)/sqrt2 and |down_y> = (|H> - i|V>)/sqrt2. In the
// {H, V} basis this is [[0, -i], [i, 0]], i.e. Pauli Y, not Pauli Z.
Operator circular_polarization();

struct QccScenario {
  Space space;  // path (x) pol
  PrePostPair pair;
  std::vector<NamedObservable> observables;  // Pi_L, Pi_R, sigma_z^L, sigma_z^R
};

QccScenario build_qcc_scenario();

std::vector<WeakValueReport> qcc_weak_values();

// Expected Kronecker-delta pattern, in the scenario's observable order.
inline constexpr double kQccExpected[4] = {1.0, 0.0, 0.0, 1.0};

// True when `reports` match kQccExpected in value (real part) within `tol`
// and every imaginary part is within `tol`.
bool matches_qcc_pattern(const std::vector<WeakValueReport>& reports, double tol);

}  // namespace cheshire
