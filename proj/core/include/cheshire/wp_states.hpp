#pragma once

// Two entangled photons whose wave and particle attributes are routed into
// different interferometer arms.
//
// Two equivalent representations are provided:
//   attribute: path1{L1,R1} (x) path2{L2,R2} (x) attr1{W,P} (x) attr2{W',P'}  (dim 16)
//   mode:      path1 (x) path2 (x) modes1{1,2,3,4} (x) modes2{1',2',3',4'}   (dim 64)
// In the mode representation the attribute kets are expanded into the four
// toolbox output modes of each photon:
//   |W(phi)> = e^{i phi/2} (cos(phi/2)|1> - i sin(phi/2)|3>)
//   |P(phi)> = (|2> + e^{i phi}|4>) / sqrt2
// Photon 1 uses phase phi1, photon 2 uses phi1p.

#include <array>
#include <string>
#include <vector>

#include "cheshire/qstate.hpp"
#include "cheshire/weakvalue.hpp"

namespace cheshire {

struct WpParams {
  double alpha = 0.0;  // HWP mixing angle, radians
  double phi1 = 0.0;   // photon-1 toolbox phase
  double phi1p = 0.0;  // photon-2 toolbox phase
};

enum class Representation { Attribute, Mode };

enum class Arm { L1, R1, L2, R2 };
enum class Attribute { W, P, Wp, Pp };  // Wp, Pp are the primed (photon 2) attributes

int photon_of(Arm arm);
int photon_of(Attribute attr);
std::string to_string(Arm arm);
std::string to_string(Attribute attr);

SpaceLabel path1_space();     // "path1": L1, R1
SpaceLabel path2_space();     // "path2": L2, R2
SpaceLabel attr1_space();     // "attr1": W, P
SpaceLabel attr2_space();     // "attr2": W', P'
SpaceLabel modes1_space();    // "modes1": 1, 2, 3, 4
SpaceLabel modes2_space();    // "modes2": 1', 2', 3', 4'
SpaceLabel pol_space(int photon);  // "pol1"/"pol2": H, V

Space attribute_space();
Space mode_space();
Space representation_space(Representation rep);

// cos(alpha)|V>|V> + sin(alpha)|H>|H> over pol1 (x) pol2.
StateVector make_input_state(double alpha);

// Single-photon toolbox outputs over `modes` (any 4-label mode factor).
StateVector make_wave(double phi, const SpaceLabel& modes = modes1_space());
StateVector make_particle(double phi, const SpaceLabel& modes = modes1_space());

// cos(alpha)|W>|W'> + sin(alpha)|P>|P'> over attr1 (x) attr2: each
// polarization is relabeled by its toolbox, V -> W and H -> P.
StateVector toolbox_output(const StateVector& input);

// The X1/X2 wave filters send wave kets to R1 / L2 and particle kets to
// L1 / R2, lifting attr1 (x) attr2 onto the 16-dim attribute space.
StateVector route_attributes(const StateVector& toolbox_state);

// Expands attr1/attr2 into modes1/modes2 using phi1/phi1p.
StateVector to_mode_representation(const StateVector& attribute_state, const WpParams& params);

// cos(alpha)|R1 L2 W W'> + sin(alpha)|L1 R2 P P'>.
StateVector make_preselected(const WpParams& params, Representation rep);

// make_preselected at alpha = pi/4, whatever params.alpha is.
StateVector make_postselected(const WpParams& params, Representation rep);

PrePostPair make_selection_pair(const WpParams& params, Representation rep);

// |arm><arm| (x) |attr><attr| lifted onto the representation's space.
// Throws DomainError if arm and attr belong to different photons.
Operator attribute_observable(Arm arm, Attribute attr, Representation rep, const WpParams& params = {});

// The eight (arm, attribute) pairs with matching photon index, in report
// order: W^L1, W^R1, P^L1, P^R1, W'^L2, W'^R2, P'^L2, P'^R2.
struct ArmAttribute {
  Arm arm;
  Attribute attr;
};
const std::array<ArmAttribute, 8>& observable_order();
std::string observable_name(Arm arm, Attribute attr);  // e.g. "Pi_W^R1", "Pi_P'^R2"

std::vector<NamedObservable> separation_observables(const WpParams& params, Representation rep);

// Weak values of all eight observables, in observable_order().
std::vector<WeakValueReport> separation_weak_values(const WpParams& params,
                                                    Representation rep = Representation::Attribute);

// Looks up one entry of a separation_weak_values result.
Complex find_weak_value(const std::vector<WeakValueReport>& reports, Arm arm, Attribute attr);

struct ComplementaritySums {
  Complex photon1;  // <Pi_P^L1> + <Pi_W^R1>
  Complex photon2;  // <Pi_P'^R2> + <Pi_W'^L2>
};
ComplementaritySums complementarity_sums(const std::vector<WeakValueReport>& reports);

}  // namespace cheshire
