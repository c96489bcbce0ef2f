#pragma once

// Post-selection verification network for the two-photon separation scheme.
//
// The network converts the particle branch into the wave branch (BS1/BS2 then
// the mode switch, only in arms L1 and R2), routes the two path combinations
// R1L2 / L1R2 onto a merged path qubit {R, L} (R1R2 leaks to D1, L1L2 to D2),
// filters each photon through a wave projector (reflected light reaches D3 /
// D4), and interferes the merged path on BS5 with D5 on port R and D6 on
// port L. D5 clicks with certainty exactly for the post-selected state.
//
// Splits (routing, filters, detectors) are recorded as measurement branches:
// the detected weight is booked as a probability and the surviving state is
// carried forward unnormalized.

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cheshire/qstate.hpp"
#include "cheshire/wp_states.hpp"

namespace cheshire {

// Only the (+,-) Hadamard convention |a> -> (|a>+|b>)/sqrt2,
// |b> -> (|a>-|b>)/sqrt2 is modeled.
enum class BsConvention { Paper };

// Swaps modes 1<->2 and 3<->4.
Operator sigma1234(const SpaceLabel& modes = modes1_space());

// Beam splitter coupling `label_a` and `label_b` of `factor`; identity on
// every other label.
Operator beam_splitter(const SpaceLabel& factor, std::string_view label_a, std::string_view label_b,
                       BsConvention convention = BsConvention::Paper);

// BS1/BS2: beam splitter on modes 2 and 4 of a 4-mode factor.
Operator bs_24(const SpaceLabel& modes = modes1_space(), BsConvention convention = BsConvention::Paper);

struct WaveFilterPorts {
  Operator transmit;  // |W(phi)><W(phi)|
  Operator reflect;   // I - transmit
};
WaveFilterPorts wave_filter(double phi, const SpaceLabel& modes = modes1_space());

SpaceLabel merged_path_space();  // "path": R, L

// Partial isometry from path1 (x) path2 onto the merged path qubit. Columns
// are indexed row-major over (path1, path2); unmapped combinations are zero
// columns and listed in `leaks` with the detector that receives them.
struct PathMerge {
  std::vector<std::string> from;  // factor names, column order
  SpaceLabel into;
  Eigen::MatrixXcd isometry;
  std::vector<std::pair<std::size_t, std::string>> leaks;  // (column, detector)
};
PathMerge merge_paths();

// BS5 on the merged path: |R> -> (|R>+|L>)/sqrt2, |L> -> (|R>-|L>)/sqrt2.
Operator bs5();

struct TraceEntry {
  std::string element;
  double norm_after = 0.0;
};

struct DetectionResult {
  std::map<std::string, double> detector_probs;
  StateVector surviving_state;
  std::vector<TraceEntry> trace;

  double detector_total() const;
  // Detector probabilities plus surviving norm^2; 1 for a unit input.
  double total_probability() const;
};

// The hand-built network, element by element. `input` must live on the
// 64-dim mode space; filter phases come from params.phi1 / params.phi1p.
DetectionResult run_postselection_pipeline(const StateVector& input, const WpParams& params);

// ---------------------------------------------------------------------------
// Declarative circuits

enum class ElementKind { BeamSplitter, ModeSwitch, WaveFilter, PathMerge, Detector };
std::string to_string(ElementKind kind);

// Restricts an element to one branch of a path factor.
struct Condition {
  std::string factor;
  std::string label;
  bool operator==(const Condition&) const = default;
};

// BeamSplitter or ModeSwitch: a unitary on one factor, optionally controlled.
struct UnitaryElement {
  ElementKind kind;
  std::string name;
  std::string target;
  std::optional<Condition> when;
  Operator unitary;
};

// Exactly one of the ports continues (nullopt); the other feeds a detector.
struct WaveFilterElement {
  std::string name;
  std::string target;
  Operator transmit;
  Operator reflect;
  std::optional<std::string> transmit_detector;
  std::optional<std::string> reflect_detector;
};

struct MergeElement {
  std::string name;
  PathMerge merge;
};

struct DetectorElement {
  std::string name;
  std::string factor;
  std::string label;
};

using Element = std::variant<UnitaryElement, WaveFilterElement, MergeElement, DetectorElement>;

ElementKind kind_of(const Element& e);
const std::string& name_of(const Element& e);

// Element builders; unitaries and projector pairs are checked here.
Element make_beam_splitter(const SpaceLabel& factor, std::string label_a, std::string label_b,
                           std::optional<Condition> when = std::nullopt,
                           BsConvention convention = BsConvention::Paper);
Element make_mode_switch(const SpaceLabel& modes, std::optional<Condition> when = std::nullopt);
Element make_wave_filter(const SpaceLabel& modes, double phi, std::optional<std::string> transmit_detector,
                         std::optional<std::string> reflect_detector);
Element make_merge(PathMerge merge);
Element make_detector(std::string name, const SpaceLabel& factor, std::string label);

class Circuit {
 public:
  // Throws ShapeError/LabelError when an element references an undeclared
  // factor or label, or a detector name is reused.
  Circuit(Space spaces, std::vector<Element> elements);

  const Space& spaces() const { return spaces_; }
  const std::vector<Element>& elements() const { return elements_; }
  // Every detector reachable in the circuit, in order of first appearance.
  const std::vector<std::string>& detector_names() const { return detectors_; }

 private:
  Space spaces_;
  std::vector<Element> elements_;
  std::vector<std::string> detectors_;
};

// Propagates `input` through the circuit. Each element's factors must be
// present in the running state's space (ShapeError otherwise).
DetectionResult simulate(const Circuit& circuit, const StateVector& input);

// The same network as run_postselection_pipeline, as a Circuit.
Circuit build_fig1_circuit(const WpParams& params = {});

}  // namespace cheshire
