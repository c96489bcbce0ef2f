#pragma once

#include <span>
#include <string>
#include <vector>

#include "cheshire/qstate.hpp"

namespace cheshire {

// Below this |<post|pre>| the selection is treated as orthogonal and weak
// values are refused.
inline constexpr double kOverlapEpsilon = 1e-10;

/// A pre-selected and a post-selected state over the same space.
///
/// Construction checks that both are normalized (NormalizationError), share
/// a space (ShapeError) and are not orthogonal (OrthogonalSelectionError).
class PrePostPair {
 public:
  PrePostPair(StateVector pre, StateVector post);

  const StateVector& pre() const { return pre_; }
  const StateVector& post() const { return post_; }
  const Space& space() const { return pre_.space(); }

  /// Post-selection amplitude <post|pre>.
  Complex overlap() const { return overlap_; }

 private:
  StateVector pre_;
  StateVector post_;
  Complex overlap_;
};

struct WeakValueReport {
  std::string observable_name;
  Complex value;
  Complex overlap;
  double success_probability = 0.0;  // |overlap|^2
};

struct NamedObservable {
  std::string name;
  Operator op;
};

/// <post|C|pre> / <post|pre>.
WeakValueReport weak_value(const PrePostPair& pair, const Operator& obs, std::string name = {});

/// weak_value over each entry, in order. Errors are rethrown with the
/// offending observable's name prefixed to the message.
std::vector<WeakValueReport> weak_value_table(const PrePostPair& pair,
                                              std::span<const NamedObservable> observables);

}  // namespace cheshire
