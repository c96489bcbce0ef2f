#include "cheshire/weakvalue.hpp"

#include "cheshire/errors.hpp"

namespace cheshire {
namespace {

void check_overlap(Complex overlap) {
  if (std::abs(overlap) <= kOverlapEpsilon) {
    throw OrthogonalSelectionError("pre- and post-selected states are orthogonal (|<post|pre>| = " +
                                   std::to_string(std::abs(overlap)) + "); weak value undefined");
  }
}

template <typename E>
[[noreturn]] void rethrow_named(const E& e, const std::string& name) {
  throw E("observable '" + name + "': " + e.what());
}

}  // namespace

PrePostPair::PrePostPair(StateVector pre, StateVector post)
    : pre_(std::move(pre)), post_(std::move(post)) {
  if (pre_.space() != post_.space()) throw ShapeError("pre- and post-selected states live on different spaces");
  if (!pre_.is_normalized()) throw NormalizationError("pre-selected state is not normalized");
  if (!post_.is_normalized()) throw NormalizationError("post-selected state is not normalized");
  overlap_ = inner(post_, pre_);
  check_overlap(overlap_);
}

WeakValueReport weak_value(const PrePostPair& pair, const Operator& obs, std::string name) {
  const Complex overlap = pair.overlap();
  check_overlap(overlap);
  const Complex numerator = inner(pair.post(), apply(obs, pair.pre()));
  return {std::move(name), numerator / overlap, overlap, std::norm(overlap)};
}

std::vector<WeakValueReport> weak_value_table(const PrePostPair& pair,
                                              std::span<const NamedObservable> observables) {
  std::vector<WeakValueReport> out;
  out.reserve(observables.size());
  for (const auto& [name, op] : observables) {
    try {
      out.push_back(weak_value(pair, op, name));
    } catch (const OrthogonalSelectionError& e) {
      rethrow_named(e, name);
    } catch (const ShapeError& e) {
      rethrow_named(e, name);
    }
  }
  return out;
}

}  // namespace cheshire
