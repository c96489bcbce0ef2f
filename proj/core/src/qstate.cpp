#include "cheshire/qstate.hpp"

#include <algorithm>
#include <set>

#include "cheshire/errors.hpp"

namespace cheshire {
namespace {

std::string describe(const Space& space) {
  std::string out = "[";
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (i) out += ",";
    out += space[i].name();
  }
  return out + "]";
}

void require_same_space(const Space& a, const Space& b, const char* what) {
  if (a != b) {
    throw ShapeError(std::string(what) + ": space mismatch " + describe(a) + " vs " + describe(b));
  }
}

void require_disjoint(const Space& a, const Space& b) {
  for (const auto& fa : a) {
    for (const auto& fb : b) {
      if (fa.name() == fb.name()) throw ShapeError("tensor: duplicate factor '" + fa.name() + "'");
    }
  }
}

Space concat(const Space& a, const Space& b) {
  Space out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::size_t join_index(const Space& space, std::span<const std::size_t> digits) {
  std::size_t flat = 0;
  for (std::size_t k = 0; k < space.size(); ++k) flat = flat * space[k].dim() + digits[k];
  return flat;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double max_abs(const Eigen::MatrixXcd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace

// ---------------------------------------------------------------------------
// SpaceLabel

SpaceLabel::SpaceLabel(std::string name, std::vector<std::string> basis_labels)
    : name_(std::move(name)), labels_(std::move(basis_labels)) {
  if (name_.empty()) throw ShapeError("space name must not be empty");
  if (labels_.empty()) throw ShapeError("space '" + name_ + "' must have dim >= 1");
  std::set<std::string> seen;
  for (const auto& l : labels_) {
    if (l.empty()) throw LabelError("space '" + name_ + "' has an empty basis label");
    if (!seen.insert(l).second) {
      throw LabelError("space '" + name_ + "' repeats basis label '" + l + "'");
    }
  }
}

std::size_t SpaceLabel::index_of(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) {
    throw LabelError("label '" + std::string(label) + "' is not in space '" + name_ + "'");
  }
  return static_cast<std::size_t>(it - labels_.begin());
}

bool SpaceLabel::contains(std::string_view label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

std::size_t space_dim(const Space& space) {
  std::size_t d = 1;
  for (const auto& f : space) d *= f.dim();
  return d;
}

std::size_t factor_position(const Space& space, std::string_view name) {
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (space[i].name() == name) return i;
  }
  throw ShapeError("factor '" + std::string(name) + "' not in space " + describe(space));
}

std::vector<std::size_t> split_index(const Space& space, std::size_t flat) {
  std::vector<std::size_t> digits(space.size());
  for (std::size_t k = space.size(); k-- > 0;) {
    digits[k] = flat % space[k].dim();
    flat /= space[k].dim();
  }
  return digits;
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(Space space, Eigen::VectorXcd amplitudes)
    : space_(std::move(space)), amplitudes_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amplitudes_.size()) != space_dim(space_)) {
    throw ShapeError("state over " + describe(space_) + " needs " +
                     std::to_string(space_dim(space_)) + " amplitudes, got " +
                     std::to_string(amplitudes_.size()));
  }
}

StateVector StateVector::zero(Space space) {
  const auto n = static_cast<Eigen::Index>(space_dim(space));
  return StateVector(std::move(space), Eigen::VectorXcd::Zero(n));
}

Complex StateVector::amplitude(std::span<const std::string> labels) const {
  if (labels.size() != space_.size()) throw ShapeError("amplitude: one label per factor required");
  std::vector<std::size_t> digits(labels.size());
  for (std::size_t k = 0; k < labels.size(); ++k) digits[k] = space_[k].index_of(labels[k]);
  return amplitudes_(static_cast<Eigen::Index>(join_index(space_, digits)));
}

bool StateVector::is_normalized(double tol) const {
  return std::abs(norm_squared() - 1.0) <= tol;
}

StateVector StateVector::normalized() const {
  const double n = norm();
  if (n == 0.0) throw NormalizationError("cannot normalize the zero vector");
  return StateVector(space_, amplitudes_ / n);
}

std::size_t StateVector::support_size(double tol) const {
  return static_cast<std::size_t>((amplitudes_.array().abs() > tol).count());
}

StateVector operator+(const StateVector& a, const StateVector& b) {
  require_same_space(a.space_, b.space_, "state sum");
  return StateVector(a.space_, a.amplitudes_ + b.amplitudes_);
}

StateVector operator-(const StateVector& a, const StateVector& b) {
  require_same_space(a.space_, b.space_, "state difference");
  return StateVector(a.space_, a.amplitudes_ - b.amplitudes_);
}

StateVector operator*(Complex scale, const StateVector& s) {
  return StateVector(s.space_, scale * s.amplitudes_);
}

// ---------------------------------------------------------------------------
// Operator

Operator::Operator(Space space, Eigen::MatrixXcd matrix)
    : Operator(std::move(space), std::move(matrix), OperatorKind::General) {}

Operator::Operator(Space space, Eigen::MatrixXcd matrix, OperatorKind kind)
    : space_(std::move(space)), matrix_(std::move(matrix)), kind_(kind) {
  const auto n = static_cast<Eigen::Index>(space_dim(space_));
  if (matrix_.rows() != n || matrix_.cols() != n) {
    throw ShapeError("operator over " + describe(space_) + " must be " + std::to_string(n) +
                     "x" + std::to_string(n));
  }
}

Operator Operator::projector(Space space, Eigen::MatrixXcd matrix) {
  Operator op(std::move(space), std::move(matrix), OperatorKind::Projector);
  if (!op.is_projector()) throw NormalizationError("matrix is not an orthogonal projector");
  return op;
}

Operator Operator::unitary(Space space, Eigen::MatrixXcd matrix) {
  Operator op(std::move(space), std::move(matrix), OperatorKind::Unitary);
  if (!op.is_unitary()) throw NormalizationError("matrix is not unitary");
  return op;
}

Operator Operator::identity(Space space) {
  const auto n = static_cast<Eigen::Index>(space_dim(space));
  // The identity is both; Unitary is the more useful flag downstream.
  return Operator(std::move(space), Eigen::MatrixXcd::Identity(n, n), OperatorKind::Unitary);
}

Operator Operator::adjoint() const {
  return Operator(space_, matrix_.adjoint(), kind_);
}

bool Operator::is_hermitian(double tol) const {
  return max_abs(matrix_ - matrix_.adjoint()) <= tol;
}

bool Operator::is_projector(double tol) const {
  return is_hermitian(tol) && max_abs(matrix_ * matrix_ - matrix_) <= tol;
}

bool Operator::is_unitary(double tol) const {
  const auto n = matrix_.rows();
  return max_abs(matrix_.adjoint() * matrix_ - Eigen::MatrixXcd::Identity(n, n)) <= tol;
}

Operator operator*(const Operator& a, const Operator& b) {
  require_same_space(a.space_, b.space_, "operator product");
  const bool both_unitary = a.kind_ == OperatorKind::Unitary && b.kind_ == OperatorKind::Unitary;
  return Operator(a.space_, a.matrix_ * b.matrix_,
                  both_unitary ? OperatorKind::Unitary : OperatorKind::General);
}

Operator operator+(const Operator& a, const Operator& b) {
  require_same_space(a.space_, b.space_, "operator sum");
  return Operator(a.space_, a.matrix_ + b.matrix_);
}

Operator operator-(const Operator& a, const Operator& b) {
  require_same_space(a.space_, b.space_, "operator difference");
  return Operator(a.space_, a.matrix_ - b.matrix_);
}

Operator operator*(Complex scale, const Operator& op) {
  return Operator(op.space_, scale * op.matrix_);
}

// ---------------------------------------------------------------------------
// Free functions

StateVector make_basis_state(const Space& space, std::span<const std::string> labels) {
  if (labels.size() != space.size()) {
    throw ShapeError("make_basis_state: " + std::to_string(space.size()) + " labels expected, got " +
                     std::to_string(labels.size()));
  }
  std::vector<std::size_t> digits(labels.size());
  for (std::size_t k = 0; k < labels.size(); ++k) digits[k] = space[k].index_of(labels[k]);
  auto s = StateVector::zero(space);
  Eigen::VectorXcd amps = s.amplitudes();
  amps(static_cast<Eigen::Index>(join_index(space, digits))) = 1.0;
  return StateVector(space, std::move(amps));
}

StateVector make_basis_state(const Space& space, std::initializer_list<std::string> labels) {
  std::vector<std::string> v(labels);
  return make_basis_state(space, std::span<const std::string>(v));
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  require_disjoint(a.space(), b.space());
  Eigen::VectorXcd amps(a.amplitudes().size() * b.amplitudes().size());
  for (Eigen::Index i = 0; i < a.amplitudes().size(); ++i) {
    amps.segment(i * b.amplitudes().size(), b.amplitudes().size()) = a.amplitudes()(i) * b.amplitudes();
  }
  return StateVector(concat(a.space(), b.space()), std::move(amps));
}

Operator tensor(const Operator& a, const Operator& b) {
  require_disjoint(a.space(), b.space());
  Operator out(concat(a.space(), b.space()), kron(a.matrix(), b.matrix()));
  if (a.kind() == b.kind() && a.kind() != OperatorKind::General) {
    return a.kind() == OperatorKind::Unitary ? Operator::unitary(out.space(), out.matrix())
                                             : Operator::projector(out.space(), out.matrix());
  }
  return out;
}

Complex inner(const StateVector& a, const StateVector& b) {
  require_same_space(a.space(), b.space(), "inner");
  return a.amplitudes().dot(b.amplitudes());  // Eigen's dot conjugates the left operand
}

StateVector apply(const Operator& op, const StateVector& s) {
  require_same_space(op.space(), s.space(), "apply");
  return StateVector(s.space(), op.matrix() * s.amplitudes());
}

Operator embed(const Operator& op, const Space& full_space) {
  const Space& sub = op.space();
  // position in full_space of each factor of op, in op's order
  std::vector<std::size_t> where(sub.size());
  std::vector<bool> covered(full_space.size(), false);
  for (std::size_t k = 0; k < sub.size(); ++k) {
    const std::size_t pos = factor_position(full_space, sub[k].name());
    if (full_space[pos] != sub[k]) {
      throw ShapeError("embed: factor '" + sub[k].name() + "' has different basis in target space");
    }
    if (covered[pos]) throw ShapeError("embed: factor '" + sub[k].name() + "' repeated");
    covered[pos] = true;
    where[k] = pos;
  }

  const std::size_t n = space_dim(full_space);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<std::vector<std::size_t>> digits(n);
  for (std::size_t i = 0; i < n; ++i) digits[i] = split_index(full_space, i);

  std::vector<std::size_t> sub_row(sub.size()), sub_col(sub.size());
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      bool spectator_match = true;
      for (std::size_t f = 0; f < full_space.size() && spectator_match; ++f) {
        if (!covered[f] && digits[r][f] != digits[c][f]) spectator_match = false;
      }
      if (!spectator_match) continue;
      for (std::size_t k = 0; k < sub.size(); ++k) {
        sub_row[k] = digits[r][where[k]];
        sub_col[k] = digits[c][where[k]];
      }
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          op.matrix()(static_cast<Eigen::Index>(join_index(sub, sub_row)),
                      static_cast<Eigen::Index>(join_index(sub, sub_col)));
    }
  }
  switch (op.kind()) {
    case OperatorKind::Projector: return Operator::projector(full_space, std::move(m));
    case OperatorKind::Unitary: return Operator::unitary(full_space, std::move(m));
    case OperatorKind::General: break;
  }
  return Operator(full_space, std::move(m));
}

Operator projector_onto(const StateVector& s) {
  if (!s.is_normalized()) {
    throw NormalizationError("projector_onto: state has norm^2 " + std::to_string(s.norm_squared()));
  }
  return Operator::projector(s.space(), s.amplitudes() * s.amplitudes().adjoint());
}

Operator label_projector(const SpaceLabel& factor, std::string_view label) {
  const auto i = static_cast<Eigen::Index>(factor.index_of(label));
  const auto d = static_cast<Eigen::Index>(factor.dim());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  m(i, i) = 1.0;
  return Operator::projector({factor}, std::move(m));
}

Operator controlled(const SpaceLabel& control, std::string_view control_label, const Operator& target) {
  const Operator on = label_projector(control, control_label);
  const Operator off = Operator::identity({control}) - on;
  Operator sum = tensor(on, target) + tensor(off, Operator::identity(target.space()));
  if (target.kind() == OperatorKind::Unitary) return Operator::unitary(sum.space(), sum.matrix());
  return sum;
}

StateVector remap_factors(const StateVector& s, std::span<const std::string> from,
                          const SpaceLabel& into, const Eigen::MatrixXcd& map) {
  const Space& old_space = s.space();
  if (from.empty()) throw ShapeError("remap_factors: no source factors");
  std::vector<std::size_t> from_pos(from.size());
  Space from_space;
  for (std::size_t k = 0; k < from.size(); ++k) {
    from_pos[k] = factor_position(old_space, from[k]);
    from_space.push_back(old_space[from_pos[k]]);
  }
  if (map.rows() != static_cast<Eigen::Index>(into.dim()) ||
      map.cols() != static_cast<Eigen::Index>(space_dim(from_space))) {
    throw ShapeError("remap_factors: map must be " + std::to_string(into.dim()) + "x" +
                     std::to_string(space_dim(from_space)));
  }

  const std::size_t insert_at = *std::min_element(from_pos.begin(), from_pos.end());
  Space new_space;
  std::vector<std::size_t> kept;  // old positions kept, in order
  for (std::size_t f = 0; f < old_space.size(); ++f) {
    if (f == insert_at) new_space.push_back(into);
    if (std::find(from_pos.begin(), from_pos.end(), f) != from_pos.end()) continue;
    if (old_space[f].name() == into.name()) {
      throw ShapeError("remap_factors: target factor '" + into.name() + "' already present");
    }
    new_space.push_back(old_space[f]);
    kept.push_back(f);
  }
  const std::size_t into_pos = factor_position(new_space, into.name());

  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(space_dim(new_space)));
  std::vector<std::size_t> sub(from.size());
  std::vector<std::size_t> new_digits(new_space.size());
  for (std::size_t i = 0; i < s.dim(); ++i) {
    const Complex a = s.amplitudes()(static_cast<Eigen::Index>(i));
    if (a == Complex{}) continue;
    const auto digits = split_index(old_space, i);
    for (std::size_t k = 0; k < from.size(); ++k) sub[k] = digits[from_pos[k]];
    const auto col = static_cast<Eigen::Index>(join_index(from_space, sub));
    std::size_t j = 0;
    for (std::size_t f = 0; f < new_space.size(); ++f) {
      if (f != into_pos) new_digits[f] = digits[kept[j++]];
    }
    for (std::size_t r = 0; r < into.dim(); ++r) {
      new_digits[into_pos] = r;
      out(static_cast<Eigen::Index>(join_index(new_space, new_digits))) +=
          map(static_cast<Eigen::Index>(r), col) * a;
    }
  }
  return StateVector(std::move(new_space), std::move(out));
}

double label_weight(const StateVector& s, std::string_view factor, std::string_view label) {
  const std::size_t pos = factor_position(s.space(), factor);
  const std::size_t idx = s.space()[pos].index_of(label);
  double w = 0.0;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    if (split_index(s.space(), i)[pos] == idx) w += std::norm(s.amplitudes()(static_cast<Eigen::Index>(i)));
  }
  return w;
}

StateVector remove_label(const StateVector& s, std::string_view factor, std::string_view label) {
  const std::size_t pos = factor_position(s.space(), factor);
  const std::size_t idx = s.space()[pos].index_of(label);
  Eigen::VectorXcd amps = s.amplitudes();
  for (std::size_t i = 0; i < s.dim(); ++i) {
    if (split_index(s.space(), i)[pos] == idx) amps(static_cast<Eigen::Index>(i)) = 0.0;
  }
  return StateVector(s.space(), std::move(amps));
}

}  // namespace cheshire
