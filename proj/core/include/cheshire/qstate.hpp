#pragma once

// Dense complex linear algebra over small labeled tensor-product spaces.
//
// Index convention: a space is an ordered list of factors and amplitudes are
// stored row-major over that list, i.e. the last factor varies fastest. For
// path({L,R}) x pol({H,V}) the basis order is LH, LV, RH, RV.

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace cheshire {

using Complex = std::complex<double>;

// Tolerance for every exactness check in the library.
inline constexpr double kExactTol = 1e-12;

class SpaceLabel {
 public:
  SpaceLabel(std::string name, std::vector<std::string> basis_labels);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t dim() const { return labels_.size(); }

  // Throws LabelError for a label outside the basis.
  std::size_t index_of(std::string_view label) const;
  bool contains(std::string_view label) const;

  bool operator==(const SpaceLabel&) const = default;

 private:
  std::string name_;
  std::vector<std::string> labels_;
};

using Space = std::vector<SpaceLabel>;

std::size_t space_dim(const Space& space);

// Position of the factor called `name`; throws ShapeError if absent.
std::size_t factor_position(const Space& space, std::string_view name);

// Splits a flat row-major index into one digit per factor.
std::vector<std::size_t> split_index(const Space& space, std::size_t flat);

class StateVector {
 public:
  StateVector(Space space, Eigen::VectorXcd amplitudes);

  // All-zero vector over `space`.
  static StateVector zero(Space space);

  const Space& space() const { return space_; }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }

  // Amplitude of the product basis vector named by one label per factor.
  Complex amplitude(std::span<const std::string> labels) const;

  double norm() const { return amplitudes_.norm(); }
  double norm_squared() const { return amplitudes_.squaredNorm(); }
  bool is_normalized(double tol = kExactTol) const;
  StateVector normalized() const;

  std::size_t support_size(double tol = kExactTol) const;

  friend StateVector operator+(const StateVector& a, const StateVector& b);
  friend StateVector operator-(const StateVector& a, const StateVector& b);
  friend StateVector operator*(Complex scale, const StateVector& s);

 private:
  Space space_;
  Eigen::VectorXcd amplitudes_;
};

enum class OperatorKind { General, Projector, Unitary };

class Operator {
 public:
  // Unflagged operator; only the shape is checked.
  Operator(Space space, Eigen::MatrixXcd matrix);

  // Flagged constructors verify P^2 = P, P = P^dagger (resp. U^dagger U = I)
  // to kExactTol and throw NormalizationError otherwise.
  static Operator projector(Space space, Eigen::MatrixXcd matrix);
  static Operator unitary(Space space, Eigen::MatrixXcd matrix);
  static Operator identity(Space space);

  const Space& space() const { return space_; }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  OperatorKind kind() const { return kind_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }

  Operator adjoint() const;
  Complex trace() const { return matrix_.trace(); }

  bool is_hermitian(double tol = kExactTol) const;
  bool is_projector(double tol = kExactTol) const;
  bool is_unitary(double tol = kExactTol) const;

  // Composition (this after rhs) and linear combinations. The result is
  // unflagged except where the flag is preserved algebraically (product of
  // unitaries).
  friend Operator operator*(const Operator& a, const Operator& b);
  friend Operator operator+(const Operator& a, const Operator& b);
  friend Operator operator-(const Operator& a, const Operator& b);
  friend Operator operator*(Complex scale, const Operator& op);

 private:
  Operator(Space space, Eigen::MatrixXcd matrix, OperatorKind kind);

  Space space_;
  Eigen::MatrixXcd matrix_;
  OperatorKind kind_ = OperatorKind::General;
};

// Unit vector on the product basis element named by `labels`, one per factor.
StateVector make_basis_state(const Space& space, std::span<const std::string> labels);
StateVector make_basis_state(const Space& space, std::initializer_list<std::string> labels);

// Kronecker product. Factor names must be disjoint.
StateVector tensor(const StateVector& a, const StateVector& b);
Operator tensor(const Operator& a, const Operator& b);

// <a|b>, conjugate-linear in a.
Complex inner(const StateVector& a, const StateVector& b);

StateVector apply(const Operator& op, const StateVector& s);

// Lifts `op` onto `full_space` by tensoring identities onto the missing
// factors; factor order follows `full_space`.
Operator embed(const Operator& op, const Space& full_space);

// |s><s| for a normalized s; throws NormalizationError otherwise.
Operator projector_onto(const StateVector& s);

// |label><label| on a single factor.
Operator label_projector(const SpaceLabel& factor, std::string_view label);

// |c><c| (x) target + (I - |c><c|) (x) I over [control, target...]. Unitary
// when `target` is.
Operator controlled(const SpaceLabel& control, std::string_view control_label,
                    const Operator& target);

// Replaces the factors named in `from` (in that order) by the single factor
// `into`, applying `map` (into.dim() rows, product-of-from-dims columns, with
// columns indexed row-major over `from`). The new factor takes the position
// of the earliest removed factor.
StateVector remap_factors(const StateVector& s, std::span<const std::string> from,
                          const SpaceLabel& into, const Eigen::MatrixXcd& map);

// Probability weight on `label` of factor `factor`, summed over all others.
double label_weight(const StateVector& s, std::string_view factor, std::string_view label);

// Copy of `s` with the amplitudes on `label` of `factor` set to zero.
StateVector remove_label(const StateVector& s, std::string_view factor, std::string_view label);

}  // namespace cheshire
