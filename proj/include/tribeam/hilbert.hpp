#pragma once

#include <complex>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "tribeam/errors.hpp"

namespace tribeam::hilbert {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Default absolute tolerance. The mode space is tiny and every quantity has
/// a closed form, so there is no accumulated-roundoff budget to spend.
inline constexpr double kDefaultTol = 1e-12;

/// Bookkeeping slot holding the no-photon amplitude of weak-source states.
/// It is excluded from completeness diagnostics, which live on the beam span.
inline constexpr std::string_view kVacuumLabel = "vac";

/// Ordered set of unique mode labels. The beam basis {a, b, h} is
/// orthonormal by construction; screen-point or vacuum labels may extend it.
class ModeBasis {
 public:
  explicit ModeBasis(std::vector<std::string> labels);

  /// The experiment's beam basis {a, b, h}.
  static ModeBasis beams();
  /// {vac, a, b, h}, for weak-source bookkeeping.
  static ModeBasis beams_with_vacuum();

  int dimension() const { return static_cast<int>(labels_->size()); }
  const std::vector<std::string>& labels() const { return *labels_; }
  const std::string& label(int i) const { return (*labels_)[static_cast<std::size_t>(i)]; }

  /// Index of `label`, or -1 when absent.
  int find(std::string_view label) const;
  /// Index of `label`; throws BasisMismatchError when absent.
  int index_of(std::string_view label) const;
  bool contains(std::string_view label) const { return find(label) >= 0; }

  friend bool operator==(const ModeBasis& x, const ModeBasis& y);
  friend bool operator!=(const ModeBasis& x, const ModeBasis& y) { return !(x == y); }

 private:
  std::shared_ptr<const std::vector<std::string>> labels_;
};

/// Complex amplitudes over a labeled mode basis. Values are immutable after
/// construction; normalization is a caller contract, not enforced here, so
/// unnormalized field modes and weak-source forms are representable.
class StateVector {
 public:
  StateVector(ModeBasis basis, Vector amplitudes);

  static StateVector zero(const ModeBasis& basis);
  /// The basis ket |label>.
  static StateVector basis_state(const ModeBasis& basis, std::string_view label);

  const ModeBasis& basis() const { return basis_; }
  const Vector& amplitudes() const { return amps_; }
  Complex amplitude(std::string_view label) const { return amps_(basis_.index_of(label)); }

  double squared_norm() const { return amps_.squaredNorm(); }
  double norm() const { return amps_.norm(); }
  bool is_normalized(double tol = kDefaultTol) const;
  /// v / |v|; throws DegenerateInputError on (numerically) zero input.
  StateVector normalized() const;

  friend StateVector operator+(const StateVector& u, const StateVector& v);
  friend StateVector operator-(const StateVector& u, const StateVector& v);
  friend StateVector operator*(Complex c, const StateVector& v);
  friend StateVector operator*(const StateVector& v, Complex c) { return c * v; }

 private:
  ModeBasis basis_;
  Vector amps_;
};

/// Dense complex operator on a labeled mode basis.
class LinearOperator {
 public:
  LinearOperator(ModeBasis basis, Matrix matrix);

  static LinearOperator identity(const ModeBasis& basis);
  static LinearOperator zero(const ModeBasis& basis);

  const ModeBasis& basis() const { return basis_; }
  const Matrix& matrix() const { return mat_; }

  Complex trace() const { return mat_.trace(); }
  double frobenius_norm() const { return mat_.norm(); }
  LinearOperator adjoint() const { return {basis_, mat_.adjoint()}; }
  bool is_hermitian(double tol = kDefaultTol) const;
  /// P P = P within tol.
  bool is_idempotent(double tol = kDefaultTol) const;

  StateVector apply(const StateVector& v) const;

  friend LinearOperator operator+(const LinearOperator& x, const LinearOperator& y);
  friend LinearOperator operator-(const LinearOperator& x, const LinearOperator& y);
  friend LinearOperator operator*(const LinearOperator& x, const LinearOperator& y);
  friend LinearOperator operator*(Complex c, const LinearOperator& x);

 private:
  ModeBasis basis_;
  Matrix mat_;
};

/// <u|v> = sum conj(u_X) v_X. Conjugate-symmetric. Throws BasisMismatchError
/// when u and v live on different bases.
Complex inner_product(const StateVector& u, const StateVector& v);

/// |v><v| (normalize = false, the weight-operator convention: trace = <v|v>)
/// or |v><v| / <v|v> (normalize = true, a strict rank-1 projector).
/// Throws DegenerateInputError on a zero vector.
LinearOperator ray_projector(const StateVector& v, bool normalize = false);

/// <s|op|s> for Hermitian op. The imaginary residue is checked against tol
/// and then discarded. Non-Hermitian op is a contract violation.
double expectation(const LinearOperator& op, const StateVector& s, double tol = kDefaultTol);

/// Frobenius norm of (sum of projectors - I) restricted to the non-vacuum
/// span of their common basis. Zero means the set resolves the identity.
double completeness_deviation(std::span<const LinearOperator> projectors);

/// True when u = exp(i theta) v for some real theta, within tol.
bool equal_up_to_global_phase(const StateVector& u, const StateVector& v,
                              double tol = kDefaultTol);

}  // namespace tribeam::hilbert
