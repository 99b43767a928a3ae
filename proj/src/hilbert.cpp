#include "tribeam/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace tribeam::hilbert {

namespace {

void require_same_basis(const ModeBasis& x, const ModeBasis& y, const char* what) {
  if (x != y) {
    std::ostringstream msg;
    msg << what << ": operands live on different mode bases ({";
    for (const auto& l : x.labels()) msg << ' ' << l;
    msg << " } vs {";
    for (const auto& l : y.labels()) msg << ' ' << l;
    msg << " })";
    throw BasisMismatchError(msg.str());
  }
}

}  // namespace

ModeBasis::ModeBasis(std::vector<std::string> labels) {
  if (labels.empty()) throw ConfigurationError("mode basis must have at least one label");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t j = i + 1; j < labels.size(); ++j) {
      if (labels[i] == labels[j]) {
        throw ConfigurationError("duplicate mode label '" + labels[i] + "' in basis");
      }
    }
  }
  labels_ = std::make_shared<const std::vector<std::string>>(std::move(labels));
}

ModeBasis ModeBasis::beams() { return ModeBasis({"a", "b", "h"}); }

ModeBasis ModeBasis::beams_with_vacuum() {
  return ModeBasis({std::string(kVacuumLabel), "a", "b", "h"});
}

int ModeBasis::find(std::string_view label) const {
  for (std::size_t i = 0; i < labels_->size(); ++i) {
    if ((*labels_)[i] == label) return static_cast<int>(i);
  }
  return -1;
}

int ModeBasis::index_of(std::string_view label) const {
  const int i = find(label);
  if (i < 0) {
    throw BasisMismatchError("mode label '" + std::string(label) + "' is not in the basis");
  }
  return i;
}

bool operator==(const ModeBasis& x, const ModeBasis& y) {
  return x.labels_ == y.labels_ || *x.labels_ == *y.labels_;
}

StateVector::StateVector(ModeBasis basis, Vector amplitudes)
    : basis_(std::move(basis)), amps_(std::move(amplitudes)) {
  if (amps_.size() != basis_.dimension()) {
    throw BasisMismatchError("amplitude vector size does not match basis dimension");
  }
}

StateVector StateVector::zero(const ModeBasis& basis) {
  return {basis, Vector::Zero(basis.dimension())};
}

StateVector StateVector::basis_state(const ModeBasis& basis, std::string_view label) {
  Vector v = Vector::Zero(basis.dimension());
  v(basis.index_of(label)) = Complex(1.0, 0.0);
  return {basis, std::move(v)};
}

bool StateVector::is_normalized(double tol) const {
  return std::abs(squared_norm() - 1.0) <= tol;
}

StateVector StateVector::normalized() const {
  const double n2 = squared_norm();
  if (n2 < std::numeric_limits<double>::min()) {
    throw DegenerateInputError("cannot normalize a zero state vector");
  }
  return {basis_, amps_ / std::sqrt(n2)};
}

StateVector operator+(const StateVector& u, const StateVector& v) {
  require_same_basis(u.basis_, v.basis_, "state addition");
  return {u.basis_, u.amps_ + v.amps_};
}

StateVector operator-(const StateVector& u, const StateVector& v) {
  require_same_basis(u.basis_, v.basis_, "state subtraction");
  return {u.basis_, u.amps_ - v.amps_};
}

StateVector operator*(Complex c, const StateVector& v) { return {v.basis_, c * v.amps_}; }

LinearOperator::LinearOperator(ModeBasis basis, Matrix matrix)
    : basis_(std::move(basis)), mat_(std::move(matrix)) {
  if (mat_.rows() != basis_.dimension() || mat_.cols() != basis_.dimension()) {
    throw BasisMismatchError("operator matrix shape does not match basis dimension");
  }
}

LinearOperator LinearOperator::identity(const ModeBasis& basis) {
  return {basis, Matrix::Identity(basis.dimension(), basis.dimension())};
}

LinearOperator LinearOperator::zero(const ModeBasis& basis) {
  return {basis, Matrix::Zero(basis.dimension(), basis.dimension())};
}

bool LinearOperator::is_hermitian(double tol) const {
  return (mat_ - mat_.adjoint()).norm() <= tol;
}

bool LinearOperator::is_idempotent(double tol) const {
  return (mat_ * mat_ - mat_).norm() <= tol;
}

StateVector LinearOperator::apply(const StateVector& v) const {
  require_same_basis(basis_, v.basis(), "operator application");
  return {basis_, mat_ * v.amplitudes()};
}

LinearOperator operator+(const LinearOperator& x, const LinearOperator& y) {
  require_same_basis(x.basis_, y.basis_, "operator addition");
  return {x.basis_, x.mat_ + y.mat_};
}

LinearOperator operator-(const LinearOperator& x, const LinearOperator& y) {
  require_same_basis(x.basis_, y.basis_, "operator subtraction");
  return {x.basis_, x.mat_ - y.mat_};
}

LinearOperator operator*(const LinearOperator& x, const LinearOperator& y) {
  require_same_basis(x.basis_, y.basis_, "operator composition");
  return {x.basis_, x.mat_ * y.mat_};
}

LinearOperator operator*(Complex c, const LinearOperator& x) { return {x.basis_, c * x.mat_}; }

Complex inner_product(const StateVector& u, const StateVector& v) {
  require_same_basis(u.basis(), v.basis(), "inner product");
  return u.amplitudes().dot(v.amplitudes());
}

LinearOperator ray_projector(const StateVector& v, bool normalize) {
  const double n2 = v.squared_norm();
  if (n2 < std::numeric_limits<double>::min()) {
    throw DegenerateInputError("ray projector of a zero vector is undefined");
  }
  Matrix m = v.amplitudes() * v.amplitudes().adjoint();
  if (normalize) m /= n2;
  return {v.basis(), std::move(m)};
}

double expectation(const LinearOperator& op, const StateVector& s, double tol) {
  require_same_basis(op.basis(), s.basis(), "expectation value");
  if (!op.is_hermitian(tol)) {
    throw ContractViolationError("expectation value requires a Hermitian operator");
  }
  const Complex value = s.amplitudes().dot(op.matrix() * s.amplitudes());
  if (std::abs(value.imag()) > tol) {
    throw ContractViolationError("expectation value has a non-real residue beyond tolerance");
  }
  return value.real();
}

double completeness_deviation(std::span<const LinearOperator> projectors) {
  if (projectors.empty()) {
    throw ConfigurationError("completeness deviation of an empty projector set");
  }
  const ModeBasis& basis = projectors.front().basis();
  Matrix sum = Matrix::Zero(basis.dimension(), basis.dimension());
  for (const auto& p : projectors) {
    require_same_basis(basis, p.basis(), "completeness deviation");
    sum += p.matrix();
  }
  // The identity is compared on the beam span only; a vacuum bookkeeping
  // slot carries no projector weight.
  std::vector<int> span;
  for (int i = 0; i < basis.dimension(); ++i) {
    if (basis.label(i) != kVacuumLabel) span.push_back(i);
  }
  double acc = 0.0;
  for (const int i : span) {
    for (const int j : span) {
      const Complex d = sum(i, j) - (i == j ? Complex(1.0) : Complex(0.0));
      acc += std::norm(d);
    }
  }
  return std::sqrt(acc);
}

bool equal_up_to_global_phase(const StateVector& u, const StateVector& v, double tol) {
  if (u.basis() != v.basis()) return false;
  const double nu = u.norm();
  const double nv = v.norm();
  if (std::abs(nu - nv) > tol) return false;
  if (nu <= tol && nv <= tol) return true;
  // Collinear with a unit-modulus factor iff |<u|v>| saturates Cauchy-Schwarz.
  return std::abs(std::abs(inner_product(u, v)) - nu * nv) <= tol;
}

}  // namespace tribeam::hilbert
