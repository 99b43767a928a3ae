#include "tribeam/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

namespace tribeam::measurement {

using hilbert::Complex;
using hilbert::LinearOperator;
using hilbert::Matrix;
using hilbert::ModeBasis;
using hilbert::StateVector;
using hilbert::Vector;

std::string_view model_name(const MeasurementModel& model) {
  return std::visit(
      [](const auto& m) -> std::string_view {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, CompleteDA1>) return "complete-da1";
        if constexpr (std::is_same_v<T, CoherentIncompleteDA2>) return "coherent-incomplete-da2";
        if constexpr (std::is_same_v<T, StandardSumControl>) return "standard-sum-control";
        if constexpr (std::is_same_v<T, DoubleSlitScreen>) return "double-slit-screen";
      },
      model);
}

OutcomeDistribution::OutcomeDistribution(std::vector<std::string> labels,
                                         std::vector<double> weights)
    : labels_(std::move(labels)), weights_(std::move(weights)) {
  if (labels_.size() != weights_.size() || labels_.empty()) {
    throw ContractViolationError("outcome labels and weights must pair up");
  }
  double beta = 0.0;
  for (auto& w : weights_) {
    if (w < -hilbert::kDefaultTol || !std::isfinite(w)) {
      throw ContractViolationError("outcome weights must be nonnegative");
    }
    w = std::max(w, 0.0);  // clip the roundoff shadow below zero
    beta += w;
  }
  if (beta <= hilbert::kDefaultTol) {
    throw NoDetectionError("state has no weight on any outcome of this model");
  }
  renorm_beta_ = beta;
}

double OutcomeDistribution::weight(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return weights_[i];
  }
  throw ContractViolationError("unknown outcome label '" + std::string(label) + "'");
}

double OutcomeDistribution::probability(std::string_view label) const {
  return weight(label) / renorm_beta_;
}

std::vector<double> OutcomeDistribution::probabilities() const {
  std::vector<double> probs(weights_.size());
  for (std::size_t i = 0; i < weights_.size(); ++i) probs[i] = weights_[i] / renorm_beta_;
  return probs;
}

LinearOperator region_projector(const ModeBasis& basis, std::string_view region) {
  std::string_view mode;
  if (region == "l") {
    mode = "a";
  } else if (region == "m") {
    mode = "b";
  } else if (region == "p") {
    mode = "h";
  } else {
    throw ConfigurationError("unknown detector region '" + std::string(region) + "'");
  }
  return ray_projector(StateVector::basis_state(basis, mode));
}

LinearOperator coherent_projector(const ModeBasis& basis, double phi) {
  Vector ray = Vector::Zero(basis.dimension());
  ray(basis.index_of("a")) = std::polar(1.0, phi);
  ray(basis.index_of("b")) = Complex(1.0);
  return ray_projector(StateVector(basis, std::move(ray)));
}

namespace {

LinearOperator screen_quadrature_operator(const ModeBasis& basis, int n_points) {
  if (n_points < 2) {
    throw ConfigurationError("double-slit screen needs at least 2 sample points");
  }
  Matrix sum = Matrix::Zero(basis.dimension(), basis.dimension());
  for (int j = 0; j < n_points; ++j) {
    const double delta = 2.0 * std::numbers::pi * j / n_points;
    sum += coherent_projector(basis, delta).matrix();
  }
  return {basis, sum / static_cast<double>(n_points)};
}

void require_normalized(const StateVector& state, double tol) {
  if (!state.is_normalized(tol)) {
    throw ContractViolationError("measurement input state must be normalized");
  }
}

}  // namespace

std::vector<std::pair<std::string, LinearOperator>> weight_operators(
    const MeasurementModel& model, const ModeBasis& basis) {
  using Named = std::pair<std::string, LinearOperator>;
  return std::visit(
      [&](const auto& m) -> std::vector<Named> {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, CompleteDA1>) {
          return {{"l", region_projector(basis, "l")},
                  {"m", region_projector(basis, "m")},
                  {"p", region_projector(basis, "p")}};
        } else if constexpr (std::is_same_v<T, CoherentIncompleteDA2>) {
          if (!std::isfinite(m.phi)) throw ConfigurationError("phase phi must be finite");
          return {{"k", coherent_projector(basis, m.phi)}, {"p", region_projector(basis, "p")}};
        } else if constexpr (std::is_same_v<T, StandardSumControl>) {
          return {{"k", region_projector(basis, "l") + region_projector(basis, "m")},
                  {"p", region_projector(basis, "p")}};
        } else {
          return {{"screen", screen_quadrature_operator(basis, m.n_points)},
                  {"p", region_projector(basis, "p")}};
        }
      },
      model);
}

double model_completeness_deviation(const MeasurementModel& model, const ModeBasis& basis) {
  std::vector<LinearOperator> ops;
  for (auto& [label, op] : weight_operators(model, basis)) ops.push_back(std::move(op));
  return completeness_deviation(ops);
}

OutcomeDistribution outcome_distribution(const StateVector& state, const MeasurementModel& model,
                                         double tol) {
  require_normalized(state, tol);
  std::vector<std::string> labels;
  std::vector<double> weights;
  for (const auto& [label, op] : weight_operators(model, state.basis())) {
    labels.push_back(label);
    weights.push_back(expectation(op, state, tol));
  }
  return {std::move(labels), std::move(weights)};
}

double bob_rate(const StateVector& state, const MeasurementModel& model, double input_rate) {
  if (!(input_rate > 0.0) || !std::isfinite(input_rate)) {
    throw ContractViolationError("input count rate must be positive");
  }
  return input_rate * outcome_distribution(state, model).probability("p");
}

ScreenPattern double_slit_screen(const StateVector& state, int n_points) {
  if (n_points < 2) {
    throw ConfigurationError("double-slit screen needs at least 2 sample points");
  }
  ScreenPattern pattern;
  pattern.deltas.reserve(static_cast<std::size_t>(n_points));
  pattern.intensities.reserve(static_cast<std::size_t>(n_points));
  double total = 0.0;
  for (int j = 0; j < n_points; ++j) {
    const double delta = 2.0 * std::numbers::pi * j / n_points;
    const double intensity =
        expectation(coherent_projector(state.basis(), delta), state) / n_points;
    pattern.deltas.push_back(delta);
    pattern.intensities.push_back(intensity);
    total += intensity;
  }
  pattern.integrated_weight = total;
  return pattern;
}

double screen_completeness_deviation(int n_points) {
  const auto basis = ModeBasis::beams();
  const auto quadrature = screen_quadrature_operator(basis, n_points);
  const auto sum_projector = region_projector(basis, "l") + region_projector(basis, "m");
  return (quadrature - sum_projector).frobenius_norm();
}

CausalityAudit causality_audit(const StateVector& state, double phi, double tol) {
  require_normalized(state, tol);
  const auto& basis = state.basis();
  const double alice = expectation(coherent_projector(basis, phi), state, tol);
  const double bob = expectation(region_projector(basis, "p"), state, tol);
  const double total = alice + bob;
  const double excess = total - 1.0;
  return {phi, alice, bob, total, excess, excess > tol};
}

}  // namespace tribeam::measurement
