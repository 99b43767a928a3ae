#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tribeam/hilbert.hpp"

namespace tribeam::measurement {

/// The movable detector ahead of the interference region: it resolves the
/// legs into regions l and m, and together with Bob's region p measures in a
/// complete basis.
struct CompleteDA1 {
  bool operator==(const CompleteDA1&) const = default;
};

/// The detector covering the interference region: legs a and b are
/// registered indistinguishably through the coherent ray projector of
/// relative phase phi. Together with region p the basis is incomplete, so
/// outcome weights need renormalization.
struct CoherentIncompleteDA2 {
  double phi = 0.0;
  bool operator==(const CoherentIncompleteDA2&) const = default;
};

/// Control model that registers the legs indistinguishably through the sum
/// projector (no cross terms). Complete; no renormalization arises.
struct StandardSumControl {
  bool operator==(const StandardSumControl&) const = default;
};

/// Young double-slit control: the two legs interfere onto a screen sampled
/// at n_points fringe phases spread uniformly over one period.
struct DoubleSlitScreen {
  int n_points = 64;
  bool operator==(const DoubleSlitScreen&) const = default;
};

using MeasurementModel =
    std::variant<CompleteDA1, CoherentIncompleteDA2, StandardSumControl, DoubleSlitScreen>;

std::string_view model_name(const MeasurementModel& model);

/// Outcome labels with unnormalized weights. The renormalization factor is
/// derived as the weight sum, so it is 1 exactly when the model's weight
/// operators resolve the identity and differs from 1 only for incomplete
/// bases.
class OutcomeDistribution {
 public:
  OutcomeDistribution(std::vector<std::string> labels, std::vector<double> weights);

  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<double>& weights() const { return weights_; }
  double renorm_beta() const { return renorm_beta_; }

  double weight(std::string_view label) const;
  double probability(std::string_view label) const;
  std::vector<double> probabilities() const;
  std::size_t size() const { return labels_.size(); }

 private:
  std::vector<std::string> labels_;
  std::vector<double> weights_;
  double renorm_beta_;
};

/// Projector onto the beam behind detector region `region` (l, m or p).
hilbert::LinearOperator region_projector(const hilbert::ModeBasis& basis,
                                         std::string_view region);

/// The coherent (trace-2) ray weight operator of the interference region:
/// (e^{i phi}|a> + |b>)(e^{-i phi}<a| + <b|).
hilbert::LinearOperator coherent_projector(const hilbert::ModeBasis& basis, double phi);

/// The model's weight operators paired with their outcome labels, in report
/// order.
std::vector<std::pair<std::string, hilbert::LinearOperator>> weight_operators(
    const MeasurementModel& model, const hilbert::ModeBasis& basis);

/// Completeness deviation of the model's weight operators; zero for DA1,
/// the sum control and the screen, sqrt(2) for the coherent model.
double model_completeness_deviation(const MeasurementModel& model,
                                    const hilbert::ModeBasis& basis);

/// Detection statistics of `state` under `model`. The state must be
/// normalized (ContractViolationError otherwise); a state with no weight on
/// any outcome has no renormalized distribution (NoDetectionError).
OutcomeDistribution outcome_distribution(const hilbert::StateVector& state,
                                         const MeasurementModel& model,
                                         double tol = hilbert::kDefaultTol);

/// Bob's count rate at region p for input rate `input_rate`.
double bob_rate(const hilbert::StateVector& state, const MeasurementModel& model,
                double input_rate);

/// Fringe pattern of the double-slit control.
struct ScreenPattern {
  std::vector<double> deltas;       // fringe phase per screen point
  std::vector<double> intensities;  // per-point weight, summing to the integrated weight
  double integrated_weight;
};

/// Samples the fringe phase uniformly over one full period: delta_j = 2 pi
/// j / n. On such grids the cross terms cancel exactly and the integrated
/// weight equals the sum-projector weight.
ScreenPattern double_slit_screen(const hilbert::StateVector& state, int n_points);

/// || sum_j P(delta_j)/n - (P_l + P_m) ||_F on the beam basis.
double screen_completeness_deviation(int n_points);

/// The counterfactual bookkeeping behind the conservation argument: if
/// Bob's weight were pinned at its unrenormalized value while Alice keeps
/// her coherent region-k weight, the two outputs together may exceed the
/// unit input.
struct CausalityAudit {
  double phi;
  double alice_weight;  // <P_k(phi)>, unrenormalized
  double bob_weight;    // <P_p>, pinned
  double total;         // their sum, in units of the input
  double excess;        // total - 1
  bool violates_conservation;
};

CausalityAudit causality_audit(const hilbert::StateVector& state, double phi,
                               double tol = hilbert::kDefaultTol);

}  // namespace tribeam::measurement
