#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tribeam/hilbert.hpp"
#include "tribeam/measurement.hpp"

namespace tribeam::montecarlo {

/// One block of the Philox4x32-10 counter-based generator (Salmon,
/// Moraes, Dror, Shaw 2011). Pure function of (counter, key); identical on
/// every platform, which is what makes seeded runs bitwise reproducible.
/// The generator choice is part of the tool's stable interface.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Uniform double in [0, 1) from (seed, stream, index): 53 mantissa bits of
/// the Philox block keyed by the seed, with the stream in the counter's
/// upper words and the draw index in its lower words.
double uniform_double(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// Click counts of one seeded sampling run. The counts sum to n_trials.
struct CountSummary {
  std::vector<std::string> labels;
  std::vector<std::uint64_t> counts;
  std::uint64_t n_trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  std::uint64_t count(std::string_view label) const;
};

/// n independent categorical draws from dist's probabilities. Identical
/// (seed, stream, n, dist) give identical counts on every platform.
/// Throws EmptyTrialError when n = 0.
CountSummary sample_clicks(const measurement::OutcomeDistribution& dist, std::uint64_t n,
                           std::uint64_t seed, std::uint64_t stream = 0);

/// Bob's one-bit readout. The threshold 5/12 is the midpoint of the two
/// hypothesized rates 1/2 (complete basis, bit 0) and 1/3 (coherent basis,
/// bit 1); the log-likelihood ratio compares Binomial(n, 1/2) against
/// Binomial(n, 1/3), and the error bound is the Hoeffding tail
/// exp(-2 n (1/12)^2) at the threshold-to-mean gap.
struct SignalDecision {
  int decided_bit;
  double log_likelihood_ratio;
  double threshold;
  double error_bound;
};

SignalDecision distinguish_bit(std::uint64_t bob_counts, std::uint64_t n);

struct SweepPoint {
  double phi;
  double analytic_rate;   // Bob's probability per click, 1/(2 + cos phi) for
                          // the two-50/50 circuit
  double empirical_rate;  // his sampled frequency at this grid point
};

/// Sweeps the coherent model's phase over `phis`, sampling n clicks per
/// point on stream index = grid position, so points may be computed in any
/// order or in parallel with identical results.
std::vector<SweepPoint> phase_sweep(const hilbert::StateVector& state,
                                    std::span<const double> phis, std::uint64_t n_per_point,
                                    std::uint64_t seed);

}  // namespace tribeam::montecarlo
