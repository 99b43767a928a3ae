#include "tribeam/montecarlo.hpp"

#include <cmath>

namespace tribeam::montecarlo {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline std::array<std::uint32_t, 4> philox_round(const std::array<std::uint32_t, 4>& ctr,
                                                 const std::array<std::uint32_t, 2>& key) {
  const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
  const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
  return {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
          static_cast<std::uint32_t>(p1),
          static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
          static_cast<std::uint32_t>(p0)};
}

inline std::uint32_t lo32(std::uint64_t x) { return static_cast<std::uint32_t>(x); }
inline std::uint32_t hi32(std::uint64_t x) { return static_cast<std::uint32_t>(x >> 32); }

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    counter = philox_round(counter, key);
  }
  return counter;
}

double uniform_double(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  const auto block =
      philox4x32({lo32(index), hi32(index), lo32(stream), hi32(stream)}, {lo32(seed), hi32(seed)});
  const std::uint64_t mantissa =
      (std::uint64_t{block[1] & 0x1FFFFFu} << 32) | std::uint64_t{block[0]};
  return static_cast<double>(mantissa) * 0x1.0p-53;
}

std::uint64_t CountSummary::count(std::string_view label) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return counts[i];
  }
  throw ContractViolationError("unknown outcome label '" + std::string(label) + "'");
}

CountSummary sample_clicks(const measurement::OutcomeDistribution& dist, std::uint64_t n,
                           std::uint64_t seed, std::uint64_t stream) {
  if (n == 0) throw EmptyTrialError("sampling needs at least one trial");
  const auto probs = dist.probabilities();
  CountSummary summary;
  summary.labels = dist.labels();
  summary.counts.assign(probs.size(), 0);
  summary.n_trials = n;
  summary.seed = seed;
  summary.stream = stream;
  for (std::uint64_t i = 0; i < n; ++i) {
    const double u = uniform_double(seed, stream, i);
    double cumulative = 0.0;
    std::size_t choice = probs.size() - 1;  // the tail bucket absorbs roundoff
    for (std::size_t j = 0; j < probs.size(); ++j) {
      cumulative += probs[j];
      if (u < cumulative) {
        choice = j;
        break;
      }
    }
    ++summary.counts[choice];
  }
  return summary;
}

SignalDecision distinguish_bit(std::uint64_t bob_counts, std::uint64_t n) {
  if (n == 0) throw EmptyTrialError("bit decision needs at least one click");
  if (bob_counts > n) {
    throw ContractViolationError("bob_counts exceeds the number of trials");
  }
  const double threshold = 5.0 / 12.0;
  const double frequency = static_cast<double>(bob_counts) / static_cast<double>(n);
  const double c = static_cast<double>(bob_counts);
  const double nn = static_cast<double>(n);
  // log [ Binom(c; n, 1/2) / Binom(c; n, 1/3) ]; the binomial coefficients cancel.
  const double llr = c * std::log(1.5) + (nn - c) * std::log(0.75);
  const double bound = std::exp(-2.0 * nn * (1.0 / 12.0) * (1.0 / 12.0));
  return {frequency > threshold ? 0 : 1, llr, threshold, bound};
}

std::vector<SweepPoint> phase_sweep(const hilbert::StateVector& state,
                                    std::span<const double> phis, std::uint64_t n_per_point,
                                    std::uint64_t seed) {
  if (phis.empty()) throw ConfigurationError("phase sweep needs a nonempty grid");
  std::vector<SweepPoint> table;
  table.reserve(phis.size());
  for (std::size_t i = 0; i < phis.size(); ++i) {
    const auto dist =
        measurement::outcome_distribution(state, measurement::CoherentIncompleteDA2{phis[i]});
    const double analytic = dist.probability("p");
    const auto clicks = sample_clicks(dist, n_per_point, seed, i);
    const double empirical =
        static_cast<double>(clicks.count("p")) / static_cast<double>(n_per_point);
    table.push_back({phis[i], analytic, empirical});
  }
  return table;
}

}  // namespace tribeam::montecarlo
