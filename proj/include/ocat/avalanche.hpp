#pragma once

// Townsend avalanche as a pure birth (Yule) process across a gap: each
// electron drifts an exponential free path of mean 1/alpha, ionizes if it is
// still inside the gap, and otherwise reaches the anode.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ocat {

struct AvalancheParams {
  double alpha = 1.0;    // ionizations per unit length
  double gap = 3.0;      // cathode-anode distance d
  int n_initial = 1;     // seed electrons at the cathode
  std::int64_t trials = 100000;
  std::uint64_t seed = 1;
};

// alpha * d above this is refused; the mean gain would be e^50.
inline constexpr double kMaxGainExponent = 50.0;

void validate(const AvalancheParams& p);

struct HistogramBin {
  std::int64_t lower = 0;  // first arrival count in the bin
  std::int64_t frequency = 0;
};

struct AvalancheStats {
  std::int64_t trials = 0;
  double mean_gain = 0.0;
  double variance_gain = 0.0;  // sample variance (n - 1)
  int bin_width = 1;
  std::vector<HistogramBin> histogram;  // non-empty bins, ascending
  std::int64_t threshold = 1;
  double trigger_fraction = 0.0;  // fraction of trials with arrivals >= threshold
  std::optional<double> analytic_mean;  // n_initial * exp(alpha d)
};

// Arrival count of every trial; trial t draws from the substream (seed, t)
// so the result does not depend on `threads`.
std::vector<std::int64_t> simulate_trials(const AvalancheParams& p, unsigned threads = 1);

AvalancheStats simulate_avalanche(const AvalancheParams& p, std::int64_t threshold = 1,
                                  int bin_width = 1, unsigned threads = 1);

double trigger_probability(const AvalancheParams& p, std::int64_t threshold,
                           unsigned threads = 1);

// Exact mean and sample variance (two passes), histogram and trigger fraction.
AvalancheStats gain_statistics(std::span<const std::int64_t> counts, int bin_width = 1,
                               std::int64_t threshold = 1);

// Single-seed gain law P(n) = (1/m)(1 - 1/m)^(n-1), m = e^(alpha d).
double furry_probability(double mean_gain, std::int64_t n);
// P(arrivals >= threshold) = (1 - 1/m)^(threshold - 1).
double furry_tail(double mean_gain, std::int64_t threshold);

}  // namespace ocat
