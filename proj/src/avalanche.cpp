#include "ocat/avalanche.hpp"

#include <cmath>
#include <map>
#include <string>

#include "ocat/errors.hpp"
#include "ocat/parallel.hpp"
#include "ocat/philox.hpp"

namespace ocat {

namespace {

constexpr std::size_t kTrialsPerTask = 4096;

std::int64_t run_trial(const AvalancheParams& p, std::uint64_t trial,
                       std::vector<double>& stack) {
  if (p.alpha == 0.0) return p.n_initial;
  TrialStream rng(p.seed, trial);
  stack.assign(static_cast<std::size_t>(p.n_initial), 0.0);
  std::int64_t arrived = 0;
  while (!stack.empty()) {
    const double x = stack.back();
    stack.pop_back();
    const double next = x - std::log(rng.uniform()) / p.alpha;
    if (next < p.gap) {
      stack.push_back(next);
      stack.push_back(next);
    } else {
      ++arrived;
    }
  }
  return arrived;
}

}  // namespace

void validate(const AvalancheParams& p) {
  if (!(p.alpha >= 0.0) || !std::isfinite(p.alpha))
    throw ConfigError("alpha", "Townsend coefficient must be non-negative");
  if (!(p.gap > 0.0) || !std::isfinite(p.gap)) throw ConfigError("gap", "must be positive");
  if (p.n_initial < 0) throw ConfigError("n_initial", "must be non-negative");
  if (p.trials < 1) throw ConfigError("trials", "need at least one trial");
  if (p.alpha * p.gap > kMaxGainExponent)
    throw ConfigError("alpha", "alpha*d = " + std::to_string(p.alpha * p.gap) +
                                   " exceeds 50; the expected gain overflows the model");
}

std::vector<std::int64_t> simulate_trials(const AvalancheParams& p, unsigned threads) {
  validate(p);
  const auto trials = static_cast<std::size_t>(p.trials);
  std::vector<std::int64_t> counts(trials);
  const std::size_t tasks = (trials + kTrialsPerTask - 1) / kTrialsPerTask;
  parallel_for(tasks, threads, [&](std::size_t task) {
    std::vector<double> stack;
    const std::size_t end = std::min(trials, (task + 1) * kTrialsPerTask);
    for (std::size_t t = task * kTrialsPerTask; t < end; ++t) counts[t] = run_trial(p, t, stack);
  });
  return counts;
}

AvalancheStats gain_statistics(std::span<const std::int64_t> counts, int bin_width,
                               std::int64_t threshold) {
  if (counts.empty()) throw ConfigError("counts", "no trials to summarize");
  if (bin_width < 1) throw ConfigError("bin_width", "must be at least 1");
  AvalancheStats s;
  s.trials = static_cast<std::int64_t>(counts.size());
  s.bin_width = bin_width;
  s.threshold = threshold;

  const double n = static_cast<double>(counts.size());
  double sum = 0.0;
  for (auto c : counts) sum += static_cast<double>(c);
  s.mean_gain = sum / n;
  double ss = 0.0;
  for (auto c : counts) {
    const double d = static_cast<double>(c) - s.mean_gain;
    ss += d * d;
  }
  s.variance_gain = counts.size() > 1 ? ss / (n - 1.0) : 0.0;

  std::map<std::int64_t, std::int64_t> bins;
  std::int64_t above = 0;
  for (auto c : counts) {
    ++bins[(c / bin_width) * bin_width];
    if (c >= threshold) ++above;
  }
  for (auto [lower, freq] : bins) s.histogram.push_back({lower, freq});
  s.trigger_fraction = static_cast<double>(above) / n;
  return s;
}

AvalancheStats simulate_avalanche(const AvalancheParams& p, std::int64_t threshold,
                                  int bin_width, unsigned threads) {
  if (threshold < 1) throw ConfigError("threshold", "must be at least 1");
  const auto counts = simulate_trials(p, threads);
  auto s = gain_statistics(counts, bin_width, threshold);
  s.analytic_mean = p.n_initial * std::exp(p.alpha * p.gap);
  return s;
}

double trigger_probability(const AvalancheParams& p, std::int64_t threshold, unsigned threads) {
  return simulate_avalanche(p, threshold, 1, threads).trigger_fraction;
}

double furry_probability(double mean_gain, std::int64_t n) {
  if (n < 1) return 0.0;
  const double q = 1.0 - 1.0 / mean_gain;
  return std::pow(q, static_cast<double>(n - 1)) / mean_gain;
}

double furry_tail(double mean_gain, std::int64_t threshold) {
  if (threshold <= 1) return 1.0;
  return std::pow(1.0 - 1.0 / mean_gain, static_cast<double>(threshold - 1));
}

}  // namespace ocat
