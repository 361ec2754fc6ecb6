#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "ocat/avalanche.hpp"
#include "ocat/errors.hpp"
#include "ocat/philox.hpp"

using namespace ocat;

TEST_CASE("philox4x32-10 known-answer vectors") {
  CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) ==
        PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                      {0xffffffff, 0xffffffff}) ==
        PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                      {0xa4093822, 0x299f31d0}) ==
        PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("trial streams are uniform on (0, 1) and independent of each other") {
  TrialStream a(42, 0), b(42, 1), a2(42, 0);
  double sum = 0.0;
  bool differ = false;
  for (int i = 0; i < 100000; ++i) {
    const double u = a.uniform();
    CHECK_UNARY(u > 0.0 && u < 1.0);
    CHECK(u == a2.uniform());
    if (u != b.uniform()) differ = true;
    sum += u;
  }
  CHECK(differ);
  CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("degenerate avalanches") {
  AvalancheParams p;
  p.alpha = 0.0;
  p.n_initial = 3;
  p.trials = 100;
  for (auto c : simulate_trials(p)) CHECK(c == 3);
  p.alpha = 1.0;
  p.n_initial = 0;
  for (auto c : simulate_trials(p)) CHECK(c == 0);

  p = AvalancheParams{};
  p.alpha = 20.0;
  CHECK_THROWS_AS(validate(p), ConfigError);
  p.alpha = -1.0;
  CHECK_THROWS_AS(validate(p), ConfigError);
  p = AvalancheParams{};
  p.trials = 0;
  CHECK_THROWS_AS(validate(p), ConfigError);
}

TEST_CASE("gain follows the geometric law") {
  AvalancheParams p;  // alpha d = 3, one seed electron
  p.seed = 20240607;
  const auto counts = simulate_trials(p);
  const AvalancheStats s = gain_statistics(counts);
  const double m = std::exp(3.0);
  CHECK(std::abs(s.mean_gain - m) <= 0.02 * m);
  CHECK(std::abs(s.variance_gain - m * (m - 1)) <= 0.05 * m * (m - 1));

  // chi-square, bins merged in the tail until the expected count reaches 5
  std::vector<std::int64_t> observed;
  std::vector<double> expected;
  const double n_trials = static_cast<double>(counts.size());
  std::vector<std::int64_t> by_n(2000, 0);
  for (auto c : counts) ++by_n[std::min<std::int64_t>(c, 1999)];
  std::int64_t n = 1;
  while (n_trials * furry_tail(m, n) >= 10.0) {
    observed.push_back(by_n[n]);
    expected.push_back(n_trials * furry_probability(m, n));
    ++n;
  }
  std::int64_t rest = 0;
  for (std::int64_t k = n; k < 2000; ++k) rest += by_n[k];
  observed.push_back(rest);
  expected.push_back(n_trials * furry_tail(m, n));
  double chi2 = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i)
    chi2 += std::pow(observed[i] - expected[i], 2) / expected[i];
  const boost::math::chi_squared dist(static_cast<double>(observed.size() - 1));
  const double p_value = 1.0 - boost::math::cdf(dist, chi2);
  INFO("chi2=" << chi2 << " dof=" << observed.size() - 1 << " p=" << p_value);
  CHECK(p_value > 0.01);
  CHECK(by_n[0] == 0);
}

TEST_CASE("trigger probability matches the geometric tail") {
  AvalancheParams p;
  p.trials = 50000;
  const double m = std::exp(3.0);
  for (std::int64_t threshold : {1, 5, 20, 60}) {
    const double q = furry_tail(m, threshold);
    const double se = std::sqrt(q * (1 - q) / p.trials);
    const double got = trigger_probability(p, threshold);
    if (threshold == 1) CHECK(got == 1.0);
    else CHECK(std::abs(got - q) <= 3.0 * se);
  }
  CHECK(furry_tail(m, 1) == 1.0);
  double sum = 0.0;
  for (int k = 1; k < 5000; ++k) sum += furry_probability(m, k);
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("several seed electrons add up") {
  AvalancheParams p;
  p.n_initial = 4;
  p.alpha = 0.5;
  p.gap = 2.0;
  p.trials = 40000;
  const AvalancheStats s = simulate_avalanche(p);
  REQUIRE(s.analytic_mean.has_value());
  CHECK(*s.analytic_mean == doctest::Approx(4.0 * std::exp(1.0)));
  const double m = std::exp(1.0);
  const double se = std::sqrt(4.0 * m * (m - 1) / p.trials);
  CHECK(std::abs(s.mean_gain - *s.analytic_mean) <= 4.0 * se);
  for (const auto& b : s.histogram) CHECK(b.lower >= 4);
}

TEST_CASE("results do not depend on the thread count") {
  AvalancheParams p;
  p.trials = 30000;
  p.seed = 99;
  const auto one = simulate_trials(p, 1);
  CHECK(simulate_trials(p, 2) == one);
  CHECK(simulate_trials(p, 7) == one);
  p.seed = 100;
  CHECK(simulate_trials(p, 1) != one);
}

TEST_CASE("mean gain rises with alpha d") {
  double previous = 0.0;
  for (double alpha : {0.5, 1.0, 1.5, 2.0}) {
    AvalancheParams p;
    p.alpha = alpha;
    p.trials = 20000;
    const double mean = simulate_avalanche(p).mean_gain;
    CHECK(mean > previous);
    previous = mean;
  }
}

TEST_CASE("gain statistics") {
  const std::vector<std::int64_t> c = {1, 2, 3, 4};
  const AvalancheStats s = gain_statistics(c, 2, 3);
  CHECK(s.mean_gain == 2.5);
  CHECK(s.variance_gain == doctest::Approx(5.0 / 3.0));
  CHECK(s.trigger_fraction == 0.5);
  REQUIRE(s.histogram.size() == 3);
  CHECK(s.histogram[0].lower == 0);
  CHECK(s.histogram[0].frequency == 1);
  CHECK(s.histogram[1].lower == 2);
  CHECK(s.histogram[1].frequency == 2);
  CHECK(s.histogram[2].lower == 4);
  CHECK(s.histogram[2].frequency == 1);

  const std::vector<std::int64_t> one = {7};
  const AvalancheStats single = gain_statistics(one);
  CHECK(single.mean_gain == 7.0);
  CHECK(single.variance_gain == 0.0);

  const std::vector<std::int64_t> none;
  CHECK_THROWS_AS(gain_statistics(none), ConfigError);

  // an independent geometric generator as the oracle for the moments
  std::mt19937_64 rng(5);
  const double m = std::exp(3.0);
  std::geometric_distribution<std::int64_t> geo(1.0 / m);
  std::vector<std::int64_t> draws(100000);
  for (auto& d : draws) d = geo(rng) + 1;
  const AvalancheStats g = gain_statistics(draws);
  CHECK(std::abs(g.mean_gain - m) <= 0.02 * m);
  CHECK(std::abs(g.variance_gain - m * (m - 1)) <= 0.05 * m * (m - 1));
}
