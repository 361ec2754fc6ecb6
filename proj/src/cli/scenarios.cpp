#include "ocat/scenarios.hpp"

#include <algorithm>

namespace ocat {

namespace {

std::vector<Scenario> build() {
  std::vector<Scenario> s = {
      {"anderson-default",
       "ground-state overlap decay for a square well (U0=-5, r0=1) at unit density, N=50..800",
       R"(format_version = 1
rng_seed = 1

[overlap-scan]
geometry = radial_swave
shape = square_well
strength = -5
range = 1
density = 1
points_per_scale = 40
n_values = 50, 100, 200, 400, 800
)"},
      {"silicon-site",
       "overlaps between ground states with the impurity on two sites and the free gas",
       R"(format_version = 1
rng_seed = 1

[site-overlap]
shape = square_well
strength = -5
range = 1
site_placement = fractional
site_a = 0.25
site_b = 0.5
density = 1
points_per_scale = 40
n_values = 50, 100, 200, 400
)"},
      {"geiger-gain",
       "single-electron Townsend avalanche, alpha*d = 3, 1e5 trials, trigger at 20 electrons",
       R"(format_version = 1
rng_seed = 20240607

[avalanche]
alpha = 1
gap = 3
n_initial = 1
trials = 100000
threshold = 20
bin_width = 1
)"},
      {"bubble-seed",
       "contact-angle sweep of seeded nucleation with dG*/kT = 50",
       R"(format_version = 1
rng_seed = 1

[kinetics]
study = nucleation
sigma = 1
dg = 1
kT = 0.33510321638291124
theta_points = 181
)"},
      {"lifetime-demo",
       "WKB lifetime shortening of a parabolic barrier as the deposit lowers its height",
       R"(format_version = 1
rng_seed = 1

[kinetics]
study = wkb
barrier_shape = parabolic
height = 100
width = 5
domain = 20
energy = 0
attempt_frequency = 1
segments = 400
reductions = 0, 0.05, 0.1, 0.2, 0.36, 0.5
)"},
  };
  std::sort(s.begin(), s.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return s;
}

}  // namespace

const std::vector<Scenario>& list_scenarios() {
  static const std::vector<Scenario> registry = build();
  return registry;
}

std::optional<Scenario> find_scenario(std::string_view name) {
  for (const auto& s : list_scenarios())
    if (s.name == name) return s;
  return std::nullopt;
}

}  // namespace ocat
