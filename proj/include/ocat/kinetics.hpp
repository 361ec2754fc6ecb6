#pragma once

// Metastability and particle-triggered decay: WKB escape rates through a
// single barrier, and classical nucleation with contact-angle seeding.

#include <vector>

namespace ocat {

// Piecewise-linear V(x) through (x[i], v[i]); x is non-decreasing, a repeated
// abscissa encodes a vertical step. The metastable state sits at `energy`.
struct BarrierProfile {
  std::vector<double> x;
  std::vector<double> v;
  double energy = 0.0;
  double attempt_frequency = 1.0;

  double value_at(double at) const;  // right-continuous at steps
};

struct BarrierInterval {
  double a = 0.0;  // classical turning points, V > E on (a, b)
  double b = 0.0;
};

// Validates the profile and locates the single region with V > E. Throws
// ConfigError for malformed profiles, NumericalError("not metastable") when V
// never exceeds E, UnsupportedError for more than one barrier.
BarrierInterval barrier_interval(const BarrierProfile& profile);

// 2 * integral_a^b sqrt(V - E) dx (hbar = 2m = 1).
double wkb_exponent(const BarrierProfile& profile);
// nu * exp(-wkb_exponent); lifetime is its inverse.
double wkb_rate(const BarrierProfile& profile);

struct RateRatio {
  double log_ratio = 0.0;  // natural log

  double log10_ratio() const;
  double ratio() const;  // may overflow to inf for huge accelerations
};

// rate(perturbed) / rate(unperturbed), i.e. the lifetime shortening factor.
RateRatio lifetime_ratio(const BarrierProfile& unperturbed, const BarrierProfile& perturbed);

// Rectangle of height `height` over [start, start + width] inside [0, domain].
BarrierProfile rectangular_barrier(double height, double width, double start, double domain,
                                   double energy = 0.0, double attempt_frequency = 1.0);
// V(x) = height * (1 - ((x - c)/(width/2))^2) on the barrier, zero outside,
// sampled with `segments` linear pieces across the barrier.
BarrierProfile parabolic_barrier(double height, double width, double center, double domain,
                                 int segments, double energy = 0.0,
                                 double attempt_frequency = 1.0);

// ---------------------------------------------------------------------------

struct NucleationParams {
  double surface_tension = 1.0;  // sigma, energy / area
  double bulk_drive = 1.0;       // dg, free-energy gain per volume of the stable phase
  double contact_angle = 0.0;    // theta in [0, pi]
  double temperature = 1.0;      // kT
};

void validate(const NucleationParams& p);

// Homogeneous barrier 16 pi sigma^3 / (3 dg^2).
double homogeneous_barrier(const NucleationParams& p);

// f(theta) = (2 + cos theta)(1 - cos theta)^2 / 4.
double contact_angle_factor(double theta);
// Same factor evaluated from cos(theta) directly, c in [-1, 1].
double contact_angle_factor_from_cos(double cos_theta);

// exp[(1 - f(theta)) dG* / kT]: seeded over unseeded nucleation rate.
RateRatio seeded_rate_ratio(const NucleationParams& p);

// Critical bubble radius r* = 2 sigma / dg and the minimum localized deposit
// E_min = 4 pi r*^2 sigma + (4 pi / 3) r*^3 dg (surface plus bulk work).
struct CriticalNucleus {
  double radius = 0.0;
  double min_deposit = 0.0;
};

CriticalNucleus critical_radius_and_min_deposit(const NucleationParams& p);

}  // namespace ocat
