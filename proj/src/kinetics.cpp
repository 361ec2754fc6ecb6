#include "ocat/kinetics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ocat/errors.hpp"

namespace ocat {

namespace {

using std::numbers::pi;

// Panels per linear piece; even, and fine enough for the smoothed integrand.
constexpr int kSimpsonPanels = 2048;

void validate(const BarrierProfile& p) {
  if (p.x.size() != p.v.size()) throw ConfigError("breakpoints", "x and V sizes differ");
  if (p.x.size() < 2) throw ConfigError("breakpoints", "need at least two breakpoints");
  for (std::size_t i = 0; i < p.x.size(); ++i) {
    if (!std::isfinite(p.x[i]) || !std::isfinite(p.v[i]))
      throw ConfigError("breakpoints", "non-finite breakpoint");
    if (i > 0 && p.x[i] < p.x[i - 1])
      throw ConfigError("breakpoints", "abscissae must be non-decreasing");
    if (i > 1 && p.x[i] == p.x[i - 2])
      throw ConfigError("breakpoints", "at most two breakpoints may share an abscissa");
  }
  if (!(p.x.back() > p.x.front())) throw ConfigError("breakpoints", "empty domain");
  if (!std::isfinite(p.energy)) throw ConfigError("energy", "must be finite");
  if (!(p.attempt_frequency > 0.0) || !std::isfinite(p.attempt_frequency))
    throw ConfigError("attempt_frequency", "must be positive");
}

struct Piece {
  double x0, x1, g0, g1;  // g = V - E at the ends of a non-degenerate segment
  double at(double x) const { return g0 + (g1 - g0) * (x - x0) / (x1 - x0); }
};

std::vector<Piece> pieces_of(const BarrierProfile& p) {
  std::vector<Piece> out;
  for (std::size_t i = 0; i + 1 < p.x.size(); ++i)
    if (p.x[i + 1] > p.x[i])
      out.push_back({p.x[i], p.x[i + 1], p.v[i] - p.energy, p.v[i + 1] - p.energy});
  return out;
}

// Root of a linear piece inside [lo, hi] where the sign of g changes,
// bisected until the bracket no longer shrinks in double precision.
double bisect(const Piece& s, double lo, double hi) {
  double glo = s.at(lo);
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double gm = s.at(mid);
    if ((gm > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  // the positive side is reported so the root sits on the barrier edge
  return glo > 0.0 ? lo : hi;
}

// Positive part of a linear piece as [lo, hi], or nothing.
bool positive_part(const Piece& s, double& lo, double& hi) {
  const bool p0 = s.g0 > 0.0, p1 = s.g1 > 0.0;
  if (!p0 && !p1) return false;
  lo = s.x0;
  hi = s.x1;
  if (p0 && !p1) hi = bisect(s, s.x0, s.x1);
  if (!p0 && p1) lo = bisect(s, s.x0, s.x1);
  return hi > lo;
}

}  // namespace

double BarrierProfile::value_at(double at) const {
  if (at <= x.front()) return v.front();
  if (at >= x.back()) return v.back();
  const auto it = std::upper_bound(x.begin(), x.end(), at);
  const std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
  if (x[i + 1] == x[i]) return v[i + 1];
  return v[i] + (v[i + 1] - v[i]) * (at - x[i]) / (x[i + 1] - x[i]);
}

BarrierInterval barrier_interval(const BarrierProfile& profile) {
  validate(profile);
  std::vector<BarrierInterval> regions;
  for (const auto& s : pieces_of(profile)) {
    double lo = 0.0, hi = 0.0;
    if (!positive_part(s, lo, hi)) continue;
    if (!regions.empty() && regions.back().b == lo && s.g0 > 0.0)
      regions.back().b = hi;
    else
      regions.push_back({lo, hi});
  }
  if (regions.empty())
    throw NumericalError("not metastable: V(x) never exceeds the state energy");
  if (regions.size() > 1)
    throw UnsupportedError("profile has " + std::to_string(regions.size()) +
                           " disjoint barriers; only single-barrier profiles are supported");
  const auto r = regions.front();
  if (!(r.a > profile.x.front() && r.b < profile.x.back()))
    throw ConfigError("breakpoints", "barrier must lie strictly inside the domain");
  return r;
}

double wkb_exponent(const BarrierProfile& profile) {
  const BarrierInterval bi = barrier_interval(profile);
  double total = 0.0;
  for (const auto& s : pieces_of(profile)) {
    const double lo = std::max(bi.a, s.x0);
    const double hi = std::min(bi.b, s.x1);
    if (!(hi > lo)) continue;
    // x = lo + (hi - lo) * u^2 (3 - 2u) flattens the sqrt behaviour at turning points
    const double span = hi - lo;
    const double du = 1.0 / kSimpsonPanels;
    auto f = [&](double u) {
      const double x = lo + span * u * u * (3.0 - 2.0 * u);
      const double g = s.at(x);
      return g > 0.0 ? std::sqrt(g) * span * 6.0 * u * (1.0 - u) : 0.0;
    };
    double sum = f(0.0) + f(1.0);
    for (int k = 1; k < kSimpsonPanels; ++k) sum += (k % 2 ? 4.0 : 2.0) * f(k * du);
    total += sum * du / 3.0;
  }
  return 2.0 * total;
}

double wkb_rate(const BarrierProfile& profile) {
  return profile.attempt_frequency * std::exp(-wkb_exponent(profile));
}

double RateRatio::log10_ratio() const { return log_ratio / std::numbers::ln10; }
double RateRatio::ratio() const { return std::exp(log_ratio); }

RateRatio lifetime_ratio(const BarrierProfile& unperturbed, const BarrierProfile& perturbed) {
  const double eu = wkb_exponent(unperturbed);
  const double ep = wkb_exponent(perturbed);
  double log_ratio = eu - ep;
  if (perturbed.attempt_frequency != unperturbed.attempt_frequency)
    log_ratio += std::log(perturbed.attempt_frequency / unperturbed.attempt_frequency);
  return {log_ratio};
}

BarrierProfile rectangular_barrier(double height, double width, double start, double domain,
                                   double energy, double attempt_frequency) {
  if (!(width > 0.0)) throw ConfigError("width", "must be positive");
  if (!(start > 0.0 && start + width < domain))
    throw ConfigError("width", "barrier must fit strictly inside the domain");
  return {{0.0, start, start, start + width, start + width, domain},
          {0.0, 0.0, height, height, 0.0, 0.0},
          energy,
          attempt_frequency};
}

BarrierProfile parabolic_barrier(double height, double width, double center, double domain,
                                 int segments, double energy, double attempt_frequency) {
  if (!(width > 0.0)) throw ConfigError("width", "must be positive");
  if (segments < 2) throw ConfigError("segments", "need at least two segments");
  const double a = center - 0.5 * width, b = center + 0.5 * width;
  if (!(a > 0.0 && b < domain))
    throw ConfigError("width", "barrier must fit strictly inside the domain");
  BarrierProfile p{{0.0}, {0.0}, energy, attempt_frequency};
  for (int i = 0; i <= segments; ++i) {
    const double x = a + width * i / segments;
    const double t = (x - center) / (0.5 * width);
    p.x.push_back(x);
    p.v.push_back(std::max(0.0, height * (1.0 - t * t)));
  }
  p.x.push_back(domain);
  p.v.push_back(0.0);
  return p;
}

// ---------------------------------------------------------------------------

void validate(const NucleationParams& p) {
  if (!(p.surface_tension > 0.0) || !std::isfinite(p.surface_tension))
    throw ConfigError("sigma", "surface tension must be positive");
  if (p.bulk_drive == 0.0) throw ConfigError("dg", "no thermodynamic drive (dg = 0)");
  if (!(p.bulk_drive > 0.0) || !std::isfinite(p.bulk_drive))
    throw ConfigError("dg", "bulk free-energy gain must be positive");
  if (!(p.contact_angle >= 0.0 && p.contact_angle <= pi))
    throw ConfigError("theta", "contact angle must lie in [0, pi]");
  if (!(p.temperature > 0.0) || !std::isfinite(p.temperature))
    throw ConfigError("kT", "temperature must be positive");
}

double homogeneous_barrier(const NucleationParams& p) {
  validate(p);
  const double s = p.surface_tension;
  return 16.0 * pi * s * s * s / (3.0 * p.bulk_drive * p.bulk_drive);
}

double contact_angle_factor_from_cos(double c) {
  if (!(c >= -1.0 && c <= 1.0)) throw ConfigError("theta", "cos(theta) outside [-1, 1]");
  return (2.0 + c) * (1.0 - c) * (1.0 - c) / 4.0;
}

double contact_angle_factor(double theta) {
  if (!(theta >= 0.0 && theta <= pi))
    throw ConfigError("theta", "contact angle must lie in [0, pi]");
  return contact_angle_factor_from_cos(std::cos(theta));
}

RateRatio seeded_rate_ratio(const NucleationParams& p) {
  const double barrier = homogeneous_barrier(p);
  const double f = contact_angle_factor(p.contact_angle);
  return {(1.0 - f) * barrier / p.temperature};
}

CriticalNucleus critical_radius_and_min_deposit(const NucleationParams& p) {
  validate(p);
  const double r = 2.0 * p.surface_tension / p.bulk_drive;
  const double e = 4.0 * pi * r * r * p.surface_tension + 4.0 * pi / 3.0 * r * r * r * p.bulk_drive;
  return {r, e};
}

}  // namespace ocat
