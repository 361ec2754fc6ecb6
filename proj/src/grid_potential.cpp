#include "ocat/grid_potential.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ocat/errors.hpp"

namespace ocat {

std::string_view to_string(Geometry g) {
  return g == Geometry::RadialSwave ? "radial_swave" : "linear_box";
}

std::string_view to_string(PotentialShape s) {
  return s == PotentialShape::SquareWell ? "square_well" : "gaussian";
}

Geometry parse_geometry(std::string_view name) {
  if (name == "radial_swave") return Geometry::RadialSwave;
  if (name == "linear_box") return Geometry::LinearBox;
  throw ConfigError("geometry", "unknown geometry '" + std::string(name) + "'");
}

PotentialShape parse_shape(std::string_view name) {
  if (name == "square_well") return PotentialShape::SquareWell;
  if (name == "gaussian") return PotentialShape::Gaussian;
  throw ConfigError("shape", "unknown potential shape '" + std::string(name) + "'");
}

Grid::Grid(double length, int n_points, Geometry geometry)
    : length_(length), n_points_(n_points), spacing_(0.0), geometry_(geometry) {
  if (!(length > 0.0) || !std::isfinite(length))
    throw ConfigError("length", "domain length must be positive and finite");
  if (n_points < 3) throw ConfigError("n_points", "need at least 3 interior points");
  spacing_ = length / (n_points + 1);
}

std::vector<double> Grid::points() const {
  std::vector<double> x(n_points_);
  for (int k = 1; k <= n_points_; ++k) x[k - 1] = point(k);
  return x;
}

Grid make_grid(double length, int n_points, Geometry geometry) {
  return Grid(length, n_points, geometry);
}

double PotentialSpec::support_radius() const {
  return shape == PotentialShape::SquareWell ? range : kGaussianCutoff * range;
}

double PotentialSpec::value_at(double x) const {
  const double d = x - center;
  switch (shape) {
    case PotentialShape::SquareWell:
      return std::abs(d) <= range ? strength : 0.0;
    case PotentialShape::Gaussian:
      if (std::abs(d) > kGaussianCutoff * range) return 0.0;
      return strength * std::exp(-d * d / (2.0 * range * range));
  }
  return 0.0;
}

double PotentialSpec::cell_average(double x, double h) const {
  if (strength == 0.0) return 0.0;
  const double r = support_radius();
  const double lo = std::clamp(x - 0.5 * h - center, -r, r);
  const double hi = std::clamp(x + 0.5 * h - center, -r, r);
  if (hi <= lo) return 0.0;
  switch (shape) {
    case PotentialShape::SquareWell:
      return strength * (hi - lo) / h;
    case PotentialShape::Gaussian: {
      const double s = std::sqrt(2.0) * range;
      const double integral =
          strength * range * std::sqrt(M_PI / 2.0) * (std::erf(hi / s) - std::erf(lo / s));
      return integral / h;
    }
  }
  return 0.0;
}

void validate_potential(const PotentialSpec& spec, const Grid& grid) {
  const double L = grid.length();
  if (!std::isfinite(spec.strength)) throw ConfigError("strength", "must be finite");
  if (!(spec.range > 0.0) || !(spec.range < L / 4.0))
    throw ConfigError("range", "finite range must satisfy 0 < r0 < L/4");
  if (grid.geometry() == Geometry::RadialSwave) {
    if (spec.center != 0.0)
      throw ConfigError("center", "radial s-wave geometry requires the potential at the origin");
  } else if (!(spec.center >= spec.range && spec.center <= L - spec.range)) {
    throw ConfigError("center", "center must lie in [r0, L - r0] for a linear box");
  }
}

std::vector<double> eval_potential(const PotentialSpec& spec, const Grid& grid) {
  validate_potential(spec, grid);
  std::vector<double> u(grid.n_points());
  for (int k = 1; k <= grid.n_points(); ++k) u[k - 1] = spec.value_at(grid.point(k));
  return u;
}

std::vector<double> cell_averaged_potential(const PotentialSpec& spec, const Grid& grid) {
  validate_potential(spec, grid);
  const double h = grid.spacing();
  std::vector<double> u(grid.n_points());
  for (int k = 1; k <= grid.n_points(); ++k) u[k - 1] = spec.cell_average(grid.point(k), h);
  return u;
}

}  // namespace ocat
