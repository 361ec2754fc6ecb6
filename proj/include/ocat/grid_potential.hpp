#pragma once

// Uniform 1D hard-wall grids and finite-range impurity potentials.
//
// Units: hbar = 1, 2m = 1, so a free particle has E = k^2 and every length,
// energy and momentum below is dimensionless.

#include <string_view>
#include <vector>

namespace ocat {

enum class Geometry {
  RadialSwave,  // s-wave channel on [0, L]; the impurity sits at the origin
  LinearBox,    // particle in a box on [0, L]; the impurity may sit anywhere
};

enum class PotentialShape { SquareWell, Gaussian };

std::string_view to_string(Geometry g);
std::string_view to_string(PotentialShape s);
Geometry parse_geometry(std::string_view name);
PotentialShape parse_shape(std::string_view name);

// Domain [0, L] with psi(0) = psi(L) = 0 and n interior points x_k = k*h,
// k = 1..n, h = L/(n+1).
class Grid {
 public:
  Grid(double length, int n_points, Geometry geometry);

  double length() const noexcept { return length_; }
  int n_points() const noexcept { return n_points_; }
  double spacing() const noexcept { return spacing_; }
  Geometry geometry() const noexcept { return geometry_; }

  // 1-based interior point index, k in [1, n_points].
  double point(int k) const noexcept { return k * spacing_; }
  std::vector<double> points() const;

  bool operator==(const Grid&) const = default;

 private:
  double length_;
  int n_points_;
  double spacing_;
  Geometry geometry_;
};

Grid make_grid(double length, int n_points, Geometry geometry);

// Gaussian tails are cut to zero beyond this many ranges from the center.
inline constexpr double kGaussianCutoff = 6.0;

struct PotentialSpec {
  PotentialShape shape = PotentialShape::SquareWell;
  double strength = 0.0;  // U0, negative = attractive
  double range = 1.0;     // r0
  double center = 0.0;    // x0

  // Pointwise U(x).
  double value_at(double x) const;
  // (1/h) * integral of U over [x - h/2, x + h/2], computed exactly.
  double cell_average(double x, double h) const;
  // Distance from the center beyond which U vanishes identically.
  double support_radius() const;

  bool operator==(const PotentialSpec&) const = default;
};

// Throws ConfigError when `spec` is not admissible on `grid`: range must lie
// in (0, L/4), a radial grid needs center 0, a linear box needs
// center in [r0, L - r0].
void validate_potential(const PotentialSpec& spec, const Grid& grid);

// Point samples U(x_k) on the interior points.
std::vector<double> eval_potential(const PotentialSpec& spec, const Grid& grid);

// Cell averages of U around the interior points; this is what enters the
// finite-difference Hamiltonian.
std::vector<double> cell_averaged_potential(const PotentialSpec& spec, const Grid& grid);

}  // namespace ocat
