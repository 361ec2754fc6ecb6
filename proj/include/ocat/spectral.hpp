#pragma once

// Hard-wall single-particle spectra, box-quantization phase shifts and the
// static-impurity energy surface E(R).

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <vector>

#include "ocat/grid_potential.hpp"

namespace ocat {

// Ordered eigenpairs of -u'' + U u = E u with u(0) = u(L) = 0 on a Grid.
// Column j of `orbitals` is the (j+1)-th eigenvector sampled on the interior
// points, normalized so that h * sum_k phi(x_k)^2 = 1 and with its first
// non-negligible component positive.
struct Spectrum {
  Grid grid;
  std::optional<PotentialSpec> potential;  // empty = free system
  std::vector<double> energies;            // strictly ascending
  Eigen::MatrixXd orbitals;                // n_points x size()
  double orthonormality_error = 0.0;       // max |<phi_i, phi_j>_h - delta_ij|

  int size() const noexcept { return static_cast<int>(energies.size()); }
};

inline constexpr double kOrthonormalityTolerance = 1e-10;

// Solves for the `n_eigenpairs` lowest eigenpairs of the three-point
// finite-difference Hamiltonian. Throws ConfigError for n_eigenpairs outside
// [1, n_points] or an inadmissible potential, NumericalError when the
// eigensolver fails or the result violates the Spectrum invariants.
// Without a potential the discrete sine modes are used in closed form.
Spectrum solve_spectrum(const Grid& grid, const std::optional<PotentialSpec>& potential,
                        int n_eigenpairs);

// Lowest eigenvalues only (no eigenvectors).
std::vector<double> lowest_eigenvalues(const Grid& grid,
                                       const std::optional<PotentialSpec>& potential, int count);

// Exact eigenvalues of the free finite-difference operator,
// E_n = (4/h^2) sin^2(n pi h / (2L)).
double discrete_free_energy(const Grid& grid, int n);

// Inverse of the free discrete dispersion: the momentum k with
// (4/h^2) sin^2(k h / 2) = E. Requires 0 <= E <= 4/h^2.
double discrete_momentum(double energy, double spacing);

// ---------------------------------------------------------------------------
// Grid adequacy: h <= min(r0, lambda_F) / 20 with lambda_F = 2 pi / k_F and
// k_F = pi N / L.

inline constexpr double kMinPointsPerScale = 20.0;
inline constexpr double kDefaultPointsPerScale = 40.0;

struct GridAdequacy {
  double spacing = 0.0;
  double fermi_momentum = 0.0;
  double fermi_wavelength = 0.0;
  double range = 0.0;  // 0 when no potential is involved
  double max_spacing = 0.0;
  bool adequate = false;
};

GridAdequacy grid_adequacy(const Grid& grid, const std::optional<PotentialSpec>& potential,
                           int n_fermions);
// Throws ConfigError("n_points", ...) when the grid is too coarse.
GridAdequacy require_adequate_grid(const Grid& grid,
                                   const std::optional<PotentialSpec>& potential, int n_fermions);

// Largest spacing satisfying `points_per_scale` points per min(r0, lambda_F)
// for a system of `density` particles per unit length.
double resolution_spacing(double range, double density, double points_per_scale);
// Grid over [0, length] whose spacing does not exceed `max_spacing`.
Grid grid_for_spacing(double length, double max_spacing, Geometry geometry);

// ---------------------------------------------------------------------------

struct PhaseShiftTable {
  std::vector<int> level_index;  // 1-based box level n of each scattering entry
  std::vector<double> momenta;   // k'_n of the interacting levels
  std::vector<double> deltas;    // continuous branch, Levinson offset included
  int bound_states = 0;          // negative-energy levels skipped
  int levinson_offset = 0;       // multiples of pi added to the reduced branch
  double lowest_reduced = 0.0;   // delta at the lowest momentum in (-pi/2, pi/2]
  int fermi_index = 0;           // N, highest occupied level
  double delta_F = 0.0;          // delta at level N
};

// Box quantization k'_n L + delta(k'_n) = n pi on a radial s-wave grid.
// `fermi_index` defaults to the number of interacting levels.
PhaseShiftTable extract_phase_shifts(const Spectrum& free, const Spectrum& interacting,
                                     std::optional<int> fermi_index = std::nullopt);

// Sum of the N lowest one-body energies with the impurity centered at each R
// on a linear box.
std::vector<double> bo_energy(const Grid& grid, PotentialShape shape, double strength,
                              double range, std::span<const double> centers, int n_fermions);

}  // namespace ocat
