#pragma once

// Many-body overlaps between Slater determinants of free and interacting
// orbitals: ground-state overlaps and their decay with N, expansion
// coefficients over low-order free excitations, and overlaps between ground
// states with the impurity on different sites.

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ocat/grid_potential.hpp"
#include "ocat/spectral.hpp"

namespace ocat {

// M_ij = <phi_i, psi_j>_h for the N lowest orbitals of each spectrum.
Eigen::MatrixXd orbital_overlap_matrix(const Spectrum& free, const Spectrum& interacting, int n);

struct SlaterOverlap {
  double abs = 0.0;
  double log_abs = 0.0;  // -inf when singular
  int sign = 1;          // 0 when singular
  bool singular = false;
};

// det of the N x N orbital overlap matrix, accumulated in the log domain.
SlaterOverlap slater_overlap(const Spectrum& free, const Spectrum& interacting, int n);
SlaterOverlap slater_overlap(const Eigen::MatrixXd& gram);

// Least squares fit of log|S| = intercept - beta * log N.
struct PowerLawFit {
  double beta = 0.0;
  double intercept = 0.0;
  std::optional<double> r_squared;  // empty when the data carry no variance
  std::vector<std::size_t> excluded;  // input indices dropped for |S| <= 0
};

inline constexpr std::size_t kMinFitPoints = 4;

PowerLawFit fit_exponent(std::span<const int> n_values, std::span<const double> abs_overlaps);

// Fixed-density ladder: for each N the domain is L = N / density and the
// grid is rebuilt with the same spacing.
struct ScanModel {
  Geometry geometry = Geometry::RadialSwave;
  PotentialSpec potential{PotentialShape::SquareWell, -5.0, 1.0, 0.0};
  double density = 1.0;
  double points_per_scale = kDefaultPointsPerScale;
  double center_fraction = 0.5;  // linear box only: impurity at fraction * L
  unsigned threads = 1;
};

struct OverlapScan {
  std::vector<int> n_values;
  std::vector<double> lengths;
  std::vector<int> grid_points;
  std::vector<double> abs_overlaps;
  std::vector<double> log_abs_overlaps;
  std::vector<int> signs;
  std::vector<double> delta_F;  // radial geometry only, one per N
  std::vector<GridAdequacy> adequacy;
  PowerLawFit fit;
};

OverlapScan overlap_scan(const ScanModel& model, std::span<const int> n_values);

// ---------------------------------------------------------------------------

struct SiteOverlap {
  int n_fermions = 0;
  double length = 0.0;
  double site_a = 0.0;
  double site_b = 0.0;
  double cross = 0.0;           // |<Y(R_a), Y(R_b)>|
  double site_a_vs_free = 0.0;  // |<Y(R_a), free>|
  double site_b_vs_free = 0.0;
};

// Ground states with the impurity at R_a and at R_b on a linear box.
// Equal sites are allowed; distinct sites closer than 4 r0 are rejected.
SiteOverlap impurity_site_overlap(const Grid& grid, PotentialShape shape, double strength,
                                  double range, double site_a, double site_b, int n_fermions);

struct SiteLadder {
  PotentialShape shape = PotentialShape::SquareWell;
  double strength = -5.0;
  double range = 1.0;
  double site_a = 0.25;
  double site_b = 0.5;
  bool fractional_sites = true;  // sites given as fractions of L
  double density = 1.0;
  double points_per_scale = kDefaultPointsPerScale;
};

std::vector<SiteOverlap> impurity_site_ladder(const SiteLadder& ladder,
                                              std::span<const int> n_values);

// ---------------------------------------------------------------------------

struct DecompositionReport {
  int n_fermions = 0;
  int excitation_order = 0;
  int window = 0;
  std::uint64_t configurations = 0;
  double ground_coefficient = 0.0;  // |A| of the unexcited configuration
  double max_coefficient = 0.0;
  double captured_weight = 0.0;
  int max_order = 0;  // excitation order of the largest coefficient
};

inline constexpr int kMaxExcitationOrder = 2;

// Expansion of the interacting N-particle ground state over free Slater
// determinants with up to `order` occupied orbitals (1..N) replaced by
// orbitals from (N, N + window]. `window` defaults to 2N. `free` must hold at
// least N + window orbitals.
DecompositionReport coefficient_scan(const Spectrum& free, const Spectrum& interacting, int n,
                                     int order, std::optional<int> window = std::nullopt);

}  // namespace ocat
