#include "ocat/overlap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ocat/errors.hpp"
#include "ocat/linalg.hpp"
#include "ocat/parallel.hpp"

namespace ocat {

namespace {

void require_same_grid(const Spectrum& a, const Spectrum& b) {
  if (!(a.grid == b.grid)) throw ConfigError("grid", "spectra live on different grids");
}

void require_levels(const Spectrum& s, int n, const char* which) {
  if (n < 1 || n > s.size())
    throw ConfigError("n_fermions", std::string(which) + " spectrum holds " +
                                        std::to_string(s.size()) + " orbitals, N=" +
                                        std::to_string(n) + " requested");
}

SlaterOverlap from_log_det(const LogDet& d) {
  if (d.singular) return {0.0, -std::numeric_limits<double>::infinity(), 0, true};
  return {std::exp(d.log_abs), d.log_abs, d.sign, false};
}

}  // namespace

Eigen::MatrixXd orbital_overlap_matrix(const Spectrum& free, const Spectrum& interacting,
                                       int n) {
  require_same_grid(free, interacting);
  require_levels(free, n, "free");
  require_levels(interacting, n, "interacting");
  const double h = free.grid.spacing();
  Eigen::MatrixXd m(n, n);
  m.noalias() = h * free.orbitals.leftCols(n).transpose() * interacting.orbitals.leftCols(n);
  return m;
}

SlaterOverlap slater_overlap(const Eigen::MatrixXd& gram) {
  return from_log_det(log_determinant(gram));
}

SlaterOverlap slater_overlap(const Spectrum& free, const Spectrum& interacting, int n) {
  return slater_overlap(orbital_overlap_matrix(free, interacting, n));
}

PowerLawFit fit_exponent(std::span<const int> n_values, std::span<const double> abs_overlaps) {
  if (n_values.size() != abs_overlaps.size())
    throw ConfigError("n_values", "length differs from the overlap series");
  PowerLawFit fit;
  std::vector<double> x, y;
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (!(abs_overlaps[i] > 0.0) || n_values[i] <= 0) {
      fit.excluded.push_back(i);
      continue;
    }
    x.push_back(std::log(static_cast<double>(n_values[i])));
    y.push_back(std::log(abs_overlaps[i]));
  }
  if (x.size() < kMinFitPoints)
    throw ConfigError("n_values", "power-law fit needs at least 4 positive points, got " +
                                      std::to_string(x.size()));

  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw ConfigError("n_values", "power-law fit needs distinct N values");
  const double slope = sxy / sxx;
  fit.beta = -slope;
  fit.intercept = my - slope * mx;

  // log-overlaps flat to ~1e-12 carry no usable variance
  if (syy > 1e-24 * n) {
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - (fit.intercept + slope * x[i]);
      ss_res += r * r;
    }
    fit.r_squared = 1.0 - ss_res / syy;
  }
  return fit;
}

OverlapScan overlap_scan(const ScanModel& model, std::span<const int> n_values) {
  if (n_values.size() < kMinFitPoints)
    throw ConfigError("n_values", "a scan needs at least 4 particle numbers");
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (n_values[i] < 1) throw ConfigError("n_values", "particle numbers must be positive");
    if (i > 0 && n_values[i] <= n_values[i - 1])
      throw ConfigError("n_values", "particle numbers must be strictly ascending");
  }
  const double h_max =
      resolution_spacing(model.potential.range, model.density, model.points_per_scale);

  const std::size_t count = n_values.size();
  OverlapScan scan;
  scan.n_values.assign(n_values.begin(), n_values.end());
  scan.lengths.resize(count);
  scan.grid_points.resize(count);
  scan.abs_overlaps.resize(count);
  scan.log_abs_overlaps.resize(count);
  scan.signs.resize(count);
  scan.adequacy.resize(count);
  if (model.geometry == Geometry::RadialSwave) scan.delta_F.resize(count);

  // grids and potentials are validated up front so no solve starts on a bad config
  std::vector<Grid> grids;
  std::vector<PotentialSpec> potentials;
  for (std::size_t i = 0; i < count; ++i) {
    const int n = n_values[i];
    const double length = n / model.density;
    grids.push_back(grid_for_spacing(length, h_max, model.geometry));
    PotentialSpec pot = model.potential;
    pot.center = model.geometry == Geometry::RadialSwave ? 0.0 : model.center_fraction * length;
    validate_potential(pot, grids.back());
    scan.adequacy[i] = require_adequate_grid(grids.back(), pot, n);
    if (n > grids.back().n_points())
      throw ConfigError("n_values", "N exceeds the number of grid points");
    potentials.push_back(pot);
  }

  parallel_for(count, model.threads, [&](std::size_t i) {
    const int n = n_values[i];
    const Spectrum free = solve_spectrum(grids[i], std::nullopt, n);
    const Spectrum interacting = solve_spectrum(grids[i], potentials[i], n);
    const SlaterOverlap s = slater_overlap(free, interacting, n);
    scan.lengths[i] = grids[i].length();
    scan.grid_points[i] = grids[i].n_points();
    scan.abs_overlaps[i] = s.abs;
    scan.log_abs_overlaps[i] = s.log_abs;
    scan.signs[i] = s.sign;
    if (model.geometry == Geometry::RadialSwave)
      scan.delta_F[i] = extract_phase_shifts(free, interacting, n).delta_F;
  });

  scan.fit = fit_exponent(scan.n_values, scan.abs_overlaps);
  return scan;
}

// ---------------------------------------------------------------------------

SiteOverlap impurity_site_overlap(const Grid& grid, PotentialShape shape, double strength,
                                  double range, double site_a, double site_b, int n_fermions) {
  if (grid.geometry() != Geometry::LinearBox)
    throw UnsupportedError("impurity-site overlaps are defined on a linear box");
  const double separation = std::abs(site_a - site_b);
  if (separation > 0.0 && separation < 4.0 * range)
    throw ConfigError("site_b", "sites closer than 4 r0: the potentials overlap");
  const PotentialSpec pa{shape, strength, range, site_a};
  const PotentialSpec pb{shape, strength, range, site_b};
  validate_potential(pa, grid);
  validate_potential(pb, grid);

  const Spectrum free = solve_spectrum(grid, std::nullopt, n_fermions);
  const Spectrum sa = solve_spectrum(grid, pa, n_fermions);
  const Spectrum sb = separation > 0.0 ? solve_spectrum(grid, pb, n_fermions) : sa;

  SiteOverlap out;
  out.n_fermions = n_fermions;
  out.length = grid.length();
  out.site_a = site_a;
  out.site_b = site_b;
  out.cross = slater_overlap(sa, sb, n_fermions).abs;
  out.site_a_vs_free = slater_overlap(free, sa, n_fermions).abs;
  out.site_b_vs_free = slater_overlap(free, sb, n_fermions).abs;
  return out;
}

std::vector<SiteOverlap> impurity_site_ladder(const SiteLadder& ladder,
                                              std::span<const int> n_values) {
  if (n_values.empty()) throw ConfigError("n_values", "empty ladder");
  const double h_max = resolution_spacing(ladder.range, ladder.density, ladder.points_per_scale);
  std::vector<SiteOverlap> out;
  for (int n : n_values) {
    if (n < 1) throw ConfigError("n_values", "particle numbers must be positive");
    const double length = n / ladder.density;
    const Grid grid = grid_for_spacing(length, h_max, Geometry::LinearBox);
    const double ra = ladder.fractional_sites ? ladder.site_a * length : ladder.site_a;
    const double rb = ladder.fractional_sites ? ladder.site_b * length : ladder.site_b;
    require_adequate_grid(grid, PotentialSpec{ladder.shape, ladder.strength, ladder.range, ra},
                          n);
    out.push_back(
        impurity_site_overlap(grid, ladder.shape, ladder.strength, ladder.range, ra, rb, n));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct Accumulator {
  double max = 0.0;
  int max_order = 0;
  double weight = 0.0;
  std::uint64_t configurations = 0;

  void add(double c, int order) {
    const double a = std::abs(c);
    if (a > max) {
      max = a;
      max_order = order;
    }
    weight += a * a;
    ++configurations;
  }
};

// Every configuration evaluated as its own determinant. Used when the
// occupied block of the overlap matrix is singular.
void enumerate_direct(const Eigen::MatrixXd& occ, const Eigen::MatrixXd& virt, int order,
                      Accumulator& acc) {
  const int n = static_cast<int>(occ.rows());
  const int w = static_cast<int>(virt.rows());
  const double cost = std::pow(static_cast<double>(n) * w, order) * n * n * n;
  if (cost > 1e11)
    throw NumericalError("overlap matrix singular and direct enumeration too large");
  acc.add(slater_overlap(occ).abs, 0);
  if (order >= 1) {
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < w; ++a) {
        Eigen::MatrixXd m = occ;
        m.row(i) = virt.row(a);
        acc.add(slater_overlap(m).abs, 1);
      }
  }
  if (order >= 2) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int a = 0; a < w; ++a)
          for (int b = a + 1; b < w; ++b) {
            Eigen::MatrixXd m = occ;
            m.row(i) = virt.row(a);
            m.row(j) = virt.row(b);
            acc.add(slater_overlap(m).abs, 2);
          }
  }
}

}  // namespace

DecompositionReport coefficient_scan(const Spectrum& free, const Spectrum& interacting, int n,
                                     int order, std::optional<int> window) {
  if (order > kMaxExcitationOrder)
    throw UnsupportedError("excitation order above 2 is not enumerated");
  if (order < 0) throw ConfigError("excitation_order", "must be 0, 1 or 2");
  require_same_grid(free, interacting);
  require_levels(interacting, n, "interacting");
  const int w = window.value_or(2 * n);
  if (w < 0) throw ConfigError("window", "must be non-negative");
  require_levels(free, n + w, "free");

  const double h = free.grid.spacing();
  const auto psi = interacting.orbitals.leftCols(n);
  const Eigen::MatrixXd occ = h * free.orbitals.leftCols(n).transpose() * psi;
  const Eigen::MatrixXd virt = h * free.orbitals.middleCols(n, w).transpose() * psi;

  DecompositionReport report;
  report.n_fermions = n;
  report.excitation_order = order;
  report.window = w;

  Accumulator acc;
  // entries are overlaps of unit vectors, so singularity is judged on an absolute scale
  const PivotedLU lu(occ, 1.0);
  if (lu.log_det().singular) {
    enumerate_direct(occ, virt, order, acc);
    report.ground_coefficient = 0.0;
  } else {
    // Replacing rows i (and j) of occ by rows a (and b) of virt multiplies the
    // determinant by the matching entry (2x2 minor) of G = virt * occ^-1.
    const double ground = lu.log_det().abs();
    report.ground_coefficient = ground;
    acc.add(ground, 0);
    if (order >= 1 && w > 0) {
      const Eigen::MatrixXd g = lu.solve_transposed(virt.transpose()).transpose();
      for (int i = 0; i < n; ++i)
        for (int a = 0; a < w; ++a) acc.add(ground * g(a, i), 1);
      if (order >= 2) {
        double best = 0.0, sum = 0.0;
        for (int i = 0; i < n; ++i) {
          const double* gi = g.col(i).data();
          for (int j = i + 1; j < n; ++j) {
            const double* gj = g.col(j).data();
            for (int a = 0; a < w; ++a) {
              const double ai = gi[a], aj = gj[a];
              for (int b = a + 1; b < w; ++b) {
                const double minor = ai * gj[b] - aj * gi[b];
                sum += minor * minor;
                best = std::max(best, std::abs(minor));
              }
            }
          }
        }
        const std::uint64_t pairs_occ = static_cast<std::uint64_t>(n) * (n - 1) / 2;
        const std::uint64_t pairs_virt = static_cast<std::uint64_t>(w) * (w - 1) / 2;
        acc.configurations += pairs_occ * pairs_virt;
        acc.weight += ground * ground * sum;
        if (ground * best > acc.max) {
          acc.max = ground * best;
          acc.max_order = 2;
        }
      }
    }
  }
  report.configurations = acc.configurations;
  report.max_coefficient = acc.max;
  report.max_order = acc.max_order;
  report.captured_weight = acc.weight;
  return report;
}

}  // namespace ocat
