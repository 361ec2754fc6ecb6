#include "ocat/spectral.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include "ocat/errors.hpp"

namespace ocat {

namespace {

using std::numbers::pi;

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;  // length n, last entry is workspace for dstemr
};

Tridiagonal build_hamiltonian(const Grid& grid, const std::optional<PotentialSpec>& potential) {
  const int n = grid.n_points();
  const double h = grid.spacing();
  const double kinetic = 1.0 / (h * h);
  Tridiagonal t{std::vector<double>(n, 2.0 * kinetic), std::vector<double>(n, -kinetic)};
  t.off[n - 1] = 0.0;
  if (potential) {
    const auto u = cell_averaged_potential(*potential, grid);
    for (int k = 0; k < n; ++k) t.diag[k] += u[k];
  }
  return t;
}

void check_count(const Grid& grid, int count) {
  if (count < 1 || count > grid.n_points())
    throw ConfigError("n_eigenpairs", "requested " + std::to_string(count) +
                                          " eigenpairs on a grid of " +
                                          std::to_string(grid.n_points()) + " points");
}

void check_ascending(const std::vector<double>& e) {
  for (std::size_t i = 1; i < e.size(); ++i) {
    if (!(e[i] > e[i - 1]))
      throw NumericalError("eigenvalues not strictly ascending at index " + std::to_string(i) +
                           " (" + std::to_string(e[i - 1]) + ", " + std::to_string(e[i]) + ")");
  }
}


// Closed form for U = 0: sin(j k pi / (n + 1)) with the integer phase reduced
// before scaling, normalized to 1 under the h-weighted inner product.
void fill_free_spectrum(const Grid& grid, Spectrum& s) {
  const int n = grid.n_points();
  const int count = static_cast<int>(s.orbitals.cols());
  const std::int64_t period = 2 * static_cast<std::int64_t>(n + 1);
  const double norm = std::sqrt(2.0 / grid.length());
  for (int j = 1; j <= count; ++j) {
    s.energies[j - 1] = discrete_free_energy(grid, j);
    for (int k = 1; k <= n; ++k) {
      const std::int64_t phase = (static_cast<std::int64_t>(j) * k) % period;
      s.orbitals(k - 1, j - 1) = norm * std::sin(pi * static_cast<double>(phase) / (n + 1));
    }
  }
  s.energies.resize(count);
}

void solve_tridiagonal(const Grid& grid, Spectrum& s) {
  auto t = build_hamiltonian(grid, s.potential);
  const int n = grid.n_points();
  const int count = static_cast<int>(s.orbitals.cols());
  const double h = grid.spacing();
  std::vector<lapack_int> isuppz(2 * count);
  lapack_int found = 0;
  lapack_logical tryrac = 1;
  const lapack_int info = LAPACKE_dstemr(LAPACK_COL_MAJOR, 'V', 'I', n, t.diag.data(),
                                         t.off.data(), 0.0, 0.0, 1, count, &found,
                                         s.energies.data(), s.orbitals.data(), n, count,
                                         isuppz.data(), &tryrac);
  if (info != 0 || found != count)
    throw NumericalError("dstemr failed: info=" + std::to_string(info) +
                         " found=" + std::to_string(found) + " of " + std::to_string(count) +
                         " on n_points=" + std::to_string(n));
  s.energies.resize(count);
  check_ascending(s.energies);

  s.orbitals *= 1.0 / std::sqrt(h);
  for (int j = 0; j < count; ++j) {
    auto col = s.orbitals.col(j);
    const double cut = 1e-8 * col.cwiseAbs().maxCoeff();
    for (int k = 0; k < n; ++k) {
      if (std::abs(col(k)) > cut) {
        if (col(k) < 0.0) col *= -1.0;
        break;
      }
    }
  }

}

}  // namespace

std::vector<double> lowest_eigenvalues(const Grid& grid,
                                       const std::optional<PotentialSpec>& potential,
                                       int count) {
  check_count(grid, count);
  if (!potential) {
    std::vector<double> w(count);
    for (int j = 1; j <= count; ++j) w[j - 1] = discrete_free_energy(grid, j);
    return w;
  }
  auto t = build_hamiltonian(grid, potential);
  const int n = grid.n_points();
  std::vector<double> w(n);
  std::vector<lapack_int> isuppz(2 * count);
  lapack_int found = 0;
  lapack_logical tryrac = 1;
  double dummy = 0.0;
  const lapack_int info =
      LAPACKE_dstemr(LAPACK_COL_MAJOR, 'N', 'I', n, t.diag.data(), t.off.data(), 0.0, 0.0, 1,
                     count, &found, w.data(), &dummy, 1, count, isuppz.data(), &tryrac);
  if (info != 0 || found != count)
    throw NumericalError("dstemr failed: info=" + std::to_string(info) +
                         " found=" + std::to_string(found) + " of " + std::to_string(count));
  w.resize(count);
  check_ascending(w);
  return w;
}

Spectrum solve_spectrum(const Grid& grid, const std::optional<PotentialSpec>& potential,
                        int n_eigenpairs) {
  check_count(grid, n_eigenpairs);
  const int n = grid.n_points();
  const int count = n_eigenpairs;

  Spectrum s{grid, potential, std::vector<double>(n), Eigen::MatrixXd(n, count), 0.0};
  const double h = grid.spacing();
  if (potential)
    solve_tridiagonal(grid, s);
  else
    fill_free_spectrum(grid, s);

  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(count, count);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(s.orbitals.transpose(), h);
  double err = 0.0;
  for (int j = 0; j < count; ++j)
    for (int i = j; i < count; ++i) err = std::max(err, std::abs(gram(i, j) - (i == j ? 1.0 : 0.0)));
  s.orthonormality_error = err;
  if (!(err <= kOrthonormalityTolerance))
    throw NumericalError("eigenvectors not orthonormal: max deviation " + std::to_string(err));
  return s;
}

double discrete_free_energy(const Grid& grid, int n) {
  const double h = grid.spacing();
  const double s = std::sin(n * pi * h / (2.0 * grid.length()));
  return 4.0 / (h * h) * s * s;
}

double discrete_momentum(double energy, double spacing) {
  if (energy < 0.0) throw NumericalError("discrete momentum of a bound level");
  double arg = 0.5 * spacing * std::sqrt(energy);
  if (arg > 1.0) {
    if (arg > 1.0 + 1e-12) throw NumericalError("energy above the finite-difference band");
    arg = 1.0;
  }
  return 2.0 / spacing * std::asin(arg);
}

GridAdequacy grid_adequacy(const Grid& grid, const std::optional<PotentialSpec>& potential,
                           int n_fermions) {
  GridAdequacy a;
  a.spacing = grid.spacing();
  a.fermi_momentum = pi * n_fermions / grid.length();
  a.fermi_wavelength = 2.0 * pi / a.fermi_momentum;
  a.max_spacing = a.fermi_wavelength / kMinPointsPerScale;
  if (potential) {
    a.range = potential->range;
    a.max_spacing = std::min(a.max_spacing, potential->range / kMinPointsPerScale);
  }
  a.adequate = a.spacing <= a.max_spacing;
  return a;
}

GridAdequacy require_adequate_grid(const Grid& grid,
                                   const std::optional<PotentialSpec>& potential,
                                   int n_fermions) {
  auto a = grid_adequacy(grid, potential, n_fermions);
  if (!a.adequate)
    throw ConfigError("n_points", "grid too coarse: h=" + std::to_string(a.spacing) +
                                      " exceeds min(r0, lambda_F)/20=" +
                                      std::to_string(a.max_spacing));
  return a;
}

double resolution_spacing(double range, double density, double points_per_scale) {
  if (!(density > 0.0)) throw ConfigError("density", "must be positive");
  if (!(points_per_scale >= kMinPointsPerScale))
    throw ConfigError("points_per_scale", "must be at least 20");
  double scale = 2.0 / density;  // lambda_F at k_F = pi * density
  if (range > 0.0) scale = std::min(scale, range);
  return scale / points_per_scale;
}

Grid grid_for_spacing(double length, double max_spacing, Geometry geometry) {
  if (!(max_spacing > 0.0)) throw ConfigError("spacing", "must be positive");
  const double cells = std::ceil(length / max_spacing * (1.0 - 1e-12));
  return Grid(length, std::max(3, static_cast<int>(cells) - 1), geometry);
}

PhaseShiftTable extract_phase_shifts(const Spectrum& free, const Spectrum& interacting,
                                     std::optional<int> fermi_index) {
  if (!(free.grid == interacting.grid))
    throw ConfigError("grid", "phase shifts need both spectra on the same grid");
  if (interacting.grid.geometry() != Geometry::RadialSwave)
    throw UnsupportedError("phase shifts are defined for the radial s-wave geometry only");

  const Grid& grid = interacting.grid;
  const double h = grid.spacing();
  const double L = grid.length();
  const int levels = std::min(free.size(), interacting.size());
  const int fermi = fermi_index.value_or(interacting.size());
  if (fermi < 1 || fermi > levels)
    throw ConfigError("fermi_index", "must lie in [1, " + std::to_string(levels) + "]");

  PhaseShiftTable t;
  t.fermi_index = fermi;
  double previous = 0.0;
  for (int n = 1; n <= levels; ++n) {
    const double e = interacting.energies[n - 1];
    if (e <= 0.0) {
      if (!t.momenta.empty())
        throw NumericalError("bound level above a scattering level at n=" + std::to_string(n));
      ++t.bound_states;
      continue;
    }
    const double k = discrete_momentum(e, h);
    const double k_free = discrete_momentum(free.energies[n - 1], h);
    const double raw = (k_free - k) * L;
    double delta = 0.0;
    if (t.momenta.empty()) {
      delta = raw - pi * std::ceil(raw / pi - 0.5);  // into (-pi/2, pi/2]
      t.lowest_reduced = delta;
    } else {
      delta = raw - pi * std::round((raw - previous) / pi);
      if (!(std::abs(delta - previous) < pi / 2))
        throw NumericalError("phase shift jumps by >= pi/2 at n=" + std::to_string(n) +
                             "; grid or box too coarse");
    }
    previous = delta;
    t.level_index.push_back(n);
    t.momenta.push_back(k);
    t.deltas.push_back(delta);
  }
  if (fermi <= t.bound_states)
    throw ConfigError("fermi_index", "Fermi level falls on a bound state");

  t.levinson_offset = t.bound_states;
  for (auto& d : t.deltas) d += pi * t.levinson_offset;
  t.delta_F = t.deltas[fermi - t.bound_states - 1];
  return t;
}

std::vector<double> bo_energy(const Grid& grid, PotentialShape shape, double strength,
                              double range, std::span<const double> centers, int n_fermions) {
  if (grid.geometry() != Geometry::LinearBox)
    throw UnsupportedError("the energy surface E(R) is defined on a linear box");
  std::vector<double> out;
  out.reserve(centers.size());
  for (double r : centers) {
    const PotentialSpec spec{shape, strength, range, r};
    validate_potential(spec, grid);
    const auto e = lowest_eigenvalues(grid, spec, n_fermions);
    double sum = 0.0;
    for (double v : e) sum += v;
    out.push_back(sum);
  }
  return out;
}

}  // namespace ocat
