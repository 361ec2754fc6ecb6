#include "ocat/runner.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <ostream>

#include "ocat/csv.hpp"
#include "ocat/errors.hpp"
#include "ocat/spectral.hpp"

namespace ocat {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Cell = CsvTable::Cell;

Cell I(std::int64_t v) { return Cell{v}; }
Cell D(double v) { return Cell{v}; }

json adequacy_json(const GridAdequacy& a, int n) {
  return {{"n_fermions", n},
          {"spacing", a.spacing},
          {"max_spacing", a.max_spacing},
          {"fermi_momentum", a.fermi_momentum},
          {"fermi_wavelength", a.fermi_wavelength},
          {"range", a.range},
          {"adequate", a.adequate}};
}

json potential_json(const PotentialSpec& p) {
  return {{"shape", std::string(to_string(p.shape))},
          {"strength", p.strength},
          {"range", p.range},
          {"center", p.center}};
}

RunOutput run_job(const SpectrumJob& j, const RunConfig&) {
  RunOutput out;
  const Grid grid(j.length, j.n_points, j.geometry);
  const auto adequacy = require_adequate_grid(grid, j.potential, j.n_fermions);
  const Spectrum s = solve_spectrum(grid, j.potential, j.n_eigenpairs);

  CsvTable spectrum({"n[1]", "energy[E]", "free_energy[E]"});
  for (int n = 1; n <= s.size(); ++n)
    spectrum.add_row({I(n), D(s.energies[n - 1]), D(discrete_free_energy(grid, n))});
  out.files.push_back({"spectrum.csv", spectrum.render()});

  out.metadata["grid_adequacy"] = json::array({adequacy_json(adequacy, j.n_fermions)});
  out.metadata["orthonormality_error"] = s.orthonormality_error;
  out.metadata["potential"] = potential_json(j.potential);

  if (j.geometry == Geometry::RadialSwave) {
    const Spectrum free = solve_spectrum(grid, std::nullopt, j.n_eigenpairs);
    const auto t = extract_phase_shifts(free, s, j.n_fermions);
    CsvTable shifts({"n[1]", "k[1/len]", "delta[rad]"});
    for (std::size_t i = 0; i < t.deltas.size(); ++i)
      shifts.add_row({I(t.level_index[i]), D(t.momenta[i]), D(t.deltas[i])});
    out.files.push_back({"phase_shifts.csv", shifts.render()});
    out.metadata["phase_shifts"] = {{"bound_states", t.bound_states},
                                    {"levinson_offset", t.levinson_offset},
                                    {"lowest_reduced", t.lowest_reduced},
                                    {"fermi_index", t.fermi_index},
                                    {"delta_F", t.delta_F}};
  }
  return out;
}

RunOutput run_job(const OverlapScanJob& j, const RunConfig& cfg) {
  RunOutput out;
  ScanModel model = j.model;
  model.threads = cfg.threads;
  const OverlapScan scan = overlap_scan(model, j.n_values);
  const bool radial = model.geometry == Geometry::RadialSwave;

  std::vector<std::string> header = {"N[1]",          "L[len]",          "n_points[1]",
                                     "abs_overlap[1]", "log_abs_overlap[1]", "sign[1]"};
  if (radial) header.push_back("delta_F[rad]");
  CsvTable table(header);
  json adequacy = json::array();
  for (std::size_t i = 0; i < scan.n_values.size(); ++i) {
    std::vector<Cell> row = {I(scan.n_values[i]),     D(scan.lengths[i]),
                             I(scan.grid_points[i]),  D(scan.abs_overlaps[i]),
                             D(scan.log_abs_overlaps[i]), I(scan.signs[i])};
    if (radial) row.push_back(D(scan.delta_F[i]));
    table.add_row(std::move(row));
    adequacy.push_back(adequacy_json(scan.adequacy[i], scan.n_values[i]));
  }
  out.files.push_back({"overlap_scan.csv", table.render()});

  CsvTable fit({"beta[1]", "intercept[1]", "r_squared[1]", "points[1]"});
  fit.add_row({D(scan.fit.beta), D(scan.fit.intercept),
               scan.fit.r_squared ? D(*scan.fit.r_squared) : Cell{std::string("undefined")},
               I(static_cast<std::int64_t>(scan.n_values.size() - scan.fit.excluded.size()))});
  out.files.push_back({"overlap_fit.csv", fit.render()});
  out.metadata["grid_adequacy"] = adequacy;
  out.metadata["potential"] = potential_json(model.potential);
  out.metadata["density"] = model.density;
  return out;
}

RunOutput run_job(const CoefficientScanJob& j, const RunConfig&) {
  RunOutput out;
  const auto& m = j.model;
  const double h_max = resolution_spacing(m.potential.range, m.density, m.points_per_scale);
  CsvTable table({"N[1]", "excitation_order[1]", "window[1]", "configurations[1]",
                  "ground_coefficient[1]", "max_coefficient[1]", "max_order[1]",
                  "captured_weight[1]"});
  json adequacy = json::array();
  for (int n : j.n_values) {
    const double length = n / m.density;
    const Grid grid = grid_for_spacing(length, h_max, m.geometry);
    PotentialSpec pot = m.potential;
    pot.center = m.geometry == Geometry::RadialSwave ? 0.0 : m.center_fraction * length;
    adequacy.push_back(adequacy_json(require_adequate_grid(grid, pot, n), n));
    const int window = j.window > 0 ? j.window : 2 * n;
    const Spectrum free = solve_spectrum(grid, std::nullopt, n + window);
    const Spectrum interacting = solve_spectrum(grid, pot, n);
    const auto r = coefficient_scan(free, interacting, n, j.excitation_order, window);
    table.add_row({I(n), I(r.excitation_order), I(r.window),
                   I(static_cast<std::int64_t>(r.configurations)), D(r.ground_coefficient),
                   D(r.max_coefficient), I(r.max_order), D(r.captured_weight)});
  }
  out.files.push_back({"coefficients.csv", table.render()});
  out.metadata["grid_adequacy"] = adequacy;
  out.metadata["potential"] = potential_json(m.potential);
  out.metadata["note"] =
      "coefficients enumerate the ground configuration and up to two particle-hole "
      "replacements within the window; the evidence covers this family only";
  return out;
}

RunOutput run_job(const SiteOverlapJob& j, const RunConfig&) {
  RunOutput out;
  const auto rows = impurity_site_ladder(j.ladder, j.n_values);
  CsvTable table({"N[1]", "L[len]", "site_a[len]", "site_b[len]", "cross_overlap[1]",
                  "site_a_vs_free[1]", "site_b_vs_free[1]"});
  for (const auto& r : rows)
    table.add_row({I(r.n_fermions), D(r.length), D(r.site_a), D(r.site_b), D(r.cross),
                   D(r.site_a_vs_free), D(r.site_b_vs_free)});
  out.files.push_back({"site_overlap.csv", table.render()});
  out.metadata["site_placement"] = j.ladder.fractional_sites ? "fractional" : "absolute";
  return out;
}

RunOutput run_job(const NucleationJob& j, const RunConfig&) {
  RunOutput out;
  NucleationParams p = j.params;
  const double barrier = homogeneous_barrier(p);
  CsvTable table({"theta[rad]", "contact_factor[1]", "barrier_homogeneous[E]",
                  "barrier_heterogeneous[E]", "log_rate_ratio[1]"});
  for (int i = 0; i < j.theta_points; ++i) {
    p.contact_angle = std::numbers::pi * i / (j.theta_points - 1);
    const double f = contact_angle_factor(p.contact_angle);
    table.add_row({D(p.contact_angle), D(f), D(barrier), D(f * barrier),
                   D(seeded_rate_ratio(p).log_ratio)});
  }
  out.files.push_back({"nucleation.csv", table.render()});

  const auto crit = critical_radius_and_min_deposit(p);
  CsvTable nucleus({"r_star[len]", "e_min[E]", "barrier_homogeneous[E]", "barrier_over_kT[1]"});
  nucleus.add_row({D(crit.radius), D(crit.min_deposit), D(barrier), D(barrier / p.temperature)});
  out.files.push_back({"critical_nucleus.csv", nucleus.render()});
  out.metadata["model"] = {
      {"barrier", "classical nucleation theory, 16 pi sigma^3 / (3 dg^2)"},
      {"contact_factor", "(2 + cos theta)(1 - cos theta)^2 / 4"},
      {"e_min", "model choice: surface plus bulk work of the critical bubble, "
                "4 pi r*^2 sigma + (4 pi / 3) r*^3 dg"}};
  return out;
}

RunOutput run_job(const WkbJob& j, const RunConfig&) {
  RunOutput out;
  auto profile_for = [&](double reduction) {
    const double h = j.height * (1.0 - reduction);
    if (j.barrier_shape == "rectangular")
      return rectangular_barrier(h, j.width, 0.5 * (j.domain - j.width), j.domain, j.energy,
                                 j.attempt_frequency);
    return parabolic_barrier(h, j.width, 0.5 * j.domain, j.domain, j.segments, j.energy,
                             j.attempt_frequency);
  };
  const BarrierProfile reference = profile_for(0.0);
  CsvTable table({"reduction[1]", "height[E]", "exponent[1]", "rate[1/t]",
                  "log10_lifetime_ratio[1]"});
  for (double r : j.reductions) {
    const auto p = profile_for(r);
    table.add_row({D(r), D(j.height * (1.0 - r)), D(wkb_exponent(p)), D(wkb_rate(p)),
                   D(lifetime_ratio(reference, p).log10_ratio())});
  }
  out.files.push_back({"wkb.csv", table.render()});
  out.metadata["model"] = {{"rate", "nu * exp(-2 * integral sqrt(V - E) dx), hbar = 2m = 1"},
                           {"barrier_shape", j.barrier_shape}};
  return out;
}

RunOutput run_job(const AvalancheJob& j, const RunConfig& cfg) {
  RunOutput out;
  const auto s = simulate_avalanche(j.params, j.threshold, j.bin_width, cfg.threads);
  std::vector<std::string> header = {"trials[1]",        "mean_gain[1]",
                                     "variance_gain[1]", "analytic_mean[1]",
                                     "threshold[1]",     "trigger_fraction[1]"};
  std::vector<Cell> row = {I(s.trials),     D(s.mean_gain),  D(s.variance_gain),
                           D(*s.analytic_mean), I(s.threshold), D(s.trigger_fraction)};
  if (j.params.n_initial == 1) {
    header.push_back("analytic_trigger_fraction[1]");
    row.push_back(D(furry_tail(*s.analytic_mean, j.threshold)));
  }
  CsvTable summary(header);
  summary.add_row(row);
  out.files.push_back({"avalanche_summary.csv", summary.render()});

  CsvTable hist({"count[1]", "frequency[1]"});
  for (const auto& b : s.histogram) hist.add_row({I(b.lower), I(b.frequency)});
  out.files.push_back({"avalanche_histogram.csv", hist.render()});
  out.metadata["model"] = "pure Yule process: no attachment, no space charge";
  out.metadata["rng"] = "Philox4x32-10, key = rng_seed, counter = (draw block, trial)";
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f << content;
  f.close();
  if (!f) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

std::string library_version() { return OCAT_VERSION; }

RunOutput execute(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  RunOutput out = std::visit([&](const auto& job) { return run_job(job, cfg); }, cfg.job);
  out.compute_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

fs::path resolve_output_dir(const RunConfig& cfg, const std::optional<fs::path>& override_dir) {
  if (override_dir && !override_dir->empty()) return *override_dir;
  if (const char* env = std::getenv("OCAT_OUTPUT_DIR"); env && *env) return env;
  if (!cfg.output_dir.empty()) return cfg.output_dir;
  throw ConfigError("output_dir", "no output directory given");
}

void write_outputs(const RunConfig& cfg, const RunOutput& out, const fs::path& out_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<fs::path> written;
  try {
    fs::create_directories(out_dir);
    json checksums = json::object();
    for (const auto& a : out.files) {
      const fs::path target = out_dir / a.name;
      const fs::path tmp = out_dir / ("." + a.name + ".tmp");
      written.push_back(tmp);
      write_file(tmp, a.content);
      fs::rename(tmp, target);
      written.back() = target;
      checksums[a.name] = sha256_hex(a.content);
    }
    json manifest = {
        {"format_version", cfg.format_version},
        {"library_version", library_version()},
        {"config", {{"section", cfg.section}, {"globals", cfg.globals}, {"params", cfg.params}}},
        {"rng_seed", cfg.rng_seed},
        {"artifacts", checksums},
        {"timings",
         {{"compute_seconds", out.compute_seconds},
          {"write_seconds",
           std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}}},
        {"metadata", out.metadata}};
    const fs::path tmp = out_dir / ".manifest.json.tmp";
    written.push_back(tmp);
    write_file(tmp, manifest.dump(2) + "\n");
    fs::rename(tmp, out_dir / "manifest.json");
  } catch (...) {
    std::error_code ec;
    for (const auto& p : written) fs::remove(p, ec);
    throw;
  }
}

int run_config_text(std::string_view text, const std::optional<fs::path>& override_dir,
                    std::ostream& err) {
  try {
    const RunConfig cfg = parse_config(text);
    const fs::path dir = resolve_output_dir(cfg, override_dir);
    const RunOutput out = execute(cfg);
    write_outputs(cfg, out, dir);
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const UnsupportedError& e) {
    err << "unsupported: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

int run_config_file(const fs::path& path, const std::optional<fs::path>& override_dir,
                    std::ostream& err) {
  std::ifstream in(path);
  if (!in) {
    err << "configuration error: config: cannot read " << path.string() << "\n";
    return kExitConfig;
  }
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return run_config_text(text, override_dir, err);
}

}  // namespace ocat
