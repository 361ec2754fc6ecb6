#include "ocat/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "ocat/errors.hpp"
#include "ocat/spectral.hpp"

namespace ocat {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_number(const std::string& field, const std::string& raw) {
  const std::string s = trim(raw);
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ConfigError(field, "cannot parse '" + raw + "' as a number");
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) throw ConfigError(field, "must be finite");
  }
  return value;
}

template <class T>
std::vector<T> parse_list(const std::string& field, const std::string& raw) {
  std::vector<T> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<T>(field, item));
  if (out.empty()) throw ConfigError(field, "empty list");
  return out;
}

// Key/value block with tracking of consumed keys so that typos surface as
// errors instead of being silently ignored.
class Block {
 public:
  Block(std::string name, std::map<std::string, std::string> kv)
      : name_(std::move(name)), kv_(std::move(kv)) {}

  bool has(const std::string& key) const { return kv_.count(key) != 0; }

  std::string text(const std::string& key, std::string fallback) {
    used_.insert(key);
    auto it = kv_.find(key);
    return it == kv_.end() ? fallback : trim(it->second);
  }
  std::string text(const std::string& key) {
    if (!has(key)) throw ConfigError(key, "missing required key in [" + name_ + "]");
    return text(key, "");
  }
  template <class T>
  T number(const std::string& key, T fallback) {
    return has(key) ? number<T>(key) : (used_.insert(key), fallback);
  }
  template <class T>
  T number(const std::string& key) {
    return parse_number<T>(key, text(key));
  }
  template <class T>
  std::vector<T> list(const std::string& key) {
    return parse_list<T>(key, text(key));
  }

  void finish() const {
    for (const auto& [k, v] : kv_)
      if (!used_.count(k)) throw ConfigError(k, "unknown key in [" + name_ + "]");
  }

 private:
  std::string name_;
  std::map<std::string, std::string> kv_;
  std::set<std::string> used_;
};

PotentialSpec read_potential(Block& b, double default_center) {
  PotentialSpec p;
  p.shape = parse_shape(b.text("shape", "square_well"));
  p.strength = b.number<double>("strength");
  p.range = b.number<double>("range", 1.0);
  p.center = b.number<double>("center", default_center);
  if (!(p.range > 0.0)) throw ConfigError("range", "must be positive");
  return p;
}

void check_ladder(const std::vector<int>& n, std::size_t min_size) {
  if (n.size() < min_size)
    throw ConfigError("n_values", "need at least " + std::to_string(min_size) + " values");
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] < 1) throw ConfigError("n_values", "particle numbers must be positive");
    if (i > 0 && n[i] <= n[i - 1])
      throw ConfigError("n_values", "particle numbers must be strictly ascending");
  }
}

ScanModel read_model(Block& b) {
  ScanModel m;
  m.geometry = parse_geometry(b.text("geometry", "radial_swave"));
  m.potential = read_potential(b, 0.0);
  m.density = b.number<double>("density", 1.0);
  m.points_per_scale = b.number<double>("points_per_scale", kDefaultPointsPerScale);
  m.center_fraction = b.number<double>("center_fraction", 0.5);
  resolution_spacing(m.potential.range, m.density, m.points_per_scale);
  return m;
}

// Checks every grid of a fixed-density ladder before anything is solved.
void check_model_grids(const ScanModel& m, const std::vector<int>& n_values, int extra_levels) {
  const double h_max = resolution_spacing(m.potential.range, m.density, m.points_per_scale);
  for (int n : n_values) {
    const double length = n / m.density;
    const Grid grid = grid_for_spacing(length, h_max, m.geometry);
    PotentialSpec pot = m.potential;
    pot.center = m.geometry == Geometry::RadialSwave ? 0.0 : m.center_fraction * length;
    validate_potential(pot, grid);
    require_adequate_grid(grid, pot, n);
    if (n + extra_levels > grid.n_points())
      throw ConfigError("n_values", "N plus window exceeds the grid size");
  }
}

Job read_spectrum(Block& b) {
  SpectrumJob j;
  j.geometry = parse_geometry(b.text("geometry", "radial_swave"));
  j.length = b.number<double>("length");
  j.n_points = b.number<int>("n_points");
  const Grid grid(j.length, j.n_points, j.geometry);
  j.potential = read_potential(b, j.geometry == Geometry::RadialSwave ? 0.0 : 0.5 * j.length);
  validate_potential(j.potential, grid);
  j.n_eigenpairs = b.number<int>("n_eigenpairs");
  if (j.n_eigenpairs < 1 || j.n_eigenpairs > j.n_points)
    throw ConfigError("n_eigenpairs", "must lie in [1, n_points]");
  j.n_fermions = b.number<int>("n_fermions", j.n_eigenpairs);
  if (j.n_fermions < 1 || j.n_fermions > j.n_eigenpairs)
    throw ConfigError("n_fermions", "must lie in [1, n_eigenpairs]");
  require_adequate_grid(grid, j.potential, j.n_fermions);
  return j;
}

Job read_overlap_scan(Block& b) {
  OverlapScanJob j;
  j.model = read_model(b);
  j.n_values = b.list<int>("n_values");
  check_ladder(j.n_values, kMinFitPoints);
  check_model_grids(j.model, j.n_values, 0);
  return j;
}

Job read_coefficient_scan(Block& b) {
  CoefficientScanJob j;
  j.model = read_model(b);
  j.n_values = b.list<int>("n_values");
  check_ladder(j.n_values, 1);
  j.excitation_order = b.number<int>("excitation_order", 2);
  if (j.excitation_order < 0 || j.excitation_order > kMaxExcitationOrder)
    throw ConfigError("excitation_order", "must be 0, 1 or 2");
  j.window = b.number<int>("window", 0);
  if (j.window < 0) throw ConfigError("window", "must be non-negative");
  int widest = 0;
  for (int n : j.n_values) widest = std::max(widest, j.window > 0 ? j.window : 2 * n);
  check_model_grids(j.model, j.n_values, widest);
  return j;
}

Job read_site_overlap(Block& b) {
  SiteOverlapJob j;
  auto& l = j.ladder;
  const auto p = read_potential(b, 0.0);
  l.shape = p.shape;
  l.strength = p.strength;
  l.range = p.range;
  const std::string placement = b.text("site_placement", "fractional");
  if (placement != "fractional" && placement != "absolute")
    throw ConfigError("site_placement", "must be 'fractional' or 'absolute'");
  l.fractional_sites = placement == "fractional";
  l.site_a = b.number<double>("site_a");
  l.site_b = b.number<double>("site_b");
  l.density = b.number<double>("density", 1.0);
  l.points_per_scale = b.number<double>("points_per_scale", kDefaultPointsPerScale);
  j.n_values = b.list<int>("n_values");
  check_ladder(j.n_values, 1);
  const double h_max = resolution_spacing(l.range, l.density, l.points_per_scale);
  for (int n : j.n_values) {
    const double length = n / l.density;
    const Grid grid = grid_for_spacing(length, h_max, Geometry::LinearBox);
    const double ra = l.fractional_sites ? l.site_a * length : l.site_a;
    const double rb = l.fractional_sites ? l.site_b * length : l.site_b;
    validate_potential({l.shape, l.strength, l.range, ra}, grid);
    try {
      validate_potential({l.shape, l.strength, l.range, rb}, grid);
    } catch (const ConfigError& e) {
      throw ConfigError("site_b", e.what());
    }
    const double sep = std::abs(ra - rb);
    if (sep > 0.0 && sep < 4.0 * l.range)
      throw ConfigError("site_b", "sites closer than 4 r0 at N=" + std::to_string(n));
    require_adequate_grid(grid, PotentialSpec{l.shape, l.strength, l.range, ra}, n);
  }
  return j;
}

Job read_kinetics(Block& b) {
  const std::string study = b.text("study");
  if (study == "nucleation") {
    NucleationJob j;
    j.params.surface_tension = b.number<double>("sigma");
    j.params.bulk_drive = b.number<double>("dg");
    j.params.temperature = b.number<double>("kT");
    j.params.contact_angle = std::numbers::pi;
    j.theta_points = b.number<int>("theta_points", 181);
    if (j.theta_points < 2) throw ConfigError("theta_points", "need at least 2 angles");
    validate(j.params);
    return j;
  }
  if (study == "wkb") {
    WkbJob j;
    j.barrier_shape = b.text("barrier_shape", "parabolic");
    j.height = b.number<double>("height");
    j.width = b.number<double>("width");
    j.domain = b.number<double>("domain", 4.0 * j.width);
    j.energy = b.number<double>("energy", 0.0);
    j.attempt_frequency = b.number<double>("attempt_frequency", 1.0);
    j.segments = b.number<int>("segments", 400);
    j.reductions = b.list<double>("reductions");
    for (double r : j.reductions)
      if (!(r >= 0.0 && r < 1.0)) throw ConfigError("reductions", "each must lie in [0, 1)");
    if (j.barrier_shape != "parabolic" && j.barrier_shape != "rectangular")
      throw ConfigError("barrier_shape", "must be 'parabolic' or 'rectangular'");
    for (double r : j.reductions) {
      const double h = j.height * (1.0 - r);
      const double start = 0.5 * (j.domain - j.width);
      const auto profile =
          j.barrier_shape == "rectangular"
              ? rectangular_barrier(h, j.width, start, j.domain, j.energy, j.attempt_frequency)
              : parabolic_barrier(h, j.width, 0.5 * j.domain, j.domain, j.segments, j.energy,
                                  j.attempt_frequency);
      try {
        barrier_interval(profile);
      } catch (const NumericalError& e) {
        throw ConfigError("height", e.what());
      }
    }
    return j;
  }
  throw ConfigError("study", "must be 'nucleation' or 'wkb'");
}

Job read_avalanche(Block& b, std::uint64_t seed) {
  AvalancheJob j;
  j.params.alpha = b.number<double>("alpha");
  j.params.gap = b.number<double>("gap");
  j.params.n_initial = b.number<int>("n_initial", 1);
  j.params.trials = b.number<std::int64_t>("trials");
  j.params.seed = seed;
  j.threshold = b.number<std::int64_t>("threshold", 1);
  j.bin_width = b.number<int>("bin_width", 1);
  validate(j.params);
  if (j.threshold < 1) throw ConfigError("threshold", "must be at least 1");
  if (j.bin_width < 1) throw ConfigError("bin_width", "must be at least 1");
  return j;
}

const std::set<std::string> kSections = {"spectrum",     "overlap-scan", "coefficient-scan",
                                         "site-overlap", "kinetics",     "avalanche"};

}  // namespace

RunConfig parse_config(std::string_view text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config", std::string("malformed config: ") + e.message() + " at line " +
                                    std::to_string(e.line()));
  }

  RunConfig cfg;
  std::vector<std::string> sections;
  for (const auto& [key, node] : tree) {
    if (node.empty() && !kSections.count(key)) {
      cfg.globals[key] = node.data();
      continue;
    }
    if (!kSections.count(key)) throw ConfigError(key, "unknown section");
    sections.push_back(key);
  }
  if (sections.size() != 1)
    throw ConfigError("section", "exactly one study section is required, found " +
                                     std::to_string(sections.size()));

  Block globals("global", cfg.globals);
  cfg.format_version = globals.number<int>("format_version", kFormatVersion);
  if (cfg.format_version != kFormatVersion)
    throw ConfigError("format_version", "unsupported version " +
                                            std::to_string(cfg.format_version));
  cfg.output_dir = globals.text("output_dir", "");
  cfg.rng_seed = globals.number<std::uint64_t>("rng_seed", 0);
  cfg.threads = globals.number<unsigned>("threads", 1);
  if (cfg.threads < 1) throw ConfigError("threads", "must be at least 1");
  globals.finish();

  cfg.section = sections.front();
  for (const auto& [k, v] : tree.get_child(cfg.section)) {
    if (!v.empty()) throw ConfigError(k, "nested keys are not supported");
    cfg.params[k] = v.data();
  }
  Block b(cfg.section, cfg.params);
  if (cfg.section == "spectrum")
    cfg.job = read_spectrum(b);
  else if (cfg.section == "overlap-scan")
    cfg.job = read_overlap_scan(b);
  else if (cfg.section == "coefficient-scan")
    cfg.job = read_coefficient_scan(b);
  else if (cfg.section == "site-overlap")
    cfg.job = read_site_overlap(b);
  else if (cfg.section == "kinetics")
    cfg.job = read_kinetics(b);
  else
    cfg.job = read_avalanche(b, cfg.rng_seed);
  b.finish();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace ocat
