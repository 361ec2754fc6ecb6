#pragma once

// Declarative run configuration: flat `key = value` lines grouped under one
// `[section]` naming the study. Global keys (before any section):
//   format_version, output_dir, rng_seed, threads

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ocat/avalanche.hpp"
#include "ocat/grid_potential.hpp"
#include "ocat/kinetics.hpp"
#include "ocat/overlap.hpp"

namespace ocat {

inline constexpr int kFormatVersion = 1;

struct SpectrumJob {
  Geometry geometry = Geometry::RadialSwave;
  double length = 40.0;
  int n_points = 1599;
  PotentialSpec potential;
  int n_eigenpairs = 40;
  int n_fermions = 40;  // Fermi level for the adequacy rule and delta_F
};

struct OverlapScanJob {
  ScanModel model;
  std::vector<int> n_values;
};

struct CoefficientScanJob {
  ScanModel model;
  std::vector<int> n_values;
  int excitation_order = 2;
  int window = 0;  // 0 = 2N
};

struct SiteOverlapJob {
  SiteLadder ladder;
  std::vector<int> n_values;
};

struct NucleationJob {
  NucleationParams params;
  int theta_points = 181;
};

struct WkbJob {
  std::string barrier_shape = "parabolic";  // or "rectangular"
  double height = 100.0;
  double width = 5.0;
  double domain = 20.0;
  double energy = 0.0;
  double attempt_frequency = 1.0;
  int segments = 400;
  std::vector<double> reductions;  // fractional barrier-height reductions
};

struct AvalancheJob {
  AvalancheParams params;
  std::int64_t threshold = 1;
  int bin_width = 1;
};

using Job = std::variant<SpectrumJob, OverlapScanJob, CoefficientScanJob, SiteOverlapJob,
                         NucleationJob, WkbJob, AvalancheJob>;

struct RunConfig {
  int format_version = kFormatVersion;
  std::filesystem::path output_dir;
  std::uint64_t rng_seed = 0;
  unsigned threads = 1;
  std::string section;                       // active study block
  std::map<std::string, std::string> globals;  // echo of the raw text
  std::map<std::string, std::string> params;
  Job job;
};

// Parses and fully validates a configuration. Throws ConfigError naming the
// offending field.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace ocat
