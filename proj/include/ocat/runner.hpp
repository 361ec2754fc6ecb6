#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "ocat/config.hpp"

namespace ocat {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitConfig = 2, kExitNumerical = 3 };

struct Artifact {
  std::string name;
  std::string content;
};

struct RunOutput {
  std::vector<Artifact> files;
  nlohmann::json metadata;  // grid adequacy, model notes, derived scalars
  double compute_seconds = 0.0;
};

// Runs the configured study entirely in memory.
RunOutput execute(const RunConfig& cfg);

// Writes the artifacts and manifest.json into `out_dir`. Outputs are staged
// as temporaries and renamed; on failure everything written is removed.
void write_outputs(const RunConfig& cfg, const RunOutput& out, const std::filesystem::path& out_dir);

// Output directory precedence: explicit override, then $OCAT_OUTPUT_DIR, then
// the config's output_dir.
std::filesystem::path resolve_output_dir(const RunConfig& cfg,
                                         const std::optional<std::filesystem::path>& override_dir);

// Parse, execute and write; maps failures onto exit codes and reports them
// on `err`.
int run_config_text(std::string_view text,
                    const std::optional<std::filesystem::path>& override_dir, std::ostream& err);
int run_config_file(const std::filesystem::path& path,
                    const std::optional<std::filesystem::path>& override_dir, std::ostream& err);

std::string sha256_hex(std::string_view data);
std::string library_version();

}  // namespace ocat
