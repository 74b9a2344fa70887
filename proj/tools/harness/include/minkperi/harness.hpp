#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace minkperi::harness {

// Stable process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitInvalidInput = 2,
  kExitResource = 3,
};

// Flags shared by every subcommand; unset values fall back to the config
// file and then to the suite defaults.
struct RunOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
  std::optional<std::size_t> trials;
  std::optional<double> h;
  std::optional<double> r;
  std::optional<double> alpha;
  std::optional<double> m;
  std::optional<std::string> mode;
};

struct ExperimentManifest {
  std::string command;
  std::optional<std::filesystem::path> config_path;
  std::optional<std::uint64_t> seed;
  std::filesystem::path output_dir;
  std::string tool_version;
  std::map<std::string, std::string> input_hashes;  // path -> sha256
  std::string timestamp;                            // UTC, ISO 8601
};

std::string tool_version();
std::string manifest_json(const ExperimentManifest& manifest);
// Creates the directory and writes manifest.json into it.
void write_manifest(const ExperimentManifest& manifest);

// Each command reports to `out` (results) and `err` (diagnostics) and
// returns an ExitCode; library errors are mapped, never propagated.
int cmd_measure(const std::filesystem::path& shape_file, const RunOptions& opts, std::ostream& out,
                std::ostream& err);
// suite: iso, bm, bounds, cylinder, potential-gap.
int cmd_verify(const std::string& suite, const RunOptions& opts, std::ostream& out,
               std::ostream& err);
int cmd_optimize(const RunOptions& opts, std::ostream& out, std::ostream& err);
// opts.mode: small or large.
int cmd_sweep(const RunOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace minkperi::harness
