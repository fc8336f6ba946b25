#pragma once

// Scenario configs, the built-in registry and the run/verify pipelines behind
// the sdwave command line tool.

#include <sdwave/lattice.hpp>
#include <sdwave/speed_profile.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sdwave::experiments {

/// Bumped whenever the layout of the emitted CSVs changes.
inline constexpr int kFormatVersion = 1;

enum ExitCode : int {
  exit_ok = 0,
  exit_verdict_failed = 1,
  exit_config_error = 2,
  exit_validation_error = 3,
  exit_numerical_error = 4,
};

/// The config text does not parse.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The config parses but does not describe a runnable scenario.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Section = std::map<std::string, std::string>;

/// INI text as sorted sections of sorted keys. Relative file references are
/// resolved against base_dir.
struct Config {
  std::map<std::string, Section> sections;
  std::filesystem::path base_dir;

  /// "[section]\nkey = value\n..." in sorted order; the hashed form.
  [[nodiscard]] std::string canonical() const;
  void set(const std::string& section, const std::string& key, const std::string& value);
};

Config parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
Config load_config(const std::filesystem::path& path);

enum class Task { simulate, certify_gec, certify_lambda, gevrey_gate, hypotheses };

std::string to_string(Task task);

enum class DataKind { none, delta, box, gevrey36, gevrey37, csv };

struct DataSpec {
  DataKind kind = DataKind::none;
  int dim = 1;
  double u0_amplitude = 0.0;
  double u1_amplitude = 1.0;
  int width = 2;
  double m0 = 8.0;
  double rho = 1.0;
  double kappa = 2.0;
  int truncation = 128;
  /// Rows "u0|u1,k_1[,k_2,k_3],re,im"; the file contents are part of the hash.
  std::filesystem::path csv_path;
  std::string csv_contents;
};

struct SolverSpec {
  double tol = 1e-10;
  double horizon = 1e3;
  int grid = 64;
  int per_decade = 32;
};

struct Scenario {
  std::string name;
  std::string tag;
  std::string description;
  Task task = Task::simulate;
  Section profile_params;
  SpeedProfile profile = SpeedProfile::constant({});
  DataSpec data;
  SolverSpec solver;
  Section certificate;
  Section gevrey;
  Section hypotheses;
  Section expect;
  std::uint64_t hash = 0;
};

/// Throws ValidationError when a family, key or value is not acceptable.
Scenario make_scenario(const Config& config);

/// FNV-1a over the canonical config (plus any data file contents).
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hash_hex(std::uint64_t hash);

struct Verdict {
  std::string check;
  double measured = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct RunReport {
  std::string scenario;
  std::filesystem::path out_dir;
  std::vector<std::filesystem::path> files;
  std::vector<Verdict> verdicts;
  double seconds = 0.0;

  [[nodiscard]] bool has_verdict() const noexcept { return !verdicts.empty(); }
  [[nodiscard]] bool pass() const;
};

struct RunOptions {
  std::filesystem::path out_root = "sdwave-out";
  int threads = 1;
};

/// Executes the scenario's task and writes its CSVs into
/// out_root / (name + "-" + hash). Module failures propagate as exceptions.
RunReport run(const Scenario& scenario, const RunOptions& opts);

/// Hypothesis verification only, for any task.
RunReport verify(const Scenario& scenario, const RunOptions& opts);

/// Maps the exception currently being handled to an exit code and message.
int classify_current_exception(std::string& message);

struct CatalogEntry {
  std::string name;
  std::string tag;
  std::string description;
  std::string_view config;
};

/// Empty when built with SDWAVE_BUILTIN_SCENARIOS=OFF.
const std::vector<CatalogEntry>& builtin_scenarios();
std::optional<Config> builtin_config(std::string_view name);

/// A path to an INI file, or the name of a built-in scenario.
Config resolve_config(const std::string& reference);

}  // namespace sdwave::experiments
