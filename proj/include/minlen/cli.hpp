#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "minlen/perturbation.hpp"
#include "minlen/spectrum.hpp"

namespace minlen::cli {

/// Ordered key -> raw value pairs of a flat dotted-key configuration.
using KeyValues = std::map<std::string, std::string>;

/**
 * Parses `key = value` lines. Blank lines and lines starting with '#' are
 * ignored; trailing "# ..." comments are stripped. Throws ConfigError on a
 * line without '=' or with an empty key.
 */
KeyValues parse_key_values(std::string_view text);

/// Applies one `key=value` override.
void apply_override(KeyValues& kv, std::string_view assignment);

struct ParticleConfig {
  double mass = 1.0;
  DeformationKind kind = DeformationKind::Cutoff;
  std::optional<double> b;
  std::optional<double> beta;
  /// Mass-scaling rule b = eta * mass; used when neither b nor beta is given.
  std::optional<double> eta;
  /// CSV file of (p, g) rows for custom families.
  std::string table;

  bool operator==(const ParticleConfig&) const = default;
};

enum class InteractionKind { Delta, Coulomb };
enum class OutputFormat { Csv, Json };

struct RunConfig {
  ParticleConfig particle1;
  ParticleConfig particle2;
  double hbar = 1.0;

  InteractionKind interaction = InteractionKind::Delta;
  double U0 = 1.0;
  double alpha = 1.0;
  double delta = 0.5;

  double p0 = 0.0;
  std::vector<double> p0_grid;
  std::optional<int> n;
  std::optional<int> n_max;
  double tol = 1e-12;
  std::size_t grid_size = 2048;

  SeriesFamily series_family = SeriesFamily::Cutoff;
  std::vector<double> series_sweep;
  /// Highest series order included in E_series.
  int series_terms = 2;
  Transcription transcription = Transcription::Corrected;

  OutputFormat format = OutputFormat::Csv;
  std::string output_path;

  bool operator==(const RunConfig&) const = default;
};

/// Typed configuration; throws ConfigError for unknown keys or invalid values.
RunConfig to_run_config(const KeyValues& kv);
/// Canonical text that to_run_config(parse_key_values(.)) maps back to `config`.
std::string dump_config(const RunConfig& config);

/// Reads a file into a string; ConfigError if it cannot be opened.
std::string read_file(const std::string& path);

TwoBodySystem build_system(const RunConfig& config);
Interaction build_interaction(const RunConfig& config);

/// Exit codes of the command runners.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNoBoundState = 2;

int cmd_solve(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_scan(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_wavefunction(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_series_compare(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full command line front end; never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// 17 significant digits, "." decimal separator, locale independent.
std::string format_double(double value);

} // namespace minlen::cli
