#pragma once

// Run configuration documents.
//
// A configuration is a JSON object with the sections `lattice`, `initial`,
// `nonlinearity`, `run`, `output` and, for sweeps only, `sweep`. Every key
// is checked; unknown keys are errors. See README.md for the schema.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qwalk/dynamics.hpp"
#include "qwalk/errors.hpp"

namespace qwalk::config {

/// Invalid configuration. `field` is a dotted path ("lattice.L"); `line` is
/// set for syntax errors.
class ConfigError : public ValidationError {
 public:
  ConfigError(std::string message, std::string field, std::optional<std::size_t> line = {});
  const std::string& field() const noexcept { return field_; }
  std::optional<std::size_t> line() const noexcept { return line_; }

 private:
  std::string field_;
  std::optional<std::size_t> line_;
};

struct OutputSpec {
  std::filesystem::path directory;  ///< empty: caller picks a default
  bool csv = true;
  bool ndjson = true;
};

struct SweepAxis {
  std::string path;  ///< dotted key, e.g. "nonlinearity.kappa"
  std::vector<nlohmann::json> values;
};

struct Document {
  RunConfig run;
  OutputSpec output;
  std::vector<SweepAxis> sweep;
  std::vector<std::string> warnings;
  /// Input with defaults filled in; reparsing it reproduces `run`.
  nlohmann::json resolved;
};

/// Parses JSON text. Relative file references resolve against `base_dir`.
/// Throws ConfigError.
Document parse(std::string_view text, const std::filesystem::path& base_dir = {});

/// Parses an already-decoded document.
Document parse_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});

Document load(const std::filesystem::path& path);

/// Decodes JSON text, reporting syntax errors with their line number.
nlohmann::json decode(std::string_view text);
nlohmann::json read_file(const std::filesystem::path& path);

/// Only the `lattice` section of `doc`; other sections are ignored. theta0 = 0
/// gives an all-zero profile (no walls).
ProfileSpec parse_lattice(const nlohmann::json& doc, std::vector<std::string>& warnings);

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "QWALK_OUTPUT_DIR";

/// CLI override, then config, then $QWALK_OUTPUT_DIR/<fallback_name>, then
/// ./<fallback_name>.
std::filesystem::path resolve_output_dir(const std::optional<std::filesystem::path>& cli,
                                         const OutputSpec& spec, std::string_view fallback_name);

/// Cartesian product of the sweep axes applied to `base` (the raw input
/// document with its `sweep` section). Each entry is a complete config.
std::vector<nlohmann::json> expand_sweep(const nlohmann::json& base,
                                         const std::vector<SweepAxis>& axes);

std::string_view to_string(InitialKind kind) noexcept;

}  // namespace qwalk::config
