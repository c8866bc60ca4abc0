#pragma once

#include <string>

#include "hydro/params.hpp"
#include "hydro/transient.hpp"

namespace hydro::io {

/// Everything a run needs: unit parameters plus integration and
/// classification settings.
struct AppConfig {
  UnitParams params;
  IntegrationConfig integration;
  RegimeTolerances regime;
};

/// Built-in defaults (the bundled sayano-defaults.json carries the same
/// values).
AppConfig default_config();

/// Parses a JSON config document. Unspecified keys take default values;
/// unknown keys are rejected by name; all invariants are validated.
/// Keys beginning with "_" and the "provenance" block are ignored
/// annotations. Throws ParameterError naming the offending key.
AppConfig parse_config(const std::string& json_text);

/// Loads a config file. Throws Error if unreadable, ParameterError on
/// invalid content.
AppConfig load_config(const std::string& path);

/// Canonical JSON serialization (sorted keys, round-trip doubles). Equal
/// configs serialize to equal bytes, so the hash identifies the physics.
std::string serialize_config(const AppConfig& cfg);

/// SHA-256 of serialize_config.
std::string config_hash(const AppConfig& cfg);

}  // namespace hydro::io
