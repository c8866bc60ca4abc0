#pragma once

#include <string>
#include <utility>
#include <vector>

namespace hydro::io {

/// Reproducibility record written next to every command's outputs.
/// Re-running with the same config hash and tool version must reproduce
/// identical output digests; only the timestamp may differ.
struct RunManifest {
  std::string command_line;
  std::string config_hash;
  std::string tool_version;
  std::string timestamp;  ///< ISO-8601 UTC
  std::vector<std::pair<std::string, std::string>> outputs;  ///< (path, sha256)
};

/// Current UTC time, ISO-8601.
std::string utc_timestamp();

/// Records a produced file (path relative to the output directory gets
/// hashed from disk).
void add_output(RunManifest& m, const std::string& path);

/// Writes <out_dir>/manifest.json.
void write_manifest(const std::string& out_dir, const RunManifest& m);

}  // namespace hydro::io
