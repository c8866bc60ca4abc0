#include "hydro/io/manifest.hpp"

#include <ctime>
#include <fstream>
#include <json.hpp>

#include "hydro/errors.hpp"
#include "hydro/io/sha256.hpp"

namespace hydro::io {

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

void add_output(RunManifest& m, const std::string& path) {
  m.outputs.emplace_back(path, sha256_file(path));
}

void write_manifest(const std::string& out_dir, const RunManifest& m) {
  nlohmann::json doc;
  doc["command_line"] = m.command_line;
  doc["config_hash"] = m.config_hash;
  doc["tool_version"] = m.tool_version;
  doc["timestamp"] = m.timestamp;
  nlohmann::json outs = nlohmann::json::array();
  for (const auto& [path, digest] : m.outputs) {
    outs.push_back({{"path", path}, {"sha256", digest}});
  }
  doc["outputs"] = outs;

  const std::string path = out_dir + "/manifest.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("manifest: cannot open " + path);
  out << doc.dump(2) << "\n";
  if (!out) throw Error("manifest: write failure on " + path);
}

}  // namespace hydro::io
