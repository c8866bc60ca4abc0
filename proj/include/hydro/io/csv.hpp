#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace hydro::io {

/// Round-trip decimal formatting for doubles (shortest %.17g form that
/// parses back to the same bits would be ideal; %.17g is always exact).
std::string format_double(double v);

/// CSV emitter with a versioned schema comment on the first line:
///   # schema: <name> v<version>
/// followed by the header row. Cell values are written verbatim; use
/// format_double for numeric columns.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& schema_name, int version,
            const std::vector<std::string>& columns);

  void row(const std::vector<std::string>& cells);

  /// Flushes and closes; returns the path written.
  std::string close();

 private:
  std::ofstream out_;
  std::string path_;
  size_t n_columns_;
};

}  // namespace hydro::io
