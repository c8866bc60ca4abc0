#include "hydro/io/csv.hpp"

#include <cstdio>

#include "hydro/errors.hpp"

namespace hydro::io {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::string& schema_name,
                     int version, const std::vector<std::string>& columns)
    : out_(path, std::ios::binary), path_(path), n_columns_(columns.size()) {
  if (!out_) throw Error("CsvWriter: cannot open " + path);
  out_ << "# schema: " << schema_name << " v" << version << "\n";
  for (size_t i = 0; i < columns.size(); ++i) {
    out_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
  }
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != n_columns_) {
    throw Error("CsvWriter: row width mismatch in " + path_);
  }
  for (size_t i = 0; i < cells.size(); ++i) {
    out_ << cells[i] << (i + 1 < cells.size() ? "," : "\n");
  }
}

std::string CsvWriter::close() {
  out_.close();
  if (!out_) throw Error("CsvWriter: write failure on " + path_);
  return path_;
}

}  // namespace hydro::io
