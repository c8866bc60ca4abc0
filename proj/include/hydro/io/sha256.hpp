#pragma once

#include <string>
#include <string_view>

namespace hydro::io {

/// SHA-256 digest of a byte string, lowercase hex.
std::string sha256_hex(std::string_view data);

/// SHA-256 digest of a file's contents. Throws hydro::Error if the file
/// cannot be read.
std::string sha256_file(const std::string& path);

}  // namespace hydro::io
