#include "qbl/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "qbl/error.hpp"

namespace qbl {

std::string fmt_g17(double value) {
  char buffer[48];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::string fmt_opt(double value) { return std::isnan(value) ? std::string{} : fmt_g17(value); }

void ensure_directory(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  require(!ec, ErrorKind::Io, "cannot create directory " + path + ": " + ec.message());
}

}  // namespace qbl
