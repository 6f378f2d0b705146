#pragma once

#include <string>

namespace qbl {

// Round-trip decimal formatting (17 significant digits) for all numeric CSV
// output, so downstream fits see bit-identical values.
std::string fmt_g17(double value);

// Returns "" for NaN; used for optional record fields in CSV.
std::string fmt_opt(double value);

void ensure_directory(const std::string& path);

}  // namespace qbl
