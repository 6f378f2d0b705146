#pragma once

namespace qbl {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qbl
