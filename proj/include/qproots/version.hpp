#pragma once

namespace qproots {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qproots
