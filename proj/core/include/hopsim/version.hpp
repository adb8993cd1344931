#pragma once

namespace hopsim {

inline constexpr const char* kVersion = "hopsim 0.1.0";

// Identity of the counter-based generator; recorded in every report so
// golden files state exactly which bit stream produced them.
inline constexpr const char* kRngName = "philox4x32-10";

}  // namespace hopsim
