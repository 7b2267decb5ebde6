#pragma once

namespace melotype {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace melotype
