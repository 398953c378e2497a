#pragma once

#include <string_view>

namespace wlansim {

inline constexpr std::string_view kEngineName = "wlansim";
inline constexpr std::string_view kEngineVersion = "0.1.0";

// Recorded in every run manifest so traces can be tied to the generator.
inline constexpr std::string_view kPrngAlgorithm = "splitmix64/fnv1a64-streams";

}  // namespace wlansim
