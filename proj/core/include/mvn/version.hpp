#pragma once

namespace mvn {

inline constexpr const char* kLibraryVersion = "0.3.0";
/// Bumped whenever simulated values could change for a fixed configuration.
inline constexpr const char* kEngineVersion = "mvn-engine-2";

}  // namespace mvn
