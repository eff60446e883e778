#pragma once

#include "mvn/montecarlo.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace mvn {

/// 64-bit FNV-1a hash, rendered as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& text);

/// One JSON file per simulated null distribution, named by the hash of
/// SimulationConfig::canonical(). A lookup only hits when the stored canonical
/// text and engine version match exactly.
class CriticalValueCache {
 public:
  explicit CriticalValueCache(std::filesystem::path directory);

  const std::filesystem::path& directory() const noexcept { return directory_; }
  std::filesystem::path path_for(const SimulationConfig& config) const;

  /// Returns the stored null distribution; corrupt or mismatched files are misses.
  std::optional<NullDistribution> load(const SimulationConfig& config) const;
  /// Writes atomically (temporary file then rename). Throws std::runtime_error on I/O failure.
  void store(const NullDistribution& null) const;

 private:
  std::filesystem::path directory_;
};

/// Loads from the cache when possible, otherwise simulates and stores.
/// `hit` (if given) reports whether the cache answered.
NullDistribution load_or_simulate(const SimulationConfig& config, const CriticalValueCache* cache,
                                  bool* hit = nullptr);

}  // namespace mvn
