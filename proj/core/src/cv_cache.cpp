#include "mvn/cv_cache.hpp"

#include "mvn/version.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace mvn {

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

CriticalValueCache::CriticalValueCache(std::filesystem::path directory) : directory_(std::move(directory)) {}

std::filesystem::path CriticalValueCache::path_for(const SimulationConfig& config) const {
  return directory_ / ("cv-" + fnv1a_hex(config.canonical()) + ".json");
}

std::optional<NullDistribution> CriticalValueCache::load(const SimulationConfig& config) const {
  std::ifstream in(path_for(config));
  if (!in) return std::nullopt;
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    if (j.at("canonical").get<std::string>() != config.canonical()) return std::nullopt;
    if (j.at("engine_version").get<std::string>() != kEngineVersion) return std::nullopt;
    NullDistribution null;
    null.config = config;
    null.sorted = j.at("null_values").get<std::vector<double>>();
    null.nonconverged = j.at("nonconverged").get<std::int64_t>();
    null.wall_seconds = j.at("wall_seconds").get<double>();
    if (static_cast<std::int64_t>(null.sorted.size()) != config.replications) return std::nullopt;
    return null;
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
}

void CriticalValueCache::store(const NullDistribution& null) const {
  std::error_code ec;
  std::filesystem::create_directories(directory_, ec);
  if (ec) throw std::runtime_error("cannot create cache directory " + directory_.string() + ": " + ec.message());

  const CriticalValueRecord rec = critical_value(null);
  const SimulationConfig& c = null.config;
  nlohmann::json j;
  j["engine_version"] = kEngineVersion;
  j["canonical"] = c.canonical();
  j["config"] = {{"test", c.test.id()}, {"d", c.d},          {"n", c.n},
                 {"alpha", c.alpha},     {"replications", c.replications}, {"seed", c.seed}};
  j["quantile_rule"] = rec.quantile_rule;
  j["scale"] = rec.scale;
  j["upper"] = rec.upper;
  j["lower"] = rec.lower ? nlohmann::json(*rec.lower) : nlohmann::json(nullptr);
  j["table_quantile"] = rec.table_quantile;
  j["nonconverged"] = null.nonconverged;
  j["wall_seconds"] = null.wall_seconds;
  j["created_unix"] = static_cast<std::int64_t>(std::time(nullptr));
  j["null_values"] = null.sorted;

  const auto target = path_for(c);
  auto tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << j.dump(1) << '\n';
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, target, ec);
  if (ec) throw std::runtime_error("cannot move " + tmp.string() + " into place: " + ec.message());
}

NullDistribution load_or_simulate(const SimulationConfig& config, const CriticalValueCache* cache, bool* hit) {
  config.validate();
  if (cache) {
    if (auto stored = cache->load(config)) {
      stored->config.threads = config.threads;
      if (hit) *hit = true;
      return std::move(*stored);
    }
  }
  if (hit) *hit = false;
  NullDistribution null = simulate_null(config);
  if (cache) cache->store(null);
  return null;
}

}  // namespace mvn
