#pragma once

#include <string>
#include <string_view>

#include "ringbind/count_dp.hpp"
#include "ringbind/ensemble.hpp"

namespace ringbind {

// The two routes to the same occupancy distribution. Enumeration sees every
// configuration (and so can report dominant states) but costs 2^M; the
// transfer engine scales to large rings and recovers everything except
// per-configuration detail.
enum class Engine { enumeration, transfer_dp };

// Enumeration while it is cheap (M <= 16), transfer beyond.
inline Engine default_engine(const LatticeSpec& spec) {
  return spec.total_sites() <= 16 ? Engine::enumeration : Engine::transfer_dp;
}

inline OccupancyDistribution compute_distribution(Engine engine, const ReducedParams& p,
                                                  const Bath& bath, const LatticeSpec& spec) {
  return engine == Engine::enumeration ? occupancy_distribution(p, bath, spec)
                                       : distribution_via_dp(p, bath, spec);
}

inline std::string engine_name(Engine engine) {
  return engine == Engine::enumeration ? "enum" : "dp";
}

inline Engine engine_from_name(std::string_view name) {
  if (name == "enum") return Engine::enumeration;
  if (name == "dp") return Engine::transfer_dp;
  throw ConfigError("unknown engine \"" + std::string(name) + "\", expected enum or dp");
}

}  // namespace ringbind
