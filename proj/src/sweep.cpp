#include "ringbind/sweep.hpp"

#include <cmath>
#include <string>

namespace ringbind {

SweepResult sweep(const ReducedParams& p, const std::vector<double>& concs_uM, double n0,
                  const LatticeSpec& spec, Engine engine) {
  for (std::size_t i = 1; i < concs_uM.size(); ++i)
    if (!(concs_uM[i - 1] < concs_uM[i]))
      throw ConfigError("concentrations must be strictly ascending, got " +
                        std::to_string(concs_uM[i - 1]) + " before " +
                        std::to_string(concs_uM[i]));

  SweepResult result;
  result.ring_len = spec.ring_len();
  result.n0 = n0;
  result.engine = engine;

  // For the transfer engine the weight table is concentration-independent;
  // compute it once and reweight per row.
  if (engine == Engine::transfer_dp && !concs_uM.empty()) {
    const CountResolvedWeights weights = count_resolved_weights(p, spec);
    for (double conc : concs_uM) {
      const Bath bath = bath_from_conc(conc, n0, spec);
      result.rows.push_back(SweepRow{conc, bath.n_total, distribution_from_weights(weights, bath)});
    }
    return result;
  }
  for (double conc : concs_uM) {
    const Bath bath = bath_from_conc(conc, n0, spec);
    result.rows.push_back(SweepRow{conc, bath.n_total, compute_distribution(engine, p, bath, spec)});
  }
  return result;
}

std::vector<double> log_spaced(double lo_uM, double hi_uM, int points) {
  if (points < 2) throw ConfigError("a log grid needs at least 2 points");
  if (!(lo_uM > 0) || !(hi_uM > lo_uM))
    throw ConfigError("a log grid needs 0 < low < high, got [" + std::to_string(lo_uM) + ", " +
                      std::to_string(hi_uM) + "]");
  std::vector<double> grid(static_cast<std::size_t>(points));
  const double la = std::log(lo_uM);
  const double lb = std::log(hi_uM);
  for (int i = 0; i < points; ++i)
    grid[static_cast<std::size_t>(i)] = std::exp(la + (lb - la) * i / (points - 1));
  grid.front() = lo_uM;
  grid.back() = hi_uM;
  return grid;
}

CrossoverResult find_mode_crossover(const ReducedParams& p, double n0, const LatticeSpec& spec,
                                    double lo_uM, double hi_uM, Engine engine,
                                    double resolution_uM) {
  if (!(lo_uM < hi_uM))
    throw ConfigError("crossover bracket needs lo < hi, got [" + std::to_string(lo_uM) + ", " +
                      std::to_string(hi_uM) + "]");
  if (!(resolution_uM > 0)) throw ConfigError("crossover resolution must be positive");

  // One weight table serves every probe when the transfer engine is in play.
  CountResolvedWeights weights;
  const bool use_dp = engine == Engine::transfer_dp;
  if (use_dp) weights = count_resolved_weights(p, spec);
  const auto mode_at = [&](double conc) {
    const Bath bath = bath_from_conc(conc, n0, spec);
    return use_dp ? distribution_from_weights(weights, bath).mode_all
                  : occupancy_distribution(p, bath, spec).mode_all;
  };

  const int mode_low = mode_at(lo_uM);
  const int mode_high = mode_at(hi_uM);
  if (mode_low == mode_high)
    throw NotFoundError("mode_all is " + std::to_string(mode_low) +
                        " at both bracket ends; no crossover inside [" + std::to_string(lo_uM) +
                        ", " + std::to_string(hi_uM) + "] uM");

  double lo = lo_uM, hi = hi_uM;
  while (hi - lo > resolution_uM) {
    const double mid = 0.5 * (lo + hi);
    if (mode_at(mid) == mode_low)
      lo = mid;
    else
      hi = mid;
  }
  return CrossoverResult{hi, mode_low, mode_high, lo, hi};
}

}  // namespace ringbind
