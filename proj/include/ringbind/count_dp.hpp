#pragma once

#include <vector>

#include "ringbind/energy.hpp"
#include "ringbind/ensemble.hpp"
#include "ringbind/lattice.hpp"

namespace ringbind {

// Count-resolved partition sums: log_omega[n] is the log of the summed
// Boltzmann factors exp(-(site interaction energy)) over all configurations
// with exactly n bound sites. The bath term gamma0 * ln(N - n) depends only
// on n, so one weight table serves every concentration; gamma0 travels with
// the table for that reweighting.
struct CountResolvedWeights {
  int ring_len = 0;
  double gamma0 = 0;
  std::vector<double> log_omega;  // indices 0..M

  int total_sites() const { return 2 * ring_len; }
};

// Computes the weight table by a transfer scan over mirror-site columns in
// O(R * 16 * M * 4) log-space operations, never touching the 2^M states.
// With all site parameters zero, omega_n recovers the binomial counts.
CountResolvedWeights count_resolved_weights(const ReducedParams& p, const LatticeSpec& spec);

// Occupancy summary from a weight table and a bath. The per-configuration
// dominant state is not derivable from count-level sums, so that field stays
// empty.
OccupancyDistribution distribution_from_weights(const CountResolvedWeights& w, const Bath& bath);

// Convenience composition of the two steps above; same contract as
// occupancy_distribution up to the missing dominant state.
OccupancyDistribution distribution_via_dp(const ReducedParams& p, const Bath& bath,
                                          const LatticeSpec& spec);

}  // namespace ringbind
