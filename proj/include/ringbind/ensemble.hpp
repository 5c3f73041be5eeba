#pragma once

#include <optional>
#include <vector>

#include "ringbind/energy.hpp"
#include "ringbind/lattice.hpp"

namespace ringbind {

// Exhaustive enumeration over all 2^M configurations is the reference
// engine; it is kept practical up to this many sites. Larger lattices go
// through the count-resolved transfer computation instead.
inline constexpr int kMaxEnumerationSites = 20;

// Equilibrium occupancy summary at one bath condition.
struct OccupancyDistribution {
  std::vector<double> p_n;  // P(n bound), indices 0..M
  double mean_n = 0;
  int mode_all = 0;      // argmax of p_n over n = 0..M, ties to the smaller n
  int mode_nonzero = 1;  // argmax of p_n over n = 1..M, ties to the smaller n
  // Least-index canonical form of the minimum-energy configuration. Only the
  // enumeration engine sees individual configurations; the transfer engine
  // leaves this empty.
  std::optional<MicroState> dominant_state;
  bool dominant_tie = false;  // a different orbit matches the minimum energy
  int total_sites = 0;
};

// Boltzmann weight of every configuration, indexed by k-1, normalized to
// sum to 1. Exponentials are shifted by the minimum energy so the weights
// stay representable at any bath size. Infinite-energy states get exactly 0;
// if every state is infinite the ensemble is degenerate and this throws.
std::vector<double> state_probabilities(const ReducedParams& p, const Bath& bath,
                                        const LatticeSpec& spec);

// Full occupancy summary from one enumeration pass. Per-count weights are
// aggregated on the fly (memory stays O(M)); the pass runs over a fixed
// grid of index chunks merged left to right, so results do not depend on
// how many workers execute the chunks.
OccupancyDistribution occupancy_distribution(const ReducedParams& p, const Bath& bath,
                                             const LatticeSpec& spec);

struct DominantState {
  MicroState state;  // canonical form
  bool tie = false;  // another orbit reaches the same minimum energy
  double energy = 0;
};

// Minimum-energy configuration over all of state space, canonicalized.
// The tie flag fires only when a configuration outside the winner's orbit
// matches the minimum exactly; among tied orbits the first in index order
// wins.
DominantState dominant_state(const ReducedParams& p, const Bath& bath,
                             const LatticeSpec& spec);

// Same restricted to configurations with exactly n bound sites.
DominantState dominant_state_given_n(int n, const ReducedParams& p, const Bath& bath,
                                     const LatticeSpec& spec);

// Mean bound count; equals both the p_n-weighted count sum and the
// state-probability-weighted count sum.
double mean_occupancy(const ReducedParams& p, const Bath& bath, const LatticeSpec& spec);

}  // namespace ringbind
