#pragma once

#include <vector>

#include "ringbind/engine.hpp"

namespace ringbind {

struct SweepRow {
  double atp_uM = 0;
  double n_total = 0;
  OccupancyDistribution dist;
};

struct SweepResult {
  int ring_len = 0;
  double n0 = 0;
  Engine engine = Engine::enumeration;
  std::vector<SweepRow> rows;
};

// One distribution per concentration. Concentrations must be strictly
// ascending (rows come back in the same order); a bath violation at any
// point aborts the sweep, naming the offending concentration.
SweepResult sweep(const ReducedParams& p, const std::vector<double>& concs_uM, double n0,
                  const LatticeSpec& spec, Engine engine);

// Strictly ascending log-spaced grid, endpoints included.
std::vector<double> log_spaced(double lo_uM, double hi_uM, int points);

struct CrossoverResult {
  double atp_uM = 0;  // smallest concentration with the switched mode, to resolution
  int mode_low = 0;
  int mode_high = 0;
  // Final bisection bracket: the mode still equals mode_low at lo_uM, has
  // switched by hi_uM, and hi_uM - lo_uM is at most the requested resolution
  // (atp_uM is its upper end).
  double lo_uM = 0;
  double hi_uM = 0;
};

// Bisects for the concentration where mode_all switches from its value at
// the low bracket end to its value at the high end. The bracket must be
// ordered (lo < hi) and the modes must differ across it, otherwise there is
// nothing to find.
CrossoverResult find_mode_crossover(const ReducedParams& p, double n0, const LatticeSpec& spec,
                                    double lo_uM, double hi_uM, Engine engine,
                                    double resolution_uM = 0.1);

}  // namespace ringbind
