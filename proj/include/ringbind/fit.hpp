#pragma once

#include <cstdint>
#include <vector>

#include "ringbind/engine.hpp"

namespace ringbind {

// Observed mean occupancy at one concentration.
struct MeanPoint {
  double atp_uM = 0;
  double value = 0;
  double weight = 1;
};

// Observed probability of finding exactly n ligands bound.
struct HistPoint {
  double atp_uM = 0;
  int n = 0;
  double value = 0;
  double weight = 1;
};

struct Dataset {
  std::vector<MeanPoint> mean_points;
  std::vector<HistPoint> hist_points;

  bool empty() const { return mean_points.empty() && hist_points.empty(); }
};

// Rejects non-finite values, nonpositive concentrations, negative weights,
// probabilities outside [0, 1], counts outside 0..M, and per-concentration
// histograms whose provided mass falls outside [0.9, 1.1] (they need not sum
// to 1 exactly, but far-off mass means a broken file).
void validate(const Dataset& data, const LatticeSpec& spec);

// Weighted squared error between the dataset and the model at the given
// parameters: sum of w * (mean_model - mean_obs)^2 over mean points plus
// w * (P_n,model - P_n,obs)^2 over histogram points. Any bath violation
// makes the parameters infeasible and the loss +infinity.
double loss(const ReducedParams& p, double n0, const Dataset& data, const LatticeSpec& spec,
            Engine engine);

// Search region. Starts are drawn uniformly inside, and the descent treats
// points outside as infeasible, which blocks the flat large-bath escape
// direction where n0 and gamma0 grow together. Widen the boxes for data
// that genuinely lives outside.
struct FitBoxes {
  double site_lo = -10, site_hi = 10;      // alpha_hat and beta_hat components
  double gamma0_lo = -150, gamma0_hi = 0;
  double n0_lo = 5, n0_hi = 100;
};

struct FitConfig {
  int restarts = 16;
  int max_iters = 4000;     // simplex iterations for the main descent of a restart
  int polish_rounds = 3;    // extra simplex runs restarted at the incumbent
  int start_probes = 8;     // short descents raced per restart; the best one
                            // continues with the full iteration budget
  double ftol = 1e-14;      // spread of simplex losses at convergence
  double xtol = 1e-10;      // simplex diameter at convergence
  std::uint64_t seed = 0;
  Engine engine = Engine::transfer_dp;
  FitBoxes boxes;
};

struct FitResult {
  ReducedParams params;
  double n0 = 25;
  double objective = 0;         // loss at params; recomputable exactly
  bool converged = false;       // final simplex stopped on tolerance, not iteration cap
  int restarts = 0;
  std::uint64_t seed = 0;
  std::vector<double> trace;    // best loss per iteration of the winning run
};

// Derivative-free simplex descent (reflection / expansion / contraction /
// shrink), confined to the boxes. Each restart pins n0 to one point of a
// log-spaced grid over its box, races `start_probes` short descents from
// seeded draws of the remaining coordinates, and gives the front-runner the
// full iteration budget; polish runs at the overall best point then free n0
// again. Restarts are independent, run in parallel, and the winner is the
// deterministic minimum by (loss, restart index), so a fixed seed gives an
// identical result every time.
FitResult fit(const Dataset& data, const LatticeSpec& spec, const FitConfig& config);

// Forward-model dataset: one mean point and a full histogram per
// concentration, optionally perturbed by seeded Gaussian noise of the given
// standard deviation. Noisy probabilities are clipped to [0, 1]. The
// generator is self-contained, so equal seeds give byte-identical datasets
// on any platform.
Dataset synthesize_dataset(const ReducedParams& p, double n0, const std::vector<double>& concs_uM,
                           double noise_sd, std::uint64_t seed, const LatticeSpec& spec,
                           Engine engine = Engine::enumeration);

}  // namespace ringbind
