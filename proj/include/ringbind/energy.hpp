#pragma once

#include <array>
#include <string>
#include <vector>

#include "ringbind/lattice.hpp"

namespace ringbind {

// Interaction parameters for bound sites, all in units of kT (the model is
// dimensionless, kT = 1). alpha[i] is the energy of a bound site with i
// bound in-ring neighbors and an empty mirror; beta[i] the same with the
// mirror bound (so beta[0] is the published beta_1, paired with zero in-ring
// neighbors). gamma0 scales the ln(N - n) free-ligand term, gamma1 the
// linear (N - n) term, and epsilon the per-empty-site (M - n) term.
struct RawParams {
  std::array<double, 3> alpha{};
  std::array<double, 3> beta{};
  double gamma0 = 0;
  double gamma1 = 0;
  double epsilon = 0;
};

// Reduced form: the gamma1 and epsilon terms are state-independent up to a
// per-bound-site shift, so folding them into the site energies changes every
// state energy by the same constant and leaves all probabilities intact.
struct ReducedParams {
  std::array<double, 3> alpha_hat{};
  std::array<double, 3> beta_hat{};
  double gamma0 = 0;

  // Fitted TRiC/CCT ATP-binding parameters shipped with the project
  // (data/tric_default.params carries the same values).
  static ReducedParams tric_default() {
    return ReducedParams{{5.33, 2.28, -0.04}, {3.07, 1.32, 0.31}, -76.50};
  }
};

// alpha_hat_i = alpha_i - epsilon - gamma1, likewise for beta.
ReducedParams reduce_params(const RawParams& raw);

// Finite-ligand bath: n_total ATP molecules shared between lattice and
// solution, tied to concentration by n_total = n0 * atp_uM / 5 (real-valued,
// never rounded).
struct Bath {
  double atp_uM = 0;
  double n_total = 0;
  double n0 = 0;
};

// Builds the bath for a concentration. Every microstate must leave at least
// one free ligand, so n_total must exceed the site count; smaller baths (and
// nonpositive concentration or n0) are rejected.
Bath bath_from_conc(double atp_uM, double n0, const LatticeSpec& spec);

// Throws ParamError when any component is non-finite.
void validate(const ReducedParams& p);
void validate(const RawParams& p);

// Energy of one bound site given its bound in-ring neighbor count (0..2) and
// mirror occupancy.
double site_potential(int ring_neighbors, bool mirror_bound, const ReducedParams& p);

// Sum of site potentials over a whole configuration, via its signature.
double signature_energy(const NeighborSignature& sig, const ReducedParams& p);

// Reduced state energy: site potentials plus gamma0 * ln(N - n). States with
// n >= N get +infinity (zero statistical weight), not an error, so
// distributions stay defined for any bath.
double state_energy_reduced(MicroState s, const ReducedParams& p, const Bath& bath,
                            const LatticeSpec& spec);

// Full-form state energy, including the gamma1 * (N - n) and
// epsilon * (M - n) terms. Differs from the reduced energy by the
// state-independent constant gamma1 * N + epsilon * M.
double state_energy_full(MicroState s, const RawParams& p, const Bath& bath,
                         const LatticeSpec& spec);

// Orderings among low-occupancy configuration energies that characterize the
// cooperative (nucleation-and-growth) regime, plus the sign structure of the
// parameters themselves. These hold for the shipped TRiC parameters; for
// arbitrary inputs they are diagnostics, not requirements.
struct CooperativityCheck {
  std::string label;
  bool holds = false;
  std::string detail;
};

std::vector<CooperativityCheck> cooperativity_checks(const ReducedParams& p);

}  // namespace ringbind
