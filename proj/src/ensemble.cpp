#include "ringbind/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <string>

#include "ringbind/logsumexp.hpp"

namespace ringbind {

namespace {

void require_enumerable(const LatticeSpec& spec, const char* what) {
  if (spec.total_sites() > kMaxEnumerationSites)
    throw TopologyError(std::string(what) + " enumerates all states and is limited to " +
                        std::to_string(kMaxEnumerationSites) +
                        " sites; use the transfer engine for larger lattices");
}

// gamma0 * ln(N - n) for each bound count, +inf where n >= N.
std::vector<double> tail_terms(const ReducedParams& p, const Bath& bath, int m) {
  std::vector<double> tail(m + 1);
  for (int n = 0; n <= m; ++n)
    tail[n] = (n < bath.n_total) ? p.gamma0 * std::log(bath.n_total - n) : kPosInf;
  return tail;
}

// Streaming Boltzmann sums held as exp(shift - E) with shift equal to the
// least energy seen so far; a new minimum rescales what was accumulated, so
// every addend stays in (0, 1]. With all energies equal the addends are
// exactly 1 and the sums are exact integers.
struct WeightAccumulator {
  WeightAccumulator(int m, const LatticeSpec& lattice)
      : spec(&lattice), per_count(static_cast<std::size_t>(m) + 1, 0.0) {}

  const LatticeSpec* spec;
  double shift = kPosInf;
  std::vector<double> per_count;
  double total = 0;
  double count_weighted = 0;
  std::uint64_t argmin_bits = 0;
  bool tie = false;
  bool any_finite = false;

  void rescale_to(double new_shift) {
    const double f = std::exp(new_shift - shift);
    for (double& w : per_count) w *= f;
    total *= f;
    count_weighted *= f;
    shift = new_shift;
  }

  // A tie only counts when the equal-energy configuration is genuinely
  // different, i.e. not a symmetry image of the current argmin.
  void note_tie(std::uint64_t bits) {
    if (tie) return;
    tie = canonicalize(MicroState{argmin_bits}, *spec) != canonicalize(MicroState{bits}, *spec);
  }

  void add(double energy, int n, std::uint64_t bits) {
    if (energy == kPosInf) return;
    if (!any_finite) {
      any_finite = true;
      shift = energy;
      argmin_bits = bits;
    } else if (energy < shift) {
      rescale_to(energy);
      argmin_bits = bits;
      tie = false;
    } else if (energy == shift) {
      note_tie(bits);  // visit order is increasing index, keep the earlier state
    }
    const double w = std::exp(shift - energy);
    per_count[static_cast<std::size_t>(n)] += w;
    total += w;
    count_weighted += n * w;
  }

  // Folds a later chunk in; chunks are merged strictly left to right so the
  // earlier argmin wins exact ties across chunk boundaries.
  void merge(const WeightAccumulator& o) {
    if (!o.any_finite) return;
    if (!any_finite) {
      *this = o;
      return;
    }
    if (o.shift < shift) {
      rescale_to(o.shift);
      argmin_bits = o.argmin_bits;
      tie = o.tie;
    } else if (o.shift == shift) {
      if (o.tie)
        tie = true;
      else
        note_tie(o.argmin_bits);
    }
    const double f = std::exp(shift - o.shift);
    for (std::size_t n = 0; n < per_count.size(); ++n) per_count[n] += o.per_count[n] * f;
    total += o.total * f;
    count_weighted += o.count_weighted * f;
  }
};

WeightAccumulator accumulate_range(const ReducedParams& p, const LatticeSpec& spec,
                                   const std::vector<double>& tail, std::uint64_t begin,
                                   std::uint64_t end) {
  const int m = spec.total_sites();
  WeightAccumulator acc(m, spec);
  for (std::uint64_t bits = begin; bits < end; ++bits) {
    const MicroState s{bits};
    const int n = bound_count(s);
    const double t = tail[static_cast<std::size_t>(n)];
    if (t == kPosInf) continue;
    acc.add(signature_energy(neighbor_signature(s, spec), p) + t, n, bits);
  }
  return acc;
}

// One pass over all 2^M states on a fixed 16-chunk grid. The grid (not the
// worker count) decides the merge tree, so any level of parallelism gives
// bit-identical results.
WeightAccumulator accumulate_all(const ReducedParams& p, const Bath& bath,
                                 const LatticeSpec& spec) {
  validate(p);
  const int m = spec.total_sites();
  const std::vector<double> tail = tail_terms(p, bath, m);
  const std::uint64_t count = 1ull << m;
  const int chunks = (m >= 8) ? 16 : 1;
  const std::uint64_t step = count / chunks;

  std::vector<std::future<WeightAccumulator>> parts;
  parts.reserve(chunks);
  for (int c = 0; c < chunks; ++c)
    parts.push_back(std::async(std::launch::async, accumulate_range, std::cref(p),
                               std::cref(spec), std::cref(tail), c * step, (c + 1) * step));

  WeightAccumulator acc(m, spec);
  for (auto& part : parts) acc.merge(part.get());
  if (!acc.any_finite)
    throw DegenerateEnsembleError("every configuration has zero weight under this bath");
  return acc;
}

int argmax_from(const std::vector<double>& p_n, int first) {
  int best = first;
  for (int n = first + 1; n < static_cast<int>(p_n.size()); ++n)
    if (p_n[static_cast<std::size_t>(n)] > p_n[static_cast<std::size_t>(best)]) best = n;
  return best;
}

}  // namespace

std::vector<double> state_probabilities(const ReducedParams& p, const Bath& bath,
                                        const LatticeSpec& spec) {
  require_enumerable(spec, "state_probabilities");
  validate(p);
  const int m = spec.total_sites();
  const std::vector<double> tail = tail_terms(p, bath, m);
  const std::uint64_t count = 1ull << m;

  std::vector<double> energy(count);
  double min_energy = kPosInf;
  for (std::uint64_t bits = 0; bits < count; ++bits) {
    const MicroState s{bits};
    const double t = tail[static_cast<std::size_t>(bound_count(s))];
    const double e =
        (t == kPosInf) ? kPosInf : signature_energy(neighbor_signature(s, spec), p) + t;
    energy[bits] = e;
    min_energy = std::min(min_energy, e);
  }
  if (min_energy == kPosInf)
    throw DegenerateEnsembleError("every configuration has zero weight under this bath");

  std::vector<double> prob(count);
  KahanSum norm;
  for (std::uint64_t bits = 0; bits < count; ++bits) {
    const double w = (energy[bits] == kPosInf) ? 0.0 : std::exp(min_energy - energy[bits]);
    prob[bits] = w;
    norm.add(w);
  }
  const double total = norm.value();
  for (double& w : prob) w /= total;
  return prob;
}

OccupancyDistribution occupancy_distribution(const ReducedParams& p, const Bath& bath,
                                             const LatticeSpec& spec) {
  require_enumerable(spec, "occupancy_distribution");
  const WeightAccumulator acc = accumulate_all(p, bath, spec);
  const int m = spec.total_sites();

  OccupancyDistribution dist;
  dist.total_sites = m;
  dist.p_n.resize(static_cast<std::size_t>(m) + 1);
  for (int n = 0; n <= m; ++n)
    dist.p_n[static_cast<std::size_t>(n)] = acc.per_count[static_cast<std::size_t>(n)] / acc.total;
  dist.mean_n = acc.count_weighted / acc.total;
  dist.mode_all = argmax_from(dist.p_n, 0);
  dist.mode_nonzero = argmax_from(dist.p_n, 1);
  dist.dominant_state = canonicalize(MicroState{acc.argmin_bits}, spec);
  dist.dominant_tie = acc.tie;
  return dist;
}

DominantState dominant_state(const ReducedParams& p, const Bath& bath,
                             const LatticeSpec& spec) {
  require_enumerable(spec, "dominant_state");
  const WeightAccumulator acc = accumulate_all(p, bath, spec);
  return DominantState{canonicalize(MicroState{acc.argmin_bits}, spec), acc.tie, acc.shift};
}

DominantState dominant_state_given_n(int n, const ReducedParams& p, const Bath& bath,
                                     const LatticeSpec& spec) {
  require_enumerable(spec, "dominant_state_given_n");
  validate(p);
  const int m = spec.total_sites();
  if (n < 0 || n > m)
    throw IndexError("bound count " + std::to_string(n) + " outside 0.." + std::to_string(m));
  if (n >= bath.n_total)
    throw DegenerateEnsembleError("every configuration with " + std::to_string(n) +
                                  " bound sites has zero weight under this bath");
  const double tail = p.gamma0 * std::log(bath.n_total - n);
  double best = kPosInf;
  std::uint64_t argmin = 0;
  bool tie = false;
  for_each_state_with_count(spec, n, [&](MicroState s) {
    const double e = signature_energy(neighbor_signature(s, spec), p) + tail;
    if (e < best) {
      best = e;
      argmin = s.bits;
      tie = false;
    } else if (e == best && !tie) {
      tie = canonicalize(MicroState{argmin}, spec) != canonicalize(s, spec);
    }
  });
  return DominantState{canonicalize(MicroState{argmin}, spec), tie, best};
}

double mean_occupancy(const ReducedParams& p, const Bath& bath, const LatticeSpec& spec) {
  require_enumerable(spec, "mean_occupancy");
  const WeightAccumulator acc = accumulate_all(p, bath, spec);
  return acc.count_weighted / acc.total;
}

}  // namespace ringbind
