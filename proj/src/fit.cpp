#include "ringbind/fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <map>
#include <numeric>
#include <random>
#include <string>

#include "ringbind/logsumexp.hpp"

namespace ringbind {

namespace {

constexpr int kDim = 8;  // alpha_hat x3, beta_hat x3, gamma0, n0

// 53-bit uniform and Box-Muller gaussian on top of mt19937_64, so that equal
// seeds give identical streams on every platform and standard library.
double uniform01(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

double uniform_in(std::mt19937_64& g, double lo, double hi) {
  return lo + (hi - lo) * uniform01(g);
}

class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : gen_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01(gen_);
    while (u1 <= 0) u1 = uniform01(gen_);
    const double u2 = uniform01(gen_);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0;
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 step keeps restart streams decorrelated even for seed 0, 1, 2.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

struct SimplexOutcome {
  std::vector<double> x;
  double f = kPosInf;
  bool converged = false;
  std::vector<double> trace;
};

// Nelder-Mead with the standard coefficients (reflect 1, expand 2, contract
// 0.5, shrink 0.5). Fully deterministic: ordering ties resolve by insertion
// order via stable sort.
SimplexOutcome nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                           const std::vector<double>& x0, const std::vector<double>& step,
                           int max_iters, double ftol, double xtol) {
  const int dim = static_cast<int>(x0.size());
  std::vector<std::vector<double>> xs(static_cast<std::size_t>(dim) + 1, x0);
  for (int d = 0; d < dim; ++d) xs[static_cast<std::size_t>(d) + 1][static_cast<std::size_t>(d)] += step[static_cast<std::size_t>(d)];
  std::vector<double> fs(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) fs[i] = f(xs[i]);

  std::vector<std::size_t> order(xs.size());
  SimplexOutcome out;
  for (int iter = 0; iter < max_iters; ++iter) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&fs](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[order.size() - 2];
    out.trace.push_back(fs[best]);

    double spread = fs[worst] - fs[best];
    if (std::isnan(spread)) spread = kPosInf;  // inf - inf; simplex still stuck in a dead zone
    double diameter = 0;
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (int d = 0; d < dim; ++d)
        diameter = std::max(diameter, std::abs(xs[i][static_cast<std::size_t>(d)] -
                                               xs[best][static_cast<std::size_t>(d)]));
    if (spread <= ftol && diameter <= xtol) {
      out.converged = true;
      break;
    }

    std::vector<double> centroid(static_cast<std::size_t>(dim), 0.0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i == worst) continue;
      for (int d = 0; d < dim; ++d) centroid[static_cast<std::size_t>(d)] += xs[i][static_cast<std::size_t>(d)];
    }
    for (double& c : centroid) c /= dim;

    const auto blend = [&](double t) {
      std::vector<double> x(static_cast<std::size_t>(dim));
      for (int d = 0; d < dim; ++d)
        x[static_cast<std::size_t>(d)] =
            centroid[static_cast<std::size_t>(d)] +
            t * (centroid[static_cast<std::size_t>(d)] - xs[worst][static_cast<std::size_t>(d)]);
      return x;
    };

    const std::vector<double> reflected = blend(1.0);
    const double fr = f(reflected);
    if (fr < fs[order[0]]) {
      const std::vector<double> expanded = blend(2.0);
      const double fe = f(expanded);
      if (fe < fr) {
        xs[worst] = expanded;
        fs[worst] = fe;
      } else {
        xs[worst] = reflected;
        fs[worst] = fr;
      }
      continue;
    }
    if (fr < fs[second_worst]) {
      xs[worst] = reflected;
      fs[worst] = fr;
      continue;
    }
    // Contraction, outside when the reflection helped at all, inside otherwise.
    const bool outside = fr < fs[worst];
    const std::vector<double> contracted = blend(outside ? 0.5 : -0.5);
    const double fc = f(contracted);
    if ((outside && fc <= fr) || (!outside && fc < fs[worst])) {
      xs[worst] = contracted;
      fs[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i == best) continue;
      for (int d = 0; d < dim; ++d)
        xs[i][static_cast<std::size_t>(d)] =
            xs[best][static_cast<std::size_t>(d)] +
            0.5 * (xs[i][static_cast<std::size_t>(d)] - xs[best][static_cast<std::size_t>(d)]);
      fs[i] = f(xs[i]);
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (fs[i] < fs[best]) best = i;
  out.x = xs[best];
  out.f = fs[best];
  return out;
}

// Dataset regrouped by concentration for single-distribution evaluation.
struct GroupedData {
  struct Group {
    std::vector<const MeanPoint*> means;
    std::vector<const HistPoint*> hists;
  };
  std::map<double, Group> by_conc;
};

GroupedData group_by_conc(const Dataset& data) {
  GroupedData grouped;
  for (const MeanPoint& pt : data.mean_points) grouped.by_conc[pt.atp_uM].means.push_back(&pt);
  for (const HistPoint& pt : data.hist_points) grouped.by_conc[pt.atp_uM].hists.push_back(&pt);
  return grouped;
}

double loss_grouped(const ReducedParams& p, double n0, const GroupedData& grouped,
                    const LatticeSpec& spec, Engine engine) {
  if (grouped.by_conc.empty()) return 0.0;
  const int m = spec.total_sites();
  // Fast infeasibility gate: the smallest concentration has the smallest
  // bath, so one check covers all rows before any heavy work.
  if (!(n0 > 0) || !(n0 * grouped.by_conc.begin()->first / 5.0 > m)) return kPosInf;

  CountResolvedWeights weights;
  if (engine == Engine::transfer_dp) weights = count_resolved_weights(p, spec);

  double total = 0;
  for (const auto& [conc, group] : grouped.by_conc) {
    Bath bath;
    try {
      bath = bath_from_conc(conc, n0, spec);
    } catch (const BathError&) {
      return kPosInf;
    }
    const OccupancyDistribution dist = (engine == Engine::transfer_dp)
                                           ? distribution_from_weights(weights, bath)
                                           : occupancy_distribution(p, bath, spec);
    for (const MeanPoint* pt : group.means) {
      const double r = dist.mean_n - pt->value;
      total += pt->weight * r * r;
    }
    for (const HistPoint* pt : group.hists) {
      const double r = dist.p_n[static_cast<std::size_t>(pt->n)] - pt->value;
      total += pt->weight * r * r;
    }
  }
  return total;
}

}  // namespace

void validate(const Dataset& data, const LatticeSpec& spec) {
  const int m = spec.total_sites();
  const auto check_common = [](double conc, double value, double weight, const char* kind) {
    if (!std::isfinite(conc) || !(conc > 0))
      throw DataError(std::string(kind) + " point needs a positive finite concentration");
    if (!std::isfinite(value))
      throw DataError(std::string(kind) + " observation must be finite");
    if (!std::isfinite(weight) || weight < 0)
      throw DataError(std::string(kind) + " weight must be finite and nonnegative");
  };
  for (const MeanPoint& pt : data.mean_points) check_common(pt.atp_uM, pt.value, pt.weight, "mean");
  std::map<double, double> hist_mass;
  for (const HistPoint& pt : data.hist_points) {
    check_common(pt.atp_uM, pt.value, pt.weight, "hist");
    if (pt.n < 0 || pt.n > m)
      throw DataError("hist point count " + std::to_string(pt.n) + " outside 0.." +
                      std::to_string(m));
    if (pt.value < 0 || pt.value > 1)
      throw DataError("hist observation " + std::to_string(pt.value) + " outside [0, 1]");
    hist_mass[pt.atp_uM] += pt.value;
  }
  for (const auto& [conc, mass] : hist_mass)
    if (mass < 0.9 || mass > 1.1)
      throw DataError("histogram at " + std::to_string(conc) + " uM sums to " +
                      std::to_string(mass) + ", outside [0.9, 1.1]");
}

double loss(const ReducedParams& p, double n0, const Dataset& data, const LatticeSpec& spec,
            Engine engine) {
  validate(p);
  validate(data, spec);
  return loss_grouped(p, n0, group_by_conc(data), spec, engine);
}

FitResult fit(const Dataset& data, const LatticeSpec& spec, const FitConfig& config) {
  if (config.restarts < 1) throw ConfigError("fit needs at least one restart");
  if (config.max_iters < 1) throw ConfigError("fit needs at least one iteration");
  if (config.polish_rounds < 0) throw ConfigError("polish rounds must be nonnegative");
  if (config.start_probes < 1) throw ConfigError("fit needs at least one start probe");
  if (data.empty()) throw ConfigError("fit needs at least one observation");
  validate(data, spec);
  const GroupedData grouped = group_by_conc(data);

  const FitBoxes& box = config.boxes;
  if (!(std::isfinite(box.site_lo) && std::isfinite(box.site_hi) && box.site_lo <= box.site_hi &&
        std::isfinite(box.gamma0_lo) && std::isfinite(box.gamma0_hi) &&
        box.gamma0_lo <= box.gamma0_hi && std::isfinite(box.n0_hi) && box.n0_lo > 0 &&
        box.n0_lo <= box.n0_hi))
    throw ConfigError("fit boxes must be finite and ordered, with a positive bath scale");

  // The search runs in (site energies, gamma0 / n0, n0) coordinates. The
  // model depends on the tail pair only through gamma0 * log(1 - 5n/(n0 c)),
  // so its near-flat direction is "ratio fixed, n0 moving", a straight
  // coordinate axis here but a curved valley in the raw pair, which a
  // simplex tracks poorly.
  const auto unpack = [](const std::vector<double>& y) {
    return ReducedParams{{y[0], y[1], y[2]}, {y[3], y[4], y[5]}, y[6] * y[7]};
  };

  // Leaving the box is infeasible, exactly like an undersized bath. Without
  // the wall the descent can ride the flat large-bath direction forever.
  const auto objective = [&](const std::vector<double>& y) {
    for (int d = 0; d < 6; ++d) {
      const auto i = static_cast<std::size_t>(d);
      if (!(y[i] >= box.site_lo && y[i] <= box.site_hi)) return kPosInf;
    }
    const double n0 = y[7];
    const double gamma0 = y[6] * y[7];
    if (!(n0 >= box.n0_lo && n0 <= box.n0_hi)) return kPosInf;
    if (!(gamma0 >= box.gamma0_lo && gamma0 <= box.gamma0_hi)) return kPosInf;
    return loss_grouped(unpack(y), n0, grouped, spec, config.engine);
  };

  // Each restart pins n0 to one point of a log-spaced grid across its box
  // and searches the remaining seven coordinates; the joint polish afterwards
  // frees n0 again. Randomizing n0 instead makes the whole fit a lottery:
  // the loss has interior local minima at wrong bath scales that capture
  // most starts, while stratified n0 guarantees one restart near the truth.
  const auto n0_at = [&](int r) {
    if (config.restarts == 1) return std::sqrt(box.n0_lo * box.n0_hi);
    const double t = static_cast<double>(r) / (config.restarts - 1);
    return box.n0_lo * std::pow(box.n0_hi / box.n0_lo, t);
  };

  const auto run_restart = [&](int r) {
    std::mt19937_64 gen(mix_seed(config.seed, static_cast<std::uint64_t>(r)));
    const double n0_r = n0_at(r);
    const auto lift = [&](std::vector<double> z) {
      z.push_back(n0_r);
      return z;
    };
    const auto pinned = [&](const std::vector<double>& z) { return objective(lift(z)); };
    const auto draw = [&] {
      std::vector<double> z(kDim - 1);
      for (int d = 0; d < 6; ++d)
        z[static_cast<std::size_t>(d)] = uniform_in(gen, box.site_lo, box.site_hi);
      z[6] = uniform_in(gen, box.gamma0_lo, box.gamma0_hi) / n0_r;
      return z;
    };
    const auto steps_at = [&](const std::vector<double>& z0, double frac) {
      std::vector<double> step(kDim - 1);
      for (int d = 0; d < 6; ++d) {
        const auto i = static_cast<std::size_t>(d);
        step[i] = frac * (box.site_hi - box.site_lo);
        if (z0[i] + step[i] > box.site_hi) step[i] = -step[i];  // keep the simplex in the box
      }
      step[6] = frac * (box.gamma0_hi - box.gamma0_lo) / n0_r;
      const double edge = (z0[6] + step[6]) * n0_r;
      if (edge > box.gamma0_hi || edge < box.gamma0_lo) step[6] = -step[6];
      return step;
    };

    // Racing start: the loss at a raw draw says little about which basin the
    // draw descends into, but a short descent does. Each candidate gets a
    // brief run and only the front-runner earns the full budget.
    const int race_iters = std::max(100, config.max_iters / 8);
    SimplexOutcome lead;
    for (int candidate = 0; candidate < config.start_probes; ++candidate) {
      const std::vector<double> z0 = draw();
      SimplexOutcome raced =
          nelder_mead(pinned, z0, steps_at(z0, 0.1), race_iters, config.ftol, config.xtol);
      if (raced.f < lead.f) lead = std::move(raced);  // strict: the earlier candidate wins ties
    }
    if (lead.x.empty() || lead.f == kPosInf) {
      lead.x = lead.x.empty() ? lift(draw()) : lift(std::move(lead.x));
      lead.f = kPosInf;
      return lead;  // the pinned n0 admits no feasible point, nothing to refine
    }
    SimplexOutcome out = nelder_mead(pinned, lead.x, steps_at(lead.x, 0.05), config.max_iters,
                                     config.ftol, config.xtol);
    out.trace.insert(out.trace.begin(), lead.trace.begin(), lead.trace.end());
    out.x = lift(std::move(out.x));
    return out;
  };

  std::vector<std::future<SimplexOutcome>> futures;
  futures.reserve(static_cast<std::size_t>(config.restarts));
  for (int r = 0; r < config.restarts; ++r)
    futures.push_back(std::async(std::launch::async, run_restart, r));

  SimplexOutcome best;
  for (int r = 0; r < config.restarts; ++r) {
    SimplexOutcome outcome = futures[static_cast<std::size_t>(r)].get();
    if (outcome.f < best.f) best = std::move(outcome);  // strict: earlier restart wins ties
  }
  if (best.x.empty())
    throw ConfigError("every restart diverged; the start boxes admit no feasible bath");

  // Polish: fresh small simplexes at the incumbent recover from any
  // degenerate simplex geometry the global phase left behind.
  for (int round = 0; round < config.polish_rounds; ++round) {
    std::vector<double> step(kDim);
    for (int d = 0; d < kDim; ++d)
      step[static_cast<std::size_t>(d)] =
          std::max(0.05 * std::abs(best.x[static_cast<std::size_t>(d)]), 0.01);
    SimplexOutcome polished =
        nelder_mead(objective, best.x, step, config.max_iters, config.ftol, config.xtol);
    // The incumbent sits in the fresh simplex, so the polished loss can only
    // match or improve it.
    polished.trace.insert(polished.trace.begin(), best.trace.begin(), best.trace.end());
    best = std::move(polished);
  }

  FitResult result;
  result.params = unpack(best.x);
  result.n0 = best.x[kDim - 1];
  result.objective = best.f;
  result.converged = best.converged;
  result.restarts = config.restarts;
  result.seed = config.seed;
  result.trace = std::move(best.trace);
  return result;
}

Dataset synthesize_dataset(const ReducedParams& p, double n0, const std::vector<double>& concs_uM,
                           double noise_sd, std::uint64_t seed, const LatticeSpec& spec,
                           Engine engine) {
  if (noise_sd < 0) throw ConfigError("noise standard deviation must be nonnegative");
  validate(p);
  GaussianStream noise(mix_seed(seed, 0));
  const auto perturb = [&](double value) {
    return noise_sd == 0 ? value : value + noise_sd * noise.next();
  };

  CountResolvedWeights weights;
  if (engine == Engine::transfer_dp) weights = count_resolved_weights(p, spec);

  Dataset data;
  const int m = spec.total_sites();
  for (double conc : concs_uM) {
    const Bath bath = bath_from_conc(conc, n0, spec);
    const OccupancyDistribution dist = (engine == Engine::transfer_dp)
                                           ? distribution_from_weights(weights, bath)
                                           : occupancy_distribution(p, bath, spec);
    data.mean_points.push_back(MeanPoint{conc, perturb(dist.mean_n), 1.0});
    for (int n = 0; n <= m; ++n) {
      const double value = std::clamp(perturb(dist.p_n[static_cast<std::size_t>(n)]), 0.0, 1.0);
      data.hist_points.push_back(HistPoint{conc, n, value, 1.0});
    }
  }
  return data;
}

}  // namespace ringbind
