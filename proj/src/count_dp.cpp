#include "ringbind/count_dp.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "ringbind/logsumexp.hpp"

namespace ringbind {

namespace {

// A column holds the two mirror sites at one ring position, packed into two
// bits: bit 0 is the first-ring site, bit 1 the second-ring site.
constexpr int kColumnStates = 4;

int column_pop(int c) { return (c & 1) + ((c >> 1) & 1); }

// Energy charged to the two sites of column `cur` once both ring neighbors
// (columns `prev` and `next`) are known. Each bound site contributes its
// potential given bound in-ring neighbors and mirror occupancy.
double column_energy(int prev, int cur, int next, const ReducedParams& p) {
  double e = 0;
  if (cur & 1) {
    const int neighbors = (prev & 1) + (next & 1);
    e += ((cur >> 1) & 1) ? p.beta_hat[neighbors] : p.alpha_hat[neighbors];
  }
  if ((cur >> 1) & 1) {
    const int neighbors = ((prev >> 1) & 1) + ((next >> 1) & 1);
    e += (cur & 1) ? p.beta_hat[neighbors] : p.alpha_hat[neighbors];
  }
  return e;
}

}  // namespace

CountResolvedWeights count_resolved_weights(const ReducedParams& p, const LatticeSpec& spec) {
  validate(p);
  const int r = spec.ring_len();
  const int m = spec.total_sites();

  // Column energies shifted by their least entry, so every transition factor
  // is exp of a nonpositive number and products can only shrink. The shift
  // is repaid on the final weights (each branch charges exactly r columns).
  double ecol[kColumnStates][kColumnStates][kColumnStates];
  double e_min = kPosInf;
  for (int a = 0; a < kColumnStates; ++a)
    for (int b = 0; b < kColumnStates; ++b)
      for (int c = 0; c < kColumnStates; ++c) {
        ecol[a][b][c] = column_energy(a, b, c, p);
        e_min = std::min(e_min, ecol[a][b][c]);
      }
  double tfac[kColumnStates][kColumnStates][kColumnStates];
  for (int a = 0; a < kColumnStates; ++a)
    for (int b = 0; b < kColumnStates; ++b)
      for (int c = 0; c < kColumnStates; ++c) tfac[a][b][c] = std::exp(e_min - ecol[a][b][c]);

  CountResolvedWeights out;
  out.ring_len = r;
  out.gamma0 = p.gamma0;
  out.log_omega.assign(static_cast<std::size_t>(m) + 1, kNegInf);

  // The scan walks columns 0..R-1 with state (previous column, current
  // column) and the running bound count; a column's energy is charged when
  // its full neighborhood is known, i.e. on the transition that introduces
  // its right neighbor. The periodic closure needs the energies of columns
  // R-1 and 0, which depend on the first two columns, so those are fixed
  // per branch (16 branches) and charged at wrap-around. Weights stay in
  // the linear domain with a shared scale that renormalizes whenever a
  // column's largest entry leaves a safe band.
  const std::size_t counts = static_cast<std::size_t>(m) + 1;
  const auto cell = [counts](int prev, int cur, int cnt) {
    return (static_cast<std::size_t>(prev) * kColumnStates + cur) * counts + cnt;
  };
  std::vector<double> table(kColumnStates * kColumnStates * counts);
  std::vector<double> next_table(table.size());
  std::vector<double> closed(counts);

  for (int first = 0; first < kColumnStates; ++first) {
    for (int second = 0; second < kColumnStates; ++second) {
      table.assign(table.size(), 0.0);
      table[cell(first, second, column_pop(first) + column_pop(second))] = 1.0;
      double log_scale = 0;

      for (int col = 2; col < r; ++col) {
        next_table.assign(next_table.size(), 0.0);
        for (int prev = 0; prev < kColumnStates; ++prev) {
          for (int cur = 0; cur < kColumnStates; ++cur) {
            for (int cnt = 0; cnt < static_cast<int>(counts); ++cnt) {
              const double w = table[cell(prev, cur, cnt)];
              if (w == 0) continue;
              for (int nxt = 0; nxt < kColumnStates; ++nxt) {
                next_table[cell(cur, nxt, cnt + column_pop(nxt))] += w * tfac[prev][cur][nxt];
              }
            }
          }
        }
        double top = 0;
        for (const double w : next_table) top = std::max(top, w);
        if (top > 0 && top < 1e-120) {
          for (double& w : next_table) w /= top;
          log_scale += std::log(top);
        }
        table.swap(next_table);
      }

      std::fill(closed.begin(), closed.end(), 0.0);
      for (int prev = 0; prev < kColumnStates; ++prev) {
        for (int cur = 0; cur < kColumnStates; ++cur) {
          for (int cnt = 0; cnt < static_cast<int>(counts); ++cnt) {
            const double w = table[cell(prev, cur, cnt)];
            if (w == 0) continue;
            closed[static_cast<std::size_t>(cnt)] +=
                w * tfac[prev][cur][first] * tfac[cur][first][second];
          }
        }
      }
      for (std::size_t cnt = 0; cnt < counts; ++cnt) {
        if (closed[cnt] == 0) continue;
        double& slot = out.log_omega[cnt];
        slot = log_add_exp(slot, std::log(closed[cnt]) + log_scale - r * e_min);
      }
    }
  }
  return out;
}

OccupancyDistribution distribution_from_weights(const CountResolvedWeights& w, const Bath& bath) {
  const int m = w.total_sites();
  // P_n is proportional to omega_n * exp(-gamma0 * ln(N - n)); counts with
  // n >= N keep zero weight.
  std::vector<double> log_weight(static_cast<std::size_t>(m) + 1, kNegInf);
  for (int n = 0; n <= m; ++n)
    if (n < bath.n_total)
      log_weight[static_cast<std::size_t>(n)] =
          w.log_omega[static_cast<std::size_t>(n)] - w.gamma0 * std::log(bath.n_total - n);

  const double log_total = log_sum_exp(log_weight);
  if (log_total == kNegInf)
    throw DegenerateEnsembleError("every configuration has zero weight under this bath");

  OccupancyDistribution dist;
  dist.total_sites = m;
  dist.p_n.resize(static_cast<std::size_t>(m) + 1);
  double mean = 0;
  for (int n = 0; n <= m; ++n) {
    const double lw = log_weight[static_cast<std::size_t>(n)];
    const double pn = (lw == kNegInf) ? 0.0 : std::exp(lw - log_total);
    dist.p_n[static_cast<std::size_t>(n)] = pn;
    mean += n * pn;
  }
  dist.mean_n = mean;
  int mode_all = 0, mode_nonzero = 1;
  for (int n = 1; n <= m; ++n) {
    if (dist.p_n[static_cast<std::size_t>(n)] > dist.p_n[static_cast<std::size_t>(mode_all)])
      mode_all = n;
    if (dist.p_n[static_cast<std::size_t>(n)] > dist.p_n[static_cast<std::size_t>(mode_nonzero)])
      mode_nonzero = n;
  }
  dist.mode_all = mode_all;
  dist.mode_nonzero = mode_nonzero;
  return dist;
}

OccupancyDistribution distribution_via_dp(const ReducedParams& p, const Bath& bath,
                                          const LatticeSpec& spec) {
  return distribution_from_weights(count_resolved_weights(p, spec), bath);
}

}  // namespace ringbind
