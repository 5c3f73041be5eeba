#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ringbind/engine.hpp"
#include "ringbind/ensemble.hpp"
#include "ringbind/sweep.hpp"

using namespace ringbind;
using doctest::Approx;

namespace {

const LatticeSpec kSpec(8);
const ReducedParams kDefault = ReducedParams::tric_default();

// Independent reference: walk the sites directly instead of going through
// the census, accumulate in extended precision.
double brute_energy(MicroState s, const ReducedParams& p, double n_total, int r) {
  int n = 0;
  double e = 0;
  for (int ring = 0; ring < 2; ++ring) {
    for (int i = 0; i < r; ++i) {
      const int pos = ring * r + i;
      if (!s.site_bound(pos)) continue;
      ++n;
      const int neighbors = (s.site_bound(ring * r + (i + 1) % r) ? 1 : 0) +
                            (s.site_bound(ring * r + (i + r - 1) % r) ? 1 : 0);
      const bool mirrored = s.site_bound((1 - ring) * r + i);
      e += mirrored ? p.beta_hat[static_cast<std::size_t>(neighbors)]
                    : p.alpha_hat[static_cast<std::size_t>(neighbors)];
    }
  }
  if (n >= n_total) return std::numeric_limits<double>::infinity();
  return e + p.gamma0 * std::log(n_total - n);
}

std::vector<double> brute_probabilities(const ReducedParams& p, const Bath& bath, int r) {
  const std::uint64_t total = 1ull << (2 * r);
  std::vector<double> energy(total);
  double lowest = std::numeric_limits<double>::infinity();
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    energy[bits] = brute_energy(MicroState{bits}, p, bath.n_total, r);
    lowest = std::min(lowest, energy[bits]);
  }
  long double z = 0;
  std::vector<double> prob(total);
  for (std::uint64_t bits = 0; bits < total; ++bits)
    z += expl(static_cast<long double>(lowest - energy[bits]));
  for (std::uint64_t bits = 0; bits < total; ++bits)
    prob[bits] = static_cast<double>(expl(static_cast<long double>(lowest - energy[bits])) / z);
  return prob;
}

}  // namespace

TEST_CASE("state probabilities match a brute-force recomputation on small rings") {
  ReducedParams skewed;
  skewed.alpha_hat = {1.5, -0.7, 2.2};
  skewed.beta_hat = {-0.4, 0.9, -1.3};
  skewed.gamma0 = -12.0;

  for (const ReducedParams& p : {kDefault, skewed}) {
    for (const double n0 : {7.0, 40.0}) {
      const LatticeSpec spec(3);
      const Bath bath = bath_from_conc(8.0, n0, spec);
      const std::vector<double> expected = brute_probabilities(p, bath, 3);
      const std::vector<double> actual = state_probabilities(p, bath, spec);
      REQUIRE(actual.size() == expected.size());
      for (std::size_t i = 0; i < actual.size(); ++i)
        REQUIRE(actual[i] == Approx(expected[i]).epsilon(1e-12));

      const OccupancyDistribution dist = occupancy_distribution(p, bath, spec);
      double mean = 0;
      std::vector<double> by_count(7, 0.0);
      for (std::uint64_t bits = 0; bits < expected.size(); ++bits) {
        by_count[static_cast<std::size_t>(bound_count(MicroState{bits}))] += expected[bits];
        mean += bound_count(MicroState{bits}) * expected[bits];
      }
      for (int n = 0; n <= 6; ++n)
        REQUIRE(dist.p_n[static_cast<std::size_t>(n)] ==
                Approx(by_count[static_cast<std::size_t>(n)]).epsilon(1e-12));
      REQUIRE(dist.mean_n == Approx(mean).epsilon(1e-12));
    }
  }
}

TEST_CASE("zero interactions give the exact binomial distribution") {
  ReducedParams flat;
  const Bath bath = bath_from_conc(5.0, 100.0, kSpec);
  const OccupancyDistribution dist = occupancy_distribution(flat, bath, kSpec);

  double choose = 1;
  for (int n = 0; n <= 16; ++n) {
    CHECK(dist.p_n[static_cast<std::size_t>(n)] == choose / 65536.0);
    choose = choose * (16 - n) / (n + 1);
  }
  CHECK(dist.p_n[8] == 0.196380615234375);
  CHECK(dist.mean_n == Approx(8.0).epsilon(1e-14));
  CHECK(dist.mode_all == 8);
}

TEST_CASE("canonical parameters reproduce the frozen reference numbers") {
  SUBCASE("low concentration") {
    const Bath bath = bath_from_conc(5.0, 25.0, kSpec);
    const OccupancyDistribution dist = occupancy_distribution(kDefault, bath, kSpec);
    CHECK(dist.mean_n == Approx(0.004071735543473406).epsilon(1e-12));
    CHECK(dist.mode_all == 0);
    REQUIRE(dist.dominant_state.has_value());
    CHECK(*dist.dominant_state == MicroState{0});
    CHECK_FALSE(dist.dominant_tie);
    CHECK(mean_occupancy(kDefault, bath, kSpec) == dist.mean_n);
  }

  SUBCASE("intermediate concentration") {
    const Bath bath = bath_from_conc(50.0, 25.0, kSpec);
    const OccupancyDistribution dist = occupancy_distribution(kDefault, bath, kSpec);
    CHECK(dist.mean_n == Approx(2.931457).epsilon(1e-6));
  }

  SUBCASE("one ring saturates at moderate concentration") {
    const Bath bath = bath_from_conc(500.0, 25.0, kSpec);
    const OccupancyDistribution dist = occupancy_distribution(kDefault, bath, kSpec);
    CHECK(dist.p_n[8] == Approx(0.300752).epsilon(1e-5));
    CHECK(dist.mode_all == 8);
    REQUIRE(dist.dominant_state.has_value());
    CHECK(format_state(*dist.dominant_state, kSpec) == "[11111111][00000000]");
  }

  SUBCASE("the distribution stays broad even at saturating concentration") {
    const Bath bath = bath_from_conc(10000.0, 25.0, kSpec);
    const OccupancyDistribution dist = occupancy_distribution(kDefault, bath, kSpec);
    CHECK(dist.mean_n == Approx(7.55119135712233).epsilon(1e-12));
    const double peak = *std::max_element(dist.p_n.begin(), dist.p_n.end());
    CHECK(peak == Approx(0.306285).epsilon(1e-5));
    CHECK(peak < 0.4);
    CHECK(dist.mode_all == 8);
  }
}

TEST_CASE("probabilities are normalized and nonnegative") {
  for (const double atp : {5.0, 107.0, 500.0, 10000.0}) {
    const Bath bath = bath_from_conc(atp, 25.0, kSpec);
    const OccupancyDistribution dist = occupancy_distribution(kDefault, bath, kSpec);
    double sum = 0;
    for (const double p : dist.p_n) {
      REQUIRE(p >= 0);
      sum += p;
    }
    REQUIRE(std::abs(sum - 1) < 1e-12);
  }
}

TEST_CASE("repeated evaluation is bit-identical despite parallel chunking") {
  const Bath bath = bath_from_conc(118.0, 25.0, kSpec);
  const std::vector<double> first = state_probabilities(kDefault, bath, kSpec);
  const std::vector<double> second = state_probabilities(kDefault, bath, kSpec);
  CHECK(first == second);

  const OccupancyDistribution a = occupancy_distribution(kDefault, bath, kSpec);
  const OccupancyDistribution b = occupancy_distribution(kDefault, bath, kSpec);
  CHECK(a.p_n == b.p_n);
  CHECK(a.mean_n == b.mean_n);
  CHECK(a.dominant_state == b.dominant_state);
}

TEST_CASE("enumeration refuses lattices beyond the exhaustive limit") {
  const LatticeSpec big(11);
  const Bath bath = bath_from_conc(5.0, 23.0, big);
  CHECK_THROWS_AS(occupancy_distribution(kDefault, bath, big), TopologyError);
  CHECK_THROWS_AS(state_probabilities(kDefault, bath, big), TopologyError);
}

TEST_CASE("an empty bath leaves no admissible configuration") {
  const Bath empty{1.0, 0.0, 1.0};
  CHECK_THROWS_AS(occupancy_distribution(kDefault, empty, kSpec), DegenerateEnsembleError);
}

TEST_CASE("dominant configuration inherits ties from flat energy landscapes") {
  ReducedParams flat;
  const Bath bath = bath_from_conc(5.0, 100.0, kSpec);
  const DominantState best = dominant_state(flat, bath, kSpec);
  CHECK(best.state == MicroState{0});
  CHECK(best.tie);

  const DominantState single = dominant_state_given_n(1, flat, bath, kSpec);
  CHECK(single.state == MicroState{1});
  CHECK_FALSE(single.tie);

  const DominantState pair = dominant_state_given_n(2, flat, bath, kSpec);
  CHECK(pair.tie);
}

TEST_CASE("count-restricted dominant configurations trace the growth pathway") {
  const Bath bath = bath_from_conc(500.0, 25.0, kSpec);

  for (int n = 2; n <= 8; ++n) {
    const DominantState best = dominant_state_given_n(n, kDefault, bath, kSpec);
    CAPTURE(n);
    CHECK(is_one_ring_arc(best.state, kSpec));
    CHECK(bound_count(best.state) == n);
    CHECK_FALSE(best.tie);
  }

  const DominantState ten = dominant_state_given_n(10, kDefault, bath, kSpec);
  CHECK(format_state(ten.state, kSpec) == "[11111111][11000000]");

  const DominantState fifteen = dominant_state_given_n(15, kDefault, bath, kSpec);
  CHECK(format_state(fifteen.state, kSpec) == "[11111111][11111110]");

  for (int n = 1; n <= 16; ++n) {
    const DominantState best = dominant_state_given_n(n, kDefault, bath, kSpec);
    CAPTURE(n);
    CHECK(is_connected(best.state, kSpec));
  }

  CHECK_THROWS_AS(dominant_state_given_n(17, kDefault, bath, kSpec), IndexError);
  CHECK_THROWS_AS(dominant_state_given_n(-1, kDefault, bath, kSpec), IndexError);
  const Bath tight{5.0, 7.5, 7.5};
  CHECK_THROWS_AS(dominant_state_given_n(8, kDefault, tight, kSpec), DegenerateEnsembleError);
}

TEST_CASE("log-spaced grids are ascending with exact endpoints") {
  const std::vector<double> grid = log_spaced(5.0, 10000.0, 50);
  REQUIRE(grid.size() == 50);
  CHECK(grid.front() == 5.0);
  CHECK(grid.back() == Approx(10000.0).epsilon(1e-12));
  for (std::size_t i = 1; i < grid.size(); ++i) REQUIRE(grid[i] > grid[i - 1]);

  CHECK_THROWS_AS(log_spaced(5.0, 10000.0, 1), ConfigError);
  CHECK_THROWS_AS(log_spaced(-5.0, 10000.0, 10), ConfigError);
  CHECK_THROWS_AS(log_spaced(10.0, 5.0, 10), ConfigError);
}

TEST_CASE("sweeps preserve the grid and the engines agree along it") {
  const std::vector<double> grid = log_spaced(5.0, 10000.0, 12);
  const SweepResult via_enum = sweep(kDefault, grid, 25.0, kSpec, Engine::enumeration);
  const SweepResult via_dp = sweep(kDefault, grid, 25.0, kSpec, Engine::transfer_dp);

  REQUIRE(via_enum.rows.size() == grid.size());
  REQUIRE(via_dp.rows.size() == grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    REQUIRE(via_enum.rows[i].atp_uM == grid[i]);
    REQUIRE(via_enum.rows[i].n_total == Approx(25.0 * grid[i] / 5.0).epsilon(1e-15));
    REQUIRE(via_enum.rows[i].dist.dominant_state.has_value());
    REQUIRE_FALSE(via_dp.rows[i].dist.dominant_state.has_value());
    for (int n = 0; n <= 16; ++n) {
      const double pe = via_enum.rows[i].dist.p_n[static_cast<std::size_t>(n)];
      const double pd = via_dp.rows[i].dist.p_n[static_cast<std::size_t>(n)];
      REQUIRE(std::abs(pe - pd) / std::max({pe, pd, 1e-250}) < 1e-10);
    }
  }

  CHECK_THROWS_AS(sweep(kDefault, {500.0, 50.0}, 25.0, kSpec, Engine::transfer_dp), ConfigError);
  CHECK_THROWS_AS(sweep(kDefault, {50.0, 50.0}, 25.0, kSpec, Engine::transfer_dp), ConfigError);
}

TEST_CASE("mean occupancy rises monotonically with concentration") {
  const std::vector<double> grid = log_spaced(5.0, 10000.0, 50);
  const SweepResult result = sweep(kDefault, grid, 25.0, kSpec, Engine::transfer_dp);
  for (std::size_t i = 1; i < result.rows.size(); ++i)
    REQUIRE(result.rows[i].dist.mean_n >= result.rows[i - 1].dist.mean_n);
}

TEST_CASE("the modal occupancy jumps from empty to one full ring near the crossover") {
  const Bath low = bath_from_conc(107.0, 25.0, kSpec);
  CHECK(occupancy_distribution(kDefault, low, kSpec).mode_all == 0);
  const Bath high = bath_from_conc(118.0, 25.0, kSpec);
  CHECK(occupancy_distribution(kDefault, high, kSpec).mode_all == 8);

  const CrossoverResult cross =
      find_mode_crossover(kDefault, 25.0, kSpec, 5.0, 10000.0, Engine::transfer_dp, 0.1);
  CHECK(cross.mode_low == 0);
  CHECK(cross.mode_high == 8);
  CHECK(cross.atp_uM > 90.0);
  CHECK(cross.atp_uM < 130.0);
  CHECK(cross.hi_uM - cross.lo_uM <= 0.1);
  CHECK(cross.atp_uM == cross.hi_uM);

  CHECK_THROWS_AS(find_mode_crossover(kDefault, 25.0, kSpec, 5.0, 10.0, Engine::transfer_dp, 0.1),
                  NotFoundError);
  CHECK_THROWS_AS(
      find_mode_crossover(kDefault, 25.0, kSpec, 100.0, 10.0, Engine::transfer_dp, 0.1),
      ConfigError);
  CHECK_THROWS_AS(
      find_mode_crossover(kDefault, 25.0, kSpec, 5.0, 10000.0, Engine::transfer_dp, 0.0),
      ConfigError);
}
