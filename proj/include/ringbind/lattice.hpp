#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ringbind/errors.hpp"

namespace ringbind {

// Two stacked rings of equal length R, M = 2R sites total. Site numbering is
// 1-based: sites 1..R run around the first ring, sites R+1..2R around the
// second, and site j+R sits directly across from site j (its mirror), so
// every site has exactly two in-ring neighbors and one inter-ring neighbor.
class LatticeSpec {
 public:
  // Rings shorter than 3 have degenerate adjacency (a neighbor on both sides
  // would be the same site); state words are 64-bit, capping R at 32.
  explicit LatticeSpec(int ring_len);

  int ring_len() const { return ring_len_; }
  int total_sites() const { return 2 * ring_len_; }
  static constexpr int num_rings = 2;

  // Neighbor maps over 0-based bit positions (site j <-> position j-1).
  int left_of(int pos) const;
  int right_of(int pos) const;
  int mirror_of(int pos) const;

 private:
  int ring_len_;
};

// A lattice configuration packed into a word: bit j-1 holds site j's
// occupancy, so the 1-based state index is k = bits + 1 and sites 1..R
// occupy the low R bits.
struct MicroState {
  std::uint64_t bits = 0;

  bool site_bound(int pos) const { return (bits >> pos) & 1u; }
  friend bool operator==(MicroState a, MicroState b) { return a.bits == b.bits; }
  friend bool operator<(MicroState a, MicroState b) { return a.bits < b.bits; }
};

// 1-based state index of a configuration, k in 1..2^M.
std::uint64_t state_index(MicroState s);

// Packs a site-ordered occupancy list (i_1 .. i_M, entries 0/1) into its
// state index k. Length must match the lattice; entries must be 0 or 1.
std::uint64_t encode_state(const std::vector<int>& occupancy, const LatticeSpec& spec);

// Inverse of encode_state; k must lie in 1..2^M.
MicroState decode_state(std::uint64_t k, const LatticeSpec& spec);

// Number of bound sites.
int bound_count(MicroState s);

// Visits every configuration with exactly n bound sites in increasing index
// order (Gosper's next-subset walk). n must lie in 0..M.
template <typename Visit>
void for_each_state_with_count(const LatticeSpec& spec, int n, Visit&& visit) {
  const int m = spec.total_sites();
  if (n < 0 || n > m)
    throw IndexError("bound count " + std::to_string(n) + " outside 0.." + std::to_string(m));
  if (n == 0) {
    visit(MicroState{0});
    return;
  }
  std::uint64_t v = (n == 64) ? ~0ull : ((1ull << n) - 1);
  const std::uint64_t last = v << (m - n);  // all bound sites at the top
  while (true) {
    visit(MicroState{v});
    if (v == last) return;
    const std::uint64_t t = v | (v - 1);
    v = (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(v) + 1));
  }
}

// Materialized variant of the walk above, mainly for tests.
std::vector<MicroState> states_with_count(const LatticeSpec& spec, int n);

// Bound-site census grouped by the number of bound in-ring neighbors (0..2)
// and by mirror occupancy: mirror_empty[i] counts bound sites with i bound
// in-ring neighbors and an empty mirror site, mirror_bound[i] the same with
// the mirror occupied. The six counts always sum to the bound count, and the
// mirror_bound counts sum to an even number (mirror pairs count twice).
struct NeighborSignature {
  std::array<int, 3> mirror_empty{};
  std::array<int, 3> mirror_bound{};

  int bound() const {
    return mirror_empty[0] + mirror_empty[1] + mirror_empty[2] +
           mirror_bound[0] + mirror_bound[1] + mirror_bound[2];
  }
  friend bool operator==(const NeighborSignature& a, const NeighborSignature& b) {
    return a.mirror_empty == b.mirror_empty && a.mirror_bound == b.mirror_bound;
  }
};

NeighborSignature neighbor_signature(MicroState s, const LatticeSpec& spec);

// Lattice symmetries: both rings rotate or reflect together (anything else
// would break mirror pairing), and the rings may swap. The group has order
// 4R and every element preserves neighbor signatures and energies.
MicroState rotate_state(MicroState s, const LatticeSpec& spec, int shift);
MicroState reflect_state(MicroState s, const LatticeSpec& spec);
MicroState swap_rings(MicroState s, const LatticeSpec& spec);

// Least-index member of the symmetry orbit. Used for reporting equivalent
// configurations under one name; never applied before energy evaluation.
MicroState canonicalize(MicroState s, const LatticeSpec& spec);

// Distinct orbit members in increasing index order.
std::vector<MicroState> symmetry_orbit(MicroState s, const LatticeSpec& spec);

// State literals: "[i_1..i_R][i_R+1..i_2R]", e.g. "[01100000][00000000]"
// for sites 2 and 3 bound on an R=8 lattice.
std::string format_state(MicroState s, const LatticeSpec& spec);
MicroState parse_state(std::string_view literal, const LatticeSpec& spec);

// True when every bound site lies on one ring and the bound set forms a
// single contiguous cyclic arc there. States with fewer than two bound
// sites count as trivial arcs.
bool is_one_ring_arc(MicroState s, const LatticeSpec& spec);

// True when the bound sites form one connected cluster under in-ring plus
// mirror adjacency. Empty and single-site states count as connected.
bool is_connected(MicroState s, const LatticeSpec& spec);

}  // namespace ringbind
