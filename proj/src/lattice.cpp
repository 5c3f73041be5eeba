#include "ringbind/lattice.hpp"

#include <algorithm>
#include <bit>

namespace ringbind {

namespace {

std::uint64_t ring_mask(int ring_len) {
  return (ring_len == 64) ? ~0ull : ((1ull << ring_len) - 1);
}

std::uint64_t rotate_ring(std::uint64_t ring, int ring_len, int shift) {
  shift %= ring_len;
  if (shift < 0) shift += ring_len;
  if (shift == 0) return ring;
  const std::uint64_t mask = ring_mask(ring_len);
  return ((ring << shift) | (ring >> (ring_len - shift))) & mask;
}

// Position p -> R-1-p within one ring; one reflection suffices since the
// rotations generate the rest of the dihedral reflections.
std::uint64_t reflect_ring(std::uint64_t ring, int ring_len) {
  std::uint64_t out = 0;
  for (int p = 0; p < ring_len; ++p)
    if ((ring >> p) & 1u) out |= 1ull << (ring_len - 1 - p);
  return out;
}

}  // namespace

LatticeSpec::LatticeSpec(int ring_len) : ring_len_(ring_len) {
  if (ring_len < 3)
    throw TopologyError("ring length must be at least 3, got " + std::to_string(ring_len));
  if (ring_len > 32)
    throw TopologyError("ring length must be at most 32, got " + std::to_string(ring_len));
}

int LatticeSpec::left_of(int pos) const {
  const int ring = pos / ring_len_;
  const int p = pos % ring_len_;
  return ring * ring_len_ + (p + ring_len_ - 1) % ring_len_;
}

int LatticeSpec::right_of(int pos) const {
  const int ring = pos / ring_len_;
  const int p = pos % ring_len_;
  return ring * ring_len_ + (p + 1) % ring_len_;
}

int LatticeSpec::mirror_of(int pos) const {
  return (pos + ring_len_) % (2 * ring_len_);
}

std::uint64_t state_index(MicroState s) { return s.bits + 1; }

std::uint64_t encode_state(const std::vector<int>& occupancy, const LatticeSpec& spec) {
  const int m = spec.total_sites();
  if (static_cast<int>(occupancy.size()) != m)
    throw TopologyError("occupancy list has " + std::to_string(occupancy.size()) +
                        " entries, lattice has " + std::to_string(m) + " sites");
  std::uint64_t bits = 0;
  for (int j = 0; j < m; ++j) {
    if (occupancy[j] != 0 && occupancy[j] != 1)
      throw IndexError("occupancy entries must be 0 or 1, got " +
                       std::to_string(occupancy[j]) + " at site " + std::to_string(j + 1));
    bits |= static_cast<std::uint64_t>(occupancy[j]) << j;
  }
  return bits + 1;
}

MicroState decode_state(std::uint64_t k, const LatticeSpec& spec) {
  const int m = spec.total_sites();
  const std::uint64_t count = (m == 64) ? 0 : (1ull << m);  // 0 means 2^64
  if (k < 1 || (count != 0 && k > count))
    throw IndexError("state index " + std::to_string(k) + " outside 1..2^" + std::to_string(m));
  return MicroState{k - 1};
}

int bound_count(MicroState s) { return std::popcount(s.bits); }

std::vector<MicroState> states_with_count(const LatticeSpec& spec, int n) {
  std::vector<MicroState> out;
  for_each_state_with_count(spec, n, [&](MicroState s) { out.push_back(s); });
  return out;
}

NeighborSignature neighbor_signature(MicroState s, const LatticeSpec& spec) {
  NeighborSignature sig;
  const int m = spec.total_sites();
  for (int pos = 0; pos < m; ++pos) {
    if (!s.site_bound(pos)) continue;
    const int neighbors = static_cast<int>(s.site_bound(spec.left_of(pos))) +
                          static_cast<int>(s.site_bound(spec.right_of(pos)));
    if (s.site_bound(spec.mirror_of(pos)))
      ++sig.mirror_bound[neighbors];
    else
      ++sig.mirror_empty[neighbors];
  }
  return sig;
}

MicroState rotate_state(MicroState s, const LatticeSpec& spec, int shift) {
  const int r = spec.ring_len();
  const std::uint64_t mask = ring_mask(r);
  const std::uint64_t low = rotate_ring(s.bits & mask, r, shift);
  const std::uint64_t high = rotate_ring((s.bits >> r) & mask, r, shift);
  return MicroState{low | (high << r)};
}

MicroState reflect_state(MicroState s, const LatticeSpec& spec) {
  const int r = spec.ring_len();
  const std::uint64_t mask = ring_mask(r);
  const std::uint64_t low = reflect_ring(s.bits & mask, r);
  const std::uint64_t high = reflect_ring((s.bits >> r) & mask, r);
  return MicroState{low | (high << r)};
}

MicroState swap_rings(MicroState s, const LatticeSpec& spec) {
  const int r = spec.ring_len();
  const std::uint64_t mask = ring_mask(r);
  return MicroState{((s.bits >> r) & mask) | ((s.bits & mask) << r)};
}

MicroState canonicalize(MicroState s, const LatticeSpec& spec) {
  MicroState best = s;
  for (int swap = 0; swap < 2; ++swap) {
    const MicroState swapped = swap ? swap_rings(s, spec) : s;
    for (int refl = 0; refl < 2; ++refl) {
      const MicroState reflected = refl ? reflect_state(swapped, spec) : swapped;
      for (int shift = 0; shift < spec.ring_len(); ++shift) {
        const MicroState candidate = rotate_state(reflected, spec, shift);
        if (candidate < best) best = candidate;
      }
    }
  }
  return best;
}

std::vector<MicroState> symmetry_orbit(MicroState s, const LatticeSpec& spec) {
  std::vector<MicroState> orbit;
  for (int swap = 0; swap < 2; ++swap) {
    const MicroState swapped = swap ? swap_rings(s, spec) : s;
    for (int refl = 0; refl < 2; ++refl) {
      const MicroState reflected = refl ? reflect_state(swapped, spec) : swapped;
      for (int shift = 0; shift < spec.ring_len(); ++shift)
        orbit.push_back(rotate_state(reflected, spec, shift));
    }
  }
  std::sort(orbit.begin(), orbit.end());
  orbit.erase(std::unique(orbit.begin(), orbit.end()), orbit.end());
  return orbit;
}

std::string format_state(MicroState s, const LatticeSpec& spec) {
  const int r = spec.ring_len();
  std::string out;
  out.reserve(2 * r + 4);
  out += '[';
  for (int pos = 0; pos < r; ++pos) out += s.site_bound(pos) ? '1' : '0';
  out += "][";
  for (int pos = r; pos < 2 * r; ++pos) out += s.site_bound(pos) ? '1' : '0';
  out += ']';
  return out;
}

MicroState parse_state(std::string_view literal, const LatticeSpec& spec) {
  const int r = spec.ring_len();
  const std::size_t expected = static_cast<std::size_t>(2 * r + 4);
  const auto bad = [&](const std::string& why) {
    return TopologyError("state literal \"" + std::string(literal) + "\": " + why);
  };
  if (literal.size() != expected)
    throw bad("expected " + std::to_string(expected) + " characters for ring length " +
              std::to_string(r));
  if (literal[0] != '[' || literal[r + 1] != ']' || literal[r + 2] != '[' ||
      literal[2 * r + 3] != ']')
    throw bad("expected the form [" + std::string(r, '.') + "][" + std::string(r, '.') + "]");
  std::uint64_t bits = 0;
  for (int pos = 0; pos < 2 * r; ++pos) {
    const char c = literal[pos < r ? 1 + pos : 3 + pos];
    if (c != '0' && c != '1') throw bad("sites must be 0 or 1");
    if (c == '1') bits |= 1ull << pos;
  }
  return MicroState{bits};
}

bool is_one_ring_arc(MicroState s, const LatticeSpec& spec) {
  if (bound_count(s) <= 1) return true;
  const int r = spec.ring_len();
  const std::uint64_t mask = ring_mask(r);
  const std::uint64_t low = s.bits & mask;
  const std::uint64_t high = (s.bits >> r) & mask;
  if (low != 0 && high != 0) return false;
  const std::uint64_t ring = low | high;
  if (ring == mask) return true;
  // A cyclic run has exactly one bound->empty boundary going rightward.
  int boundaries = 0;
  for (int p = 0; p < r; ++p) {
    const bool here = (ring >> p) & 1u;
    const bool next = (ring >> ((p + 1) % r)) & 1u;
    if (here && !next) ++boundaries;
  }
  return boundaries == 1;
}

bool is_connected(MicroState s, const LatticeSpec& spec) {
  const int n = bound_count(s);
  if (n <= 1) return true;
  const int m = spec.total_sites();
  int start = std::countr_zero(s.bits);
  std::uint64_t seen = 0;
  std::vector<int> stack{start};
  seen |= 1ull << start;
  int reached = 0;
  while (!stack.empty()) {
    const int pos = stack.back();
    stack.pop_back();
    ++reached;
    const int next[3] = {spec.left_of(pos), spec.right_of(pos), spec.mirror_of(pos)};
    for (int q : next) {
      if (q < 0 || q >= m) continue;
      if (!s.site_bound(q) || ((seen >> q) & 1u)) continue;
      seen |= 1ull << q;
      stack.push_back(q);
    }
  }
  return reached == n;
}

}  // namespace ringbind
