#include <algorithm>
#include <bit>
#include <map>
#include <set>
#include <string>

#include "pitgen/rank.hpp"

namespace pitgen {

PartialId partial_id(const std::vector<std::vector<std::uint32_t>>& strings) {
  const std::size_t r = strings.size();
  if (r == 0) throw PreconditionError("partial_id: no strings");
  const std::size_t n = strings[0].size();
  for (const auto& s : strings)
    if (s.size() != n) throw PreconditionError("partial_id: strings of unequal length");
  if (std::set<std::vector<std::uint32_t>>(strings.begin(), strings.end()).size() != r)
    throw PreconditionError("partial_id: strings are not distinct");

  std::vector<std::size_t> alive(r);
  for (std::size_t i = 0; i < r; ++i) alive[i] = i;
  PartialId out;
  while (alive.size() > 1) {
    std::size_t j = 0;
    for (; j < n; ++j) {
      bool differs = false;
      for (auto i : alive) differs |= strings[i][j] != strings[alive[0]][j];
      if (differs) break;
    }
    // minimum frequency symbol, ties to the smallest symbol
    std::map<std::uint32_t, std::size_t> freq;
    for (auto i : alive) ++freq[strings[i][j]];
    std::uint32_t sigma = freq.begin()->first;
    for (const auto& [sym, c] : freq)
      if (c < freq[sigma]) sigma = sym;
    std::vector<std::size_t> keep;
    for (auto i : alive)
      if (strings[i][j] == sigma) keep.push_back(i);
    alive = std::move(keep);
    out.S.push_back(j);
  }
  out.i0 = alive[0];
  std::sort(out.S.begin(), out.S.end());
  return out;
}

namespace {

constexpr std::uint64_t bit_mask(int j) {
  std::uint64_t m = 0;
  for (unsigned x = 0; x < 64; ++x)
    if (x >> j & 1u) m |= 1ull << x;
  return m;
}

constexpr std::uint64_t U[6] = {bit_mask(0), bit_mask(1), bit_mask(2), bit_mask(3), bit_mask(4), bit_mask(5)};

inline PackedPartialId run(std::uint64_t f, unsigned S) {
  int k = std::popcount(f);
  while (k > 1) {
    int j = 0;
    std::uint64_t a = f & U[0];
    while (!a || a == f) a = f & U[++j];
    int ones = std::popcount(a);
    if (2 * ones < k) {
      f = a;
      k = ones;
    } else {
      f ^= a;
      k -= ones;
    }
    S |= 1u << j;
  }
  return {static_cast<unsigned>(std::countr_zero(f)), S};
}

}  // namespace

PackedPartialId partial_id_packed(std::uint64_t family) {
  if (!family) throw PreconditionError("partial_id_packed: empty family");
  return run(family, 0);
}

// For F = base + {b}, the first disagreeing coordinate j depends on b only
// through bit j of b when base is constant there; group the candidates by
// that coordinate and by which side of the split b lands on.  The losing side
// is the same set for the whole group, so its recursion runs once.
void partial_id_extend(std::uint64_t base, std::uint64_t candidates, PackedPartialId out[64]) {
  const int nb = std::popcount(base);
  const int r = nb + 1;
  std::uint64_t rest = candidates & ~base;
  for (int j = 0; j < 6 && rest; ++j) {
    const std::uint64_t bj = base & U[j];
    const int cb = std::popcount(bj);
    std::uint64_t dis;
    if (cb == 0)
      dis = rest & U[j];
    else if (cb == nb)
      dis = rest & ~U[j];
    else
      dis = rest;
    if (!dis) continue;
    rest &= ~dis;
    for (int v = 0; v < 2; ++v) {
      std::uint64_t group = dis & (v ? U[j] : ~U[j]);
      if (!group) continue;
      const int ones = cb + v;
      const int sigma = 2 * ones < r ? 1 : 0;
      const std::uint64_t side = sigma ? bj : base ^ bj;
      if (v != sigma) {
        PackedPartialId res = run(side, 1u << j);
        while (group) {
          out[std::countr_zero(group)] = res;
          group &= group - 1;
        }
      } else {
        while (group) {
          int b = std::countr_zero(group);
          out[b] = run(side | 1ull << b, 1u << j);
          group &= group - 1;
        }
      }
    }
  }
}

}  // namespace pitgen
