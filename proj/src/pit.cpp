#include "pitgen/pit.hpp"

namespace pitgen {

const char* to_string(PitMode m) {
  switch (m) {
    case PitMode::hitting_set:
      return "deterministic-hitting-set";
    case PitMode::grid:
      return "grid-oracle";
    case PitMode::randomized:
      return "randomized";
  }
  return "?";
}

PitVerdict pit_blackbox(const Oracle& oracle, const PointSet& set, const ScanOptions& opts, PitMode mode) {
  PitVerdict v;
  v.mode = mode;
  auto hit = [&](const std::vector<std::uint64_t>& digits) {
    ++v.points_tried;
    auto x = set.point_at(digits);
    if (oracle(x).is_zero()) return false;
    v.nonzero = true;
    v.witness = std::move(x);
    v.witness_digits = digits;
    return true;
  };
  std::vector<std::uint64_t> digits(set.counts().size(), 0);
  for (u64 k = 0; k < opts.sequential; ++k) {
    if (hit(digits)) return v;
    if (!set.next(digits)) {
      v.exhaustive = true;
      return v;
    }
  }
  Rng rng(opts.seed);
  for (u64 k = 0; k < opts.sampled; ++k) {
    for (std::size_t i = 0; i < digits.size(); ++i) digits[i] = rng.below(set.counts()[i]);
    if (hit(digits)) return v;
  }
  return v;
}

PointSet grid_oracle_set(const Field& f, std::size_t n, std::uint32_t d) {
  if (f.p() < u64{d} + 1) throw FieldTooSmall("grid_oracle_set: need |F| >= d+1");
  return PointSet(identity_generator(f, n), std::vector<std::uint64_t>(n, u64{d} + 1));
}

PitVerdict pit_random(const Oracle& oracle, const Field& f, std::size_t n, u64 trials, u64 seed) {
  PitVerdict v;
  v.mode = PitMode::randomized;
  Rng rng(seed);
  std::vector<Felt> x(n);
  for (u64 k = 0; k < trials; ++k) {
    for (auto& xi : x) xi = rng.element(f);
    ++v.points_tried;
    if (!oracle(x).is_zero()) {
      v.nonzero = true;
      v.witness = x;
      return v;
    }
  }
  return v;
}

bool support_monomial_exists(const SparsePoly& f, int ell) {
  for (const auto& [a, c] : f.terms())
    if (support_size(a) <= ell) return true;
  return false;
}

}  // namespace pitgen
