#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pitgen/generators.hpp"
#include "pitgen/models.hpp"

namespace pitgen {

enum class PitMode { hitting_set, grid, randomized };
const char* to_string(PitMode m);

struct PitVerdict {
  bool nonzero = false;
  std::optional<std::vector<Felt>> witness;
  std::optional<std::vector<std::uint64_t>> witness_digits;  // cube coordinates of the witness
  u64 points_tried = 0;
  bool exhaustive = false;  // every point of the set was tried
  PitMode mode = PitMode::hitting_set;
};

using Oracle = std::function<Felt(const std::vector<Felt>&)>;

// The set is scanned in index order for up to `sequential` points; if that
// does not exhaust it, `sampled` further cube points are drawn from `seed`.
// A zero verdict is only conclusive when exhaustive is set.
struct ScanOptions {
  u64 sequential = u64{1} << 20;
  u64 sampled = u64{1} << 16;
  u64 seed = 0;
};

PitVerdict pit_blackbox(const Oracle& oracle, const PointSet& set, const ScanOptions& opts = {},
                        PitMode mode = PitMode::hitting_set);

// The (d+1)^n grid {0..d}^n.
PointSet grid_oracle_set(const Field& f, std::size_t n, std::uint32_t d);

// Uniform points of F^n; a nonzero polynomial of degree D is missed by one
// point with probability at most D/p.
PitVerdict pit_random(const Oracle& oracle, const Field& f, std::size_t n, u64 trials, u64 seed);

bool support_monomial_exists(const SparsePoly& f, int ell);

struct SuiteParams {
  u64 trials = 20;
  u64 seed = 1;
  std::size_t max_n = 4;
  u64 max_r = 2;
  std::uint32_t max_d = 3;
  bool allow_large = false;  // lift the desk-scale caps
  bool control = false;      // run the suite's deliberately broken variant
};

struct SuiteFailure {
  u64 case_index = 0;
  u64 seed = 0;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  u64 cases = 0;
  u64 skipped = 0;  // e.g. sampled instances that came out identically zero
  std::vector<SuiteFailure> failures;
  std::map<std::string, std::string> params;

  bool pass() const { return failures.empty(); }
};

const std::vector<std::string>& suite_names();

// Seed of case i; each case is a pure function of (params, case seed).
u64 case_seed(u64 seed, u64 i);

struct CaseOutcome {
  bool skipped = false;
  std::optional<std::string> failure;
};
CaseOutcome run_case(const std::string& suite, const SuiteParams& params, u64 seed);

SuiteReport verify_theorem(const std::string& suite, const SuiteParams& params);

struct PartialIdSweep {
  u64 families = 0;
  u64 invalid = 0;
  u64 oversized = 0;  // |S| > floor(lg r)
  std::optional<std::uint64_t> first_bad;
};
// Every family of 1..max_r distinct binary strings of length 6 (shorter
// lengths are the families constant on the extra coordinates).
PartialIdSweep partial_id_sweep(int max_r);

}  // namespace pitgen
