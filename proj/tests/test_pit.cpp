#include <gtest/gtest.h>

#include <cmath>

#include "pitgen/pit.hpp"

using namespace pitgen;

namespace {

u64 choose(u64 n, u64 k) {
  u64 r = 1;
  for (u64 i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST(PitBlackbox, ConstantAndZeroOracles) {
  Field F(101);
  auto H = grid_oracle_set(F, 2, 2);
  auto one = pit_blackbox([&](const std::vector<Felt>&) { return F.one(); }, H);
  EXPECT_TRUE(one.nonzero);
  EXPECT_EQ(one.points_tried, 1u);
  ASSERT_TRUE(one.witness);
  EXPECT_EQ(*one.witness, H.point(0));

  auto zero = pit_blackbox([&](const std::vector<Felt>&) { return F.zero(); }, H);
  EXPECT_FALSE(zero.nonzero);
  EXPECT_FALSE(zero.witness);
  EXPECT_TRUE(zero.exhaustive);
  EXPECT_EQ(zero.points_tried, 9u);
}

TEST(PitBlackbox, SampledScanStaysInTheSet) {
  Field F(101);
  PointSet H(identity_generator(F, 2), {100, 100});
  u64 calls = 0;
  auto v = pit_blackbox(
      [&](const std::vector<Felt>& x) {
        ++calls;
        return x[0].value() == 77 && x[1].value() == 5 ? F.one() : F.zero();
      },
      H, {10, 20000, 3});
  EXPECT_EQ(calls, v.points_tried);
  EXPECT_FALSE(v.exhaustive);
  if (v.nonzero) {
    EXPECT_EQ(*v.witness_digits, (std::vector<std::uint64_t>{77, 5}));
  }
  auto full = pit_blackbox([&](const std::vector<Felt>& x) { return x[0] == F(77) && x[1] == F(5) ? F.one() : F.zero(); },
                           H, {u64{1} << 20, 0, 0});
  EXPECT_TRUE(full.nonzero);
  EXPECT_EQ(full.points_tried, 77u * 100 + 5 + 1);
}

TEST(GridOracle, Sizes) {
  Field F(101);
  EXPECT_EQ(grid_oracle_set(F, 1, 1).size_u64(), 2u);
  auto H = grid_oracle_set(F, 2, 2);
  EXPECT_EQ(H.size_u64(), 9u);
  auto f = SparsePoly::monomial(F, {1, 1}, F(1)) - SparsePoly::constant(F, 2, F(1));
  auto v = pit_blackbox([&](const std::vector<Felt>& x) { return eval(f, x); }, H, {}, PitMode::grid);
  EXPECT_TRUE(v.nonzero);
  EXPECT_EQ(v.mode, PitMode::grid);
  EXPECT_THROW(grid_oracle_set(Field(3), 1, 3), FieldTooSmall);
}

TEST(GridOracle, AgreesWithGeneratorSets) {
  Field F(10007);
  auto H = gen_to_hitting_set(commutative_generator(F, 3, 2, 2), {1, 3});
  int agree = 0;
  for (u64 seed = 0; seed < 20; ++seed) {
    Roabp m = random_model(ModelKind::commutative, F, 3, 2, 2, seed).roabp;
    Oracle o = [&](const std::vector<Felt>& x) { return roabp_eval(m, x); };
    auto a = pit_blackbox(o, H, {4096, 4096, seed});
    auto b = pit_blackbox(o, grid_oracle_set(F, 3, 1), {}, PitMode::grid);
    EXPECT_EQ(a.nonzero, b.nonzero) << seed;
    EXPECT_EQ(a.nonzero, !roabp_expand(m).is_zero());
    agree += a.nonzero == b.nonzero;
  }
  EXPECT_EQ(agree, 20);
}

TEST(PitRandom, FindsNonzero) {
  Field F(10007);
  auto f = SparsePoly::monomial(F, {1, 1, 1}, F(1));
  auto v = pit_random([&](const std::vector<Felt>& x) { return eval(f, x); }, F, 3, 16, 5);
  EXPECT_TRUE(v.nonzero);
  EXPECT_EQ(v.mode, PitMode::randomized);
  EXPECT_FALSE(eval(f, *v.witness).is_zero());
  auto z = pit_random([&](const std::vector<Felt>&) { return F.zero(); }, F, 3, 16, 5);
  EXPECT_FALSE(z.nonzero);
  EXPECT_EQ(z.points_tried, 16u);
}

TEST(SupportMonomial, Examples) {
  Field F(101);
  auto f = SparsePoly::monomial(F, {1, 1, 1}, F(1));
  EXPECT_FALSE(support_monomial_exists(f, 2));
  EXPECT_TRUE(support_monomial_exists(f, 3));
  EXPECT_TRUE(support_monomial_exists(shift(f, {F(1), F(1), F(1)}), 0));
  EXPECT_FALSE(support_monomial_exists(SparsePoly(F, 3), 3));
}

TEST(SupportMonomial, DiagonalCircuits) {
  Field F(10007);
  for (u64 seed = 0; seed < 20; ++seed) {
    auto c = random_model(ModelKind::diagonal, F, 4, 4, 2, seed).diagonal;
    auto f = diagonal_to_poly(c);
    if (f.is_zero()) continue;
    EXPECT_TRUE(support_monomial_exists(f, floor_lg(partial_derivative_dim(f)))) << seed;
  }
}

TEST(Suites, NamesAndGuards) {
  EXPECT_EQ(suite_names().size(), 8u);
  SuiteParams p;
  p.max_n = 7;
  EXPECT_THROW(verify_theorem("wronskian", p), PreconditionError);
  EXPECT_THROW(verify_theorem("nope", SuiteParams{}), PreconditionError);
  EXPECT_EQ(case_seed(1, 0), case_seed(1, 0));
  EXPECT_NE(case_seed(1, 0), case_seed(1, 1));
  EXPECT_NE(case_seed(1, 0), case_seed(2, 0));
}

TEST(Suites, WronskianPasses) {
  SuiteParams p;
  p.trials = 50;
  p.max_r = 3;
  p.max_d = 3;
  auto rep = verify_theorem("wronskian", p);
  EXPECT_TRUE(rep.pass());
  EXPECT_EQ(rep.cases, 50u);
}

TEST(Suites, FastSuitesPass) {
  for (const std::string s : {"commutative", "hashing", "condenser", "concentration", "smabp"}) {
    SuiteParams p;
    p.trials = 5;
    auto rep = verify_theorem(s, p);
    EXPECT_TRUE(rep.pass()) << s << ": " << (rep.failures.empty() ? "" : rep.failures.front().detail);
  }
}

TEST(Suites, ControlsFailAndReplay) {
  for (const std::string s : {"unknown-order", "condenser"}) {
    SuiteParams p;
    p.trials = 4;
    p.control = true;
    auto rep = verify_theorem(s, p);
    ASSERT_FALSE(rep.pass()) << s;
    for (const auto& f : rep.failures) {
      auto again = run_case(s, p, f.seed);
      ASSERT_TRUE(again.failure);
      EXPECT_EQ(*again.failure, f.detail);
      EXPECT_EQ(f.seed, case_seed(p.seed, f.case_index));
    }
  }
}

TEST(PartialIdSweep, SmallRadius) {
  auto sw = partial_id_sweep(3);
  EXPECT_EQ(sw.families, choose(64, 1) + choose(64, 2) + choose(64, 3));
  EXPECT_EQ(sw.invalid, 0u);
  EXPECT_EQ(sw.oversized, 0u);
  EXPECT_FALSE(sw.first_bad);
}

TEST(Sizes, MonotoneInParameters) {
  auto size = [](std::size_t n, std::uint32_t d, u64 r) {
    const Field F(smallest_prime_at_least(unknown_order_params(n, d, r).field_bound));
    return gen_to_hitting_set(unknown_order_generator(F, n, d, r), {d - 1u, n * (d - 1u)}).counts();
  };
  auto log_size = [&](std::size_t n, std::uint32_t d, u64 r) {
    double s = 0;
    for (auto c : size(n, d, r)) s += std::log2(static_cast<double>(c));
    return s;
  };
  EXPECT_LE(log_size(2, 2, 1), log_size(3, 2, 1));
  EXPECT_LE(log_size(2, 2, 1), log_size(2, 3, 1));
  EXPECT_LE(log_size(2, 2, 1), log_size(2, 2, 2));
}
