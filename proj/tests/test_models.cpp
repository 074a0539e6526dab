#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "pitgen/models.hpp"

using namespace pitgen;

namespace {

FMatrix mat(const Field& F, std::initializer_list<std::initializer_list<i64>> rows) {
  FMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (i64 v : row) m(i, j++) = F(v);
    ++i;
  }
  return m;
}

FVector vec(const Field& F, std::initializer_list<i64> v) {
  FVector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (i64 x : v) out(i++) = F(x);
  return out;
}

Roabp width_one(const Field& F, const std::vector<std::vector<i64>>& univariates, std::uint32_t d) {
  Roabp m;
  m.m.field = F;
  m.m.n = univariates.size();
  m.m.d = d;
  m.m.order.resize(m.m.n);
  std::iota(m.m.order.begin(), m.m.order.end(), 0);
  for (const auto& u : univariates) {
    MatrixLayer l;
    for (i64 c : u) l.coeffs.push_back(mat(F, {{c}}));
    m.m.layers.push_back(l);
  }
  m.left = m.right = vec(F, {1});
  return m;
}

std::vector<Felt> random_point(const Field& F, std::size_t n, Rng& rng) {
  std::vector<Felt> x(n);
  for (auto& v : x) v = rng.element(F);
  return x;
}

u64 choose(u64 n, u64 k) {
  if (k > n) return 0;
  u64 r = 1;
  for (u64 i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Every Hasse derivative from the binomial formula, row-reduced.
std::size_t derivative_dim_oracle(const SparsePoly& f) {
  const Field& F = f.field();
  const std::size_t n = f.arity();
  std::vector<std::uint32_t> deg(n, 0);
  for (const auto& [a, c] : f.terms())
    for (std::size_t i = 0; i < n; ++i) deg[i] = std::max(deg[i], a[i]);
  std::vector<Exponents> mons;
  Exponents cur(n, 0);
  for (;;) {
    mons.push_back(cur);
    std::size_t i = 0;
    while (i < n && cur[i] == deg[i]) cur[i++] = 0;
    if (i == n) break;
    ++cur[i];
  }
  FMatrix rows = FMatrix::Constant(static_cast<Eigen::Index>(mons.size()), static_cast<Eigen::Index>(mons.size()), F.zero());
  for (std::size_t b = 0; b < mons.size(); ++b)
    for (const auto& [a, c] : f.terms()) {
      bool ok = true;
      u64 w = 1;
      Exponents rest(n);
      for (std::size_t i = 0; i < n; ++i) {
        ok &= a[i] >= mons[b][i];
        if (!ok) break;
        w = w * choose(a[i], mons[b][i]) % F.p();
        rest[i] = a[i] - mons[b][i];
      }
      if (!ok) continue;
      const auto col = std::find(mons.begin(), mons.end(), rest) - mons.begin();
      rows(static_cast<Eigen::Index>(b), col) += c * F.from_u64(w);
    }
  return static_cast<std::size_t>(rank(rows));
}

}  // namespace

TEST(Roabp, SingleLayer) {
  Field F(101);
  Roabp m = width_one(F, {{0, 1}}, 2);
  EXPECT_EQ(roabp_expand(m), SparsePoly::variable(F, 1, 0));
  EXPECT_EQ(roabp_eval(m, {F(5)}), F(5));
  m.left = vec(F, {0});
  EXPECT_TRUE(roabp_expand(m).is_zero());
}

TEST(Roabp, ProductOfShiftedVariables) {
  Field F(101);
  Roabp m = width_one(F, {{1, 1}, {1, 1}, {1, 1}}, 2);
  EXPECT_EQ(roabp_eval(m, {F(0), F(0), F(0)}), F(1));
  SparsePoly want(F, 3);
  for (const auto& a : all_exponents(3, 2)) want.add_term(a, F(1));
  EXPECT_EQ(roabp_expand(m), want);
}

TEST(Roabp, ExpandMatchesEval) {
  Field F(10007);
  Rng rng(1);
  for (u64 seed = 0; seed < 10; ++seed) {
    Roabp m = random_model(ModelKind::roabp, F, 2, 3, 2, seed).roabp;
    SparsePoly f = roabp_expand(m);
    for (int t = 0; t < 20; ++t) {
      auto x = random_point(F, 2, rng);
      EXPECT_EQ(eval(f, x), roabp_eval(m, x));
    }
  }
}

TEST(Roabp, MatrixOutput) {
  Field F(101);
  MatrixRoabp m;
  m.field = F;
  m.n = 1;
  m.d = 2;
  m.order = {0};
  MatrixLayer l;
  l.coeffs = {mat(F, {{1, 0}, {0, 2}}), mat(F, {{0, 1}, {0, 0}})};
  m.layers = {l};
  auto e = roabp_expand_matrix(m);
  ASSERT_EQ(e.size(), 4u);
  EXPECT_EQ(e[0], SparsePoly::constant(F, 1, F(1)));
  EXPECT_EQ(e[1], SparsePoly::variable(F, 1, 0));
  EXPECT_TRUE(e[2].is_zero());
  EXPECT_EQ(e[3], SparsePoly::constant(F, 1, F(2)));
}

TEST(Roabp, ValidationErrors) {
  Field F(101);
  Roabp m = width_one(F, {{0, 1, 1}}, 2);
  EXPECT_THROW(m.validate(), PreconditionError);
  Roabp ok = width_one(F, {{0, 1}}, 2);
  EXPECT_THROW(roabp_eval(ok, {F(1), F(2)}), ArityMismatch);
  ok.m.order = {1};
  EXPECT_THROW(ok.validate(), PreconditionError);
}

TEST(Roabp, Reorder) {
  Field F(10007);
  Roabp m = random_model(ModelKind::roabp, F, 3, 2, 2, 7).roabp;
  Roabp r = reorder(m, {2, 0, 1});
  Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    auto x = random_point(F, 3, rng);
    // layer i of r reads order[i]: x permuted accordingly reproduces m
    std::vector<Felt> y(3);
    y[2] = x[0];
    y[0] = x[1];
    y[1] = x[2];
    EXPECT_EQ(roabp_eval(r, y), roabp_eval(m, x));
  }
}

TEST(Smabp, SingleLayer) {
  Field F(101);
  Smabp s;
  s.field = F;
  s.sets = 1;
  s.set_size = 2;
  s.r = 1;
  s.partition = {{0, 1}};
  s.coeffs = {{mat(F, {{1}}), mat(F, {{1}})}};
  s.left = s.right = vec(F, {1});
  Roabp R = smabp_to_roabp(s);
  EXPECT_LE(R.m.width(), 2);
  EXPECT_EQ(roabp_expand(R), SparsePoly::variable(F, 2, 0) + SparsePoly::variable(F, 2, 1));

  s.coeffs = {{mat(F, {{0}}), mat(F, {{0}})}};
  EXPECT_TRUE(roabp_expand(smabp_to_roabp(s)).is_zero());
  EXPECT_TRUE(smabp_expand(s).is_zero());
}

TEST(Smabp, ProductOfTwoForms) {
  Field F(101);
  Smabp s;
  s.field = F;
  s.sets = 2;
  s.set_size = 2;
  s.r = 1;
  s.partition = {{0, 2}, {1, 3}};
  s.coeffs = {{mat(F, {{2}}), mat(F, {{3}})}, {mat(F, {{5}}), mat(F, {{7}})}};
  s.left = s.right = vec(F, {1});
  auto x = [&](std::size_t i) { return SparsePoly::variable(F, 4, i); };
  SparsePoly want = (x(0) * F(2) + x(2) * F(3)) * (x(1) * F(5) + x(3) * F(7));
  EXPECT_EQ(smabp_expand(s), want);
  EXPECT_EQ(roabp_expand(smabp_to_roabp(s)), want);
}

TEST(Smabp, RandomConversions) {
  Field F(10007);
  Rng rng(2);
  for (u64 seed = 0; seed < 15; ++seed) {
    Smabp s = random_model(ModelKind::smabp, F, 2, 3, 2, seed).smabp;
    Roabp R = smabp_to_roabp(s);
    EXPECT_LE(R.m.width(), 4);
    SparsePoly e = roabp_expand(R);
    EXPECT_EQ(e, smabp_expand(s));
    if (!e.is_zero()) EXPECT_LE(e.individual_degree(), 1u);
    auto p = random_point(F, s.arity(), rng);
    EXPECT_EQ(smabp_eval(s, p), roabp_eval(R, p));
  }
}

TEST(Diagonal, Expansions) {
  Field F(7);
  DiagonalCircuit c{F, 1, {{{F(1), F(1)}, 2}}};
  SparsePoly want(F, 1);
  want.add_term({2}, F(1));
  want.add_term({1}, F(2));
  want.add_term({0}, F(1));
  EXPECT_EQ(diagonal_to_poly(c), want);
  EXPECT_EQ(diagonal_eval(c, {F(3)}), F(16));

  DiagonalCircuit k{F, 2, {{{F(4), F(1), F(2)}, 0}}};
  EXPECT_EQ(diagonal_to_poly(k), SparsePoly::constant(F, 2, F(1)));

  Field G(101);
  DiagonalCircuit cube{G, 2, {{{G(0), G(1), G(1)}, 3}}};
  auto f = diagonal_to_poly(cube);
  for (std::uint32_t i = 0; i <= 3; ++i) EXPECT_EQ(coeff(f, {i, 3 - i}), G.from_u64(choose(3, i)));
  EXPECT_EQ(f.size(), 4u);
}

TEST(PartialDerivativeDim, Examples) {
  Field F(101);
  auto x1 = SparsePoly::variable(F, 2, 0), x2 = SparsePoly::variable(F, 2, 1);
  EXPECT_EQ(partial_derivative_dim(x1 * x2), 4u);
  EXPECT_EQ(partial_derivative_dim(SparsePoly(F, 2)), 0u);
  EXPECT_EQ(partial_derivative_dim((x1 + x2).pow(2)), 3u);
  EXPECT_EQ(derivative_dim_oracle(x1 * x2), 4u);
  EXPECT_EQ(derivative_dim_oracle((x1 + x2).pow(2)), 3u);
}

TEST(PartialDerivativeDim, AgreesWithOracle) {
  for (u64 p : {2u, 3u, 10007u}) {
    Field F(p);
    for (u64 seed = 0; seed < 10; ++seed) {
      auto c = random_model(ModelKind::diagonal, F, 3, 4, 2, seed).diagonal;
      auto f = diagonal_to_poly(c);
      const auto dim = partial_derivative_dim(f);
      EXPECT_EQ(dim, derivative_dim_oracle(f));
      EXPECT_LE(dim, f.size() * (1u << 12));
      u64 bound = 0;
      for (const auto& t : c.terms) bound += t.power + 1;
      EXPECT_LE(dim, bound) << "p=" << p;
    }
  }
}

TEST(RoabpFromPoly, RebuildsDiagonalCircuits) {
  Field F(10007);
  for (u64 seed = 0; seed < 10; ++seed) {
    auto f = diagonal_to_poly(random_model(ModelKind::diagonal, F, 3, 3, 2, seed).diagonal);
    const auto dim = partial_derivative_dim(f);
    for (std::vector<std::size_t> order : {std::vector<std::size_t>{0, 1, 2}, {2, 0, 1}}) {
      Roabp m = roabp_from_poly(f, order);
      EXPECT_EQ(roabp_expand(m), f);
      EXPECT_LE(static_cast<std::size_t>(m.m.width()), std::max<std::size_t>(dim, 1));
    }
  }
}

TEST(RandomModel, Deterministic) {
  Field F(101);
  auto a = random_model(ModelKind::roabp, F, 3, 2, 2, 99).roabp;
  auto b = random_model(ModelKind::roabp, F, 3, 2, 2, 99).roabp;
  EXPECT_EQ(roabp_expand(a), roabp_expand(b));
  EXPECT_EQ(a.m.order, b.m.order);
  EXPECT_EQ(a.left, b.left);
}

TEST(RandomModel, CommutativeInstancesIgnoreOrder) {
  Field F(10007);
  for (u64 seed = 0; seed < 5; ++seed) {
    auto rm = random_model(ModelKind::commutative, F, 3, 3, 3, seed);
    EXPECT_TRUE(rm.commutativity_witness);
    const SparsePoly f = roabp_expand(rm.roabp);
    std::vector<std::size_t> perm = {0, 1, 2};
    do {
      // Same layers in a different sequence, each still reading its own variable.
      Roabp s = rm.roabp;
      for (std::size_t i = 0; i < 3; ++i) {
        s.m.layers[i] = rm.roabp.m.layers[perm[i]];
        s.m.order[i] = rm.roabp.m.order[perm[i]];
      }
      EXPECT_EQ(roabp_expand(s), f);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
}

TEST(RandomModel, WidthOneIsProductOfUnivariates) {
  Field F(10007);
  auto m = random_model(ModelKind::roabp, F, 3, 3, 1, 4).roabp;
  EXPECT_EQ(m.m.width(), 1);
  SparsePoly prod = SparsePoly::constant(F, 3, m.left(0) * m.right(0));
  for (std::size_t i = 0; i < 3; ++i)
    prod = prod * lift(m.m.layers[i].entry(F, 0, 0), 3, m.m.order[i]);
  EXPECT_EQ(roabp_expand(m), prod);
}
