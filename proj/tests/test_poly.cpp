#include <gtest/gtest.h>

#include "pitgen/poly.hpp"

using namespace pitgen;

namespace {

SparsePoly var(const Field& F, std::size_t n, std::size_t i) { return SparsePoly::variable(F, n, i); }
SparsePoly cst(const Field& F, std::size_t n, i64 c) { return SparsePoly::constant(F, n, F(c)); }

SparsePoly random_poly(const Field& F, std::size_t n, std::uint32_t d, Rng& rng, int terms = 6) {
  SparsePoly f(F, n);
  for (int t = 0; t < terms; ++t) {
    Exponents a(n);
    for (auto& e : a) e = static_cast<std::uint32_t>(rng.below(d));
    f.add_term(a, rng.nonzero(F));
  }
  return f;
}

std::vector<Felt> random_point(const Field& F, std::size_t n, Rng& rng) {
  std::vector<Felt> x(n);
  for (auto& v : x) v = rng.element(F);
  return x;
}

// Evaluation by repeated multiplication, no shared code with eval().
Felt naive_eval(const SparsePoly& f, const std::vector<Felt>& x) {
  Felt acc = f.field().zero();
  for (const auto& [a, c] : f.terms()) {
    Felt m = c;
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::uint32_t k = 0; k < a[i]; ++k) m = m * x[i];
    acc = acc + m;
  }
  return acc;
}

u64 choose(u64 n, u64 k) {
  if (k > n) return 0;
  u64 r = 1;
  for (u64 i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST(Poly, Arithmetic) {
  Field F(7);
  auto x1 = var(F, 2, 0), x2 = var(F, 2, 1);
  EXPECT_EQ(x1 * x2, SparsePoly::monomial(F, {1, 1}, F(1)));
  EXPECT_EQ(x1 + SparsePoly(F, 2), x1);
  auto p = (x1 + cst(F, 2, 1)) * (x1 - cst(F, 2, 1));
  SparsePoly want(F, 2);
  want.add_term({2, 0}, F(1));
  want.add_term({0, 0}, F(6));
  EXPECT_EQ(p, want);
  EXPECT_TRUE((x1 - x1).is_zero());
  EXPECT_EQ((x1 - x1).size(), 0u);
}

TEST(Poly, Mismatch) {
  Field F(7), G(11);
  EXPECT_THROW(var(F, 2, 0) + var(F, 3, 0), ArityMismatch);
  EXPECT_THROW(var(F, 2, 0) * var(G, 2, 0), FieldMismatch);
  EXPECT_THROW(coeff(var(F, 2, 0), {1}), ArityMismatch);
  EXPECT_THROW(eval(var(F, 2, 0), {F(1)}), ArityMismatch);
}

TEST(Poly, Coefficients) {
  Field F(101);
  auto f = SparsePoly::monomial(F, {2, 1}, F(3));
  EXPECT_EQ(coeff(f, {2, 1}), F(3));
  EXPECT_EQ(coeff(f, {1, 1}), F(0));
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    auto g = random_poly(F, 3, 3, rng), h = random_poly(F, 3, 3, rng);
    for (const auto& a : all_exponents(3, 3)) EXPECT_EQ(coeff(g + h, a), coeff(g, a) + coeff(h, a));
  }
}

TEST(Poly, Degrees) {
  Field F(7);
  auto f = SparsePoly::monomial(F, {2, 1, 0}, F(1)) + SparsePoly::monomial(F, {0, 0, 3}, F(2));
  EXPECT_EQ(f.total_degree(), 3u);
  EXPECT_EQ(f.degree_in(0), 2u);
  EXPECT_EQ(f.degree_in(2), 3u);
  EXPECT_EQ(f.individual_degree(), 3u);
  EXPECT_EQ(support_size({0, 3, 1}), 2);
  EXPECT_EQ(total_degree(Exponents{0, 3, 1}), 4u);
  EXPECT_EQ(max_entry({0, 3, 1}), 3u);
}

TEST(Poly, ExponentEnumeration) {
  auto all = all_exponents(3, 3);
  EXPECT_EQ(all.size(), 27u);
  EXPECT_TRUE(std::is_sorted(all.begin(), all.end()));
  auto s1 = exponents_with_support(3, 3, 1);
  EXPECT_EQ(s1.size(), 1u + 3u * 2u);
  for (const auto& a : s1) EXPECT_LE(support_size(a), 1);
}

TEST(Poly, Eval) {
  Field F(7);
  auto f = var(F, 2, 0) * var(F, 2, 1) + cst(F, 2, 1);
  EXPECT_EQ(eval(f, {F(2), F(3)}), F(0));
  EXPECT_EQ(eval(SparsePoly(F, 2), {F(4), F(5)}), F(0));
  Field G(10007);
  Rng rng(11);
  for (int t = 0; t < 30; ++t) {
    auto g = random_poly(G, 4, 5, rng, 10);
    auto x = random_point(G, 4, rng);
    EXPECT_EQ(eval(g, x), naive_eval(g, x));
  }
}

TEST(Hasse, Examples) {
  Field F(101);
  auto x3 = SparsePoly::monomial(F, {3}, F(1));
  EXPECT_EQ(hasse_derivative(x3, {2}), SparsePoly::monomial(F, {1}, F(3)));
  Rng rng(2);
  auto f = random_poly(F, 2, 4, rng);
  EXPECT_EQ(hasse_derivative(f, {0, 0}), f);
  Field F2(2);
  EXPECT_EQ(hasse_derivative(SparsePoly::monomial(F2, {2}, F2(1)), {2}), cst(F2, 1, 1));
}

TEST(Hasse, DefinitionViaSymbolicShift) {
  // The coefficient of x^a in f(x+t) is the a-th Hasse derivative in t.
  for (u64 p : {2u, 3u, 101u}) {
    Field F(p);
    Rng rng(p);
    for (int rep = 0; rep < 10; ++rep) {
      const std::size_t n = 2;
      auto f = random_poly(F, n, 4, rng);
      auto s = shift_symbolic(f);
      for (const auto& a : all_exponents(n, 4)) {
        SparsePoly want(F, n);
        for (const auto& [e, c] : s.terms())
          if (e[0] == a[0] && e[1] == a[1]) want.add_term({e[2], e[3]}, c);
        EXPECT_EQ(hasse_derivative(f, a), want);
      }
    }
  }
}

TEST(Hasse, CompositionLaws) {
  Field F(3);
  Rng rng(17);
  for (int rep = 0; rep < 20; ++rep) {
    auto f = random_poly(F, 2, 5, rng, 8);
    // disjoint blocks
    EXPECT_EQ(hasse_derivative(hasse_derivative(f, {2, 0}), {0, 1}), hasse_derivative(f, {2, 1}));
    // one variable: d_a d_b = binom(a+b, a) d_{a+b}
    for (std::uint32_t a = 0; a < 3; ++a)
      for (std::uint32_t b = 0; b < 3; ++b)
        EXPECT_EQ(hasse_derivative(hasse_derivative(f, {a, 0}), {b, 0}),
                  hasse_derivative(f, {a + b, 0}) * F.from_u64(choose(a + b, a) % 3));
  }
}

TEST(Shift, Examples) {
  Field F(101);
  auto s = shift_symbolic(SparsePoly::monomial(F, {2}, F(1)));
  SparsePoly want(F, 2);
  want.add_term({2, 0}, F(1));
  want.add_term({1, 1}, F(2));
  want.add_term({0, 2}, F(1));
  EXPECT_EQ(s, want);

  Rng rng(4);
  auto f = random_poly(F, 3, 3, rng);
  EXPECT_EQ(shift(f, {F(0), F(0), F(0)}), f);

  auto x1x2 = SparsePoly::monomial(F, {1, 1}, F(1));
  SparsePoly w(F, 2);
  for (const auto& a : all_exponents(2, 2)) w.add_term(a, F(1));
  EXPECT_EQ(shift(x1x2, {F(1), F(1)}), w);
}

TEST(Shift, InverseAndPointConsistency) {
  Field F(10007);
  Rng rng(8);
  for (int rep = 0; rep < 20; ++rep) {
    auto f = random_poly(F, 3, 4, rng, 10);
    auto alpha = random_point(F, 3, rng);
    std::vector<Felt> neg;
    for (auto& a : alpha) neg.push_back(-a);
    EXPECT_EQ(shift(shift(f, alpha), neg), f);
    auto x = random_point(F, 3, rng);
    std::vector<Felt> xa;
    for (std::size_t i = 0; i < 3; ++i) xa.push_back(x[i] + alpha[i]);
    EXPECT_EQ(eval(shift(f, alpha), x), naive_eval(f, xa));
  }
}

TEST(Compose, Basics) {
  Field F(101);
  Rng rng(9);
  auto f = random_poly(F, 3, 3, rng);
  EXPECT_EQ(compose(f, PolyMap::identity(F, 3)), f);

  auto y = var(F, 1, 0);
  auto x1x2 = SparsePoly::monomial(F, {1, 1}, F(1));
  EXPECT_EQ(compose(x1x2, PolyMap{1, {y, y}}), SparsePoly::monomial(F, {2}, F(1)));
  EXPECT_THROW(compose(x1x2, PolyMap{1, {y}}), ArityMismatch);
}

TEST(Compose, EvaluationAndDegree) {
  Field F(10007);
  Rng rng(10);
  for (int rep = 0; rep < 20; ++rep) {
    auto f = random_poly(F, 3, 3, rng);
    PolyMap g{2, {random_poly(F, 2, 3, rng, 3), random_poly(F, 2, 3, rng, 3), random_poly(F, 2, 3, rng, 3)}};
    auto h = compose(f, g);
    std::uint64_t gdeg = 0;
    for (const auto& c : g.components) gdeg = std::max(gdeg, c.total_degree());
    if (!h.is_zero()) EXPECT_LE(h.total_degree(), f.total_degree() * gdeg);
    auto s = random_point(F, 2, rng);
    std::vector<Felt> gs;
    for (const auto& c : g.components) gs.push_back(naive_eval(c, s));
    EXPECT_EQ(eval(h, s), naive_eval(f, gs));
  }
}

TEST(Kronecker, Examples) {
  Field F(101);
  // ring (y1, z1): z1 -> y1^3
  auto z1 = var(F, 2, 1), y1 = var(F, 2, 0);
  EXPECT_EQ(kronecker_substitute(z1, {1}, 3), SparsePoly::monomial(F, {3}, F(1)));
  EXPECT_EQ(kronecker_substitute(y1 + z1, {1}, 3),
            SparsePoly::monomial(F, {1}, F(1)) + SparsePoly::monomial(F, {3}, F(1)));
  EXPECT_THROW(kronecker_substitute(z1 * z1 * z1, {1}, 3), PreconditionError);
}

TEST(Kronecker, MonomialImagesDistinct) {
  Field F(101);
  Rng rng(12);
  const std::uint32_t D = 3;
  for (int rep = 0; rep < 30; ++rep) {
    auto f = random_poly(F, 4, D, rng, 12);
    auto k = kronecker_substitute(f, {2, 3}, D);
    EXPECT_EQ(k.size(), f.size());  // no two monomials collide
    for (const auto& [a, c] : f.terms()) EXPECT_EQ(coeff(k, {a[0] + D * a[2], a[1] + D * a[3]}), c);
  }
}

TEST(Poly, Lift) {
  Field F(7);
  UniPoly p(F, {F(1), F(2)});
  auto l = lift(p, 3, 1);
  EXPECT_EQ(l, cst(F, 3, 1) + var(F, 3, 1) * F(2));
}

TEST(Poly, Pow) {
  Field F(7);
  auto f = var(F, 2, 0) + var(F, 2, 1);
  EXPECT_EQ(f.pow(3), f * f * f);
  EXPECT_EQ(f.pow(0), cst(F, 2, 1));
}

TEST(Poly, Embed) {
  Field F(7);
  auto f = SparsePoly::monomial(F, {1, 2}, F(3));
  EXPECT_EQ(f.embed(3, {2, 0}), SparsePoly::monomial(F, {2, 0, 1}, F(3)));
}
