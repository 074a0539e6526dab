#include <algorithm>
#include <bit>
#include <numeric>
#include <set>

#include "pitgen/pit.hpp"
#include "pitgen/rank.hpp"

namespace pitgen {

namespace {

constexpr u64 kDeskPrime = 10007;
constexpr int kRetries = 8;

FMatrix random_matrix(const Field& f, Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  FMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.element(f);
  return m;
}

std::vector<Felt> random_point(const Field& f, std::size_t n, Rng& rng) {
  std::vector<Felt> x(n);
  for (auto& v : x) v = rng.element(f);
  return x;
}

std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[rng.below(i)]);
  return p;
}

// In [lo, hi], clamped so that hi >= lo.
u64 pick(Rng& rng, u64 lo, u64 hi) {
  if (hi < lo) hi = lo;
  return lo + rng.below(hi - lo + 1);
}

// Forces f(0) = 0 without changing width or order: left = e_0 and row 0 of
// the first layer's constant matrix zeroed.
void vanish_at_origin(Roabp& m) {
  const Field& F = m.m.field;
  m.left = FVector::Constant(m.left.size(), F.zero());
  m.left(0) = F.one();
  auto& c0 = m.m.layers.front().coeffs.front();
  for (Eigen::Index j = 0; j < c0.cols(); ++j) c0(0, j) = F.zero();
}

FMatrix kernel_basis(const FMatrix& H) {
  const Field F(H(0, 0).modulus());
  auto e = row_echelon(H);
  std::vector<bool> is_pivot(static_cast<std::size_t>(H.cols()), false);
  for (auto p : e.pivots) is_pivot[static_cast<std::size_t>(p)] = true;
  std::vector<Eigen::Index> free;
  for (Eigen::Index j = 0; j < H.cols(); ++j)
    if (!is_pivot[static_cast<std::size_t>(j)]) free.push_back(j);
  FMatrix K = zeros(F, H.cols(), static_cast<Eigen::Index>(free.size()));
  for (std::size_t c = 0; c < free.size(); ++c) {
    K(free[c], static_cast<Eigen::Index>(c)) = F.one();
    for (std::size_t i = 0; i < e.pivots.size(); ++i)
      K(e.pivots[i], static_cast<Eigen::Index>(c)) = -e.reduced(static_cast<Eigen::Index>(i), free[c]);
  }
  return K;
}

Oracle roabp_oracle(const Roabp& m) {
  return [&m](const std::vector<Felt>& x) { return roabp_eval(m, x); };
}

using CaseFn = CaseOutcome (*)(const SuiteParams&, Rng&);

CaseOutcome fail(std::string s) { return {false, std::move(s)}; }
CaseOutcome skip() { return {true, std::nullopt}; }
CaseOutcome ok() { return {}; }

CaseOutcome commutative_case(const SuiteParams& P, Rng& rng) {
  const Field F(kDeskPrime);
  const std::size_t n = pick(rng, 1, P.max_n);
  const auto d = static_cast<std::uint32_t>(pick(rng, 2, P.max_d));
  const u64 r = pick(rng, 1, P.max_r);
  auto model = random_model(ModelKind::commutative, F, n, d, static_cast<Eigen::Index>(r), rng.next());
  const Roabp& m = model.roabp;
  if (roabp_expand(m).is_zero()) return skip();
  auto fvec = roabp_expand_matrix(m.m);
  const int ell = floor_lg(r * r);
  auto sv = sv_generator(F, n, static_cast<std::size_t>(ell) + 1);
  bool conc = false;
  for (int a = 0; a < kRetries && !conc; ++a)
    conc = is_rank_concentrated(fvec, ell, evaluate(sv, random_point(F, sv.seed_count(), rng)), d);
  if (!conc) return fail("no support-" + std::to_string(ell) + " concentration after 8 SV shifts");
  auto H = gen_to_hitting_set(commutative_generator(F, n, d, r), {d - 1, n * (d - 1)});
  auto v = pit_blackbox(roabp_oracle(m), H, {4096, 1 << 16, rng.next()});
  if (!v.nonzero) return fail("commutative hitting set found no witness");
  return ok();
}

CaseOutcome unknown_order_case(const SuiteParams& P, Rng& rng) {
  const std::size_t N = P.control ? 1 : P.max_n;
  const u64 r = P.control ? std::max<u64>(P.max_r, 4) : P.max_r;
  const auto U = unknown_order_params(N, 2, r);
  const Field F(smallest_prime_at_least(U.field_bound));
  auto g = unknown_order_generator(F, N, 2, r, !P.control);
  auto H = gen_to_hitting_set(g, {1, N});
  Roabp m = random_model(ModelKind::roabp, F, N, 2, static_cast<Eigen::Index>(r), rng.next()).roabp;
  if (P.control || rng.below(2)) vanish_at_origin(m);
  m = reorder(m, random_permutation(N, rng));
  if (roabp_expand(m).is_zero()) return skip();
  auto v = pit_blackbox(roabp_oracle(m), H, {4096, 1 << 16, rng.next()});
  auto grid = pit_blackbox(roabp_oracle(m), grid_oracle_set(F, N, 1), {u64{1} << 20, 0, 0}, PitMode::grid);
  if (v.nonzero != grid.nonzero) return fail("hitting-set and grid verdicts disagree");
  if (!v.nonzero) return fail("unknown-order hitting set found no witness");
  return ok();
}

// Diagonal layers: channels 0..r-1 have zero constant terms, channel r
// computes the planted monomial x^a.
CaseOutcome hashing_case(const SuiteParams& P, Rng& rng) {
  const Field F(kDeskPrime);
  const std::size_t n = pick(rng, 3, std::min<std::size_t>(P.max_n, 5));
  const auto d = static_cast<std::uint32_t>(pick(rng, 2, std::min<std::uint32_t>(P.max_d, 3)));
  const auto r = static_cast<Eigen::Index>(pick(rng, 1, P.max_r));
  const std::size_t ell = 2;
  auto perm = random_permutation(n, rng);
  std::vector<std::size_t> S(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(pick(rng, 1, ell)));
  Roabp m;
  m.m.field = F;
  m.m.n = n;
  m.m.d = d;
  m.m.order.resize(n);
  std::iota(m.m.order.begin(), m.m.order.end(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    MatrixLayer l;
    const bool planted = std::find(S.begin(), S.end(), i) != S.end();
    for (std::uint32_t k = 0; k < d; ++k) {
      FMatrix c = zeros(F, r + 1, r + 1);
      for (Eigen::Index ch = 0; ch < r; ++ch) c(ch, ch) = k ? rng.element(F) : F.zero();
      c(r, r) = (k == (planted ? 1u : 0u)) ? F.one() : F.zero();
      l.coeffs.push_back(std::move(c));
    }
    m.m.layers.push_back(std::move(l));
  }
  m.left = m.right = FVector::Constant(r + 1, F.one());
  SparsePoly f = roabp_expand(m);
  if (!support_monomial_exists(f, static_cast<int>(ell))) return fail("planted monomial missing");

  const std::size_t mm = hash_range(ell);
  auto fam = pairwise_hash_family(n, ell);
  std::size_t h = fam.members.size();
  for (std::size_t k = 0; k < fam.members.size() && h == fam.members.size(); ++k) {
    std::set<std::uint32_t> img;
    for (auto i : S) img.insert(fam.members[k][i]);
    if (img.size() == S.size()) h = k;
  }
  if (h == fam.members.size()) return fail("no hash function injective on the support");
  const std::uint32_t D = hashing_kronecker_degree(n, d);
  auto g = hashing_generator(F, n, mm, fam, D);
  const std::size_t u = g.block("u").offset;
  SparsePoly comp = compose(f, expand(g, {{u, F.constant(h)}}));
  if (comp.is_zero()) return fail("f o G^H vanishes at the good u");
  const u64 bound = u64{d} * d * n * n * n * n;
  if (comp.individual_degree() >= bound) return fail("individual degree not below d^2 n^4");

  // Bucket-wise layers M'_j(y_j) = prod_{h(i)=j} M_i(L_i(y_j^D) y_j).
  const NodeSet xi = NodeSet::range(F, n + 1);
  const std::size_t ar = mm + 1;
  using PM = std::vector<std::vector<SparsePoly>>;
  auto ident = [&] {
    PM I(static_cast<std::size_t>(r + 1), std::vector<SparsePoly>(static_cast<std::size_t>(r + 1), SparsePoly(F, ar)));
    for (Eigen::Index i = 0; i <= r; ++i)
      I[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = SparsePoly::constant(F, ar, F.one());
    return I;
  };
  auto mul = [&](const PM& A, const PM& B) {
    PM C(A.size(), std::vector<SparsePoly>(B[0].size(), SparsePoly(F, ar)));
    for (std::size_t i = 0; i < A.size(); ++i)
      for (std::size_t k = 0; k < B.size(); ++k)
        if (!A[i][k].is_zero())
          for (std::size_t j = 0; j < B[0].size(); ++j) C[i][j] += A[i][k] * B[k][j];
    return C;
  };
  PM total = ident();
  for (std::size_t j = 0; j < mm; ++j) {
    PM Mj = ident();
    for (std::size_t i = 0; i < n; ++i) {
      if (fam.members[h][i] != j) continue;
      SparsePoly v(F, ar);
      Exponents e(ar, 0);
      const auto L = xi.indicator(i + 1).coeffs();
      for (std::size_t k = 0; k < L.size(); ++k) {
        e[j] = static_cast<std::uint32_t>(k) * D + 1;
        v.add_term(e, L[k]);
      }
      PM layer(static_cast<std::size_t>(r + 1), std::vector<SparsePoly>(static_cast<std::size_t>(r + 1), SparsePoly(F, ar)));
      SparsePoly vk = SparsePoly::constant(F, ar, F.one());
      for (std::uint32_t k = 0; k < d; ++k) {
        for (Eigen::Index a = 0; a <= r; ++a)
          for (Eigen::Index b = 0; b <= r; ++b)
            layer[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] += vk * m.m.layers[i].coeffs[k](a, b);
        vk = vk * v;
      }
      Mj = mul(Mj, layer);
    }
    total = mul(total, Mj);
  }
  SparsePoly rebuilt(F, ar);
  for (const auto& row : total)
    for (const auto& x : row) rebuilt += x;
  if (rebuilt != comp) return fail("f o G^H differs from the bucket ROABP");
  return ok();
}

CaseOutcome condenser_case(const SuiteParams& P, Rng& rng) {
  const Field F(101);
  const int r = static_cast<int>(pick(rng, 1, std::min<u64>(P.max_r, 3)));
  const Eigen::Index m = static_cast<Eigen::Index>(pick(rng, static_cast<u64>(r) + 1, 8));
  CondenserSpec spec;
  spec.field = F;
  spec.r = r;
  spec.H = dual_rs_parity(F, r, m);
  spec.lambda.assign(static_cast<std::size_t>(r), Exponents{0});
  for (Eigen::Index j = 0; j < m; ++j) spec.W.push_back({P.control ? 1u : static_cast<std::uint32_t>(j + 1)});
  FMatrix M;
  const Eigen::Index k = static_cast<Eigen::Index>(pick(rng, 1, static_cast<u64>(m)));
  if (P.control) {
    FMatrix K = kernel_basis(spec.H);
    M = K * random_matrix(F, K.cols(), k, rng);
  } else {
    const Eigen::Index rk = static_cast<Eigen::Index>(pick(rng, 0, static_cast<u64>(r)));
    M = random_matrix(F, m, rk, rng) * random_matrix(F, rk, k, rng);
    if (rk == 0) M = zeros(F, m, k);
  }
  auto rep = condense(spec, M);
  if (rep.rank_EM != rep.rank_M)
    return fail("rank " + std::to_string(rep.rank_M) + " condensed to " + std::to_string(rep.rank_EM));
  return ok();
}

CaseOutcome concentration_case(const SuiteParams& P, Rng& rng) {
  const Field F(kDeskPrime);
  const std::size_t n = pick(rng, 1, std::min<std::size_t>(P.max_n, 3));
  const auto d = static_cast<std::uint32_t>(pick(rng, 2, std::min<std::uint32_t>(P.max_d, 3)));
  const u64 r = pick(rng, 1, std::min<u64>(P.max_r, 4));
  std::vector<SparsePoly> fvec;
  for (u64 i = 0; i < r; ++i) {
    SparsePoly f(F, n);
    for (const auto& a : all_exponents(n, d))
      if (rng.below(2)) f.add_term(a, rng.element(F));
    fvec.push_back(std::move(f));
  }
  auto sv = sv_generator(F, n, n);
  const int ell = floor_lg(r);
  for (int a = 0; a < kRetries; ++a)
    if (is_rank_concentrated(fvec, ell, evaluate(sv, random_point(F, sv.seed_count(), rng)), d)) return ok();
  return fail("no support-" + std::to_string(ell) + " concentration after 8 shifts");
}

CaseOutcome wronskian_case(const SuiteParams& P, Rng& rng) {
  const Field F(101);
  const std::size_t r = pick(rng, 1, std::min<u64>(P.max_r, 4));
  const int d = static_cast<int>(std::min<std::uint32_t>(P.max_d, 5));
  const std::size_t indep = pick(rng, 1, r);
  std::vector<UniPoly> fs;
  for (std::size_t i = 0; i < r; ++i) {
    std::vector<Felt> c(static_cast<std::size_t>(d) + 1, F.zero());
    if (i < indep) {
      for (auto& x : c) x = rng.element(F);
    } else {
      for (std::size_t j = 0; j < indep; ++j) {
        Felt w = rng.element(F);
        for (int k = 0; k <= d; ++k) c[static_cast<std::size_t>(k)] += w * fs[j].coeff(k);
      }
    }
    fs.emplace_back(F, c);
  }
  FMatrix C = zeros(F, static_cast<Eigen::Index>(r), d + 1);
  for (std::size_t i = 0; i < r; ++i)
    for (int k = 0; k <= d; ++k) C(static_cast<Eigen::Index>(i), k) = fs[i].coeff(k);
  const int w = wronskian_rank(fs);
  const auto c = rank(C);
  if (w != c) return fail("Wronskian rank " + std::to_string(w) + " vs coefficient rank " + std::to_string(c));
  return ok();
}

// Random family compared against an exhaustive (i0, S) search.
CaseOutcome partial_id_case(const SuiteParams& P, Rng& rng) {
  const std::size_t n = pick(rng, 1, std::min<std::size_t>(P.max_n, 6));
  const std::size_t r = pick(rng, 1, std::min<u64>(P.max_r, u64{1} << n));
  std::set<std::vector<std::uint32_t>> fam;
  while (fam.size() < r) {
    std::vector<std::uint32_t> s(n);
    for (auto& b : s) b = static_cast<std::uint32_t>(rng.below(2));
    fam.insert(s);
  }
  std::vector<std::vector<std::uint32_t>> strings(fam.begin(), fam.end());
  auto res = partial_id(strings);
  if (static_cast<int>(res.S.size()) > floor_lg(r)) return fail("|S| exceeds floor(lg r)");
  for (std::size_t i = 0; i < r; ++i) {
    if (i == res.i0) continue;
    bool differs = false;
    for (auto j : res.S) differs |= strings[i][j] != strings[res.i0][j];
    if (!differs) return fail("string " + std::to_string(i) + " agrees with i0 on S");
  }
  std::uint64_t mask = 0;
  for (const auto& s : strings) {
    unsigned v = 0;
    for (std::size_t j = 0; j < n; ++j) v |= s[j] << j;
    mask |= 1ull << v;
  }
  auto packed = partial_id_packed(mask);
  unsigned S = 0, i0 = 0;
  for (auto j : res.S) S |= 1u << j;
  for (std::size_t j = 0; j < n; ++j) i0 |= strings[res.i0][j] << j;
  if (packed.S != S || packed.i0 != i0) return fail("packed kernel disagrees with the generic routine");
  return ok();
}

CaseOutcome smabp_case(const SuiteParams& P, Rng& rng) {
  const Field F(kDeskPrime);
  const std::size_t n = pick(rng, 1, std::min<std::size_t>(P.max_n, 2));
  const auto sets = static_cast<std::uint32_t>(pick(rng, 1, std::min<std::uint32_t>(P.max_d, 3)));
  const auto r = static_cast<Eigen::Index>(pick(rng, 1, P.max_r));
  Smabp s = random_model(ModelKind::smabp, F, n, sets, r, rng.next()).smabp;
  Roabp R = smabp_to_roabp(s);
  if (R.m.width() > 2 * r) return fail("width above 2r");
  SparsePoly a = smabp_expand(s), b = roabp_expand(R);
  if (a != b) return fail("ROABP expansion differs from the SMABP");
  if (!b.is_zero() && b.individual_degree() > 1) return fail("not multilinear");
  auto x = random_point(F, s.arity(), rng);
  if (smabp_eval(s, x) != roabp_eval(R, x)) return fail("evaluations differ");
  return ok();
}

const std::map<std::string, CaseFn>& registry() {
  static const std::map<std::string, CaseFn> r = {
      {"commutative", commutative_case}, {"unknown-order", unknown_order_case},
      {"hashing", hashing_case},         {"condenser", condenser_case},
      {"concentration", concentration_case}, {"wronskian", wronskian_case},
      {"partial-id", partial_id_case},   {"smabp", smabp_case},
  };
  return r;
}

void check_guards(const SuiteParams& P) {
  if (P.allow_large) return;
  if (P.max_n > 6 || P.max_r > 8 || P.max_d > 5)
    throw PreconditionError("suite parameters above desk-scale caps (n <= 6, r <= 8, d <= 5); pass the override");
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"commutative", "unknown-order", "hashing", "condenser",
                                                 "concentration", "wronskian", "partial-id", "smabp"};
  return names;
}

u64 case_seed(u64 seed, u64 i) {
  u64 z = seed + 0x9e3779b97f4a7c15ull * (i + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

CaseOutcome run_case(const std::string& suite, const SuiteParams& params, u64 seed) {
  auto it = registry().find(suite);
  if (it == registry().end()) throw PreconditionError("unknown suite: " + suite);
  check_guards(params);
  Rng rng(seed);
  return it->second(params, rng);
}

SuiteReport verify_theorem(const std::string& suite, const SuiteParams& params) {
  if (!registry().count(suite)) throw PreconditionError("unknown suite: " + suite);
  check_guards(params);
  SuiteReport rep;
  rep.suite = suite;
  rep.params = {{"trials", std::to_string(params.trials)}, {"seed", std::to_string(params.seed)},
                {"max_n", std::to_string(params.max_n)},   {"max_r", std::to_string(params.max_r)},
                {"max_d", std::to_string(params.max_d)},   {"control", params.control ? "true" : "false"}};
  if (suite == "partial-id") {
    auto sw = partial_id_sweep(static_cast<int>(std::min<u64>(params.max_r, 8)));
    rep.cases += sw.families;
    rep.params["exhaustive_families"] = std::to_string(sw.families);
    if (sw.invalid || sw.oversized)
      rep.failures.push_back({0, 0,
                              "exhaustive sweep: " + std::to_string(sw.invalid) + " invalid, " +
                                  std::to_string(sw.oversized) + " oversized, first family mask " +
                                  std::to_string(sw.first_bad.value_or(0))});
  }
  for (u64 i = 0; i < params.trials; ++i) {
    const u64 s = case_seed(params.seed, i);
    CaseOutcome out;
    try {
      out = run_case(suite, params, s);
    } catch (const std::exception& e) {
      out.failure = std::string("exception: ") + e.what();
    }
    ++rep.cases;
    if (out.skipped) ++rep.skipped;
    if (out.failure) rep.failures.push_back({i, s, *out.failure});
  }
  return rep;
}

PartialIdSweep partial_id_sweep(int max_r) {
  static const std::vector<std::uint64_t> AG = [] {
    std::vector<std::uint64_t> t(64 * 64, 0);
    for (unsigned S = 0; S < 64; ++S)
      for (unsigned v = 0; v < 64; ++v)
        for (unsigned x = 0; x < 64; ++x)
          if ((x & S) == (v & S)) t[S * 64 + v] |= 1ull << x;
    return t;
  }();
  PartialIdSweep out;
  int lg[65];
  for (int r = 1; r <= 64; ++r) lg[r] = floor_lg(static_cast<u64>(r));
  auto check = [&](std::uint64_t F, PackedPartialId res, int r) {
    ++out.families;
    const bool valid = (F >> res.i0 & 1) && std::popcount(F & AG[res.S * 64 + res.i0]) == 1;
    const bool big = std::popcount(res.S) > lg[r];
    if (!valid) ++out.invalid;
    if (big) ++out.oversized;
    if ((!valid || big) && !out.first_bad) out.first_bad = F;
  };
  if (max_r < 1) return out;
  PackedPartialId buf[8][64];
  auto dfs = [&](auto&& self, std::uint64_t base, int size, int last) -> void {
    if (size >= max_r || last == 63) return;
    const std::uint64_t cand = ~0ull << (last + 1);
    PackedPartialId* res = buf[size];
    partial_id_extend(base, cand, res);
    for (std::uint64_t c = cand; c; c &= c - 1) {
      const int b = std::countr_zero(c);
      check(base | 1ull << b, res[b], size + 1);
    }
    if (size + 1 < max_r)
      for (std::uint64_t c = cand; c; c &= c - 1) {
        const int b = std::countr_zero(c);
        self(self, base | 1ull << b, size + 1, b);
      }
  };
  for (int x = 0; x < 64; ++x) {
    check(1ull << x, partial_id_packed(1ull << x), 1);
    dfs(dfs, 1ull << x, 1, x);
  }
  return out;
}

}  // namespace pitgen
