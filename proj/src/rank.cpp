#include "pitgen/rank.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace pitgen {

namespace {

u64 binom_count(u64 n, u64 k) {
  if (k > n) return 0;
  unsigned __int128 acc = 1;
  for (u64 i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > ~0ull) return ~0ull;
  }
  return static_cast<u64>(acc);
}

// Visits every k-subset of [0, m) in lexicographic order until fn returns false.
template <typename Fn>
bool for_each_subset(Eigen::Index m, Eigen::Index k, Fn&& fn) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  if (k > m) return true;
  for (;;) {
    if (!fn(idx)) return false;
    Eigen::Index i = k;
    while (i > 0 && idx[static_cast<std::size_t>(i - 1)] == m - k + i - 1) --i;
    if (i == 0) return true;
    ++idx[static_cast<std::size_t>(i - 1)];
    for (Eigen::Index j = i; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

Felt monomial_at(const Exponents& a, const std::vector<Felt>& t, const Field& f) {
  Felt v = f.one();
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i]) v *= t[i].in(f.p()).pow(a[i]);
  return v;
}

}  // namespace

DerivMatrix deriv_matrix(const std::vector<SparsePoly>& fvec, const std::vector<Exponents>& rows,
                         const std::vector<Felt>& alpha) {
  if (fvec.empty()) throw PreconditionError("deriv_matrix: no polynomials");
  const Field& F = fvec[0].field();
  const std::size_t n = fvec[0].arity();
  for (const auto& f : fvec) {
    if (f.arity() != n) throw ArityMismatch("deriv_matrix: polynomials of different arity");
    if (f.field() != F) throw FieldMismatch("deriv_matrix: polynomials over different fields");
  }
  if (alpha.size() != n) throw ArityMismatch("deriv_matrix: anchor length");
  if (std::set<Exponents>(rows.begin(), rows.end()).size() != rows.size())
    throw PreconditionError("deriv_matrix: duplicate rows");
  DerivMatrix dm{rows, zeros(F, static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(fvec.size())),
                 alpha};
  for (std::size_t i = 0; i < fvec.size(); ++i) {
    SparsePoly g = shift(fvec[i], alpha);
    for (std::size_t a = 0; a < rows.size(); ++a) {
      if (rows[a].size() != n) throw ArityMismatch("deriv_matrix: row exponent length");
      dm.entries(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(i)) = g.coeff(rows[a]);
    }
  }
  return dm;
}

bool is_rank_concentrated(const std::vector<SparsePoly>& fvec, int ell, const std::vector<Felt>& alpha,
                          std::uint32_t d) {
  if (fvec.empty()) return true;
  const Field& F = fvec[0].field();
  for (const auto& f : fvec)
    if (!f.is_zero() && f.individual_degree() >= d)
      throw PreconditionError("is_rank_concentrated: individual degree not below d");
  if (F.p() < d) throw FieldTooSmall("is_rank_concentrated: need |F| > d-1");
  auto rows = all_exponents(fvec[0].arity(), d);
  auto dm = deriv_matrix(fvec, rows, alpha);
  std::vector<Eigen::Index> small;
  for (std::size_t a = 0; a < rows.size(); ++a)
    if (support_size(rows[a]) <= ell) small.push_back(static_cast<Eigen::Index>(a));
  return rank(select_rows(dm.entries, small)) == rank(dm.entries);
}

int wronskian_rank(const std::vector<UniPoly>& fs) {
  if (fs.empty()) return 0;
  const Field& F = fs[0].field();
  const std::size_t r = fs.size();
  int deg = 1;
  for (const auto& f : fs) {
    if (f.field() != F) throw FieldMismatch("wronskian_rank: mixed fields");
    deg = std::max(deg, f.degree());
  }
  const u64 bound = static_cast<u64>(r) * static_cast<u64>(deg);
  if (F.p() <= bound)
    throw FieldTooSmall("wronskian_rank: characteristic " + std::to_string(F.p()) + " not above r*d = " +
                        std::to_string(bound));
  std::vector<std::vector<UniPoly>> h(r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) h[i].push_back(fs[j].hasse(static_cast<int>(i)));
  Eigen::Index best = 0;
  for (u64 t = 0; t <= bound && best < static_cast<Eigen::Index>(r); ++t) {
    FMatrix w(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r));
    Felt at = F.from_u64(t);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = h[i][j].eval(at);
    best = std::max(best, rank(w));
  }
  return static_cast<int>(best);
}

std::vector<Exponents> transfer_rows(std::size_t n, std::uint32_t d, u64 r) {
  return exponents_with_support(n, d, floor_lg(r));
}

FMatrix transfer_matrix(const Field& f, std::size_t n, std::uint32_t d, const std::vector<Exponents>& rows,
                        const std::vector<Felt>& alpha) {
  if (d < 1) throw PreconditionError("transfer_matrix: d must be at least 1");
  if (alpha.size() != n) throw ArityMismatch("transfer_matrix: point length");
  auto cols = all_exponents(n, d);
  FMatrix T = zeros(f, static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const auto& a = rows[i];
      const auto& b = cols[j];
      bool below = true;
      Exponents diff(n);
      for (std::size_t k = 0; k < n && below; ++k) {
        below = a[k] <= b[k];
        diff[k] = below ? b[k] - a[k] : 0;
      }
      if (below)
        T(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = binomial(b, a, f) * monomial_at(diff, alpha, f);
    }
  return T;
}

std::vector<std::vector<SparsePoly>> transfer_matrix_symbolic(const Field& f, std::size_t n, std::uint32_t d,
                                                              const std::vector<Exponents>& rows) {
  if (d < 1) throw PreconditionError("transfer_matrix: d must be at least 1");
  auto cols = all_exponents(n, d);
  std::vector<std::vector<SparsePoly>> T(rows.size(), std::vector<SparsePoly>(cols.size(), SparsePoly(f, n)));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) {
      Exponents diff(n);
      bool below = true;
      for (std::size_t k = 0; k < n && below; ++k) {
        below = rows[i][k] <= cols[j][k];
        diff[k] = below ? cols[j][k] - rows[i][k] : 0;
      }
      if (below) T[i][j] = SparsePoly::monomial(f, diff, binomial(cols[j], rows[i], f));
    }
  return T;
}

bool check_code_distance(const FMatrix& H, int r) {
  if (r < 0 || r > H.cols()) throw PreconditionError("check_code_distance: r out of range");
  if (binom_count(static_cast<u64>(H.cols()), static_cast<u64>(r)) > term_budget())
    throw BudgetExceeded("check_code_distance: too many column subsets");
  return for_each_subset(H.cols(), r, [&](const std::vector<Eigen::Index>& cols) {
    return rank(select_columns(H, cols)) == r;
  });
}

FMatrix dual_rs_parity(const Field& f, Eigen::Index rows, Eigen::Index cols) {
  if (f.p() - 1 <= static_cast<u64>(cols))
    throw FieldTooSmall("dual_rs_parity: need multiplicative order above the column count");
  Felt omega = primitive_root(f);
  FMatrix H(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) H(i, j) = omega.pow(static_cast<u64>(i * j));
  return H;
}

std::size_t CondenserSpec::t_vars() const {
  if (!W.empty()) return W[0].size();
  return lambda.empty() ? 0 : lambda[0].size();
}

void CondenserSpec::validate() const {
  if (static_cast<Eigen::Index>(lambda.size()) != H.rows()) throw ArityMismatch("condenser: Lambda size");
  if (static_cast<Eigen::Index>(W.size()) != H.cols()) throw ArityMismatch("condenser: W size");
  for (const auto& e : lambda)
    if (e.size() != t_vars()) throw ArityMismatch("condenser: Lambda exponent length");
  for (const auto& e : W)
    if (e.size() != t_vars()) throw ArityMismatch("condenser: W exponent length");
  if (r < 0) throw PreconditionError("condenser: negative rank");
}

FMatrix condenser_at(const CondenserSpec& spec, const std::vector<Felt>& t) {
  spec.validate();
  if (t.size() != spec.t_vars()) throw ArityMismatch("condenser_at: point length");
  const Field& f = spec.field;
  FMatrix E = spec.H;
  for (Eigen::Index i = 0; i < E.rows(); ++i) E.row(i) *= monomial_at(spec.lambda[static_cast<std::size_t>(i)], t, f).inverse();
  for (Eigen::Index j = 0; j < E.cols(); ++j) E.col(j) *= monomial_at(spec.W[static_cast<std::size_t>(j)], t, f);
  return E;
}

std::vector<u64> condenser_cube(const CondenserSpec& spec) {
  spec.validate();
  std::vector<u64> cube;
  const std::size_t m = spec.W.size();
  for (std::size_t v = 0; v < spec.t_vars(); ++v) {
    std::vector<u64> deg;
    for (const auto& w : spec.W) deg.push_back(w[v]);
    std::sort(deg.begin(), deg.end());
    u64 span = 0, lo = 0, hi = 0;
    for (std::size_t k = 1; k <= std::min<std::size_t>(m, static_cast<std::size_t>(spec.r)); ++k) {
      lo += deg[k - 1];
      hi += deg[m - k];
      span = std::max(span, hi - lo);
    }
    cube.push_back(span + 1);
  }
  return cube;
}

RankReport condense(const CondenserSpec& spec, const FMatrix& M, const std::vector<Felt>& t0) {
  spec.validate();
  if (M.rows() != spec.H.cols()) throw ArityMismatch("condense: M must have one row per column of H");
  RankReport rep;
  rep.rank_M = static_cast<std::size_t>(rank(M));
  if (!t0.empty()) {
    rep.trials = 1;
    rep.rank_EM = static_cast<std::size_t>(rank(condenser_at(spec, t0) * M));
    rep.point = t0;
    return rep;
  }
  const u64 p = spec.field.p();
  rep.cube = condenser_cube(spec);
  for (auto c : rep.cube)
    if (c > p - 1) throw FieldTooSmall("condense: cube side " + std::to_string(c) + " exceeds |F|-1");
  const std::size_t q = rep.cube.size();
  std::vector<u64> digit(q, 0);
  std::vector<Felt> t(q);
  const u64 cap = term_budget();
  for (;;) {
    for (std::size_t i = 0; i < q; ++i) t[i] = Felt::raw(digit[i] + 1, p);
    ++rep.trials;
    auto rk = static_cast<std::size_t>(rank(condenser_at(spec, t) * M));
    if (rk > rep.rank_EM || !rep.point) {
      rep.rank_EM = rk;
      rep.point = t;
    }
    if (rep.rank_EM == rep.rank_M || rep.trials >= cap) break;
    std::size_t i = q;
    while (i > 0 && digit[i - 1] + 1 == rep.cube[i - 1]) digit[--i] = 0;
    if (i == 0) break;
    ++digit[i - 1];
  }
  return rep;
}

Felt apply_at_ones(const DiffOperator& op, const Exponents& b, const Field& f) {
  Felt acc = f.zero();
  for (const auto& [a, c] : op.terms) acc += c * binomial(b, a, f);
  return acc;
}

SparsePoly apply(const DiffOperator& op, const SparsePoly& f) {
  SparsePoly out(f.field(), f.arity());
  for (const auto& [a, c] : op.terms) out += hasse_derivative(f, a) * c;
  return out;
}

DiffOperator univar_isolating_operator(const Field& f, std::uint32_t d, std::uint32_t j) {
  if (j >= d) throw PreconditionError("univar_isolating_operator: need j < d");
  FMatrix D = zeros(f, d, d);
  for (std::uint32_t i = 0; i < d; ++i)
    for (std::uint32_t k = i; k < d; ++k) D(i, k) = binomial(k, i, f);
  FMatrix C = inverse_exact(D);
  DiffOperator op;
  for (std::uint32_t k = 0; k < d; ++k)
    if (!C(j, k).is_zero()) op.terms.emplace(Exponents{k}, C(j, k));
  return op;
}

IsolatingFamily isolating_family(const Field& f, const std::vector<Exponents>& monomials, std::uint32_t d) {
  const std::size_t r = monomials.size();
  if (r == 0) return {};
  const std::size_t n = monomials[0].size();
  for (const auto& b : monomials) {
    if (b.size() != n) throw ArityMismatch("isolating_family: monomials of different arity");
    if (max_entry(b) >= d) throw PreconditionError("isolating_family: individual degree not below d");
  }
  if (std::set<Exponents>(monomials.begin(), monomials.end()).size() != r)
    throw PreconditionError("isolating_family: duplicate monomials");

  std::vector<std::vector<DiffOperator>> univar(d);
  for (std::uint32_t j = 0; j < d; ++j) univar[j].push_back(univar_isolating_operator(f, d, j));

  IsolatingFamily fam;
  fam.perm.assign(r, 0);
  fam.ops.assign(r, DiffOperator{});
  fam.supports.assign(r, {});
  std::vector<std::size_t> remaining(r);
  for (std::size_t i = 0; i < r; ++i) remaining[i] = i;
  for (std::size_t pos = r; pos-- > 0;) {
    std::vector<std::vector<std::uint32_t>> strings;
    for (auto i : remaining) strings.emplace_back(monomials[i].begin(), monomials[i].end());
    PartialId pid = partial_id(strings);
    const Exponents& target = monomials[remaining[pid.i0]];
    // product over j in S of the univariate operators, on disjoint variables
    DiffOperator op;
    op.terms.emplace(Exponents(n, 0), f.one());
    for (auto j : pid.S) {
      DiffOperator next;
      for (const auto& [a, c] : op.terms)
        for (const auto& [k, ck] : univar[target[j]][0].terms) {
          Exponents e = a;
          e[j] = k[0];
          next.terms[e] += c * ck;
        }
      op = std::move(next);
    }
    std::erase_if(op.terms, [](const auto& kv) { return kv.second.is_zero(); });
    fam.perm[pos] = remaining[pid.i0];
    fam.ops[pos] = std::move(op);
    fam.supports[pos] = pid.S;
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pid.i0));
  }
  return fam;
}

bool weight_less(const Exponents& a, const Exponents& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::vector<Eigen::Index> greedy_min_basis(const FMatrix& M, const std::vector<Exponents>& w,
                                           const std::vector<Eigen::Index>& distinct_block) {
  if (static_cast<Eigen::Index>(w.size()) != M.cols()) throw ArityMismatch("greedy_min_basis: one weight per column");
  std::vector<Eigen::Index> I = distinct_block;
  if (I.empty())
    for (Eigen::Index j = 0; j < M.cols(); ++j) I.push_back(j);
  std::vector<bool> inI(static_cast<std::size_t>(M.cols()), false);
  for (auto j : I) {
    if (j < 0 || j >= M.cols() || inI[static_cast<std::size_t>(j)])
      throw PreconditionError("greedy_min_basis: bad distinct block");
    inI[static_cast<std::size_t>(j)] = true;
  }
  std::sort(I.begin(), I.end(), [&](auto a, auto b) {
    return weight_less(w[static_cast<std::size_t>(a)], w[static_cast<std::size_t>(b)]);
  });
  for (std::size_t k = 1; k < I.size(); ++k)
    if (!weight_less(w[static_cast<std::size_t>(I[k - 1])], w[static_cast<std::size_t>(I[k])]))
      throw PreconditionError("greedy_min_basis: weights on the distinct block repeat");
  if (!I.empty())
    for (Eigen::Index j = 0; j < M.cols(); ++j)
      if (!inI[static_cast<std::size_t>(j)] &&
          !weight_less(w[static_cast<std::size_t>(I.back())], w[static_cast<std::size_t>(j)]))
        throw PreconditionError("greedy_min_basis: distinct block is not below the other weights");
  if (rank(select_columns(M, I)) != rank(M))
    throw PreconditionError("greedy_min_basis: the distinct block does not carry the rank");
  std::vector<Eigen::Index> T;
  Eigen::Index rk = 0;
  for (auto j : I) {
    T.push_back(j);
    Eigen::Index next = rank(select_columns(M, T));
    if (next == rk)
      T.pop_back();
    else
      rk = next;
  }
  return T;
}

}  // namespace pitgen
