#include "pitgen/generators.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace pitgen {

namespace {

bool is_range_node(const Felt& z, std::size_t K) { return z.value() < K; }

std::uint32_t table_max(const Factor& f) {
  return f.table->empty() ? 0 : *std::max_element(f.table->begin(), f.table->end());
}

// Per-evaluation caches for indicator vectors and power tables.
struct EvalCache {
  struct Ind {
    std::size_t nodes, var;
    std::uint32_t power;
    Felt z;
    bool at_node;
    std::vector<Felt> values;
  };
  struct Pow {
    std::size_t var;
    std::vector<Felt> powers;
  };
  std::vector<Ind> ind;
  std::vector<Pow> pow;

  const Ind& indicator(const GeneratorMap& g, const std::vector<Felt>& x, std::size_t nodes, std::size_t var,
                       std::uint32_t power) {
    for (const auto& e : ind)
      if (e.nodes == nodes && e.var == var && e.power == power) return e;
    const NodeSet& ns = *g.nodesets[nodes];
    Ind e{nodes, var, power, x[var].pow(power), false, {}};
    e.at_node = is_range_node(e.z, ns.size());
    if (!e.at_node) e.values = ns.indicator_values(e.z);
    ind.push_back(std::move(e));
    return ind.back();
  }

  const std::vector<Felt>& powers(const Felt& one, const std::vector<Felt>& x, std::size_t var,
                                  std::uint32_t upto) {
    for (auto& e : pow)
      if (e.var == var) {
        while (e.powers.size() <= upto) e.powers.push_back(e.powers.back() * x[var]);
        return e.powers;
      }
    Pow e{var, {one}};
    while (e.powers.size() <= upto) e.powers.push_back(e.powers.back() * x[var]);
    pow.push_back(std::move(e));
    return pow.back().powers;
  }
};

Felt eval_factor(const GeneratorMap& g, const Factor& fc, const std::vector<Felt>& x, EvalCache& cache) {
  switch (fc.kind) {
    case Factor::Kind::power:
      return x[fc.var].pow(fc.power);
    case Factor::Kind::indicator: {
      const auto& e = cache.indicator(g, x, fc.nodes, fc.var, fc.power);
      if (e.at_node) return e.z.value() == fc.index ? g.field.one() : g.field.zero();
      return e.values[fc.index];
    }
    case Factor::Kind::select: {
      const auto& e = cache.indicator(g, x, fc.nodes, fc.sel, 1);
      const auto& tab = *fc.table;
      if (e.at_node) return x[fc.var].pow((*fc.table)[e.z.value()]);
      const auto& pw = cache.powers(g.field.one(), x, fc.var, table_max(fc));
      Felt acc = g.field.zero();
      for (std::size_t k = 0; k < tab.size(); ++k) acc += e.values[k] * pw[tab[k]];
      return acc;
    }
  }
  return g.field.zero();
}

void check_budget(const SparsePoly& p, const char* what) {
  if (p.size() > term_budget()) throw BudgetExceeded(std::string(what) + ": expansion over budget");
}

// sum_i c_i var^(i*power), with var possibly fixed.
SparsePoly univariate_in(const Field& f, std::size_t arity, const std::vector<Felt>& coeffs, std::size_t var,
                         std::uint32_t power) {
  SparsePoly p(f, arity);
  Exponents e(arity, 0);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    e[var] = static_cast<std::uint32_t>(i) * power;
    p.add_term(e, coeffs[i]);
  }
  return p;
}

SparsePoly factor_poly(const GeneratorMap& g, const Factor& fc, std::size_t arity,
                       const std::map<std::size_t, Felt>& fixed) {
  const Field& F = g.field;
  auto fixed_at = [&](std::size_t v) -> const Felt* {
    auto it = fixed.find(v);
    return it == fixed.end() ? nullptr : &it->second;
  };
  switch (fc.kind) {
    case Factor::Kind::power: {
      if (const Felt* v = fixed_at(fc.var)) return SparsePoly::constant(F, arity, v->in(F.p()).pow(fc.power));
      Exponents e(arity, 0);
      e[fc.var] = fc.power;
      return SparsePoly::monomial(F, e, F.one());
    }
    case Factor::Kind::indicator: {
      const NodeSet& ns = *g.nodesets[fc.nodes];
      if (const Felt* v = fixed_at(fc.var)) {
        Felt z = v->in(F.p()).pow(fc.power);
        Felt val = is_range_node(z, ns.size()) ? (z.value() == fc.index ? F.one() : F.zero())
                                               : ns.indicator_values(z)[fc.index];
        return SparsePoly::constant(F, arity, val);
      }
      return univariate_in(F, arity, ns.indicator(fc.index).coeffs(), fc.var, fc.power);
    }
    case Factor::Kind::select: {
      const NodeSet& ns = *g.nodesets[fc.nodes];
      const auto& tab = *fc.table;
      std::vector<Felt> weights;
      const Felt* sv = fixed_at(fc.sel);
      if (sv) {
        Felt z = sv->in(F.p());
        if (is_range_node(z, ns.size())) {
          weights.assign(ns.size(), F.zero());
          weights[z.value()] = F.one();
        } else {
          weights = ns.indicator_values(z);
        }
      }
      const Felt* xv = fixed_at(fc.var);
      SparsePoly acc(F, arity);
      for (std::size_t k = 0; k < tab.size(); ++k) {
        if (sv && weights[k].is_zero()) continue;
        SparsePoly sel = sv ? SparsePoly::constant(F, arity, weights[k])
                            : univariate_in(F, arity, ns.indicator(k).coeffs(), fc.sel, 1);
        if (xv) {
          acc += sel * xv->in(F.p()).pow(tab[k]);
        } else {
          Exponents e(arity, 0);
          e[fc.var] = tab[k];
          acc += sel * SparsePoly::monomial(F, e, F.one());
        }
        check_budget(acc, "select factor");
      }
      return acc;
    }
  }
  return SparsePoly(F, arity);
}

SparsePoly expand_component(const GeneratorMap& g, std::size_t i, const std::map<std::size_t, Felt>& fixed) {
  const std::size_t arity = g.factor_arity();
  SparsePoly out(g.field, arity);
  for (const auto& t : g.components[i]) {
    SparsePoly term = SparsePoly::constant(g.field, arity, t.coef);
    for (const auto& fc : t.factors) {
      term = term * factor_poly(g, fc, arity, fixed);
      if (term.is_zero()) break;
    }
    out += term;
    check_budget(out, "generator component");
  }
  return out;
}

SparsePoly substitute(const SparsePoly& p, const std::map<std::size_t, Felt>& fixed) {
  if (fixed.empty()) return p;
  const Field& F = p.field();
  SparsePoly r(F, p.arity());
  for (const auto& [a, c] : p.terms()) {
    Exponents b = a;
    Felt v = c;
    for (const auto& [var, val] : fixed)
      if (b[var]) {
        v *= val.in(F.p()).pow(b[var]);
        b[var] = 0;
      }
    r.add_term(b, v);
  }
  return r;
}

std::vector<std::uint64_t> factor_degrees(const GeneratorMap& g, const GTerm& t) {
  std::vector<std::uint64_t> deg(g.factor_arity(), 0);
  for (const auto& fc : t.factors) {
    switch (fc.kind) {
      case Factor::Kind::power:
        deg[fc.var] += fc.power;
        break;
      case Factor::Kind::indicator:
        deg[fc.var] += static_cast<std::uint64_t>(g.nodesets[fc.nodes]->size() - 1) * fc.power;
        break;
      case Factor::Kind::select:
        deg[fc.sel] += g.nodesets[fc.nodes]->size() - 1;
        deg[fc.var] += table_max(fc);
        break;
    }
  }
  return deg;
}

Factor power_factor(std::size_t var, std::uint32_t power = 1) {
  Factor f;
  f.kind = Factor::Kind::power;
  f.var = var;
  f.power = power;
  return f;
}

Factor indicator_factor(std::size_t var, std::size_t nodes, std::size_t index, std::uint32_t power = 1) {
  Factor f;
  f.kind = Factor::Kind::indicator;
  f.var = var;
  f.nodes = nodes;
  f.index = index;
  f.power = power;
  return f;
}

void shift_vars(GTerm& t, std::size_t var_shift, std::size_t node_shift) {
  for (auto& fc : t.factors) {
    fc.var += var_shift;
    fc.sel += var_shift;
    fc.nodes += node_shift;
  }
}

bool interpolating_role(char role) { return role == 's' || role == 'z'; }

std::vector<std::size_t> seeds_with(const GeneratorMap& g, bool (*pred)(char)) {
  std::vector<std::size_t> out;
  for (const auto& b : g.blocks)
    if (pred(b.role))
      for (std::size_t k = 0; k < b.size; ++k) out.push_back(b.offset + k);
  std::sort(out.begin(), out.end());
  return out;
}

// Odometer over a product of candidate lists; fn returns true to stop.
template <typename Fn>
bool for_each_in_cube(const std::vector<std::vector<Felt>>& cube, Fn&& fn) {
  for (const auto& c : cube)
    if (c.empty()) return false;
  std::vector<std::size_t> idx(cube.size(), 0);
  std::vector<Felt> v(cube.size());
  for (;;) {
    for (std::size_t i = 0; i < cube.size(); ++i) v[i] = cube[i][idx[i]];
    if (fn(v)) return true;
    std::size_t i = cube.size();
    while (i > 0) {
      --i;
      if (++idx[i] < cube[i].size()) break;
      idx[i] = 0;
      if (i == 0) return false;
    }
    if (cube.empty()) return false;
  }
}

void combinations(std::size_t n, std::size_t k, std::vector<std::size_t>& cur, std::size_t start,
                  std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    combinations(n, k, cur, i + 1, out);
    cur.pop_back();
  }
}

std::vector<Exponents> total_degree_universe(std::size_t n, std::uint32_t D, std::uint32_t d) {
  std::vector<Exponents> out;
  Exponents a(n, 0);
  std::function<void(std::size_t, std::uint64_t)> rec = [&](std::size_t i, std::uint64_t sum) {
    if (i == n) {
      out.push_back(a);
      if (out.size() > term_budget()) throw BudgetExceeded("monomial universe too large");
      return;
    }
    for (std::uint32_t e = 0; e < d && sum + e < D; ++e) {
      a[i] = e;
      rec(i + 1, sum + e);
    }
    a[i] = 0;
  };
  if (D > 0) rec(0, 0);
  return out;
}

u64 count_total_degree(std::size_t n, std::uint32_t D, std::uint32_t d) {
  // ways[s] = number of a in {0..d-1}^k with |a|_1 = s
  std::vector<u64> ways(D, 0);
  if (D == 0) return 0;
  ways[0] = 1;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<u64> nxt(D, 0);
    for (std::uint32_t s = 0; s < D; ++s)
      for (std::uint32_t e = 0; e < d && s + e < D; ++e) nxt[s + e] += ways[s];
    ways = std::move(nxt);
  }
  return std::accumulate(ways.begin(), ways.end(), u64{0});
}

}  // namespace

std::size_t GeneratorMap::seed_count() const {
  std::size_t s = 0;
  for (const auto& b : blocks) s = std::max(s, b.offset + b.size);
  return s;
}

std::size_t GeneratorMap::factor_arity() const { return inner ? inner->out_arity() : seed_count(); }

const SeedBlock& GeneratorMap::block(const std::string& name) const {
  for (const auto& b : blocks)
    if (b.name == name) return b;
  throw PreconditionError("generator has no seed block " + name);
}

void GeneratorMap::validate() const {
  const std::size_t fa = factor_arity();
  if (inner && inner->in_arity != seed_count()) throw ArityMismatch("generator: inner map arity");
  for (const auto& comp : components)
    for (const auto& t : comp)
      for (const auto& fc : t.factors) {
        if (fc.var >= fa) throw ArityMismatch("generator: factor variable out of range");
        if (fc.kind != Factor::Kind::power && fc.nodes >= nodesets.size())
          throw PreconditionError("generator: unknown node set");
        if (fc.kind == Factor::Kind::indicator && fc.index >= nodesets[fc.nodes]->size())
          throw PreconditionError("generator: indicator index out of range");
        if (fc.kind == Factor::Kind::select) {
          if (fc.sel >= fa) throw ArityMismatch("generator: selector out of range");
          if (!fc.table || fc.table->size() != nodesets[fc.nodes]->size())
            throw PreconditionError("generator: selection table size");
        }
      }
}

std::vector<Felt> evaluate(const GeneratorMap& g, const std::vector<Felt>& seed) {
  if (seed.size() != g.seed_count()) throw ArityMismatch("evaluate: seed length");
  const u64 p = g.field.p();
  std::vector<Felt> x;
  if (g.inner) {
    x.reserve(g.inner->out_arity());
    for (const auto& c : g.inner->components) x.push_back(eval(c, seed));
  } else {
    x.reserve(seed.size());
    for (const auto& s : seed) x.push_back(s.in(p));
  }
  EvalCache cache;
  std::vector<Felt> out(g.out_arity(), g.field.zero());
  for (std::size_t i = 0; i < g.out_arity(); ++i)
    for (const auto& t : g.components[i]) {
      Felt v = t.coef.in(p);
      for (const auto& fc : t.factors) {
        v *= eval_factor(g, fc, x, cache);
        if (v.is_zero()) break;
      }
      out[i] += v;
    }
  return out;
}

PolyMap expand(const GeneratorMap& g, const std::map<std::size_t, Felt>& fixed) {
  PolyMap out;
  out.in_arity = g.seed_count();
  if (!g.inner) {
    for (std::size_t i = 0; i < g.out_arity(); ++i) out.components.push_back(expand_component(g, i, fixed));
    return out;
  }
  PolyMap in{g.inner->in_arity, {}};
  for (const auto& c : g.inner->components) in.components.push_back(substitute(c, fixed));
  for (std::size_t i = 0; i < g.out_arity(); ++i) out.components.push_back(compose(expand_component(g, i, {}), in));
  return out;
}

DegreeProfile degree_profile(const GeneratorMap& g) {
  const std::size_t S = g.seed_count();
  DegreeProfile prof(g.out_arity(), std::vector<std::uint64_t>(S, 0));
  std::vector<std::vector<std::uint64_t>> inner_deg;
  if (g.inner) {
    inner_deg.assign(g.inner->out_arity(), std::vector<std::uint64_t>(S, 0));
    for (std::size_t v = 0; v < g.inner->out_arity(); ++v)
      for (std::size_t w = 0; w < S; ++w) inner_deg[v][w] = g.inner->components[v].degree_in(w);
  }
  for (std::size_t i = 0; i < g.out_arity(); ++i)
    for (const auto& t : g.components[i]) {
      auto fd = factor_degrees(g, t);
      if (!g.inner) {
        for (std::size_t w = 0; w < S; ++w) prof[i][w] = std::max(prof[i][w], fd[w]);
        continue;
      }
      for (std::size_t w = 0; w < S; ++w) {
        std::uint64_t s = 0;
        for (std::size_t v = 0; v < fd.size(); ++v) s += fd[v] * inner_deg[v][w];
        prof[i][w] = std::max(prof[i][w], s);
      }
    }
  return prof;
}

GeneratorMap add(const GeneratorMap& a, const GeneratorMap& b) {
  if (a.field != b.field) throw FieldMismatch("add: generators over different fields");
  if (a.out_arity() != b.out_arity()) throw ArityMismatch("add: output arities differ");
  if (a.inner || b.inner) throw PreconditionError("add: generators with an inner map");
  GeneratorMap g = a;
  const std::size_t shift = a.seed_count();
  const std::size_t nshift = a.nodesets.size();
  for (auto blk : b.blocks) {
    blk.offset += shift;
    g.blocks.push_back(blk);
  }
  g.nodesets.insert(g.nodesets.end(), b.nodesets.begin(), b.nodesets.end());
  for (std::size_t i = 0; i < b.out_arity(); ++i)
    for (auto t : b.components[i]) {
      shift_vars(t, shift, nshift);
      g.components[i].push_back(std::move(t));
    }
  g.explicitness = a.explicitness + " + " + b.explicitness;
  return g;
}

GeneratorMap truncate(const GeneratorMap& g, std::size_t n) {
  if (n > g.out_arity()) throw ArityMismatch("truncate: more components than available");
  GeneratorMap out = g;
  out.components.resize(n);
  return out;
}

GeneratorMap identity_generator(const Field& f, std::size_t n) {
  GeneratorMap g;
  g.field = f;
  g.blocks = {{"t", 't', 0, n}};
  for (std::size_t i = 0; i < n; ++i) g.components.push_back({GTerm{f.one(), {power_factor(i)}}});
  g.explicitness = "identity";
  return g;
}

GeneratorMap sv_generator(const Field& f, std::size_t n, std::size_t ell) {
  if (f.p() <= n) throw FieldTooSmall("sv_generator: need |F| > n");
  GeneratorMap g;
  g.field = f;
  g.blocks = {{"y", 'y', 0, ell}, {"z", 'z', ell, ell}};
  g.nodesets.push_back(std::make_shared<const NodeSet>(NodeSet::range(f, n + 1)));
  g.components.resize(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < ell; ++j) {
      GTerm t{f.one(), {power_factor(j), indicator_factor(ell + j, 0, k + 1)}};
      g.components[k].push_back(std::move(t));
    }
  g.explicitness = "SV: each coordinate costs ell Lagrange evaluations over n+1 nodes";
  return g;
}

u64 ks_prime(std::size_t n, std::uint32_t d, u64 sparsity) {
  unsigned __int128 b = static_cast<unsigned __int128>(2) * n * sparsity * sparsity + 1;
  if (b > (static_cast<unsigned __int128>(1) << 62)) throw BudgetExceeded("ks_prime: bound too large");
  return smallest_prime_at_least(std::max<u64>(static_cast<u64>(b), u64{d} + 1));
}

GeneratorMap ks_generator(const Field& f, std::size_t n, std::uint32_t d, u64 sparsity, std::size_t m) {
  const u64 q = ks_prime(n, d, sparsity);
  if (f.p() < q) throw FieldTooSmall("ks_generator: need |F| >= " + std::to_string(q));
  if (q > term_budget()) throw BudgetExceeded("ks_generator: prime too large for selection tables");
  GeneratorMap g;
  g.field = f;
  g.blocks = {{"t", 't', 0, m}, {"s", 's', m, m}};
  g.nodesets.push_back(std::make_shared<const NodeSet>(NodeSet::range(f, q)));
  g.components.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto tab = std::make_shared<std::vector<std::uint32_t>>(q);
    for (u64 k = 0; k < q; ++k) {
      u64 e = 1;
      for (std::size_t r = 0; r <= i; ++r) e = mulmod(e, k, q);
      (*tab)[k] = static_cast<std::uint32_t>(e);
    }
    GTerm t{f.one(), {}};
    for (std::size_t j = 0; j < m; ++j) {
      Factor fc;
      fc.kind = Factor::Kind::select;
      fc.var = j;
      fc.sel = m + j;
      fc.nodes = 0;
      fc.table = tab;
      t.factors.push_back(fc);
    }
    g.components[i].push_back(std::move(t));
  }
  g.explicitness = "KS: x_i <- prod_j t_j^(k_j^i mod " + std::to_string(q) + ")";
  return g;
}

std::vector<std::vector<Felt>> interpolation_cube(const GeneratorMap& g) {
  auto svars = seeds_with(g, interpolating_role);
  std::vector<std::vector<Felt>> cube;
  for (auto v : svars) {
    std::size_t K = 0;
    for (const auto& comp : g.components)
      for (const auto& t : comp)
        for (const auto& fc : t.factors) {
          if (fc.kind == Factor::Kind::indicator && fc.var == v) K = std::max(K, g.nodesets[fc.nodes]->size());
          if (fc.kind == Factor::Kind::select && fc.sel == v) K = std::max(K, g.nodesets[fc.nodes]->size());
        }
    std::vector<Felt> vals;
    for (std::size_t k = 0; k < std::max<std::size_t>(K, 1); ++k) vals.push_back(g.field.from_u64(k));
    cube.push_back(std::move(vals));
  }
  return cube;
}

bool separates(const GeneratorMap& g, const std::vector<Felt>& s_values, const std::vector<std::size_t>& vars,
               const std::vector<Exponents>& universe) {
  auto svars = seeds_with(g, interpolating_role);
  if (s_values.size() != svars.size()) throw ArityMismatch("separates: s-block length");
  std::map<std::size_t, Felt> fixed;
  for (std::size_t k = 0; k < svars.size(); ++k) fixed[svars[k]] = s_values[k];
  PolyMap in;
  if (g.inner) {
    in.in_arity = g.inner->in_arity;
    for (const auto& c : g.inner->components) in.components.push_back(substitute(c, fixed));
  }
  std::vector<Exponents> image;
  for (auto i : vars) {
    SparsePoly c = g.inner ? compose(expand_component(g, i, {}), in) : expand_component(g, i, fixed);
    if (c.size() != 1) return false;
    image.push_back(c.terms().begin()->first);
  }
  std::set<std::vector<std::uint64_t>> seen;
  for (const auto& a : universe) {
    std::vector<std::uint64_t> e(g.seed_count(), 0);
    for (std::size_t k = 0; k < vars.size(); ++k)
      if (a[vars[k]])
        for (std::size_t v = 0; v < e.size(); ++v) e[v] += static_cast<std::uint64_t>(a[vars[k]]) * image[k][v];
    if (!seen.insert(e).second) return false;
  }
  return true;
}

bool certify_monomial_map(const GeneratorMap& g, const MonomialMapKind& kind) {
  const std::size_t n = g.out_arity();
  if (kind.type == MonomialMapKind::Type::total_degree) return find_total_degree_seed(g, kind.D, kind.d).has_value();
  const auto cube = interpolation_cube(g);
  const std::size_t k = std::min(kind.ell, n);
  std::vector<std::vector<std::size_t>> subsets;
  std::vector<std::size_t> cur;
  combinations(n, k, cur, 0, subsets);
  for (const auto& S : subsets) {
    std::vector<Exponents> universe;
    for (const auto& b : all_exponents(S.size(), kind.d)) {
      Exponents a(n, 0);
      for (std::size_t j = 0; j < S.size(); ++j) a[S[j]] = b[j];
      universe.push_back(std::move(a));
    }
    bool ok = for_each_in_cube(cube, [&](const std::vector<Felt>& s) { return separates(g, s, S, universe); });
    if (!ok) return false;
  }
  return true;
}

std::optional<TotalDegreeCertificate> find_total_degree_seed(const GeneratorMap& g, std::uint32_t D,
                                                             std::uint32_t d) {
  const std::size_t n = g.out_arity();
  auto universe = total_degree_universe(n, D, d);
  std::vector<std::size_t> vars(n);
  std::iota(vars.begin(), vars.end(), 0);
  std::optional<TotalDegreeCertificate> out;
  for_each_in_cube(interpolation_cube(g), [&](const std::vector<Felt>& s) {
    if (!separates(g, s, vars, universe)) return false;
    out = TotalDegreeCertificate{D, d, s};
    return true;
  });
  return out;
}

std::size_t hash_range(std::size_t ell) {
  if (ell <= 1) return 1;
  return std::size_t{1} << ceil_lg(static_cast<u64>(ell) * ell);
}

HashFamily pairwise_hash_family(std::size_t n, std::size_t ell) {
  HashFamily fam;
  fam.n = n;
  fam.m = hash_range(ell);
  const u64 q = smallest_prime_at_least(std::max<u64>(n, 2));
  for (u64 a = 1; a < q; ++a)
    for (u64 b = 0; b < q; ++b) {
      std::vector<std::uint32_t> h(n);
      for (std::size_t i = 0; i < n; ++i) h[i] = static_cast<std::uint32_t>((a * i + b) % q % fam.m);
      fam.members.push_back(std::move(h));
    }
  return fam;
}

bool is_perfect(const HashFamily& fam, std::size_t ell) {
  for (const auto& h : fam.members) {
    if (h.size() != fam.n) return false;
    for (auto v : h)
      if (v >= fam.m) return false;
  }
  if (ell > fam.n) ell = fam.n;
  std::vector<std::vector<std::size_t>> subsets;
  std::vector<std::size_t> cur;
  combinations(fam.n, ell, cur, 0, subsets);
  for (const auto& S : subsets) {
    bool hit = false;
    for (const auto& h : fam.members) {
      std::set<std::uint32_t> img;
      for (auto i : S) img.insert(h[i]);
      if (img.size() == S.size()) {
        hit = true;
        break;
      }
    }
    if (!hit) return false;
  }
  return true;
}

GeneratorMap hashing_generator(const Field& f, std::size_t n, std::size_t m, const HashFamily& fam,
                               std::uint32_t kronecker_D) {
  if (fam.n != n || fam.m != m) throw PreconditionError("hashing_generator: family shape does not match (n, m)");
  if (fam.members.empty()) throw PreconditionError("hashing_generator: empty family");
  if (f.p() <= std::max<u64>(fam.members.size(), n))
    throw FieldTooSmall("hashing_generator: need |F| > max(|family|, n)");
  const bool kron = kronecker_D > 0;
  GeneratorMap g;
  g.field = f;
  g.blocks.push_back({"y", 'y', 0, m});
  if (!kron) g.blocks.push_back({"z", 'z', m, m});
  const std::size_t u = kron ? m : 2 * m;
  g.blocks.push_back({"u", 'u', u, 1});
  g.nodesets.push_back(std::make_shared<const NodeSet>(NodeSet::range(f, n + 1)));               // xi
  g.nodesets.push_back(std::make_shared<const NodeSet>(NodeSet::range(f, fam.members.size())));  // eta
  g.components.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t h = 0; h < fam.members.size(); ++h) {
      const std::size_t j = fam.members[h][i];
      Factor z = kron ? indicator_factor(j, 0, i + 1, kronecker_D) : indicator_factor(m + j, 0, i + 1);
      g.components[i].push_back(GTerm{f.one(), {power_factor(j), indicator_factor(u, 1, h), z}});
    }
  g.explicitness = "hashing: " + std::to_string(fam.members.size()) + " hash functions into " + std::to_string(m) +
                   " buckets";
  if (kron) g.explicitness += ", z_j <- y_j^" + std::to_string(kronecker_D);
  return g;
}

std::uint32_t hashing_kronecker_degree(std::size_t n, std::uint32_t d) {
  return static_cast<std::uint32_t>(std::max<std::size_t>(d, 1) * n * n);
}

GeneratorMap merge_reduce_generator(std::size_t N, std::uint32_t d, u64 r, const GeneratorMap& base,
                                    const TotalDegreeCertificate& cert) {
  if (N == 0 || (N & (N - 1))) throw PreconditionError("merge_reduce: N must be a power of two");
  if (base.out_arity() != N) throw ArityMismatch("merge_reduce: base output arity differs from N");
  if (base.inner) throw PreconditionError("merge_reduce: base has an inner map");
  const std::uint32_t need = 2 * d * static_cast<std::uint32_t>(floor_lg(r * r) + 1);
  if (cert.D < need || cert.d < d)
    throw PreconditionError("merge_reduce: base certified only for total degree < " + std::to_string(cert.D) +
                            ", need " + std::to_string(need));
  std::vector<std::size_t> all(N);
  std::iota(all.begin(), all.end(), 0);
  if (!separates(base, cert.s_values, all, total_degree_universe(N, cert.D, cert.d)))
    throw PreconditionError("merge_reduce: certificate does not verify");
  const int copies = floor_lg(N);
  const std::size_t bs = base.seed_count();
  GeneratorMap g;
  g.field = base.field;
  g.components.resize(N);
  for (int c = 0; c < copies; ++c) {
    const std::size_t off = static_cast<std::size_t>(c) * (bs + 1);
    const std::string tag = std::to_string(c + 1);
    g.blocks.push_back({"u" + tag, 'u', off, 1});
    for (auto blk : base.blocks) {
      blk.name += tag;
      blk.offset += off + 1;
      g.blocks.push_back(blk);
    }
    const std::size_t nshift = g.nodesets.size();
    g.nodesets.insert(g.nodesets.end(), base.nodesets.begin(), base.nodesets.end());
    for (std::size_t i = 0; i < N; ++i)
      for (auto t : base.components[i]) {
        shift_vars(t, off + 1, nshift);
        t.factors.insert(t.factors.begin(), power_factor(off));
        g.components[i].push_back(std::move(t));
      }
  }
  g.explicitness = std::to_string(copies) + " copies of (" + base.explicitness + ")";
  return g;
}

UnknownOrderParams unknown_order_params(std::size_t N, std::uint32_t d, u64 r) {
  if (N == 0) throw PreconditionError("unknown_order: N must be positive");
  if (d == 0 || r == 0) throw PreconditionError("unknown_order: d and r must be positive");
  UnknownOrderParams p;
  p.padded_n = std::size_t{1} << ceil_lg(N);
  p.sv_ell = static_cast<std::size_t>(floor_lg(r * r)) + 1;
  p.D = 2 * d * static_cast<std::uint32_t>(p.sv_ell);
  p.sparsity = count_total_degree(p.padded_n, p.D, d);
  p.ks_prime = ks_prime(p.padded_n, d, p.sparsity);
  const u64 hs = static_cast<u64>(N) * (d - 1) * (p.ks_prime - 1) + 1;
  p.field_bound = std::max({p.ks_prime, static_cast<u64>(p.padded_n) + 1, hs});
  return p;
}

GeneratorMap unknown_order_generator(const Field& f, std::size_t N, std::uint32_t d, u64 r, bool include_sv) {
  const auto P = unknown_order_params(N, d, r);
  if (f.p() < P.field_bound)
    throw FieldTooSmall("unknown_order_generator: need p >= " + std::to_string(P.field_bound));
  GeneratorMap base = ks_generator(f, P.padded_n, d, P.sparsity, 1);
  auto cert = find_total_degree_seed(base, P.D, d);
  if (!cert) throw PreconditionError("unknown_order_generator: no certifying KS seed");
  GeneratorMap g = merge_reduce_generator(P.padded_n, d, r, base, *cert);
  if (include_sv) g = add(g, sv_generator(f, P.padded_n, P.sv_ell));
  g = truncate(g, N);
  g.explicitness = "unknown-order: " + g.explicitness;
  return g;
}

std::size_t commutative_ell(u64 r) { return 1 + 2 * static_cast<std::size_t>(floor_lg(r * r)); }

GeneratorMap commutative_generator(const Field& f, std::size_t n, std::uint32_t d, u64 r) {
  if (f.p() <= static_cast<u64>(n) * d) throw FieldTooSmall("commutative_generator: need |F| > nd");
  return sv_generator(f, n, commutative_ell(r));
}

VariableReducer grid_reducer() {
  VariableReducer red;
  red.name = "grid";
  red.deterministic = true;
  red.make = [](const Field& f, std::size_t m) { return PolyMap::identity(f, m); };
  red.declared_seeds = [](std::size_t m) { return m; };
  red.declared_degree = 1;
  return red;
}

VariableReducer random_line_reducer(u64 seed) {
  VariableReducer red;
  red.name = "random-line";
  red.deterministic = false;
  red.make = [seed](const Field& f, std::size_t m) {
    Rng rng(seed);
    PolyMap pm{1, {}};
    for (std::size_t j = 0; j < m; ++j) {
      SparsePoly c(f, 1);
      c.add_term({0}, rng.element(f));
      c.add_term({1}, rng.nonzero(f));
      pm.components.push_back(std::move(c));
    }
    return pm;
  };
  red.declared_seeds = [](std::size_t) { return std::size_t{1}; };
  red.declared_degree = 1;
  return red;
}

GeneratorMap hplusfs_generator(const Field& f, std::size_t n, std::uint32_t d, std::size_t ell,
                               const VariableReducer& reducer) {
  const std::size_t m = hash_range(ell);
  HashFamily fam = pairwise_hash_family(n, ell);
  GeneratorMap g = hashing_generator(f, n, m, fam, hashing_kronecker_degree(n, d));
  PolyMap red = reducer.make(f, m);
  if (red.out_arity() != m) throw PreconditionError("reducer " + reducer.name + ": wrong output arity");
  if (red.in_arity > reducer.declared_seeds(m)) throw PreconditionError("reducer " + reducer.name + ": too many seeds");
  for (const auto& c : red.components)
    if (c.total_degree() > reducer.declared_degree)
      throw PreconditionError("reducer " + reducer.name + ": degree above declared bound");
  bool is_identity = red.in_arity == m;
  for (std::size_t j = 0; j < m && is_identity; ++j) is_identity = red.components[j] == SparsePoly::variable(f, m, j);
  g.explicitness += "; reducer " + reducer.name + (reducer.deterministic ? "" : " (randomized)");
  if (is_identity) return g;
  const std::size_t w = red.in_arity;
  PolyMap inner{w + 1, {}};
  std::vector<std::size_t> place(w);
  std::iota(place.begin(), place.end(), 0);
  for (const auto& c : red.components) inner.components.push_back(c.embed(w + 1, place));
  inner.components.push_back(SparsePoly::variable(f, w + 1, w));
  g.inner = std::move(inner);
  g.blocks = {{"w", 't', 0, w}, {"u", 'u', w, 1}};
  return g;
}

std::vector<std::uint64_t> composed_degrees(const GeneratorMap& g, const DegreeBounds& b) {
  auto prof = degree_profile(g);
  std::vector<std::uint64_t> out(g.seed_count(), 0);
  for (std::size_t v = 0; v < out.size(); ++v) {
    std::vector<std::uint64_t> dv;
    for (const auto& row : prof) dv.push_back(row[v]);
    std::sort(dv.rbegin(), dv.rend());
    std::uint64_t left = b.total, acc = 0;
    for (auto x : dv) {
      if (!left || !x) break;
      const std::uint64_t take = std::min(left, b.individual);
      acc += take * x;
      left -= take;
    }
    out[v] = acc;
  }
  return out;
}

PointSet::PointSet(GeneratorMap g, std::vector<std::uint64_t> counts, std::vector<bool> nonzero)
    : g_(std::move(g)), counts_(std::move(counts)), nonzero_(std::move(nonzero)) {
  if (counts_.size() != g_.seed_count()) throw ArityMismatch("PointSet: one count per seed variable");
  if (nonzero_.empty()) nonzero_.assign(counts_.size(), false);
  if (nonzero_.size() != counts_.size()) throw ArityMismatch("PointSet: nonzero flags");
  const u64 p = g_.field.p();
  for (std::size_t v = 0; v < counts_.size(); ++v) {
    if (counts_[v] == 0) throw PreconditionError("PointSet: empty coordinate");
    if (counts_[v] + (nonzero_[v] ? 1 : 0) > p)
      throw FieldTooSmall("hitting set needs " + std::to_string(counts_[v]) + " distinct values for seed " +
                          std::to_string(v) + " but p = " + std::to_string(p));
  }
}

std::string PointSet::size_string() const {
  std::vector<std::uint32_t> limbs{1};  // base 1e9, little endian
  for (auto c : counts_) {
    unsigned __int128 carry = 0;
    for (auto& l : limbs) {
      unsigned __int128 v = static_cast<unsigned __int128>(l) * c + carry;
      l = static_cast<std::uint32_t>(v % 1000000000u);
      carry = v / 1000000000u;
    }
    while (carry) {
      limbs.push_back(static_cast<std::uint32_t>(carry % 1000000000u));
      carry /= 1000000000u;
    }
  }
  std::string s = std::to_string(limbs.back());
  for (std::size_t i = limbs.size() - 1; i-- > 0;) {
    std::string part = std::to_string(limbs[i]);
    s += std::string(9 - part.size(), '0') + part;
  }
  return s;
}

std::optional<u64> PointSet::size_u64() const {
  unsigned __int128 s = 1;
  for (auto c : counts_) {
    s *= c;
    if (s > ~u64{0}) return std::nullopt;
  }
  return static_cast<u64>(s);
}

std::optional<std::vector<std::uint64_t>> PointSet::digits(u64 index) const {
  std::vector<std::uint64_t> d(counts_.size(), 0);
  for (std::size_t v = counts_.size(); v-- > 0;) {
    d[v] = index % counts_[v];
    index /= counts_[v];
  }
  if (index) return std::nullopt;
  return d;
}

std::vector<Felt> PointSet::seed_at(const std::vector<std::uint64_t>& digits) const {
  if (digits.size() != counts_.size()) throw ArityMismatch("PointSet: digit count");
  std::vector<Felt> s(digits.size());
  for (std::size_t v = 0; v < digits.size(); ++v) {
    if (digits[v] >= counts_[v]) throw PreconditionError("PointSet: digit out of range");
    s[v] = g_.field.from_u64(digits[v] + (nonzero_[v] ? 1 : 0));
  }
  return s;
}

std::vector<Felt> PointSet::point_at(const std::vector<std::uint64_t>& digits) const {
  return evaluate(g_, seed_at(digits));
}

std::vector<Felt> PointSet::point(u64 index) const {
  auto d = digits(index);
  if (!d) throw PreconditionError("PointSet: index beyond the set");
  return point_at(*d);
}

bool PointSet::next(std::vector<std::uint64_t>& digits) const {
  for (std::size_t v = digits.size(); v-- > 0;) {
    if (++digits[v] < counts_[v]) return true;
    digits[v] = 0;
  }
  return false;
}

PointSet gen_to_hitting_set(const GeneratorMap& g, const DegreeBounds& b) {
  auto deg = composed_degrees(g, b);
  for (auto& x : deg) ++x;
  return PointSet(g, std::move(deg));
}

}  // namespace pitgen
