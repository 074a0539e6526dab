#include "pitgen/poly.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace pitgen {

int support_size(const Exponents& a) {
  return static_cast<int>(std::count_if(a.begin(), a.end(), [](auto e) { return e != 0; }));
}

std::uint64_t total_degree(const Exponents& a) {
  std::uint64_t s = 0;
  for (auto e : a) s += e;
  return s;
}

std::uint32_t max_entry(const Exponents& a) {
  std::uint32_t m = 0;
  for (auto e : a) m = std::max(m, e);
  return m;
}

Felt binomial(const Exponents& b, const Exponents& a, const Field& f) {
  if (a.size() != b.size()) throw ArityMismatch("binomial of exponent vectors");
  Felt acc = f.one();
  for (std::size_t i = 0; i < a.size() && !acc.is_zero(); ++i) acc *= binomial(b[i], a[i], f);
  return acc;
}

std::size_t term_budget() {
  if (const char* env = std::getenv("PIT_TERM_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  return 2000000;
}

std::vector<Exponents> all_exponents(std::size_t n, std::uint32_t d) {
  return exponents_with_support(n, d, static_cast<int>(n));
}

std::vector<Exponents> exponents_with_support(std::size_t n, std::uint32_t d, int max_support) {
  std::vector<Exponents> out;
  if (d == 0) return out;
  Exponents a(n, 0);
  for (;;) {
    if (support_size(a) <= max_support) out.push_back(a);
    std::size_t i = n;
    while (i > 0 && a[i - 1] + 1 == d) a[--i] = 0;
    if (i == 0) break;
    ++a[i - 1];
    if (out.size() > term_budget()) throw BudgetExceeded("exponent universe too large");
  }
  return out;
}

SparsePoly SparsePoly::constant(const Field& f, std::size_t arity, const Felt& c) {
  SparsePoly p(f, arity);
  p.add_term(Exponents(arity, 0), c);
  return p;
}

SparsePoly SparsePoly::variable(const Field& f, std::size_t arity, std::size_t i) {
  if (i >= arity) throw ArityMismatch("variable index out of range");
  Exponents a(arity, 0);
  a[i] = 1;
  return monomial(f, a, f.one());
}

SparsePoly SparsePoly::monomial(const Field& f, const Exponents& a, const Felt& c) {
  SparsePoly p(f, a.size());
  p.add_term(a, c);
  return p;
}

Felt SparsePoly::coeff(const Exponents& a) const {
  if (a.size() != arity_) throw ArityMismatch("coeff: exponent length");
  auto it = terms_.find(a);
  return it == terms_.end() ? field_.zero() : it->second;
}

void SparsePoly::add_term(const Exponents& a, const Felt& c) {
  if (a.size() != arity_) throw ArityMismatch("add_term: exponent length");
  Felt v = c.in(field_.p());
  if (v.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(a, v);
  if (!inserted) {
    it->second += v;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

std::uint64_t SparsePoly::total_degree() const {
  std::uint64_t d = 0;
  for (const auto& [a, c] : terms_) d = std::max(d, pitgen::total_degree(a));
  return d;
}

std::uint32_t SparsePoly::degree_in(std::size_t var) const {
  if (var >= arity_) throw ArityMismatch("degree_in: variable index");
  std::uint32_t d = 0;
  for (const auto& [a, c] : terms_) d = std::max(d, a[var]);
  return d;
}

std::uint32_t SparsePoly::individual_degree() const {
  std::uint32_t d = 0;
  for (const auto& [a, c] : terms_) d = std::max(d, max_entry(a));
  return d;
}

void SparsePoly::check_compatible(const SparsePoly& o) const {
  if (field_ != o.field_) throw FieldMismatch("polynomials over different fields");
  if (arity_ != o.arity_) throw ArityMismatch("polynomials of different arity");
}

SparsePoly& SparsePoly::operator+=(const SparsePoly& o) {
  check_compatible(o);
  for (const auto& [a, c] : o.terms_) add_term(a, c);
  return *this;
}

SparsePoly SparsePoly::operator+(const SparsePoly& o) const {
  SparsePoly r = *this;
  r += o;
  return r;
}

SparsePoly SparsePoly::operator-() const { return *this * Felt(-1); }

SparsePoly SparsePoly::operator-(const SparsePoly& o) const { return *this + (-o); }

SparsePoly SparsePoly::operator*(const Felt& c) const {
  SparsePoly r(field_, arity_);
  Felt k = c.in(field_.p());
  if (k.is_zero()) return r;
  for (const auto& [a, v] : terms_) r.terms_.emplace_hint(r.terms_.end(), a, v * k);
  return r;
}

SparsePoly SparsePoly::operator*(const SparsePoly& o) const {
  check_compatible(o);
  SparsePoly r(field_, arity_);
  const std::size_t budget = term_budget();
  Exponents e(arity_);
  for (const auto& [a, c] : terms_) {
    for (const auto& [b, d] : o.terms_) {
      for (std::size_t i = 0; i < arity_; ++i) e[i] = a[i] + b[i];
      r.add_term(e, c * d);
    }
    if (r.size() > budget)
      throw BudgetExceeded("product exceeds " + std::to_string(budget) + " terms");
  }
  return r;
}

SparsePoly SparsePoly::pow(std::uint64_t k) const {
  SparsePoly acc = constant(field_, arity_, field_.one());
  SparsePoly base = *this;
  while (k) {
    if (k & 1) acc = acc * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return acc;
}

bool SparsePoly::operator==(const SparsePoly& o) const {
  return field_ == o.field_ && arity_ == o.arity_ && terms_ == o.terms_;
}

SparsePoly SparsePoly::embed(std::size_t new_arity,
                             const std::vector<std::size_t>& placement) const {
  if (placement.size() != arity_) throw ArityMismatch("embed: placement length");
  SparsePoly r(field_, new_arity);
  for (const auto& [a, c] : terms_) {
    Exponents b(new_arity, 0);
    for (std::size_t i = 0; i < arity_; ++i) {
      if (placement[i] >= new_arity) throw ArityMismatch("embed: slot out of range");
      b[placement[i]] += a[i];
    }
    r.add_term(b, c);
  }
  return r;
}

SparsePoly lift(const UniPoly& p, std::size_t arity, std::size_t var) {
  if (var >= arity) throw ArityMismatch("lift: variable index");
  SparsePoly r(p.field(), arity);
  for (int i = 0; i <= p.degree(); ++i) {
    Exponents a(arity, 0);
    a[var] = static_cast<std::uint32_t>(i);
    r.add_term(a, p.coeff(i));
  }
  return r;
}

Felt coeff(const SparsePoly& f, const Exponents& a) { return f.coeff(a); }

Felt eval(const SparsePoly& f, const std::vector<Felt>& point) {
  if (point.size() != f.arity()) throw ArityMismatch("eval: point length");
  const Field& F = f.field();
  std::vector<Felt> x(point.size());
  for (std::size_t i = 0; i < point.size(); ++i) x[i] = point[i].in(F.p());
  Felt acc = F.zero();
  for (const auto& [a, c] : f.terms()) {
    Felt m = c;
    for (std::size_t i = 0; i < a.size() && !m.is_zero(); ++i)
      if (a[i]) m *= x[i].pow(a[i]);
    acc += m;
  }
  return acc;
}

SparsePoly hasse_derivative(const SparsePoly& f, const Exponents& b) {
  if (b.size() != f.arity()) throw ArityMismatch("hasse_derivative: exponent length");
  SparsePoly r(f.field(), f.arity());
  Exponents c(f.arity());
  for (const auto& [a, v] : f.terms()) {
    bool below = true;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] < b[i]) {
        below = false;
        break;
      }
      c[i] = a[i] - b[i];
    }
    if (below) r.add_term(c, binomial(a, b, f.field()) * v);
  }
  return r;
}

namespace {

// Calls fn(sub) for every sub <= a componentwise.
template <typename Fn>
void for_each_below(const Exponents& a, Fn&& fn) {
  Exponents s(a.size(), 0);
  for (;;) {
    fn(s);
    std::size_t i = a.size();
    while (i > 0 && s[i - 1] == a[i - 1]) s[--i] = 0;
    if (i == 0) return;
    ++s[i - 1];
  }
}

}  // namespace

SparsePoly shift_symbolic(const SparsePoly& f) {
  const std::size_t n = f.arity();
  SparsePoly r(f.field(), 2 * n);
  Exponents e(2 * n);
  for (const auto& [b, v] : f.terms()) {
    for_each_below(b, [&](const Exponents& a) {
      for (std::size_t i = 0; i < n; ++i) {
        e[i] = a[i];
        e[n + i] = b[i] - a[i];
      }
      r.add_term(e, binomial(b, a, f.field()) * v);
    });
    if (r.size() > term_budget()) throw BudgetExceeded("symbolic shift too large");
  }
  return r;
}

SparsePoly shift(const SparsePoly& f, const std::vector<Felt>& alpha) {
  const std::size_t n = f.arity();
  if (alpha.size() != n) throw ArityMismatch("shift: point length");
  const Field& F = f.field();
  std::vector<Felt> al(n);
  for (std::size_t i = 0; i < n; ++i) al[i] = alpha[i].in(F.p());
  SparsePoly r(F, n);
  for (const auto& [b, v] : f.terms()) {
    for_each_below(b, [&](const Exponents& a) {
      Felt c = binomial(b, a, F) * v;
      for (std::size_t i = 0; i < n && !c.is_zero(); ++i)
        if (b[i] > a[i]) c *= al[i].pow(b[i] - a[i]);
      r.add_term(a, c);
    });
    if (r.size() > term_budget()) throw BudgetExceeded("shift too large");
  }
  return r;
}

PolyMap PolyMap::identity(const Field& f, std::size_t n) {
  PolyMap g;
  g.in_arity = n;
  for (std::size_t i = 0; i < n; ++i) g.components.push_back(SparsePoly::variable(f, n, i));
  return g;
}

SparsePoly compose(const SparsePoly& f, const PolyMap& g) {
  if (g.out_arity() != f.arity()) throw ArityMismatch("compose: map output arity");
  for (const auto& c : g.components) {
    if (c.arity() != g.in_arity) throw ArityMismatch("compose: component arity");
    if (c.field() != f.field()) throw FieldMismatch("compose: component field");
  }
  const std::size_t n = f.arity();
  // powers[i][e] = g_i^e, filled lazily
  std::vector<std::vector<SparsePoly>> powers(n);
  auto power = [&](std::size_t i, std::uint32_t e) -> const SparsePoly& {
    auto& row = powers[i];
    if (row.empty()) row.push_back(SparsePoly::constant(f.field(), g.in_arity, f.field().one()));
    while (row.size() <= e) row.push_back(row.back() * g.components[i]);
    return row[e];
  };
  SparsePoly r(f.field(), g.in_arity);
  for (const auto& [a, c] : f.terms()) {
    SparsePoly term = SparsePoly::constant(f.field(), g.in_arity, c);
    for (std::size_t i = 0; i < n && !term.is_zero(); ++i)
      if (a[i]) term = term * power(i, a[i]);
    r += term;
    if (r.size() > term_budget()) throw BudgetExceeded("composition too large");
  }
  return r;
}

SparsePoly kronecker_substitute(const SparsePoly& f, const std::vector<std::size_t>& z_block,
                                std::uint32_t D) {
  const std::size_t n = f.arity();
  std::vector<int> role(n, -1);
  for (auto z : z_block) {
    if (z >= n || role[z] != -1) throw PreconditionError("kronecker: bad z-block");
    role[z] = 1;
  }
  std::vector<std::size_t> ys, zs(z_block.begin(), z_block.end());
  for (std::size_t i = 0; i < n; ++i)
    if (role[i] == -1) ys.push_back(i);
  if (ys.size() != zs.size()) throw PreconditionError("kronecker: blocks of unequal size");
  if (!f.is_zero() && f.individual_degree() >= D)
    throw PreconditionError("kronecker: individual degree " +
                            std::to_string(f.individual_degree()) + " is not below D=" +
                            std::to_string(D));
  SparsePoly r(f.field(), ys.size());
  Exponents e(ys.size());
  for (const auto& [a, c] : f.terms()) {
    for (std::size_t j = 0; j < ys.size(); ++j) {
      std::uint64_t v = a[ys[j]] + static_cast<std::uint64_t>(D) * a[zs[j]];
      if (v > UINT32_MAX) throw BudgetExceeded("kronecker: exponent overflow");
      e[j] = static_cast<std::uint32_t>(v);
    }
    r.add_term(e, c);
  }
  return r;
}

}  // namespace pitgen
