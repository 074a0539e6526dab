#include "pitgen/unipoly.hpp"

#include <map>
#include <mutex>
#include <string>

#include "pitgen/binomial.hpp"

namespace pitgen {

namespace {

// Pascal's triangle mod p, grown on demand.  Rows beyond kPascalRows are
// handled digit-wise (Lucas), still using only Pascal rows for the digits.
constexpr u64 kPascalRows = 2048;

struct PascalCache {
  std::mutex mu;
  std::map<u64, std::vector<std::vector<u64>>> rows;
};

PascalCache& cache() {
  static PascalCache c;
  return c;
}

u64 pascal(u64 n, u64 k, u64 p) {
  auto& c = cache();
  std::lock_guard<std::mutex> lock(c.mu);
  auto& tri = c.rows[p];
  while (tri.size() <= n) {
    u64 m = tri.size();
    std::vector<u64> row(m + 1);
    row[0] = row[m] = 1 % p;
    for (u64 i = 1; i < m; ++i) row[i] = addmod(tri[m - 1][i - 1], tri[m - 1][i], p);
    tri.push_back(std::move(row));
  }
  return tri[n][k];
}

}  // namespace

Felt binomial(u64 n, u64 k, const Field& f) {
  u64 p = f.p();
  if (k > n) return f.zero();
  if (n <= kPascalRows) return Felt::raw(pascal(n, k, p), p);
  u64 acc = 1 % p;
  while (n || k) {
    u64 nd = n % p, kd = k % p;
    if (kd > nd) return f.zero();
    if (nd > kPascalRows)
      throw BudgetExceeded("binomial digit " + std::to_string(nd) + " beyond the Pascal cache");
    acc = mulmod(acc, pascal(nd, kd, p), p);
    n /= p;
    k /= p;
  }
  return Felt::raw(acc, p);
}

UniPoly::UniPoly(const Field& f, std::vector<Felt> coeffs) : field_(f), c_(std::move(coeffs)) {
  for (auto& c : c_) c = c.in(f.p());
  trim();
}

UniPoly UniPoly::constant(const Field& f, Felt c) { return UniPoly(f, {c}); }

UniPoly UniPoly::monomial(const Field& f, int degree, Felt c) {
  std::vector<Felt> v(static_cast<std::size_t>(degree) + 1, f.zero());
  v.back() = c;
  return UniPoly(f, std::move(v));
}

void UniPoly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Felt UniPoly::coeff(int i) const {
  if (i < 0 || i > degree()) return field_.zero();
  return c_[static_cast<std::size_t>(i)];
}

Felt UniPoly::eval(const Felt& z) const {
  Felt acc = field_.zero();
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

UniPoly UniPoly::operator+(const UniPoly& o) const {
  if (field_ != o.field_) throw FieldMismatch("UniPoly +");
  std::vector<Felt> v(std::max(c_.size(), o.c_.size()), field_.zero());
  for (std::size_t i = 0; i < c_.size(); ++i) v[i] += c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i) v[i] += o.c_[i];
  return UniPoly(field_, std::move(v));
}

UniPoly UniPoly::operator-(const UniPoly& o) const { return *this + o * Felt(-1); }

UniPoly UniPoly::operator*(const UniPoly& o) const {
  if (field_ != o.field_) throw FieldMismatch("UniPoly *");
  if (is_zero() || o.is_zero()) return UniPoly(field_);
  std::vector<Felt> v(c_.size() + o.c_.size() - 1, field_.zero());
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < o.c_.size(); ++j) v[i + j] += c_[i] * o.c_[j];
  return UniPoly(field_, std::move(v));
}

UniPoly UniPoly::operator*(const Felt& c) const {
  std::vector<Felt> v = c_;
  for (auto& x : v) x *= c;
  return UniPoly(field_, std::move(v));
}

UniPoly UniPoly::hasse(int k) const {
  if (k < 0) throw PreconditionError("negative derivative order");
  if (k > degree()) return UniPoly(field_);
  std::vector<Felt> v(c_.size() - static_cast<std::size_t>(k), field_.zero());
  for (std::size_t i = static_cast<std::size_t>(k); i < c_.size(); ++i)
    v[i - static_cast<std::size_t>(k)] = binomial(i, static_cast<u64>(k), field_) * c_[i];
  return UniPoly(field_, std::move(v));
}

NodeSet::NodeSet(const Field& f, std::vector<Felt> nodes) : field_(f), nodes_(std::move(nodes)) {
  for (auto& x : nodes_) x = x.in(f.p());
  weights_.assign(nodes_.size(), f.one());
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    Felt prod = f.one();
    for (std::size_t j = 0; j < nodes_.size(); ++j) {
      if (j == k) continue;
      Felt diff = nodes_[k] - nodes_[j];
      if (diff.is_zero()) throw PreconditionError("interpolation nodes are not distinct");
      prod *= diff;
    }
    weights_[k] = prod.inverse();
  }
}

NodeSet NodeSet::range(const Field& f, u64 K) {
  if (K > f.p())
    throw FieldTooSmall("need " + std::to_string(K) + " distinct nodes in F_" +
                        std::to_string(f.p()));
  NodeSet s(f, {});
  s.nodes_.reserve(K);
  for (u64 i = 0; i < K; ++i) s.nodes_.push_back(f.constant(i));
  // prod_{j != k} (k - j) = k! * (-1)^(K-1-k) * (K-1-k)!
  std::vector<Felt> fact(K + 1, f.one());
  for (u64 i = 1; i <= K; ++i) fact[i] = fact[i - 1] * f.from_u64(i);
  s.weights_.resize(K);
  for (u64 k = 0; k < K; ++k) {
    Felt w = fact[k] * fact[K - 1 - k];
    if ((K - 1 - k) % 2) w = -w;
    s.weights_[k] = w.inverse();
  }
  return s;
}

UniPoly NodeSet::indicator(std::size_t k) const {
  if (k >= nodes_.size()) throw PreconditionError("indicator index out of range");
  UniPoly acc = UniPoly::constant(field_, weights_[k]);
  for (std::size_t j = 0; j < nodes_.size(); ++j) {
    if (j == k) continue;
    acc = acc * UniPoly(field_, {-nodes_[j], field_.one()});
  }
  return acc;
}

std::vector<Felt> NodeSet::indicator_values(const Felt& z) const {
  std::size_t K = nodes_.size();
  std::vector<Felt> out(K, field_.zero());
  std::vector<Felt> diff(K);
  for (std::size_t j = 0; j < K; ++j) {
    diff[j] = z - nodes_[j];
    if (diff[j].is_zero()) {
      out[j] = field_.one();
      return out;
    }
  }
  // batch inversion of all differences
  std::vector<Felt> prefix(K + 1, field_.one());
  for (std::size_t j = 0; j < K; ++j) prefix[j + 1] = prefix[j] * diff[j];
  Felt ell = prefix[K];
  Felt inv = ell.inverse();
  for (std::size_t j = K; j-- > 0;) {
    Felt inv_j = inv * prefix[j];
    inv = inv * diff[j];
    out[j] = weights_[j] * ell * inv_j;
  }
  return out;
}

UniPoly lagrange_indicator(const std::vector<Felt>& points, std::size_t k) {
  if (points.empty()) throw PreconditionError("no interpolation points");
  u64 p = 0;
  for (const auto& x : points)
    if (x.bound()) p = x.modulus();
  if (!p) throw PreconditionError("interpolation points carry no field");
  return NodeSet(Field(p), points).indicator(k);
}

}  // namespace pitgen
