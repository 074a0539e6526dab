#include "pitgen/models.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>

namespace pitgen {

namespace {

void check_permutation(const std::vector<std::size_t>& order, std::size_t n, const char* what) {
  if (order.size() != n) throw ArityMismatch(std::string(what) + ": order has wrong length");
  std::vector<bool> seen(n, false);
  for (auto v : order) {
    if (v >= n || seen[v]) throw PreconditionError(std::string(what) + ": order is not a permutation");
    seen[v] = true;
  }
}

void check_point(const std::vector<Felt>& point, std::size_t n) {
  if (point.size() != n)
    throw ArityMismatch("point has " + std::to_string(point.size()) + " coordinates, expected " +
                        std::to_string(n));
}

u64 saturating_pow(u64 base, std::size_t e) {
  u64 acc = 1;
  for (std::size_t i = 0; i < e; ++i) {
    if (base && acc > ~0ull / base) return ~0ull;
    acc *= base;
  }
  return acc;
}

void check_expansion_budget(std::uint32_t d, std::size_t n) {
  if (saturating_pow(d, n) > term_budget())
    throw BudgetExceeded("expansion of " + std::to_string(d) + "^" + std::to_string(n) +
                         " terms exceeds the term budget");
}

FMatrix random_matrix(const Field& f, Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  FMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.element(f);
  return m;
}

FVector random_vector(const Field& f, Eigen::Index n, Rng& rng) {
  FVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.element(f);
  return v;
}

std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[rng.below(i)]);
  return p;
}

// Basis of span(polys) in reduced echelon form over the union of their
// monomials; coordinates of a member g are its coefficients at `pivots`.
struct PolyBasis {
  std::vector<SparsePoly> basis;
  std::vector<Exponents> pivots;
};

PolyBasis span_basis(const Field& f, std::size_t arity, const std::vector<SparsePoly>& polys) {
  std::map<Exponents, Eigen::Index> index;
  for (const auto& p : polys)
    for (const auto& [a, c] : p.terms()) index.emplace(a, 0);
  std::vector<Exponents> monos;
  for (auto& [a, i] : index) {
    i = static_cast<Eigen::Index>(monos.size());
    monos.push_back(a);
  }
  FMatrix m = zeros(f, static_cast<Eigen::Index>(polys.size()), static_cast<Eigen::Index>(monos.size()));
  for (std::size_t r = 0; r < polys.size(); ++r)
    for (const auto& [a, c] : polys[r].terms()) m(static_cast<Eigen::Index>(r), index[a]) = c;
  auto e = row_echelon(m);
  PolyBasis out;
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    SparsePoly b(f, arity);
    for (Eigen::Index j = 0; j < e.reduced.cols(); ++j)
      if (!e.reduced(static_cast<Eigen::Index>(r), j).is_zero())
        b.add_term(monos[static_cast<std::size_t>(j)], e.reduced(static_cast<Eigen::Index>(r), j));
    out.basis.push_back(std::move(b));
    out.pivots.push_back(monos[static_cast<std::size_t>(e.pivots[r])]);
  }
  return out;
}

// Splits g = sum_e x_var^e * g_e; g_e no longer involves x_var.
std::map<std::uint32_t, SparsePoly> split_on(const SparsePoly& g, std::size_t var) {
  std::map<std::uint32_t, SparsePoly> parts;
  for (const auto& [a, c] : g.terms()) {
    Exponents rest = a;
    rest[var] = 0;
    parts.try_emplace(a[var], g.field(), g.arity()).first->second.add_term(rest, c);
  }
  return parts;
}

}  // namespace

FMatrix MatrixLayer::at(const Felt& x) const {
  if (coeffs.empty()) throw PreconditionError("empty layer");
  FMatrix acc = coeffs.back();
  for (std::size_t k = coeffs.size() - 1; k-- > 0;) acc = acc * x + coeffs[k];
  return acc;
}

UniPoly MatrixLayer::entry(const Field& f, Eigen::Index i, Eigen::Index j) const {
  std::vector<Felt> c;
  c.reserve(coeffs.size());
  for (const auto& m : coeffs) c.push_back(m(i, j));
  return UniPoly(f, std::move(c));
}

Eigen::Index MatrixRoabp::width() const {
  Eigen::Index w = 0;
  for (const auto& l : layers) w = std::max({w, l.rows(), l.cols()});
  return w;
}

void MatrixRoabp::validate() const {
  check_permutation(order, n, "roabp");
  if (layers.size() != n) throw ArityMismatch("roabp: need one layer per variable");
  for (std::size_t i = 0; i < n; ++i) {
    const auto& l = layers[i];
    if (l.coeffs.empty()) throw PreconditionError("roabp: layer without coefficients");
    if (l.coeffs.size() > d)
      throw PreconditionError("roabp: layer " + std::to_string(i) + " has degree >= d");
    for (const auto& c : l.coeffs)
      if (c.rows() != l.rows() || c.cols() != l.cols())
        throw PreconditionError("roabp: ragged coefficient matrices in layer " + std::to_string(i));
    if (i > 0 && layers[i - 1].cols() != l.rows())
      throw PreconditionError("roabp: layer shapes do not chain at layer " + std::to_string(i));
  }
}

void Roabp::validate() const {
  m.validate();
  if (m.n == 0) return;
  if (left.size() != m.layers.front().rows() || right.size() != m.layers.back().cols())
    throw PreconditionError("roabp: boundary vectors do not match the layer shapes");
}

void Smabp::validate() const {
  if (partition.size() != sets || coeffs.size() != sets)
    throw ArityMismatch("smabp: need one partition block and one layer per set");
  std::vector<std::size_t> flat;
  for (const auto& block : partition) {
    if (block.size() != set_size) throw ArityMismatch("smabp: partition blocks must have size n");
    flat.insert(flat.end(), block.begin(), block.end());
  }
  std::vector<bool> seen(arity(), false);
  for (auto v : flat) {
    if (v >= arity() || seen[v]) throw PreconditionError("smabp: partition is not a partition of [dn]");
    seen[v] = true;
  }
  for (const auto& layer : coeffs) {
    if (layer.size() != set_size) throw ArityMismatch("smabp: layer needs one matrix per variable");
    for (const auto& a : layer)
      if (a.rows() != r || a.cols() != r) throw PreconditionError("smabp: layer matrices must be r x r");
  }
  if (left.size() != r || right.size() != r) throw PreconditionError("smabp: boundary vectors must have length r");
}

void DiagonalCircuit::validate() const {
  for (const auto& t : terms)
    if (t.coeffs.size() != n + 1) throw ArityMismatch("diagonal: affine form needs n+1 coefficients");
}

FMatrix roabp_eval_matrix(const MatrixRoabp& m, const std::vector<Felt>& point) {
  check_point(point, m.n);
  if (m.n == 0) return identity(m.field, 1);
  FMatrix acc = m.layers[0].at(point[m.order[0]].in(m.field.p()));
  for (std::size_t i = 1; i < m.n; ++i) acc = acc * m.layers[i].at(point[m.order[i]].in(m.field.p()));
  return acc;
}

Felt roabp_eval(const Roabp& m, const std::vector<Felt>& point) {
  check_point(point, m.m.n);
  if (m.m.n == 0) return m.m.field.zero();
  FMatrix v = m.left.transpose();
  for (std::size_t i = 0; i < m.m.n; ++i) v = v * m.m.layers[i].at(point[m.m.order[i]].in(m.m.field.p()));
  return (v * m.right)(0, 0);
}

std::vector<SparsePoly> roabp_expand_matrix(const MatrixRoabp& m) {
  check_expansion_budget(m.d, m.n);
  const Field& f = m.field;
  if (m.n == 0) return {SparsePoly::constant(f, 0, f.one())};
  const auto& first = m.layers[0];
  Eigen::Index rows = first.rows();
  std::vector<SparsePoly> cur;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < first.cols(); ++j) cur.push_back(lift(first.entry(f, i, j), m.n, m.order[0]));
  Eigen::Index cols = first.cols();
  for (std::size_t k = 1; k < m.n; ++k) {
    const auto& l = m.layers[k];
    std::vector<SparsePoly> lifted;
    for (Eigen::Index a = 0; a < l.rows(); ++a)
      for (Eigen::Index b = 0; b < l.cols(); ++b) lifted.push_back(lift(l.entry(f, a, b), m.n, m.order[k]));
    std::vector<SparsePoly> next(static_cast<std::size_t>(rows * l.cols()), SparsePoly(f, m.n));
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index a = 0; a < cols; ++a) {
        const auto& left = cur[static_cast<std::size_t>(i * cols + a)];
        if (left.is_zero()) continue;
        for (Eigen::Index b = 0; b < l.cols(); ++b) {
          const auto& right = lifted[static_cast<std::size_t>(a * l.cols() + b)];
          if (!right.is_zero()) next[static_cast<std::size_t>(i * l.cols() + b)] += left * right;
        }
      }
    cur = std::move(next);
    cols = l.cols();
  }
  return cur;
}

SparsePoly roabp_expand(const Roabp& m) {
  check_expansion_budget(m.m.d, m.m.n);
  const Field& f = m.m.field;
  if (m.m.n == 0) return SparsePoly(f, 0);
  std::vector<SparsePoly> row;
  for (Eigen::Index i = 0; i < m.left.size(); ++i)
    row.push_back(SparsePoly::constant(f, m.m.n, m.left(i)));
  for (std::size_t k = 0; k < m.m.n; ++k) {
    const auto& l = m.m.layers[k];
    std::vector<SparsePoly> next(static_cast<std::size_t>(l.cols()), SparsePoly(f, m.m.n));
    for (Eigen::Index a = 0; a < l.rows(); ++a) {
      if (row[static_cast<std::size_t>(a)].is_zero()) continue;
      for (Eigen::Index b = 0; b < l.cols(); ++b) {
        SparsePoly e = lift(l.entry(f, a, b), m.m.n, m.m.order[k]);
        if (!e.is_zero()) next[static_cast<std::size_t>(b)] += row[static_cast<std::size_t>(a)] * e;
      }
    }
    row = std::move(next);
  }
  SparsePoly out(f, m.m.n);
  for (Eigen::Index b = 0; b < m.right.size(); ++b)
    if (!m.right(b).is_zero()) out += row[static_cast<std::size_t>(b)] * m.right(b);
  return out;
}

Roabp reorder(const Roabp& m, const std::vector<std::size_t>& order) {
  Roabp out = m;
  out.m.order = order;
  out.m.validate();
  return out;
}

SparsePoly smabp_expand(const Smabp& s) {
  s.validate();
  const Field& f = s.field;
  const std::size_t N = s.arity();
  std::vector<SparsePoly> row;
  for (Eigen::Index i = 0; i < s.r; ++i) row.push_back(SparsePoly::constant(f, N, s.left(i)));
  for (std::size_t i = 0; i < s.sets; ++i) {
    std::vector<SparsePoly> next(static_cast<std::size_t>(s.r), SparsePoly(f, N));
    for (Eigen::Index a = 0; a < s.r; ++a)
      for (Eigen::Index b = 0; b < s.r; ++b) {
        SparsePoly form(f, N);
        for (std::size_t j = 0; j < s.set_size; ++j)
          form += SparsePoly::variable(f, N, s.partition[i][j]) * s.coeffs[i][j](a, b);
        if (!form.is_zero()) next[static_cast<std::size_t>(b)] += row[static_cast<std::size_t>(a)] * form;
      }
    row = std::move(next);
  }
  SparsePoly out(f, N);
  for (Eigen::Index b = 0; b < s.r; ++b) out += row[static_cast<std::size_t>(b)] * s.right(b);
  return out;
}

Felt smabp_eval(const Smabp& s, const std::vector<Felt>& point) {
  check_point(point, s.arity());
  FMatrix v = s.left.transpose();
  for (std::size_t i = 0; i < s.sets; ++i) {
    FMatrix layer = zeros(s.field, s.r, s.r);
    for (std::size_t j = 0; j < s.set_size; ++j)
      layer += s.coeffs[i][j] * point[s.partition[i][j]].in(s.field.p());
    v = v * layer;
  }
  return (v * s.right)(0, 0);
}

// Each set becomes the gadgets [[I, A_j x_j], [0, I]] whose product is
// [[I, M_i], [0, I]]; P = [I 0] and Q = [0; I] cut M_i back out, with each
// Q P folded into the first gadget of the next set.
Roabp smabp_to_roabp(const Smabp& s) {
  s.validate();
  const Field& f = s.field;
  const Eigen::Index r = s.r, w = 2 * r;
  Roabp out;
  out.m.field = f;
  out.m.n = s.arity();
  out.m.d = 2;
  FMatrix qp = zeros(f, w, w);
  qp.bottomLeftCorner(r, r) = identity(f, r);
  for (std::size_t i = 0; i < s.sets; ++i)
    for (std::size_t j = 0; j < s.set_size; ++j) {
      FMatrix c0 = identity(f, w);
      FMatrix c1 = zeros(f, w, w);
      c1.topRightCorner(r, r) = s.coeffs[i][j];
      if (i > 0 && j == 0) {
        c0 = qp * c0;
        c1 = qp * c1;
      }
      out.m.layers.push_back(MatrixLayer{{c0, c1}});
      out.m.order.push_back(s.partition[i][j]);
    }
  out.left = FVector::Constant(w, f.zero());
  out.left.head(r) = s.left;
  out.right = FVector::Constant(w, f.zero());
  out.right.tail(r) = s.right;
  if (s.set_size == 0) throw PreconditionError("smabp: empty variable sets");
  return out;
}

SparsePoly diagonal_to_poly(const DiagonalCircuit& c) {
  c.validate();
  SparsePoly out(c.field, c.n);
  for (const auto& t : c.terms) {
    SparsePoly form = SparsePoly::constant(c.field, c.n, t.coeffs[0]);
    for (std::size_t i = 0; i < c.n; ++i)
      if (!t.coeffs[i + 1].is_zero()) form += SparsePoly::variable(c.field, c.n, i) * t.coeffs[i + 1];
    out += form.pow(t.power);
  }
  return out;
}

Felt diagonal_eval(const DiagonalCircuit& c, const std::vector<Felt>& point) {
  check_point(point, c.n);
  Felt acc = c.field.zero();
  for (const auto& t : c.terms) {
    Felt v = t.coeffs[0].in(c.field.p());
    for (std::size_t i = 0; i < c.n; ++i) v += t.coeffs[i + 1] * point[i];
    acc += v.pow(t.power);
  }
  return acc;
}

std::size_t partial_derivative_dim(const SparsePoly& f) {
  if (f.is_zero()) return 0;
  const std::size_t n = f.arity();
  Exponents bound(n);
  std::size_t count = 1;
  for (std::size_t i = 0; i < n; ++i) {
    bound[i] = f.degree_in(i);
    count *= bound[i] + 1;
    if (count > term_budget()) throw BudgetExceeded("too many derivatives for partial_derivative_dim");
  }
  std::vector<SparsePoly> derivs;
  Exponents a(n, 0);
  while (true) {
    SparsePoly g = hasse_derivative(f, a);
    if (!g.is_zero()) derivs.push_back(std::move(g));
    std::size_t i = n;
    while (i > 0 && a[i - 1] == bound[i - 1]) a[--i] = 0;
    if (i == 0) break;
    ++a[i - 1];
  }
  return span_basis(f.field(), n, derivs).basis.size();
}

Roabp roabp_from_poly(const SparsePoly& f, const std::vector<std::size_t>& order) {
  const std::size_t n = f.arity();
  check_permutation(order, n, "roabp_from_poly");
  if (n == 0) throw PreconditionError("roabp_from_poly needs at least one variable");
  const Field& F = f.field();
  Roabp out;
  out.m.field = F;
  out.m.n = n;
  out.m.order = order;
  out.m.d = f.individual_degree() + 1;
  out.left = FVector::Constant(1, F.one());
  out.right = FVector::Constant(1, F.one());

  std::vector<SparsePoly> basis{f};
  if (f.is_zero()) basis.clear();
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t var = order[k];
    std::vector<std::map<std::uint32_t, SparsePoly>> parts;
    for (const auto& b : basis) parts.push_back(split_on(b, var));
    const bool last = k + 1 == n;
    PolyBasis next;
    if (!last) {
      std::vector<SparsePoly> all;
      for (const auto& p : parts)
        for (const auto& [e, g] : p) all.push_back(g);
      next = span_basis(F, n, all);
    }
    Eigen::Index rows = k == 0 ? 1 : std::max<Eigen::Index>(1, static_cast<Eigen::Index>(basis.size()));
    Eigen::Index cols = last ? 1 : std::max<Eigen::Index>(1, static_cast<Eigen::Index>(next.basis.size()));
    MatrixLayer layer;
    layer.coeffs.assign(out.m.d, zeros(F, rows, cols));
    for (std::size_t j = 0; j < parts.size(); ++j)
      for (const auto& [e, g] : parts[j]) {
        if (last) {
          layer.coeffs[e](static_cast<Eigen::Index>(j), 0) = g.coeff(Exponents(n, 0));
          continue;
        }
        for (std::size_t l = 0; l < next.pivots.size(); ++l)
          layer.coeffs[e](static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) = g.coeff(next.pivots[l]);
      }
    out.m.layers.push_back(std::move(layer));
    basis = std::move(next.basis);
  }
  return out;
}

RandomModel random_model(ModelKind kind, const Field& f, std::size_t n, std::uint32_t d, Eigen::Index r,
                         u64 seed) {
  if (d == 0) throw PreconditionError("random_model: d must be at least 1");
  if (r <= 0) throw PreconditionError("random_model: width must be positive");
  Rng rng(seed);
  RandomModel out;
  out.kind = kind;
  switch (kind) {
    case ModelKind::roabp: {
      auto& m = out.roabp.m;
      m.field = f;
      m.n = n;
      m.d = d;
      m.order.resize(n);
      std::iota(m.order.begin(), m.order.end(), 0);
      for (std::size_t i = 0; i < n; ++i) {
        MatrixLayer l;
        for (std::uint32_t k = 0; k < d; ++k) l.coeffs.push_back(random_matrix(f, r, r, rng));
        m.layers.push_back(std::move(l));
      }
      out.roabp.left = random_vector(f, r, rng);
      out.roabp.right = random_vector(f, r, rng);
      break;
    }
    case ModelKind::commutative: {
      FMatrix P, Pinv;
      while (true) {
        P = random_matrix(f, r, r, rng);
        if (!determinant(P).is_zero()) break;
      }
      Pinv = inverse_exact(P);
      auto& m = out.roabp.m;
      m.field = f;
      m.n = n;
      m.d = d;
      m.order.resize(n);
      std::iota(m.order.begin(), m.order.end(), 0);
      for (std::size_t i = 0; i < n; ++i) {
        MatrixLayer l;
        for (std::uint32_t k = 0; k < d; ++k) {
          FMatrix diag = zeros(f, r, r);
          for (Eigen::Index j = 0; j < r; ++j) diag(j, j) = rng.element(f);
          l.coeffs.push_back(P * diag * Pinv);
        }
        m.layers.push_back(std::move(l));
      }
      out.roabp.left = random_vector(f, r, rng);
      out.roabp.right = random_vector(f, r, rng);
      out.commutativity_witness = true;
      break;
    }
    case ModelKind::smabp: {
      auto& s = out.smabp;
      s.field = f;
      s.sets = d;
      s.set_size = n;
      s.r = r;
      auto perm = random_permutation(static_cast<std::size_t>(d) * n, rng);
      for (std::uint32_t i = 0; i < d; ++i) {
        s.partition.emplace_back(perm.begin() + static_cast<std::ptrdiff_t>(i * n),
                                 perm.begin() + static_cast<std::ptrdiff_t>((i + 1) * n));
        std::vector<FMatrix> layer;
        for (std::size_t j = 0; j < n; ++j) layer.push_back(random_matrix(f, r, r, rng));
        s.coeffs.push_back(std::move(layer));
      }
      s.left = random_vector(f, r, rng);
      s.right = random_vector(f, r, rng);
      break;
    }
    case ModelKind::diagonal: {
      auto& c = out.diagonal;
      c.field = f;
      c.n = n;
      for (Eigen::Index t = 0; t < r; ++t) {
        DiagonalTerm term;
        term.coeffs.push_back(rng.below(2) ? rng.element(f) : f.zero());
        for (std::size_t i = 0; i < n; ++i) term.coeffs.push_back(rng.element(f));
        term.power = 1 + static_cast<std::uint32_t>(rng.below(d));
        c.terms.push_back(std::move(term));
      }
      break;
    }
  }
  return out;
}

}  // namespace pitgen
