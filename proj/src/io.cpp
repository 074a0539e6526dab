#include "pitgen/io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

namespace pitgen {

namespace {

std::string field_path(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}
std::string field_path(const std::string& parent, std::size_t i) { return parent + "[" + std::to_string(i) + "]"; }

const json& member(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw ValidationError(path.empty() ? "document: expected an object" : path + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError(field_path(path, key) + ": missing");
  return *it;
}

i64 get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ValidationError(path + ": expected an integer");
  if (j.is_number_unsigned()) {
    const u64 v = j.get<u64>();
    if (v > static_cast<u64>(INT64_MAX)) throw ValidationError(path + ": integer out of range");
    return static_cast<i64>(v);
  }
  return j.get<i64>();
}

u64 get_count(const json& j, const std::string& path) {
  const i64 v = get_int(j, path);
  if (v < 0) throw ValidationError(path + ": expected a non-negative integer");
  return static_cast<u64>(v);
}

const json& get_array(const json& j, const std::string& path, std::size_t expect = SIZE_MAX) {
  if (!j.is_array()) throw ValidationError(path + ": expected an array");
  if (expect != SIZE_MAX && j.size() != expect)
    throw ValidationError(path + ": expected " + std::to_string(expect) + " entries, got " + std::to_string(j.size()));
  return j;
}

Felt get_felt(const json& j, const Field& f, const std::string& path) { return f(get_int(j, path)); }

FMatrix get_matrix(const json& j, const Field& f, std::size_t rows, std::size_t cols, const std::string& path) {
  get_array(j, path, rows);
  FMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t a = 0; a < rows; ++a) {
    const std::string pa = field_path(path, a);
    get_array(j[a], pa, cols);
    for (std::size_t b = 0; b < cols; ++b)
      m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = get_felt(j[a][b], f, field_path(pa, b));
  }
  return m;
}

FVector get_vector(const json& j, const Field& f, std::size_t n, const std::string& path) {
  get_array(j, path, n);
  FVector v(static_cast<Eigen::Index>(n));
  for (std::size_t a = 0; a < n; ++a) v(static_cast<Eigen::Index>(a)) = get_felt(j[a], f, field_path(path, a));
  return v;
}

json felts(const std::vector<Felt>& x) {
  json a = json::array();
  for (const auto& v : x) a.push_back(v.value());
  return a;
}

json matrix_json(const FMatrix& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j).value());
    a.push_back(std::move(row));
  }
  return a;
}

Field get_field(const json& j, const std::string& path) {
  try {
    return make_field(get_count(j, path));
  } catch (const PrimalityError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

}  // namespace

json to_json(const SparsePoly& f) {
  json terms = json::array();
  for (const auto& [a, c] : f.terms()) terms.push_back({{"exponents", a}, {"coeff", c.value()}});
  return {{"modulus", f.field().p()}, {"arity", f.arity()}, {"terms", terms}};
}

SparsePoly sparse_poly_from_json(const json& j) {
  const Field F = get_field(member(j, "modulus", ""), "modulus");
  const std::size_t n = get_count(member(j, "arity", ""), "arity");
  SparsePoly f(F, n);
  const json& terms = get_array(member(j, "terms", ""), "terms");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string p = field_path("terms", i);
    const json& e = get_array(member(terms[i], "exponents", p), field_path(p, "exponents"), n);
    Exponents a(n);
    for (std::size_t k = 0; k < n; ++k)
      a[k] = static_cast<std::uint32_t>(get_count(e[k], field_path(field_path(p, "exponents"), k)));
    f.add_term(a, get_felt(member(terms[i], "coeff", p), F, field_path(p, "coeff")));
  }
  return f;
}

const char* to_string(CircuitKind k) {
  switch (k) {
    case CircuitKind::roabp:
      return "roabp";
    case CircuitKind::matrix_roabp:
      return "matrix-roabp";
    case CircuitKind::smabp:
      return "smabp";
    case CircuitKind::diagonal:
      return "diagonal";
  }
  return "?";
}

std::size_t Circuit::arity() const { return n; }

Felt Circuit::eval(const std::vector<Felt>& x) const {
  switch (kind) {
    case CircuitKind::roabp:
      return roabp_eval(roabp, x);
    case CircuitKind::matrix_roabp: {
      FMatrix m = roabp_eval_matrix(roabp.m, x);
      for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
          if (!m(i, j).is_zero()) return m(i, j);
      return field.zero();
    }
    case CircuitKind::smabp:
      return smabp_eval(smabp, x);
    case CircuitKind::diagonal:
      return diagonal_eval(diagonal, x);
  }
  return field.zero();
}

std::vector<SparsePoly> Circuit::expand() const {
  switch (kind) {
    case CircuitKind::roabp:
      return {roabp_expand(roabp)};
    case CircuitKind::matrix_roabp:
      return roabp_expand_matrix(roabp.m);
    case CircuitKind::smabp:
      return {smabp_expand(smabp)};
    case CircuitKind::diagonal:
      return {diagonal_to_poly(diagonal)};
  }
  return {};
}

DegreeBounds Circuit::degree_bounds() const {
  switch (kind) {
    case CircuitKind::roabp:
    case CircuitKind::matrix_roabp:
      return {d - 1, static_cast<u64>(n) * (d - 1)};
    case CircuitKind::smabp:
      return {1, smabp.sets};
    case CircuitKind::diagonal: {
      u64 D = 0;
      for (const auto& t : diagonal.terms) D = std::max<u64>(D, t.power);
      return {D, D};
    }
  }
  return {};
}

Circuit circuit_from_json(const json& j) {
  Circuit c;
  const json& kind = member(j, "kind", "");
  if (!kind.is_string()) throw ValidationError("kind: expected a string");
  const std::string k = kind.get<std::string>();
  if (k == "roabp")
    c.kind = CircuitKind::roabp;
  else if (k == "matrix-roabp")
    c.kind = CircuitKind::matrix_roabp;
  else if (k == "smabp")
    c.kind = CircuitKind::smabp;
  else if (k == "diagonal")
    c.kind = CircuitKind::diagonal;
  else
    throw ValidationError("kind: unknown circuit kind '" + k + "'");
  c.field = get_field(member(j, "p", ""), "p");
  const Field& F = c.field;
  c.n = get_count(member(j, "n", ""), "n");
  c.d = static_cast<std::uint32_t>(get_count(member(j, "d", ""), "d"));
  if (c.kind != CircuitKind::diagonal) {
    c.r = get_count(member(j, "r", ""), "r");
    if (c.r == 0) throw ValidationError("r: width must be positive");
  }

  if (c.kind == CircuitKind::roabp || c.kind == CircuitKind::matrix_roabp) {
    if (c.d == 0) throw ValidationError("d: must be at least 1");
    auto& m = c.roabp.m;
    m.field = F;
    m.n = c.n;
    m.d = c.d;
    const json& order = get_array(member(j, "order", ""), "order", c.n);
    std::vector<bool> seen(c.n, false);
    for (std::size_t i = 0; i < c.n; ++i) {
      const u64 v = get_count(order[i], field_path("order", i));
      if (v >= c.n || seen[v]) throw ValidationError(field_path("order", i) + ": not a permutation of 0..n-1");
      seen[v] = true;
      m.order.push_back(v);
    }
    const json& layers = get_array(member(j, "layers", ""), "layers", c.n);
    std::size_t rows = c.kind == CircuitKind::roabp ? c.r : 0;
    for (std::size_t i = 0; i < c.n; ++i) {
      const std::string pl = field_path("layers", i);
      const json& L = get_array(layers[i], pl);
      if (L.empty() || L.size() > c.d)
        throw ValidationError(pl + ": expected 1.." + std::to_string(c.d) + " coefficient matrices");
      MatrixLayer layer;
      // matrix-roabp layers may be rectangular; shapes come from the first coefficient.
      const std::size_t lr = c.kind == CircuitKind::roabp ? c.r : get_array(L[0], field_path(pl, 0)).size();
      const std::size_t lc = c.kind == CircuitKind::roabp ? c.r
                             : (lr && L[0][0].is_array()) ? L[0][0].size()
                                                          : 0;
      if (c.kind == CircuitKind::matrix_roabp) {
        if (i > 0 && lr != rows) throw ValidationError(pl + ": layer shapes do not chain");
        rows = lc;
      }
      for (std::size_t k = 0; k < L.size(); ++k) layer.coeffs.push_back(get_matrix(L[k], F, lr, lc, field_path(pl, k)));
      m.layers.push_back(std::move(layer));
    }
    if (c.kind == CircuitKind::roabp) {
      c.roabp.left = get_vector(member(j, "left", ""), F, c.r, "left");
      c.roabp.right = get_vector(member(j, "right", ""), F, c.r, "right");
    }
    if (c.n == 0) throw ValidationError("n: a ROABP needs at least one layer");
  } else if (c.kind == CircuitKind::smabp) {
    auto& s = c.smabp;
    s.field = F;
    s.r = static_cast<Eigen::Index>(c.r);
    const json& part = get_array(member(j, "partition", ""), "partition");
    s.sets = part.size();
    if (s.sets == 0) throw ValidationError("partition: no variable sets");
    s.set_size = get_array(part[0], "partition[0]").size();
    std::vector<bool> seen;
    for (std::size_t i = 0; i < s.sets; ++i) {
      const std::string pp = field_path("partition", i);
      const json& P = get_array(part[i], pp, s.set_size);
      std::vector<std::size_t> set;
      for (std::size_t k = 0; k < P.size(); ++k) {
        const u64 v = get_count(P[k], field_path(pp, k));
        if (v >= c.n) throw ValidationError(field_path(pp, k) + ": variable index out of range");
        if (seen.size() < c.n) seen.assign(c.n, false);
        if (seen[v]) throw ValidationError(field_path(pp, k) + ": variable used twice");
        seen[v] = true;
        set.push_back(v);
      }
      s.partition.push_back(std::move(set));
    }
    if (s.sets * s.set_size != c.n) throw ValidationError("partition: must cover all n variables");
    const json& layers = get_array(member(j, "layers", ""), "layers", s.sets);
    for (std::size_t i = 0; i < s.sets; ++i) {
      const std::string pl = field_path("layers", i);
      get_array(layers[i], pl, s.set_size);
      std::vector<FMatrix> layer;
      for (std::size_t k = 0; k < s.set_size; ++k) layer.push_back(get_matrix(layers[i][k], F, c.r, c.r, field_path(pl, k)));
      s.coeffs.push_back(std::move(layer));
    }
    s.left = get_vector(member(j, "left", ""), F, c.r, "left");
    s.right = get_vector(member(j, "right", ""), F, c.r, "right");
  } else {
    auto& dc = c.diagonal;
    dc.field = F;
    dc.n = c.n;
    const json& terms = get_array(member(j, "terms", ""), "terms");
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const std::string pt = field_path("terms", i);
      DiagonalTerm t;
      const json& co = get_array(member(terms[i], "coeffs", pt), field_path(pt, "coeffs"), c.n + 1);
      for (std::size_t k = 0; k <= c.n; ++k) t.coeffs.push_back(get_felt(co[k], F, field_path(field_path(pt, "coeffs"), k)));
      t.power = static_cast<std::uint32_t>(get_count(member(terms[i], "power", pt), field_path(pt, "power")));
      if (t.power > c.d) throw ValidationError(field_path(pt, "power") + ": exceeds d");
      dc.terms.push_back(std::move(t));
    }
    c.r = dc.terms.size();
  }
  return c;
}

Circuit load_circuit(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path + ": cannot open");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
  return circuit_from_json(j);
}

json to_json(const Circuit& c) {
  json j = {{"kind", to_string(c.kind)}, {"p", c.field.p()}, {"n", c.n}, {"d", c.d}};
  if (c.kind == CircuitKind::roabp || c.kind == CircuitKind::matrix_roabp) {
    j["r"] = c.r;
    j["order"] = c.roabp.m.order;
    json layers = json::array();
    for (const auto& l : c.roabp.m.layers) {
      json L = json::array();
      for (const auto& m : l.coeffs) L.push_back(matrix_json(m));
      layers.push_back(std::move(L));
    }
    j["layers"] = std::move(layers);
    if (c.kind == CircuitKind::roabp) {
      j["left"] = matrix_json(c.roabp.left.transpose())[0];
      j["right"] = matrix_json(c.roabp.right.transpose())[0];
    }
  } else if (c.kind == CircuitKind::smabp) {
    j["r"] = c.r;
    j["partition"] = c.smabp.partition;
    json layers = json::array();
    for (const auto& set : c.smabp.coeffs) {
      json L = json::array();
      for (const auto& m : set) L.push_back(matrix_json(m));
      layers.push_back(std::move(L));
    }
    j["layers"] = std::move(layers);
    j["left"] = matrix_json(c.smabp.left.transpose())[0];
    j["right"] = matrix_json(c.smabp.right.transpose())[0];
  } else {
    json terms = json::array();
    for (const auto& t : c.diagonal.terms) terms.push_back({{"coeffs", felts(t.coeffs)}, {"power", t.power}});
    j["terms"] = std::move(terms);
  }
  return j;
}

json to_json(const GeneratorMap& g) {
  json blocks = json::array();
  for (const auto& b : g.blocks)
    blocks.push_back({{"name", b.name}, {"role", std::string(1, b.role)}, {"offset", b.offset}, {"size", b.size}});
  json comps = json::array();
  for (const auto& comp : g.components) {
    json terms = json::array();
    for (const auto& t : comp) {
      json fs = json::array();
      for (const auto& f : t.factors) {
        switch (f.kind) {
          case Factor::Kind::power:
            fs.push_back({{"kind", "power"}, {"var", f.var}, {"power", f.power}});
            break;
          case Factor::Kind::indicator:
            fs.push_back({{"kind", "indicator"},
                          {"var", f.var},
                          {"power", f.power},
                          {"nodes", g.nodesets[f.nodes]->size()},
                          {"index", f.index}});
            break;
          case Factor::Kind::select:
            fs.push_back({{"kind", "select"},
                          {"var", f.var},
                          {"sel", f.sel},
                          {"nodes", g.nodesets[f.nodes]->size()},
                          {"table", *f.table}});
            break;
        }
      }
      terms.push_back({{"coeff", t.coef.value()}, {"factors", std::move(fs)}});
    }
    comps.push_back(std::move(terms));
  }
  json j = {{"modulus", g.field.p()},   {"seed_count", g.seed_count()}, {"out_arity", g.out_arity()},
            {"seed_blocks", blocks},     {"components", comps},         {"degree_profile", degree_profile(g)},
            {"explicitness", g.explicitness}};
  if (g.inner) {
    json in = json::array();
    for (const auto& c : g.inner->components) in.push_back(to_json(c));
    j["inner"] = std::move(in);
  }
  try {
    json ex = json::array();
    for (const auto& c : expand(g).components) ex.push_back(to_json(c));
    j["expanded"] = std::move(ex);
  } catch (const BudgetExceeded&) {
    j["expanded"] = nullptr;
  }
  return j;
}

json to_json(const PitVerdict& v) {
  json j = {{"verdict", v.nonzero ? "nonzero" : "zero"},
            {"points_tried", v.points_tried},
            {"exhaustive", v.exhaustive},
            {"mode", to_string(v.mode)}};
  j["witness"] = v.witness ? felts(*v.witness) : json(nullptr);
  if (v.witness_digits) j["witness_digits"] = *v.witness_digits;
  return j;
}

json to_json(const SuiteReport& r) {
  json fails = json::array();
  for (const auto& f : r.failures) fails.push_back({{"case", f.case_index}, {"seed", f.seed}, {"detail", f.detail}});
  return {{"suite", r.suite}, {"cases", r.cases},       {"skipped", r.skipped},
          {"pass", r.pass()}, {"failures", fails},      {"params", r.params}};
}

json to_json(const RankReport& r) {
  return {{"rank_M", r.rank_M}, {"rank_EM", r.rank_EM}, {"trials", r.trials}, {"cube", r.cube}};
}

void write_csv_header(std::ostream& os, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) os << (i ? "," : "") << 'x' << (i + 1);
  os << '\n';
}

void write_csv_row(std::ostream& os, const std::vector<Felt>& x) {
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i].value();
  os << '\n';
}

}  // namespace pitgen
