#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "pitgen/io.hpp"

using namespace pitgen;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr u64 kLargePrime = 2147483647;  // 2^31 - 1, only used to size generators before p is chosen
constexpr u64 kDefaultListing = 1000000;

struct GenSpec {
  std::string model;
  std::size_t n = 2;
  std::uint32_t d = 2;
  u64 r = 1;
  std::optional<std::size_t> ell;
  std::string reducer = "grid";
  std::optional<u64> seed;
};

VariableReducer make_reducer(const GenSpec& s) {
  if (s.reducer == "grid") return grid_reducer();
  if (!s.seed) throw UsageError("--reducer random needs --seed");
  return random_line_reducer(*s.seed);
}

// The generator for a model plus the degree bounds of the class it targets
// and the field size the construction itself needs.
struct Built {
  GeneratorMap g;
  DegreeBounds bounds;
  u64 construction_bound = 2;
};

Built build(const GenSpec& s, const Field& F) {
  if (s.n == 0) throw PreconditionError("--n must be positive");
  if (s.d == 0 || s.r == 0) throw PreconditionError("--d and --r must be positive");
  const u64 n = s.n;
  if (s.model == "unknown-order")
    return {unknown_order_generator(F, s.n, s.d, s.r), {s.d - 1, n * (s.d - 1)},
            unknown_order_params(s.n, s.d, s.r).field_bound};
  if (s.model == "commutative")
    return {commutative_generator(F, s.n, s.d, s.r), {s.d - 1, n * (s.d - 1)}, n * s.d + 1};
  // Diagonal circuits: r terms of power <= d have dim(partials) <= r(d+1).
  const bool diag = s.model == "diagonal";
  const std::size_t ell = diag ? static_cast<std::size_t>(floor_lg(s.r * (s.d + 1)))
                               : s.ell.value_or(static_cast<std::size_t>(floor_lg(s.r)));
  const std::uint32_t dd = diag ? s.d + 1 : s.d;
  GeneratorMap g = hplusfs_generator(F, s.n, dd, ell, make_reducer(s));
  const u64 fam = pairwise_hash_family(s.n, ell).members.size();
  DegreeBounds b = diag ? DegreeBounds{s.d, s.d} : DegreeBounds{dd - 1, n * (dd - 1)};
  return {std::move(g), b, std::max<u64>(fam, n) + 1};
}

std::pair<u64, u64> parse_range(const std::string& s) {
  auto pos = s.find("..");
  if (pos == std::string::npos) throw UsageError("--index-range must look like A..B");
  try {
    std::size_t used = 0;
    const std::string a = s.substr(0, pos), b = s.substr(pos + 2);
    u64 lo = std::stoull(a, &used);
    if (used != a.size()) throw std::invalid_argument(a);
    u64 hi = std::stoull(b, &used);
    if (used != b.size()) throw std::invalid_argument(b);
    if (hi < lo) throw UsageError("--index-range: B below A");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw UsageError("--index-range must look like A..B with decimal integers");
  }
}

int cmd_gen(const GenSpec& spec, const std::string& p_arg, const std::string& out, const std::string& range) {
  std::optional<u64> bound;
  u64 p = 0;
  if (p_arg == "auto") {
    Built probe = build(spec, Field(kLargePrime));
    u64 b = probe.construction_bound;
    for (auto c : composed_degrees(probe.g, probe.bounds)) b = std::max(b, c + 1);
    bound = b;
    p = smallest_prime_at_least(b);
    std::cerr << "p = " << p << " (smallest prime >= bound " << b << ")\n";
  } else {
    try {
      std::size_t used = 0;
      p = std::stoull(p_arg, &used);
      if (used != p_arg.size()) throw std::invalid_argument(p_arg);
    } catch (const std::logic_error&) {
      throw UsageError("--p must be a prime or 'auto'");
    }
  }
  const Field F = make_field(p);
  Built b = build(spec, F);
  PointSet H = gen_to_hitting_set(b.g, b.bounds);
  const auto size = H.size_u64();
  u64 lo = 0, hi = 0;
  if (range.empty()) {
    if (!size || *size > kDefaultListing)
      throw UsageError("the set has " + H.size_string() + " points; pass --index-range");
    hi = *size - 1;
  } else {
    std::tie(lo, hi) = parse_range(range);
    if (size && hi >= *size)
      throw PreconditionError("--index-range reaches past the last index " + std::to_string(*size - 1));
  }

  std::ofstream file;
  if (!out.empty()) {
    file.open(out, std::ios::binary);
    if (!file) throw ValidationError(out + ": cannot open for writing");
  }
  std::ostream& os = out.empty() ? std::cout : file;
  write_csv_header(os, H.arity());
  for (u64 i = lo;; ++i) {
    write_csv_row(os, H.point(i));
    if (i == hi) break;
  }

  json blocks = json::array();
  for (const auto& blk : b.g.blocks) blocks.push_back({{"name", blk.name}, {"size", blk.size}});
  json side = {{"model", spec.model},
               {"n", spec.n},
               {"d", spec.d},
               {"r", spec.r},
               {"p", p},
               {"size", H.size_string()},
               {"seed_variables", b.g.seed_count()},
               {"seed_blocks", blocks},
               {"values_per_seed", H.counts()},
               {"degree_bounds", {{"individual", b.bounds.individual}, {"total", b.bounds.total}}},
               {"index_range", {lo, hi}},
               {"explicitness", b.g.explicitness}};
  if (bound) side["p_bound"] = *bound;
  if (out.empty()) {
    std::cerr << side.dump(2) << '\n';
  } else {
    std::ofstream js(out + ".json", std::ios::binary);
    js << side.dump(2) << '\n';
  }
  return 0;
}

int cmd_test(const std::string& path, const std::string& mode, std::optional<u64> seed) {
  if (mode == "random" && !seed) throw UsageError("--mode random needs --seed");
  Circuit c = load_circuit(path);
  const Field& F = c.field;
  Oracle oracle = [&c](const std::vector<Felt>& x) { return c.eval(x); };
  const DegreeBounds b = c.degree_bounds();
  PitVerdict v;
  if (mode == "grid") {
    v = pit_blackbox(oracle, grid_oracle_set(F, c.n, static_cast<std::uint32_t>(b.individual)),
                     {~u64{0}, 0, 0}, PitMode::grid);
  } else if (mode == "random") {
    v = pit_random(oracle, F, c.n, 64, *seed);
  } else {
    GeneratorMap g = identity_generator(F, c.n);
    switch (c.kind) {
      case CircuitKind::roabp:
      case CircuitKind::matrix_roabp:
        g = unknown_order_generator(F, c.n, c.d, c.r);
        break;
      case CircuitKind::smabp:
        g = unknown_order_generator(F, c.n, 2, 2 * c.r);
        break;
      case CircuitKind::diagonal: {
        u64 dim = 1;
        for (const auto& t : c.diagonal.terms) dim += t.power;
        g = hplusfs_generator(F, c.n, static_cast<std::uint32_t>(b.individual) + 1,
                              static_cast<std::size_t>(floor_lg(dim)), grid_reducer());
        break;
      }
    }
    v = pit_blackbox(oracle, gen_to_hitting_set(g, b));
  }
  std::cout << to_json(v).dump() << '\n';
  return 0;
}

int cmd_verify(const std::string& suite, SuiteParams params, bool r_given) {
  if (suite == "partial-id" && !r_given) params.max_r = 8;
  SuiteReport rep = verify_theorem(suite, params);
  std::cout << to_json(rep).dump(2) << '\n';
  return rep.pass() ? 0 : 3;
}

int cmd_expand(const std::string& path) {
  Circuit c = load_circuit(path);
  auto polys = c.expand();
  if (c.kind == CircuitKind::matrix_roabp) {
    json entries = json::array();
    for (const auto& f : polys) entries.push_back(to_json(f));
    std::cout << json{{"entries", entries}}.dump() << '\n';
  } else {
    std::cout << to_json(polys.front()).dump() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Explicit hitting sets for ROABPs, commutative ROABPs and diagonal circuits"};
  app.require_subcommand(1);

  GenSpec spec;
  std::string p_arg = "auto", out, range;
  std::optional<u64> gen_seed;
  auto* gen = app.add_subcommand("gen", "stream a hitting set as CSV");
  gen->add_option("--model", spec.model)
      ->required()
      ->check(CLI::IsMember({"unknown-order", "commutative", "diagonal", "hplusfs"}));
  gen->add_option("--n", spec.n, "number of variables")->required();
  gen->add_option("--d", spec.d, "individual degree bound (< d; diagonal: power <= d)")->required();
  gen->add_option("--r", spec.r, "width (diagonal: number of terms)")->required();
  gen->add_option("--p", p_arg, "prime modulus or 'auto'");
  gen->add_option("--out", out, "CSV file; the sidecar goes to FILE.json");
  gen->add_option("--index-range", range, "inclusive range A..B of point indices");
  gen->add_option("--ell", spec.ell, "hplusfs: support bound of the planted monomial");
  gen->add_option("--reducer", spec.reducer, "hplusfs: variable reducer")->check(CLI::IsMember({"grid", "random"}));
  gen->add_option("--seed", gen_seed, "seed for the random reducer");

  std::string circuit, mode = "hitting";
  std::optional<u64> test_seed;
  auto* test = app.add_subcommand("test", "black-box identity test of a circuit file");
  test->add_option("--circuit", circuit)->required();
  test->add_option("--mode", mode)->check(CLI::IsMember({"hitting", "grid", "random"}));
  test->add_option("--seed", test_seed);

  std::string suite;
  SuiteParams params;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--suite", suite)->required()->check(CLI::IsMember(suite_names()));
  verify->add_option("--trials", params.trials);
  verify->add_option("--seed", params.seed);
  verify->add_option("--max-n", params.max_n);
  auto* max_r = verify->add_option("--max-r", params.max_r);
  verify->add_option("--max-d", params.max_d);
  verify->add_flag("--allow-large", params.allow_large, "lift the desk-scale caps");
  verify->add_flag("--control", params.control, "run the deliberately broken variant");

  std::string expand_path;
  auto* expand_cmd = app.add_subcommand("expand", "expand a circuit file into a sparse polynomial");
  expand_cmd->add_option("--circuit", expand_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    spec.seed = gen_seed;
    if (*gen) return cmd_gen(spec, p_arg, out, range);
    if (*test) return cmd_test(circuit, mode, test_seed);
    if (*verify) return cmd_verify(suite, params, max_r->count() > 0);
    if (*expand_cmd) return cmd_expand(expand_path);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
