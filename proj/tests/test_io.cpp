#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pitgen/io.hpp"

using namespace pitgen;

namespace {

const char* kX1X2 = R"({"kind":"roabp","p":101,"n":2,"d":2,"r":1,"order":[0,1],
  "layers":[[[[0]],[[1]]],[[[0]],[[1]]]],"left":[1],"right":[1]})";

std::string error_of(const std::string& text) {
  try {
    circuit_from_json(json::parse(text));
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(CircuitJson, Roabp) {
  Circuit c = circuit_from_json(json::parse(kX1X2));
  EXPECT_EQ(c.kind, CircuitKind::roabp);
  EXPECT_EQ(c.n, 2u);
  const Field& F = c.field;
  EXPECT_EQ(c.eval({F(3), F(4)}), F(12));
  auto e = c.expand();
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e[0], SparsePoly::monomial(F, {1, 1}, F(1)));
  EXPECT_EQ(c.degree_bounds().individual, 1u);
  EXPECT_EQ(c.degree_bounds().total, 2u);
}

TEST(CircuitJson, NegativeEntriesAreReduced) {
  auto c = circuit_from_json(json::parse(
      R"({"kind":"diagonal","p":7,"n":1,"d":2,"terms":[{"coeffs":[-1,1],"power":2}]})"));
  const Field& F = c.field;
  SparsePoly want(F, 1);
  want.add_term({2}, F(1));
  want.add_term({1}, F(5));
  want.add_term({0}, F(1));
  EXPECT_EQ(c.expand()[0], want);
  EXPECT_EQ(c.r, 1u);
}

TEST(CircuitJson, MatrixRoabpAndSmabp) {
  auto m = circuit_from_json(json::parse(
      R"({"kind":"matrix-roabp","p":101,"n":1,"d":2,"r":2,"order":[0],"layers":[[[[1,0],[0,2]],[[0,1],[0,0]]]]})"));
  auto e = m.expand();
  ASSERT_EQ(e.size(), 4u);
  EXPECT_EQ(e[1], SparsePoly::variable(m.field, 1, 0));
  EXPECT_EQ(m.eval({m.field(5)}), m.field(1));

  auto s = circuit_from_json(json::parse(
      R"({"kind":"smabp","p":101,"n":4,"d":2,"r":1,"partition":[[0,2],[1,3]],
          "layers":[[[[2]],[[3]]],[[[5]],[[7]]]],"left":[1],"right":[1]})"));
  const Field& F = s.field;
  auto x = [&](std::size_t i) { return SparsePoly::variable(F, 4, i); };
  EXPECT_EQ(s.expand()[0], (x(0) * F(2) + x(2) * F(3)) * (x(1) * F(5) + x(3) * F(7)));
  EXPECT_EQ(s.degree_bounds().individual, 1u);
}

TEST(CircuitJson, Diagnostics) {
  EXPECT_EQ(error_of(R"([1,2])"), "document: expected an object");
  EXPECT_EQ(error_of(R"({"p":7})"), "kind: missing");
  EXPECT_EQ(error_of(R"({"kind":"tree","p":7})"), "kind: unknown circuit kind 'tree'");
  EXPECT_NE(error_of(R"({"kind":"diagonal","p":6,"n":1,"d":1,"terms":[]})").find("p: "), std::string::npos);
  EXPECT_EQ(error_of(R"({"kind":"roabp","p":101,"n":2,"d":2,"r":1,"order":[0,1],
    "layers":[[[[0]],[[1]]],[[[0]],[["a"]]]],"left":[1],"right":[1]})"),
            "layers[1][1][0][0]: expected an integer");
  EXPECT_EQ(error_of(R"({"kind":"roabp","p":101,"n":2,"d":2,"r":1,"order":[0,0],
    "layers":[[[[0]]],[[[0]]]],"left":[1],"right":[1]})"),
            "order[1]: not a permutation of 0..n-1");
  EXPECT_EQ(error_of(R"({"kind":"roabp","p":101,"n":1,"d":1,"r":1,"order":[0],
    "layers":[[[[0]],[[1]]]],"left":[1],"right":[1]})"),
            "layers[0]: expected 1..1 coefficient matrices");
  EXPECT_EQ(error_of(R"({"kind":"diagonal","p":7,"n":2,"d":2,"terms":[{"coeffs":[1,1],"power":2}]})"),
            "terms[0].coeffs: expected 3 entries, got 2");
  EXPECT_EQ(error_of(R"({"kind":"diagonal","p":7,"n":1,"d":2,"terms":[{"coeffs":[1,1],"power":3}]})"),
            "terms[0].power: exceeds d");
  EXPECT_EQ(error_of(R"({"kind":"smabp","p":101,"n":3,"d":2,"r":1,"partition":[[0,1],[1,2]],
    "layers":[],"left":[1],"right":[1]})"),
            "partition[1][0]: variable used twice");
}

TEST(CircuitJson, RoundTrip) {
  Field F(10007);
  for (u64 seed = 0; seed < 5; ++seed) {
    Circuit c;
    c.kind = CircuitKind::roabp;
    c.field = F;
    c.n = 3;
    c.d = 2;
    c.r = 2;
    c.roabp = random_model(ModelKind::roabp, F, 3, 2, 2, seed).roabp;
    Circuit back = circuit_from_json(to_json(c));
    EXPECT_EQ(back.expand(), c.expand());
    EXPECT_EQ(to_json(back), to_json(c));
  }
}

TEST(CircuitJson, LoadFile) {
  const auto dir = std::filesystem::temp_directory_path() / "pitgen_io_test";
  std::filesystem::create_directories(dir);
  const auto good = (dir / "c.json").string(), bad = (dir / "bad.json").string();
  std::ofstream(good) << kX1X2;
  std::ofstream(bad) << "{\"kind\": ";
  EXPECT_EQ(load_circuit(good).n, 2u);
  EXPECT_THROW(load_circuit(bad), ValidationError);
  EXPECT_THROW(load_circuit((dir / "missing.json").string()), ValidationError);
  std::filesystem::remove_all(dir);
}

TEST(SparsePolyJson, Format) {
  Field F(7);
  auto f = SparsePoly::monomial(F, {1, 1}, F(1));
  json j = to_json(f);
  EXPECT_EQ(j.dump(), R"({"arity":2,"modulus":7,"terms":[{"coeff":1,"exponents":[1,1]}]})");
  EXPECT_EQ(sparse_poly_from_json(j), f);
  EXPECT_TRUE(to_json(SparsePoly(F, 2))["terms"].empty());
  EXPECT_THROW(sparse_poly_from_json(json::parse(R"({"modulus":8,"arity":1,"terms":[]})")), ValidationError);
  EXPECT_THROW(sparse_poly_from_json(json::parse(R"({"modulus":7,"arity":1,"terms":[{"exponents":[1,2],"coeff":1}]})")),
               ValidationError);
}

TEST(GeneratorJson, Layout) {
  Field F(101);
  json j = to_json(sv_generator(F, 2, 1));
  EXPECT_EQ(j["seed_count"], 2);
  EXPECT_EQ(j["out_arity"], 2);
  EXPECT_EQ(j["seed_blocks"][0]["name"], "y");
  EXPECT_EQ(j["degree_profile"][0], json({1, 2}));
  EXPECT_EQ(j["components"][0][0]["factors"][1]["kind"], "indicator");
  ASSERT_TRUE(j["expanded"].is_array());
  EXPECT_EQ(sparse_poly_from_json(j["expanded"][0]), expand(sv_generator(F, 2, 1)).components[0]);
}

TEST(ReportJson, Shapes) {
  Field F(101);
  PitVerdict v;
  v.nonzero = true;
  v.witness = std::vector<Felt>{F(1), F(2)};
  v.points_tried = 3;
  json j = to_json(v);
  EXPECT_EQ(j["verdict"], "nonzero");
  EXPECT_EQ(j["witness"], json({1, 2}));
  EXPECT_EQ(j["mode"], to_string(PitMode::hitting_set));
  EXPECT_EQ(to_json(PitVerdict{})["verdict"], "zero");
  EXPECT_TRUE(to_json(PitVerdict{})["witness"].is_null());

  SuiteReport r;
  r.suite = "x";
  r.cases = 2;
  r.failures.push_back({1, 99, "bad"});
  json rj = to_json(r);
  EXPECT_EQ(rj["pass"], false);
  EXPECT_EQ(rj["failures"][0]["seed"], 99);

  RankReport rr{2, 2, 1, {3}, std::nullopt};
  EXPECT_EQ(to_json(rr).dump(), R"({"cube":[3],"rank_EM":2,"rank_M":2,"trials":1})");
}

TEST(Csv, Format) {
  Field F(101);
  std::ostringstream os;
  write_csv_header(os, 3);
  write_csv_row(os, {F(0), F(100), F(-1)});
  EXPECT_EQ(os.str(), "x1,x2,x3\n0,100,100\n");
}
