#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "cartan/json_io.hpp"
#include "cartan/presets.hpp"

using namespace cartan;
using json_io::json;

namespace {

json load_data(const std::string& name) {
  std::ifstream in(std::string(CARTAN_DATA_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return json_io::parse(ss.str(), name);
}

}  // namespace

TEST(JsonIo, ScalarText) {
  EXPECT_EQ(json_io::parse_scalar_text("-1/2"), Scalar::frac(-1, 2));
  EXPECT_EQ(json_io::parse_scalar_text("i"), Scalar::i());
  EXPECT_EQ(json_io::parse_scalar_text("-i"), -Scalar::i());
  EXPECT_EQ(json_io::parse_scalar_text("3i"), Scalar(3) * Scalar::i());
  EXPECT_EQ(json_io::parse_scalar_text("1/2-3/4i"), Scalar(Rational(1, 2), Rational(-3, 4)));
  EXPECT_EQ(json_io::parse_scalar_text("-2+i"), Scalar(Rational(-2), Rational(1)));
  EXPECT_EQ(json_io::scalar_from_json(json(5)), Scalar(5));
  EXPECT_EQ(json_io::scalar_from_json(json{{"re", "1/3"}, {"im", 2}}), Scalar(Rational(1, 3), Rational(2)));
  EXPECT_THROW(json_io::parse_scalar_text("abc"), ParseError);
  EXPECT_THROW(json_io::parse_scalar_text(""), ParseError);
  EXPECT_THROW(json_io::scalar_from_json(json(1.5)), ParseError);
}

TEST(JsonIo, ScalarRoundTripOnGrid) {
  for (int p = -3; p <= 3; ++p)
    for (int q = 1; q <= 3; ++q)
      for (int a = -2; a <= 2; ++a) {
        Scalar s(Rational(p, q), Rational(a, q + 1));
        EXPECT_EQ(json_io::scalar_from_json(json_io::to_json(s)), s) << s.to_string();
      }
}

TEST(JsonIo, BAlgebraRoundTrip) {
  BAlgebra B = BAlgebra::truncated_poly(2, std::nullopt, std::vector<Scalar>{1, 3, Scalar::frac(-1, 2)});
  EXPECT_EQ(json_io::balgebra_from_json(json_io::to_json(B)), B);
  EXPECT_EQ(json_io::balgebra_from_json(json("truncpoly3")), BAlgebra::truncated_poly(2));
  EXPECT_EQ(json_io::balgebra_from_json(json("C")), BAlgebra::complex());
  json bad = json_io::to_json(B);
  bad["psi"] = {"1", "1", "0"};
  EXPECT_THROW(json_io::balgebra_from_json(bad), ValidationError);
  EXPECT_THROW(json_io::balgebra_from_json(json("ring")), ParseError);
}

TEST(JsonIo, RepRoundTrip) {
  MatrixRep R = traceless(natural_rep(3));
  EXPECT_EQ(json_io::rep_from_json(json_io::to_json(R)), R);
  EXPECT_EQ(json_io::rep_from_json(json("natural"), 2), natural_rep(2));
  EXPECT_THROW(json_io::rep_from_json(json("natural")), ParseError);
  MatrixRep C = json_io::rep_from_json(load_data("corrupted_rep.json"));
  EXPECT_FALSE(validate_rep(C).commutators_ok());
}

TEST(JsonIo, ElementRoundTripIsCanonical) {
  auto B = std::make_shared<const BAlgebra>(BAlgebra::truncated_poly(2));
  LieContext ctx(2, B);
  LieElem x = make_D(ctx, CoefVec{Scalar::frac(1, 2), -1}, {1, -2}, BElem({1, 0, 2})) +
              make_fun(ctx, {0, 1}, B->basis(1));
  json j = json_io::to_json(x);
  EXPECT_EQ(j[0]["kind"], "fun");
  EXPECT_EQ(j[1]["i"], 1);
  EXPECT_EQ(json_io::element_from_json(j, 2, B), x);
  EXPECT_EQ(json_io::element_from_json(json_io::to_json_with_context(x)), x);
  json by_name = json::array({{{"kind", "fun"}, {"deg", {0, 1}}, {"b", "x"}}});
  EXPECT_EQ(json_io::element_from_json(by_name, 2, B), make_fun(ctx, {0, 1}, B->basis(1)));
}

TEST(JsonIo, ElementErrors) {
  EXPECT_THROW(json_io::element_from_json(json::array()), ParseError);
  json bad_i = json::array({{{"kind", "der"}, {"i", 3}, {"deg", {0, 1}}}});
  EXPECT_THROW(json_io::element_from_json(bad_i), ContextMismatch);
  json bad_kind = json::array({{{"kind", "vec"}, {"deg", {0, 1}}}});
  EXPECT_THROW(json_io::element_from_json(bad_kind), ParseError);
  EXPECT_THROW(json_io::element_from_json(load_data("d_e1_010.json"), 2), ContextMismatch);
}

TEST(JsonIo, ModVecRoundTrip) {
  ModVec v(2, 2);
  v.add({1, -1}, {Scalar::frac(1, 2), Scalar::i()});
  v.add({-2, 0}, {0, 3});
  json j = json_io::to_json(v);
  EXPECT_EQ(j["support"][0]["deg"], json({-2, 0}));
  EXPECT_EQ(json_io::modvec_from_json(j), v);
  EXPECT_EQ(json_io::modvec_from_json(load_data("vec_e1_origin.json")).support().size(), 1u);
}

TEST(JsonIo, ModuleRoundTrip) {
  for (const char* f : {"module_s_n2.json", "module_h_n2.json", "module_map_s.json"}) {
    AnyModule M = json_io::module_from_json(load_data(f));
    json j = json_io::to_json(M);
    EXPECT_EQ(json_io::to_json(json_io::module_from_json(j)), j) << f;
  }
  json h = load_data("module_map_s.json");
  h["kind"] = "map-H";
  h["rep"] = "natural";
  AnyModule M = json_io::module_from_json(h);
  EXPECT_TRUE(std::get<MapModule>(M).is_hamiltonian());
  h["kind"] = "X";
  EXPECT_THROW(json_io::module_from_json(h), ParseError);
}

TEST(JsonIo, ConfigRoundTrip) {
  for (const auto& p : presets()) {
    json j = json_io::to_json(p.config);
    EXPECT_EQ(json_io::to_json(json_io::config_from_json(j)), j) << p.name;
  }
  SuiteConfig c = json_io::config_from_json(json{{"n", 3}, {"rep", "trivial"}});
  EXPECT_EQ(c.rep_s(), trivial_rep(3));
  EXPECT_THROW(json_io::config_from_json(json{{"alpha", {"1"}}}), LengthMismatch);
}

TEST(JsonIo, VerdictTimingIsOptIn) {
  Verdict v;
  v.suite = "jacobi";
  v.cases = 3;
  v.elapsed_ms = 12.5;
  EXPECT_FALSE(json_io::to_json(v).contains("elapsedMs"));
  EXPECT_TRUE(json_io::to_json(v, true).contains("elapsedMs"));
  EXPECT_EQ(json_io::to_json(v)["passed"], true);
}

TEST(JsonIo, ParseErrorsAreTyped) { EXPECT_THROW(json_io::parse("{", "x"), ParseError); }
