#include <doctest.h>

#include <cmath>

#include "sweetspot/error.hpp"
#include "sweetspot/formation_map.hpp"

using namespace sweetspot;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return Errc::Io;
}

// Shepard weights written out term by term.
double brute_idw(const std::vector<std::pair<Point, double>>& donors, Point at, double power) {
  double num = 0.0, den = 0.0;
  for (const auto& [p, v] : donors) {
    const double d = std::sqrt((p.x - at.x) * (p.x - at.x) + (p.y - at.y) * (p.y - at.y));
    const double w = 1.0 / std::pow(d, power);
    num += w * v;
    den += w;
  }
  return num / den;
}

const char* kOrder = "A\nB\nC\n";

}  // namespace

TEST_CASE("load tops") {
  const TopsTable t = load_tops("well_id,formation,top_depth\nW1,A,2000\nW1,B,2150\nW2,A,2010\nW2,B,2160\n",
                                "well_id,x,y\nW1,0,0\nW2,1,0\n", kOrder);
  CHECK(t.records.size() == 4);
  CHECK(t.formation_order == std::vector<std::string>{"A", "B", "C"});
  CHECK(code_of([] { load_tops("well_id,formation,top_depth\nW1,Zeta,1\n", "well_id,x,y\nW1,0,0\n", kOrder); }) ==
        Errc::UnknownFormation);
  CHECK(code_of([] { load_tops("well_id,formation,top_depth\nW1,A,1\nW1,A,2\n", "well_id,x,y\nW1,0,0\n", kOrder); }) ==
        Errc::DuplicateTop);
  CHECK(code_of([] { load_tops("well_id,formation,top_depth\nW9,A,1\n", "well_id,x,y\nW1,0,0\n", kOrder); }) ==
        Errc::MissingCoordinates);
}

TEST_CASE("missing tops by inverse distance") {
  const TopsTable t = load_tops("well_id,formation,top_depth\nD1,A,2000\nD2,A,2300\nD3,B,2100\nD2,C,2500\n",
                                "well_id,x,y\nT,0,0\nD1,1,0\nD2,2,0\nD3,1,0\nTwin,1,0\n", kOrder);
  const TopsTable f = infer_missing_tops(t, 2.0);

  const double oracle = brute_idw({{{1, 0}, 2000.0}, {{2, 0}, 2300.0}}, {0, 0}, 2.0);
  CHECK(oracle == doctest::Approx(2060.0).epsilon(1e-12));
  const FormationTop at_t = f.records.at({"T", "A"});
  CHECK(at_t.inferred);
  CHECK(at_t.depth == doctest::Approx(oracle).epsilon(1e-12));

  CHECK(f.records.at({"D1", "A"}).depth == 2000.0);
  CHECK_FALSE(f.records.at({"D1", "A"}).inferred);
  // coincident with a donor: exact copy
  CHECK(f.records.at({"Twin", "A"}).depth == 2000.0);
  CHECK(f.records.at({"Twin", "A"}).inferred);
  // single donor: every inferred value equals it
  for (const char* w : {"T", "D1", "D2", "Twin"}) CHECK(f.records.at({w, "B"}).depth == 2100.0);

  // idempotent
  const TopsTable g = infer_missing_tops(f, 2.0);
  REQUIRE(g.records.size() == f.records.size());
  for (const auto& [k, v] : f.records) {
    CHECK(g.records.at(k).depth == v.depth);
    CHECK(g.records.at(k).inferred == v.inferred);
  }

  CHECK(code_of([&] { infer_missing_tops(load_tops("well_id,formation,top_depth\nD1,A,1\n", "well_id,x,y\nD1,0,0\n", kOrder)); }) ==
        Errc::NoDonors);
}

TEST_CASE("formation intervals") {
  const TopsTable t = load_tops(
      "well_id,formation,top_depth\nW1,A,2000\nW1,B,2150\nW1,C,2300\nW2,A,2200\nW2,B,2150\nW2,C,2400\n",
      "well_id,x,y\nW1,0,0\nW2,5,5\n", kOrder);
  const Formation3dMap m = build_formation_map(t, {"A", "B"});
  const FormationInterval* a = m.find("W1", "A");
  REQUIRE(a);
  CHECK(a->top == 2000.0);
  CHECK(a->bottom == 2150.0);
  // consecutive targets tile the column
  CHECK(m.find("W1", "B")->top == a->bottom);
  CHECK_FALSE(m.find("W2", "A"));
  REQUIRE(m.excluded.size() == 1);
  CHECK(m.excluded[0].well_id == "W2");
  CHECK(m.excluded[0].reason == "InvertedInterval");
  for (const auto& [k, iv] : m.intervals) CHECK(iv.thickness() > 0.0);
  CHECK(code_of([&] { build_formation_map(t, {"C"}); }) == Errc::NoFormationBelow);
}
