#include <doctest.h>

#include "sweetspot/error.hpp"
#include "sweetspot/las.hpp"
#include "sweetspot/text.hpp"

using namespace sweetspot;

namespace {

const char* kLas = R"(~VERSION INFORMATION
 VERS.   2.0 : CWLS LOG ASCII STANDARD
 WRAP.   NO  : ONE LINE PER DEPTH STEP
~WELL INFORMATION
 NULL.   -999.25 : NULL VALUE
 WELL.   Tract 7 #2 : WELL NAME
 API .   42-001-00007 : API NUMBER
 X   .M  1200.5 : EASTING
 Y   .M  3400.0 : NORTHING
~CURVE INFORMATION
 DEPT.M          : DEPTH
 GammaRay.GAPI   : GAMMA
 RHOB.G/CC       : BULK DENSITY
~ASCII
 100.0  50.0  2.40
 100.5  -999.25  2.41
 101.0  52.0  -999.25
 100.8  53.0  2.43
 101.5  54.0  2.44
)";

}  // namespace

TEST_CASE("text helpers") {
  CHECK(trim("  a b \t") == "a b");
  CHECK(fold_name(" Wolfcamp A ") == fold_name("wolfcampa"));
  CHECK(split("a,,b", ',') == std::vector<std::string>{"a", "", "b"});
  CHECK(format_double(kMissing) == "NA");
  CHECK(*parse_double("+1.5") == 1.5);
  CHECK_FALSE(parse_double("1.5x").has_value());
  const double v = 0.1 + 0.2;
  CHECK(*parse_double(format_double(v)) == v);
  CHECK_THROWS_AS(parse_csv("a,b\n1\n"), Error);
  const CsvTable t = parse_csv("# note\nA,b\n\n1,2\n");
  CHECK(t.rows.size() == 1);
  CHECK(t.column("a") == 0);
}

TEST_CASE("parse LAS header, nulls and ordering") {
  const LasFile f = parse_las(kLas);
  CHECK(f.well_id == "42-001-00007");
  REQUIRE(f.location.has_value());
  CHECK(f.location->x == 1200.5);
  CHECK(f.location->y == 3400.0);
  CHECK(f.depth_unit == "M");
  CHECK(f.dropped_rows == 1);
  CHECK(f.depth == std::vector<double>{100.0, 100.5, 101.0, 101.5});
  REQUIRE(f.curves.size() == 2);
  const LasCurve* gr = f.find("GammaRay");
  REQUIRE(gr);
  CHECK(gr->unit == "GAPI");
  CHECK(is_missing(gr->values[1]));
  CHECK(gr->missing_count() == 1);
  CHECK(f.find("RHOB")->values[3] == 2.44);
}

TEST_CASE("LAS errors") {
  std::string wrapped = kLas;
  wrapped.replace(wrapped.find("WRAP.   NO"), 10, "WRAP.  YES");
  CHECK_THROWS_AS(parse_las(wrapped), Error);
  try {
    parse_las(wrapped);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::MissingSection);
  }

  std::string arity = kLas;
  arity += " 102.0 55.0\n";
  try {
    parse_las(arity);
    FAIL("expected RowArity");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::RowArity);
  }

  std::string nodepth = kLas;
  nodepth.replace(nodepth.find(" DEPT.M"), 7, " TIME.S");
  try {
    parse_las(nodepth);
    FAIL("expected NoDepthCurve");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NoDepthCurve);
  }
  CHECK_THROWS_AS(parse_las("~VERSION\n VERS. 2.0 :\n"), Error);
}

TEST_CASE("LAS round trip") {
  const LasFile a = parse_las(kLas);
  const LasFile b = parse_las(serialize_las(a));
  CHECK(b.well_id == a.well_id);
  CHECK(b.depth == a.depth);
  REQUIRE(b.curves.size() == a.curves.size());
  for (std::size_t c = 0; c < a.curves.size(); ++c) {
    CHECK(b.curves[c].name == a.curves[c].name);
    for (std::size_t i = 0; i < a.depth.size(); ++i) {
      const double x = a.curves[c].values[i], y = b.curves[c].values[i];
      CHECK((is_missing(x) ? is_missing(y) : x == y));
    }
  }
}

TEST_CASE("alias dictionary") {
  const AliasDictionary d = load_dictionary("raw,alias\nGammaRay,GR\ngamma,GR\nDEN,RHOB\n");
  CHECK(*d.lookup("GAMMARAY") == "GR");
  CHECK(*d.lookup("GR") == "GR");
  CHECK_FALSE(d.lookup("NPHI").has_value());
  CHECK_THROWS_AS(load_dictionary("raw,alias\nGR,GR\ngr,RHOB\n"), Error);

  const DictionaryResult r = apply_dictionary(parse_las(kLas), d);
  REQUIRE(r.file.curves.size() == 2);
  CHECK(r.file.find("GR"));
  CHECK(r.file.find("RHOB"));
  CHECK(r.skipped.empty());

  const AliasDictionary only_gr = load_dictionary("raw,alias\nGammaRay,GR\n");
  const DictionaryResult s = apply_dictionary(parse_las(kLas), only_gr);
  CHECK(s.file.curves.size() == 1);
  CHECK(s.skipped == std::vector<std::string>{"RHOB"});
}

TEST_CASE("colliding aliases keep the curve with fewer missing samples") {
  std::string two = kLas;
  two.replace(two.find(" RHOB.G/CC"), 10, " GR.GAPI  ");
  const LasFile f = parse_las(two);
  const DictionaryResult r = apply_dictionary(f, load_dictionary("raw,alias\nGammaRay,GR\n"));
  REQUIRE(r.file.curves.size() == 1);
  // both have one missing sample: the first in file order wins
  CHECK(r.file.curves[0].values[0] == 50.0);
}
