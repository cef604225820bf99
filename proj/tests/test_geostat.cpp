#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "sweetspot/error.hpp"
#include "sweetspot/features.hpp"
#include "sweetspot/geostat.hpp"
#include "sweetspot/text.hpp"

#include "oracles.hpp"

using namespace sweetspot;
using namespace oracles;

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

SpatialSamples random_samples(std::mt19937_64& rng, std::size_t n, double extent = 100.0) {
  std::uniform_real_distribution<double> u(0.0, extent);
  std::normal_distribution<double> g(0.0, 1.0);
  SpatialSamples s;
  for (std::size_t i = 0; i < n; ++i) s.add("S" + std::to_string(i), {u(rng), u(rng)}, g(rng));
  return s;
}

}  // namespace

TEST_CASE("samples merge coincident points by mean") {
  SpatialSamples s;
  s.add("a", {0, 0}, 1.0);
  s.add("b", {0, 1e-12}, 3.0);
  s.add("c", {1, 0}, 5.0);
  REQUIRE(s.size() == 2);
  CHECK(s.values()[0] == 2.0);
}

TEST_CASE("empirical variogram basics") {
  SpatialSamples constant;
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 10);
  for (int i = 0; i < 30; ++i) constant.add(std::to_string(i), {u(rng), u(rng)}, 7.5);
  for (const auto& e : empirical_variogram(constant, 10)) CHECK(e.gamma == 0.0);

  SpatialSamples two;
  two.add("a", {0, 0}, 0.0);
  two.add("b", {1, 0}, 2.0);
  const auto emp = empirical_variogram(two, 4, 2.0);
  REQUIRE(emp.size() == 1);
  CHECK(emp[0].gamma == 2.0);
  CHECK(emp[0].lag == 1.0);
  CHECK(emp[0].pairs == 1);

  SpatialSamples one;
  one.add("a", {0, 0}, 1.0);
  CHECK(code_of([&] { empirical_variogram(one, 4); }) == Errc::TooFewSamples);
}

TEST_CASE("parallel variogram kernel matches the serial reference") {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 10; ++rep) {
    const auto s = random_samples(rng, 40 + 15 * static_cast<std::size_t>(rep));
    const auto ref = reference::empirical_variogram(s, 12, 0.0);
    for (Exec e : {Exec::Serial, Exec::Parallel}) {
      const auto got = empirical_variogram(s, 12, 0.0, e);
      REQUIRE(got.size() == ref.size());
      for (std::size_t b = 0; b < got.size(); ++b) {
        CHECK(got[b].pairs == ref[b].pairs);
        CHECK(std::abs(got[b].gamma - ref[b].gamma) <= 1e-12 * std::max(1.0, ref[b].gamma));
        CHECK(std::abs(got[b].lag - ref[b].lag) <= 1e-12 * ref[b].lag);
      }
    }
  }
}

TEST_CASE("binned semivariance tracks the generating exponential model") {
  const VariogramModel truth{VariogramFamily::Exponential, 0.2, 1.0, 20.0};
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Point> pts;
  for (int i = 0; i < 50; ++i) pts.push_back({u(rng), u(rng)});
  Eigen::MatrixXd cov(50, 50);
  for (int i = 0; i < 50; ++i)
    for (int j = 0; j < 50; ++j) cov(i, j) = truth.sill() - truth(distance(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]));
  const Eigen::MatrixXd l = cov.llt().matrixL();

  // The estimator is unbiased pair by pair; averaging seeded realizations removes field noise.
  constexpr int kReps = 400;
  std::vector<double> gsum(12, 0.0), lsum(12, 0.0);
  std::vector<int> seen(12, 0);
  for (int r = 0; r < kReps; ++r) {
    Eigen::VectorXd z(50);
    for (int i = 0; i < 50; ++i) z(i) = g(rng);
    const Eigen::VectorXd v = l * z;
    SpatialSamples s;
    for (int i = 0; i < 50; ++i) s.add(std::to_string(i), pts[static_cast<std::size_t>(i)], v(i));
    const auto emp = empirical_variogram(s, 12, 60.0);
    for (const auto& e : emp) {
      const auto b = static_cast<std::size_t>(std::ceil(e.lag / 5.0)) - 1;
      gsum[b] += e.gamma;
      lsum[b] += e.lag;
      ++seen[b];
    }
  }
  int checked = 0;
  for (std::size_t b = 0; b < 12; ++b) {
    if (seen[b] < kReps) continue;
    const double lag = lsum[b] / seen[b];
    if (lag >= truth.range) continue;
    const double mean = gsum[b] / seen[b];
    CHECK(std::abs(mean - truth(lag)) <= 0.25 * truth(lag));
    ++checked;
  }
  CHECK(checked >= 2);
}

TEST_CASE("variogram fit recovers a spherical model from exact points") {
  const VariogramModel truth{VariogramFamily::Spherical, 0.0, 1.0, 10.0};
  std::vector<EmpiricalPoint> emp;
  for (int i = 1; i <= 8; ++i) emp.push_back({1.5 * i, truth(1.5 * i), static_cast<std::size_t>(20 + i)});
  const auto fit = fit_variogram(emp, VariogramFamily::Spherical);
  CHECK_FALSE(fit.degenerate);
  CHECK(std::abs(fit.model.nugget) <= 1e-3);
  CHECK(std::abs(fit.model.partial_sill - 1.0) <= 1e-3);
  CHECK(std::abs(fit.model.range - 10.0) <= 1e-2);
}

TEST_CASE("degenerate variogram inputs give a flagged pure nugget") {
  std::vector<EmpiricalPoint> flat;
  for (int i = 1; i <= 6; ++i) flat.push_back({static_cast<double>(i), 0.5, 10});
  const auto fit = fit_variogram(flat, VariogramFamily::Exponential);
  CHECK(fit.degenerate);
  CHECK(fit.model.nugget == doctest::Approx(0.5));
  CHECK(fit.model.partial_sill == 0.0);
  CHECK(fit.model.range == 6.0);

  const auto single = fit_variogram({{2.0, 0.8, 3}}, VariogramFamily::Exponential);
  CHECK(single.degenerate);
  CHECK(single.model.nugget == doctest::Approx(0.8));
}

TEST_CASE("variogram models") {
  for (auto f : {VariogramFamily::Spherical, VariogramFamily::Exponential, VariogramFamily::Gaussian}) {
    const VariogramModel m{f, 0.1, 0.9, 5.0};
    CHECK(m(0.0) == 0.0);
    double prev = 0.0;
    for (double h = 0.1; h < 100; h *= 1.3) {
      CHECK(m(h) >= prev);
      prev = m(h);
    }
    CHECK(m(1e6) == doctest::Approx(1.0));
    CHECK(parse_family(family_name(f)) == f);
  }
  CHECK(code_of([] { parse_family("cubic"); }) == Errc::ConfigInvalid);
}

TEST_CASE("kriging exactness and single sample") {
  std::mt19937_64 rng(29);
  const auto s = random_samples(rng, 40);
  const VariogramModel vm{VariogramFamily::Exponential, 0.0, 1.0, 30.0};
  const auto est = krige(s, vm, s.points());
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK_FALSE(est[i].fallback);
    CHECK(std::abs(est[i].value - s.values()[i]) <= 1e-8);
    CHECK(std::abs(est[i].variance) <= 1e-8);
  }

  SpatialSamples one;
  one.add("a", {3, 4}, 5.0);
  for (const auto& e : krige(one, vm, {{0, 0}, {100, -7}, {3, 4}})) CHECK(e.value == 5.0);
  CHECK(code_of([&] { krige(SpatialSamples{}, vm, {{0, 0}}); }) == Errc::NoSamples);
}

TEST_CASE("three-sample kriging matches an explicitly assembled system") {
  const VariogramModel vm{VariogramFamily::Exponential, 0.1, 2.0, 4.0};
  const std::vector<Point> p{{0, 0}, {3, 1}, {1, 4}};
  const std::vector<double> v{1.0, 3.0, -2.0};
  const Point t{1.5, 1.5};
  SpatialSamples s;
  for (std::size_t i = 0; i < 3; ++i) s.add(std::to_string(i), p[i], v[i]);

  auto gam = [&](Point a, Point b) {
    const double h = std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y));
    return h == 0.0 ? 0.0 : 0.1 + 2.0 * (1.0 - std::exp(-h / 4.0));
  };
  std::vector<std::vector<double>> a{
      {gam(p[0], p[0]), gam(p[0], p[1]), gam(p[0], p[2]), 1.0},
      {gam(p[1], p[0]), gam(p[1], p[1]), gam(p[1], p[2]), 1.0},
      {gam(p[2], p[0]), gam(p[2], p[1]), gam(p[2], p[2]), 1.0},
      {1.0, 1.0, 1.0, 0.0}};
  const std::vector<double> b{gam(p[0], t), gam(p[1], t), gam(p[2], t), 1.0};
  const auto x = gauss_solve(a, b);
  const double pred = x[0] * v[0] + x[1] * v[1] + x[2] * v[2];
  const double var = x[0] * b[0] + x[1] * b[1] + x[2] * b[2] + x[3];

  const auto est = krige(s, vm, {t});
  CHECK(std::abs(est[0].value - pred) <= 1e-8);
  CHECK(std::abs(est[0].variance - var) <= 1e-8);
}

TEST_CASE("kriging weight sum, translation and shift equivariance") {
  std::mt19937_64 rng(31);
  const auto s = random_samples(rng, 60);
  const VariogramModel vm{VariogramFamily::Exponential, 0.05, 1.0, 25.0};
  std::uniform_real_distribution<double> u(-10, 110);
  std::vector<Point> targets;
  for (int i = 0; i < 25; ++i) targets.push_back({u(rng), u(rng)});

  for (const auto& t : targets) {
    const auto kw = kriging_weights(s, vm, t);
    CHECK(kw.indices.size() == 32);
    double sum = 0.0;
    for (double w : kw.weights) sum += w;
    CHECK(std::abs(sum - 1.0) <= 1e-10);
  }

  const auto base = krige(s, vm, targets);
  SpatialSamples moved, lifted;
  for (std::size_t i = 0; i < s.size(); ++i) {
    moved.add(s.ids()[i], {s.points()[i].x + 1234.5, s.points()[i].y - 987.25}, s.values()[i]);
    lifted.add(s.ids()[i], s.points()[i], s.values()[i] + 17.0);
  }
  std::vector<Point> moved_targets;
  for (const auto& t : targets) moved_targets.push_back({t.x + 1234.5, t.y - 987.25});
  const auto m = krige(moved, vm, moved_targets);
  const auto l = krige(lifted, vm, targets);
  for (std::size_t i = 0; i < targets.size(); ++i) {
    CHECK(std::abs(m[i].value - base[i].value) <= 1e-8);
    CHECK(std::abs(l[i].value - base[i].value - 17.0) <= 1e-8);
  }

  KrigingOptions serial;
  serial.exec = Exec::Serial;
  const auto ser = krige(s, vm, targets, serial);
  for (std::size_t i = 0; i < targets.size(); ++i) CHECK(ser[i].value == base[i].value);
}

TEST_CASE("singular kriging systems fall back to IDW") {
  // A zero variogram empties the covariance block, leaving a rank-deficient system.
  const VariogramModel flat{VariogramFamily::Exponential, 0.0, 0.0, 1.0};
  SpatialSamples s;
  s.add("a", {0, 0}, 1.0);
  s.add("b", {1, 0}, 3.0);
  s.add("c", {0, 1}, 5.0);
  const auto est = krige(s, flat, {{0.3, 0.3}});
  CHECK(est[0].fallback);
  CHECK(est[0].value == doctest::Approx(idw(s, {{0.3, 0.3}})[0]));
}

TEST_CASE("inverse distance weighting") {
  SpatialSamples two;
  two.add("a", {-1, 0}, 2.0);
  two.add("b", {1, 0}, 4.0);
  CHECK(idw(two, {{0, 0}})[0] == doctest::Approx(3.0));
  CHECK(idw(two, {{-1, 0}})[0] == 2.0);

  SpatialSamples three;
  three.add("a", {0, 0}, 1.0);
  three.add("b", {4, 0}, 2.0);
  three.add("c", {0, 2}, 6.0);
  const Point t{1, 1};
  // Squared distances 2, 10, 2; weights are their reciprocals.
  const double expected = (1.0 / 2 * 1.0 + 1.0 / 10 * 2.0 + 1.0 / 2 * 6.0) / (1.0 / 2 + 1.0 / 10 + 1.0 / 2);
  CHECK(idw(three, {t}, 2.0)[0] == doctest::Approx(expected).epsilon(1e-14));

  std::mt19937_64 rng(37);
  const auto s = random_samples(rng, 30);
  const double lo = *std::min_element(s.values().begin(), s.values().end());
  const double hi = *std::max_element(s.values().begin(), s.values().end());
  std::uniform_real_distribution<double> u(-50, 150);
  for (int i = 0; i < 200; ++i) {
    const double v = idw(s, {{u(rng), u(rng)}}, 1.0 + (i % 4))[0];
    CHECK(v >= lo);
    CHECK(v <= hi);
  }
  CHECK(code_of([] { idw(SpatialSamples{}, {{0, 0}}); }) == Errc::NoSamples);
}

TEST_CASE("feature interpolation stays within the target formation") {
  CumulativeProductionFrame frame;
  frame.cum_columns = {{Phase::Oil, 6}};
  for (int i = 0; i < 4; ++i) {
    ProductionRow r;
    r.well_id = "H" + std::to_string(i);
    r.target_formation = i < 2 ? "A" : "B";
    r.surface = i == 0 ? Point{10, 10} : Point{5.0 + i, 7.0};
    r.cum[{Phase::Oil, 6}] = 1.0;
    frame.rows.push_back(r);
  }
  std::map<std::string, Point> coords;
  FeatureSource a, b, c;
  a.property = b.property = c.property = "GR";
  a.formation = "A";
  b.formation = "B";
  c.formation = "C";
  a.suffixes = b.suffixes = c.suffixes = {"fpc1"};
  a.values.resize(6, 1);
  b.values.resize(6, 1);
  c.values.resize(3, 1);
  const std::vector<Point> grid{{0, 0}, {10, 10}, {20, 0}, {0, 20}, {20, 20}, {10, 0}};
  for (int i = 0; i < 6; ++i) {
    a.well_ids.push_back("VA" + std::to_string(i));
    b.well_ids.push_back("VB" + std::to_string(i));
    coords[a.well_ids.back()] = grid[static_cast<std::size_t>(i)];
    coords[b.well_ids.back()] = grid[static_cast<std::size_t>(i)];
    a.values(i, 0) = 100.0 + i;  // formation A values live in [100, 106)
    b.values(i, 0) = -100.0 - i;
  }
  for (int i = 0; i < 3; ++i) {
    c.well_ids.push_back("VC" + std::to_string(i));
    coords[c.well_ids.back()] = grid[static_cast<std::size_t>(i)];
    c.values(i, 0) = 0.0;
  }
  FeatureConfig cfg;
  const auto res = interpolate_features(frame, {a, b, c}, coords, {"GR"}, cfg);
  REQUIRE(res.frame.feature_names == std::vector<std::string>{"GR_fpc1"});
  // H0 sits on VA1, so exactness gives its score.
  CHECK(res.frame.rows[0].features[0] == doctest::Approx(101.0).epsilon(1e-10));
  CHECK(res.frame.rows[1].features[0] >= 100.0 - 1e-6);
  CHECK(res.frame.rows[2].features[0] <= -100.0 + 1e-6);
  CHECK(res.frame.rows[3].features[0] <= -100.0 + 1e-6);

  // Formation C has only three donors and no horizontal well targets it; retarget one to see the audit.
  frame.rows[3].target_formation = "C";
  const auto sparse = interpolate_features(frame, {a, b, c}, coords, {"GR"}, cfg);
  CHECK(is_missing(sparse.frame.rows[3].features[0]));
  bool reported = false;
  for (const auto& row : sparse.audit) {
    if (row.well_id == "H3" && row.donors == 3 && row.note.find("donors") != std::string::npos) reported = true;
  }
  CHECK(reported);
}
