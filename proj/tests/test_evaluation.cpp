#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "sweetspot/error.hpp"
#include "sweetspot/evaluation.hpp"

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

Dataset linear_dataset(std::size_t n, std::size_t p, double noise_sd, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1000.0);
  Dataset ds;
  ds.X.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  ds.y.resize(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    double y = 1.0;
    for (std::size_t j = 0; j < p; ++j) {
      const double x = g(rng);
      ds.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = x;
      y += (j % 2 ? -0.5 : 1.0) * x / static_cast<double>(j + 1);
    }
    ds.y(static_cast<Eigen::Index>(i)) = y + noise_sd * g(rng);
    ds.well_ids.push_back("W" + std::to_string(100 + i));
    ds.coords.push_back({u(rng), u(rng)});
  }
  for (std::size_t j = 0; j < p; ++j) ds.feature_names.push_back("f" + std::to_string(j));
  ds.y_raw = ds.y;
  return ds;
}

}  // namespace

TEST_CASE("resample plans") {
  const auto plan = make_plan(88, 10, 3, 99);
  CHECK(plan.resamples() == 30);
  REQUIRE(plan.assignments.size() == 3);
  for (std::size_t b = 0; b < 3; ++b) {
    std::set<std::size_t> all;
    for (std::size_t k = 0; k < 10; ++k) {
      const auto t = plan.test_rows(b, k);
      CHECK((t.size() == 8 || t.size() == 9));
      CHECK(t.size() + plan.train_rows(b, k).size() == 88);
      all.insert(t.begin(), t.end());
    }
    CHECK(all.size() == 88);
  }
  CHECK(make_plan(88, 10, 3, 99).assignments == plan.assignments);
  CHECK(make_plan(88, 10, 3, 100).assignments != plan.assignments);
  CHECK(plan.assignments[0] != plan.assignments[1]);

  const auto loo = make_plan(4, 4, 1, 1);
  for (std::size_t k = 0; k < 4; ++k) CHECK(loo.test_rows(0, k).size() == 1);

  CHECK(code_of([] { make_plan(5, 1, 1, 0); }) == Errc::BadK);
  CHECK(code_of([] { make_plan(5, 6, 1, 0); }) == Errc::BadK);
  CHECK(code_of([] { make_plan(5, 2, 0, 0); }) == Errc::BadK);
}

TEST_CASE("metrics") {
  const Eigen::Vector3d obs(1, 2, 3);
  CHECK(rmse(obs, obs) == 0.0);
  CHECK(pearson(obs, obs) == doctest::Approx(1.0));
  CHECK(rmse(obs, Eigen::Vector3d(2, 2, 2)) == doctest::Approx(std::sqrt(2.0 / 3.0)));
  CHECK(is_missing(pearson(obs, Eigen::Vector3d(2, 2, 2))));
  CHECK(is_missing(pearson(Eigen::Vector2d(1, 2), Eigen::Vector2d(1, 3))));
  CHECK(pearson(obs, Eigen::Vector3d(3, 2, 1)) == doctest::Approx(-1.0));
  for (double c : {-2.5, 0.0, 0.3, 7.0}) CHECK(rmse(obs, obs.array() + c) == doctest::Approx(std::abs(c)));
  CHECK(code_of([&] { rmse(obs, Eigen::Vector2d(1, 2)); }) == Errc::Mismatch);
}

TEST_CASE("dataset assembly keeps rows with a present target") {
  CumulativeProductionFrame f;
  f.cum_columns = {{Phase::Oil, 12}, {Phase::Gas, 12}};
  f.feature_names = {"GR_fpc1"};
  for (int i = 0; i < 5; ++i) {
    ProductionRow r;
    r.well_id = "H" + std::to_string(i);
    r.target_formation = "A";
    r.surface = {static_cast<double>(i), 0.0};
    r.cum[{Phase::Oil, 12}] = i == 2 ? kMissing : 100.0 * i;
    r.cum[{Phase::Gas, 12}] = kMissing;
    r.features = {i == 4 ? kMissing : static_cast<double>(i)};
    f.rows.push_back(r);
  }
  const Dataset ds = assemble_dataset(f, Phase::Oil, 12, true);
  CHECK(ds.rows() == 4);
  CHECK(ds.cols() == 1);
  CHECK(ds.well_ids == std::vector<std::string>{"H0", "H1", "H3", "H4"});
  CHECK(ds.y(1) == doctest::Approx(std::log1p(100.0)));
  CHECK(ds.y_raw(2) == 300.0);
  CHECK(is_missing(ds.X(3, 0)));
  CHECK(assemble_dataset(f, Phase::Oil, 12, false).y(3) == 400.0);
  CHECK(code_of([&] { assemble_dataset(f, Phase::Gas, 12); }) == Errc::EmptyDataset);
}

TEST_CASE("benchmark shape, ranking and tie-break") {
  const Dataset ds = linear_dataset(40, 3, 0.0, 5);
  const auto plan = make_plan(40, 5, 2, 11);
  const auto res = benchmark(ds, zoo_from_names({"ols", "mean"}), plan);
  REQUIRE(res.models.size() == 2);
  for (const auto& m : res.models) CHECK(m.rmse.size() == 10);
  CHECK(res.ranking == std::vector<std::string>{"ols", "mean"});
  CHECK(res.find("ols")->median <= 1e-8);

  // Two copies of the same model differ only by name.
  ModelSpec twin = find_model("mean");
  twin.name = "a_mean";
  const auto tied = benchmark(ds, {find_model("mean"), twin}, plan);
  CHECK(tied.ranking == std::vector<std::string>{"a_mean", "mean"});
  CHECK(tied.models[0].rmse == tied.models[1].rmse);

  const auto serial = benchmark(ds, default_zoo(), plan, Exec::Serial);
  const auto parallel = benchmark(ds, default_zoo(), plan, Exec::Parallel);
  CHECK(serial.ranking == parallel.ranking);
  for (std::size_t m = 0; m < serial.models.size(); ++m) CHECK(serial.models[m].rmse == parallel.models[m].rmse);
}

TEST_CASE("benchmark reports failing models instead of dropping them silently") {
  const Dataset ds = linear_dataset(30, 2, 0.1, 6);
  ModelSpec broken = find_model("ols");
  broken.name = "broken";
  broken.make = [](const Hyper&) -> std::unique_ptr<Regressor> { throw Error(Errc::Mismatch, "refuses to fit"); };
  const auto res = benchmark(ds, {find_model("mean"), broken}, make_plan(30, 5, 1, 1));
  CHECK(res.ranking == std::vector<std::string>{"mean"});
  REQUIRE(res.failures.size() == 1);
  CHECK(res.failures[0].first == "broken");
}

TEST_CASE("nested leave-one-out with closed-form models") {
  const Dataset ds = linear_dataset(15, 2, 0.0, 8);
  LooConfig cfg;
  cfg.K = 5;
  const auto mean_report = nested_loo(ds, {find_model("mean")}, cfg);
  const double total = ds.y.sum();
  REQUIRE(mean_report.models.size() == 1);
  for (std::size_t i = 0; i < ds.rows(); ++i) {
    const double expected = (total - ds.y(static_cast<Eigen::Index>(i))) / static_cast<double>(ds.rows() - 1);
    CHECK(mean_report.models[0].predicted[i] == doctest::Approx(expected).epsilon(1e-12));
    CHECK(mean_report.selected.predicted[i] == mean_report.models[0].predicted[i]);
  }

  const auto ols_report = nested_loo(ds, zoo_from_names({"ols", "mean"}), cfg);
  CHECK(ols_report.find("ols")->rmse < 1e-6);
  CHECK(ols_report.find("ols")->first_count == ds.rows());
  CHECK(ols_report.selected.rmse < 1e-6);
  CHECK(ols_report.failed_wells.empty());
  CHECK(code_of([&] { nested_loo(linear_dataset(9, 2, 0.0, 1), {find_model("mean")}, cfg); }) == Errc::EmptyDataset);
}

TEST_CASE("held-out row does not influence the trained inner state") {
  Dataset ds = linear_dataset(30, 6, 0.5, 12);
  ds.X(3, 1) = kMissing;
  LooConfig cfg;
  cfg.K = 5;
  const auto zoo = default_zoo();
  for (std::size_t row : {0u, 7u, 29u}) {
    const auto a = loo_iteration(ds, row, zoo, cfg);
    Dataset poisoned = ds;
    poisoned.X.row(static_cast<Eigen::Index>(row)).setConstant(1e6);
    poisoned.y(static_cast<Eigen::Index>(row)) = -1e6;
    poisoned.y_raw(static_cast<Eigen::Index>(row)) = -1e6;
    const auto b = loo_iteration(poisoned, row, zoo, cfg);
    REQUIRE(a.ok);
    REQUIRE(b.ok);
    CHECK(a.state == b.state);
    CHECK(a.ranking == b.ranking);
  }
}

TEST_CASE("kriging baseline") {
  Dataset flat = linear_dataset(20, 1, 0.0, 13);
  flat.y.setConstant(4.2);
  flat.y_raw = flat.y;
  const auto e = kriging_baseline(flat);
  for (double p : e.predicted) CHECK(p == doctest::Approx(4.2).epsilon(1e-12));
  CHECK(e.rmse <= 1e-10);

  // Spatial white noise carries no signal at held-out locations. Leave-one-out
  // local means are slightly anti-correlated with the held-out value, so the
  // bound is a rate over many seeds.
  int small = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Dataset noise = linear_dataset(90, 1, 0.0, 500 + seed);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    for (Eigen::Index i = 0; i < noise.y.size(); ++i) noise.y(i) = g(rng);
    noise.y_raw = noise.y;
    const auto b = kriging_baseline(noise);
    if (is_missing(b.pearson) || std::abs(b.pearson) < 0.3) ++small;
  }
  CHECK(small >= 80);
}
