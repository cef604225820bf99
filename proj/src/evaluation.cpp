#include "sweetspot/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "sweetspot/error.hpp"
#include "sweetspot/text.hpp"

namespace sweetspot {

Dataset assemble_dataset(const CumulativeProductionFrame& frame, Phase phase, int horizon_months,
                         bool log_target) {
  const CumKey key{phase, horizon_months};
  if (std::find(frame.cum_columns.begin(), frame.cum_columns.end(), key) == frame.cum_columns.end()) {
    throw Error(Errc::EmptyDataset, "frame has no column " + cum_column_name(key));
  }
  std::vector<const ProductionRow*> rows;
  for (const auto& r : frame.rows) {
    if (!is_missing(r.cum.at(key))) rows.push_back(&r);
  }
  if (rows.empty()) throw Error(Errc::EmptyDataset, "no well has " + cum_column_name(key));

  Dataset ds;
  ds.feature_names = frame.feature_names;
  ds.log_target = log_target;
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto p = static_cast<Eigen::Index>(frame.feature_names.size());
  ds.X.resize(n, p);
  ds.y.resize(n);
  ds.y_raw.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const ProductionRow& r = *rows[static_cast<std::size_t>(i)];
    for (Eigen::Index c = 0; c < p; ++c) ds.X(i, c) = r.features[static_cast<std::size_t>(c)];
    const double v = r.cum.at(key);
    ds.y_raw(i) = v;
    ds.y(i) = log_target ? std::log1p(v) : v;
    ds.well_ids.push_back(r.well_id);
    ds.coords.push_back(r.surface);
  }
  return ds;
}

double rmse(const Eigen::VectorXd& obs, const Eigen::VectorXd& pred) {
  if (obs.size() != pred.size() || obs.size() < 2) {
    throw Error(Errc::Mismatch, "rmse needs equal lengths >= 2");
  }
  return std::sqrt((obs - pred).squaredNorm() / static_cast<double>(obs.size()));
}

double pearson(const Eigen::VectorXd& obs, const Eigen::VectorXd& pred) {
  if (obs.size() != pred.size()) throw Error(Errc::Mismatch, "pearson needs equal lengths");
  if (obs.size() < 3) return kMissing;
  const Eigen::ArrayXd a = obs.array() - obs.mean();
  const Eigen::ArrayXd b = pred.array() - pred.mean();
  const double saa = (a * a).sum(), sbb = (b * b).sum();
  if (!(saa > 0.0) || !(sbb > 0.0)) return kMissing;
  return std::clamp((a * b).sum() / std::sqrt(saa * sbb), -1.0, 1.0);
}

namespace {

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

Eigen::MatrixXd rows_of(const Eigen::MatrixXd& X, const std::vector<std::size_t>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), X.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = X.row(static_cast<Eigen::Index>(rows[r]));
  return out;
}

Eigen::VectorXd rows_of(const Eigen::VectorXd& y, const std::vector<std::size_t>& rows) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) out(static_cast<Eigen::Index>(r)) = y(static_cast<Eigen::Index>(rows[r]));
  return out;
}

bool needs_selection(const std::vector<ModelSpec>& zoo) {
  return std::any_of(zoo.begin(), zoo.end(), [](const ModelSpec& m) { return m.selection == Selection::ElasticNetPre; });
}

}  // namespace

const ModelBenchmark* BenchmarkResult::find(const std::string& name) const {
  for (const auto& m : models) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

BenchmarkResult benchmark(const Dataset& ds, const std::vector<ModelSpec>& zoo, const ResamplePlan& plan,
                          Exec exec) {
  if (plan.N != ds.rows()) throw Error(Errc::Mismatch, "plan N differs from dataset rows");
  const std::size_t R = plan.resamples();
  const bool select = needs_selection(zoo);

  // rmse[m][g][r]; error[m][r] holds the first failure message of model m on resample r
  std::vector<std::vector<std::vector<double>>> scores(zoo.size());
  std::vector<std::vector<std::string>> errors(zoo.size(), std::vector<std::string>(R));
  for (std::size_t m = 0; m < zoo.size(); ++m) {
    scores[m].assign(zoo[m].grid.size(), std::vector<double>(R, kMissing));
  }
  std::vector<std::vector<std::vector<std::string>>> used_by_grid(zoo.size());
  for (std::size_t m = 0; m < zoo.size(); ++m) {
    used_by_grid[m].assign(zoo[m].grid.size() * R, {});
  }

  const auto n_resamples = static_cast<std::ptrdiff_t>(R);
#pragma omp parallel for schedule(dynamic, 1) if (exec == Exec::Parallel)
  for (std::ptrdiff_t rr = 0; rr < n_resamples; ++rr) {
    const auto r = static_cast<std::size_t>(rr);
    const std::size_t b = r / plan.K, k = r % plan.K;
    const auto train = plan.train_rows(b, k);
    const auto test = plan.test_rows(b, k);
    const Eigen::MatrixXd x_test = rows_of(ds.X, test);
    const Eigen::VectorXd y_test = rows_of(ds.y, test);
    PreparedSplit split;
    std::string split_error;
    try {
      split = prepare_split(rows_of(ds.X, train), rows_of(ds.y, train), select, plan.K,
                            mix_seed(plan.seed, 1000003ULL * (b + 1) + k));
    } catch (const std::exception& e) {
      split_error = e.what();
    }
    for (std::size_t m = 0; m < zoo.size(); ++m) {
      if (!split_error.empty()) {
        errors[m][r] = split_error;
        continue;
      }
      for (std::size_t g = 0; g < zoo[m].grid.size(); ++g) {
        try {
          const TrainedPipeline pipe(zoo[m], zoo[m].grid[g], split, ds.feature_names);
          const Eigen::VectorXd pred = pipe.predict(x_test);
          scores[m][g][r] = std::sqrt((pred - y_test).squaredNorm() / static_cast<double>(test.size()));
          used_by_grid[m][g * R + r] = pipe.used_features();
        } catch (const std::exception& e) {
          if (errors[m][r].empty()) errors[m][r] = e.what();
        }
      }
    }
  }

  BenchmarkResult result;
  for (std::size_t m = 0; m < zoo.size(); ++m) {
    const auto failed = std::find_if(errors[m].begin(), errors[m].end(), [](const std::string& e) { return !e.empty(); });
    if (failed != errors[m].end()) {
      result.failures.emplace_back(zoo[m].name, *failed);
      continue;
    }
    std::size_t best = 0;
    double best_mean = std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < zoo[m].grid.size(); ++g) {
      const double mean = std::accumulate(scores[m][g].begin(), scores[m][g].end(), 0.0) / static_cast<double>(R);
      if (mean < best_mean) {
        best_mean = mean;
        best = g;
      }
    }
    ModelBenchmark mb;
    mb.name = zoo[m].name;
    mb.hyper = zoo[m].grid[best];
    mb.rmse = scores[m][best];
    mb.mean = best_mean;
    mb.median = quantile(mb.rmse, 0.5);
    mb.iqr = quantile(mb.rmse, 0.75) - quantile(mb.rmse, 0.25);
    for (std::size_t r = 0; r < R; ++r) mb.selected_features.push_back(used_by_grid[m][best * R + r]);
    result.models.push_back(std::move(mb));
  }
  std::vector<const ModelBenchmark*> order;
  for (const auto& m : result.models) order.push_back(&m);
  std::sort(order.begin(), order.end(), [](const ModelBenchmark* a, const ModelBenchmark* b) {
    if (a->median != b->median) return a->median < b->median;
    if (a->iqr != b->iqr) return a->iqr < b->iqr;
    return a->name < b->name;
  });
  for (const auto* m : order) result.ranking.push_back(m->name);
  return result;
}

OuterIteration loo_iteration(const Dataset& ds, std::size_t row, const std::vector<ModelSpec>& zoo,
                             const LooConfig& cfg) {
  OuterIteration it;
  it.row = row;
  it.well_id = row < ds.well_ids.size() ? ds.well_ids[row] : std::to_string(row);
  it.predictions.assign(zoo.size(), kMissing);
  try {
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < ds.rows(); ++i) {
      if (i != row) keep.push_back(i);
    }
    const Dataset inner = subset_rows(ds, keep);
    const std::uint64_t seed = mix_seed(cfg.seed, row);
    const ResamplePlan plan = make_plan(inner.rows(), std::min(cfg.K, inner.rows()), cfg.B, seed);
    const BenchmarkResult bench = benchmark(inner, zoo, plan, Exec::Serial);
    if (bench.ranking.empty()) throw Error(Errc::EmptyDataset, "every model failed in the inner benchmark");
    it.ranking = bench.ranking;

    const PreparedSplit split = prepare_split(inner.X, inner.y, needs_selection(zoo), cfg.K, mix_seed(seed, 7));
    const Eigen::MatrixXd held_out = ds.X.row(static_cast<Eigen::Index>(row));
    nlohmann::ordered_json state;
    state["ranking"] = bench.ranking;
    state["scaling"] = split.scaler.state();
    if (split.has_selection) state["enet_selection"] = split.selection.selected;
    auto& fits = state["models"] = nlohmann::ordered_json::array();
    for (std::size_t m = 0; m < zoo.size(); ++m) {
      const ModelBenchmark* mb = bench.find(zoo[m].name);
      if (!mb) continue;
      const TrainedPipeline pipe(zoo[m], mb->hyper, split, ds.feature_names);
      it.predictions[m] = pipe.predict(held_out)(0);
      fits.push_back(pipe.state());
    }
    it.state = state.dump();
    it.ok = true;
  } catch (const std::exception& e) {
    it.ok = false;
    it.error = e.what();
  }
  return it;
}

LooEntry score_predictions(const std::string& name, const Dataset& ds, const std::vector<double>& predicted) {
  LooEntry e;
  e.name = name;
  e.predicted = predicted;
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (!is_missing(predicted[i])) rows.push_back(i);
  }
  if (rows.size() < 2) return e;
  Eigen::VectorXd obs(static_cast<Eigen::Index>(rows.size())), pred(obs.size());
  Eigen::VectorXd obs_raw(obs.size()), pred_raw(obs.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(rows[k]);
    const auto kk = static_cast<Eigen::Index>(k);
    obs(kk) = ds.y(i);
    pred(kk) = predicted[rows[k]];
    obs_raw(kk) = ds.y_raw(i);
    pred_raw(kk) = ds.log_target ? std::expm1(pred(kk)) : pred(kk);
  }
  e.rmse = rmse(obs, pred);
  const double sd = std::sqrt((obs.array() - obs.mean()).square().sum() / static_cast<double>(obs.size() - 1));
  e.rmse_std = sd > 0.0 ? e.rmse / sd : kMissing;
  e.rmse_raw = rmse(obs_raw, pred_raw);
  e.pearson = pearson(obs, pred);
  return e;
}

const LooEntry* LooReport::find(const std::string& name) const {
  for (const auto& m : models) {
    if (m.name == name) return &m;
  }
  if (baseline && baseline->name == name) return &*baseline;
  if (selected.name == name) return &selected;
  return nullptr;
}

LooReport nested_loo(const Dataset& ds, const std::vector<ModelSpec>& zoo, const LooConfig& cfg) {
  if (ds.rows() < 10) throw Error(Errc::EmptyDataset, "nested LOO needs at least 10 wells");
  const std::size_t N = ds.rows();
  LooReport report;
  report.well_ids = ds.well_ids;
  report.observed = ds.y;
  report.observed_raw = ds.y_raw;
  report.log_target = ds.log_target;
  report.iterations.resize(N);

  const auto n = static_cast<std::ptrdiff_t>(N);
#pragma omp parallel for schedule(dynamic, 1) if (cfg.exec == Exec::Parallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    report.iterations[static_cast<std::size_t>(i)] = loo_iteration(ds, static_cast<std::size_t>(i), zoo, cfg);
  }

  std::vector<std::vector<double>> preds(zoo.size(), std::vector<double>(N, kMissing));
  std::vector<double> selected(N, kMissing);
  std::vector<std::size_t> first(zoo.size(), 0);
  std::vector<double> rank_sum(zoo.size(), 0.0);
  std::vector<std::size_t> rank_n(zoo.size(), 0);
  for (std::size_t i = 0; i < N; ++i) {
    const OuterIteration& it = report.iterations[i];
    if (!it.ok) {
      report.failed_wells.push_back(it.well_id);
      continue;
    }
    for (std::size_t m = 0; m < zoo.size(); ++m) {
      preds[m][i] = it.predictions[m];
      const auto pos = std::find(it.ranking.begin(), it.ranking.end(), zoo[m].name);
      if (pos == it.ranking.end()) continue;
      const auto rank = static_cast<std::size_t>(pos - it.ranking.begin());
      rank_sum[m] += static_cast<double>(rank + 1);
      ++rank_n[m];
      if (rank == 0) {
        ++first[m];
        selected[i] = it.predictions[m];
      }
    }
  }

  for (std::size_t m = 0; m < zoo.size(); ++m) {
    LooEntry e = score_predictions(zoo[m].name, ds, preds[m]);
    e.first_count = first[m];
    e.mean_rank = rank_n[m] ? rank_sum[m] / static_cast<double>(rank_n[m]) : kMissing;
    report.models.push_back(std::move(e));
  }
  report.selected = score_predictions("selected", ds, selected);

  // Finalists: most often ranked first, then best mean inner rank, then name.
  std::vector<std::size_t> order(zoo.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ea = report.models[a];
    const auto& eb = report.models[b];
    if (ea.first_count != eb.first_count) return ea.first_count > eb.first_count;
    const double ra = is_missing(ea.mean_rank) ? 1e300 : ea.mean_rank;
    const double rb = is_missing(eb.mean_rank) ? 1e300 : eb.mean_rank;
    if (ra != rb) return ra < rb;
    return ea.name < eb.name;
  });
  for (std::size_t k = 0; k < std::min(cfg.top_m, order.size()); ++k) {
    report.finalists.push_back(zoo[order[k]].name);
  }
  for (const auto& f : cfg.finalists) {
    if (std::find(report.finalists.begin(), report.finalists.end(), f) == report.finalists.end() &&
        report.find(f)) {
      report.finalists.push_back(f);
    }
  }
  return report;
}

LooEntry kriging_baseline(const Dataset& ds, const BaselineConfig& cfg) {
  if (ds.rows() < 10) throw Error(Errc::EmptyDataset, "kriging baseline needs at least 10 wells");
  if (ds.coords.size() != ds.rows()) throw Error(Errc::MissingCoordinates, "dataset lacks well coordinates");
  const std::size_t N = ds.rows();
  std::vector<double> pred(N, kMissing);
  const auto n = static_cast<std::ptrdiff_t>(N);
#pragma omp parallel for schedule(dynamic, 4) if (cfg.exec == Exec::Parallel)
  for (std::ptrdiff_t ii = 0; ii < n; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    SpatialSamples s;
    for (std::size_t j = 0; j < N; ++j) {
      if (j != i) s.add(ds.well_ids[j], ds.coords[j], ds.y(static_cast<Eigen::Index>(j)));
    }
    VariogramFit fit;
    try {
      fit = fit_variogram(empirical_variogram(s, cfg.n_bins, 0.0, Exec::Serial), cfg.family);
    } catch (const Error&) {
      fit.model = VariogramModel{cfg.family, 0.0, 0.0, 1.0};
    }
    KrigingOptions opts;
    opts.neighbors = cfg.neighbors;
    opts.exec = Exec::Serial;
    pred[i] = krige(s, fit.model, {ds.coords[i]}, opts).front().value;
  }
  return score_predictions("kriging", ds, pred);
}

}  // namespace sweetspot
