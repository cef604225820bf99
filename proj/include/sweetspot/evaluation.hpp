#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sweetspot/geostat.hpp"
#include "sweetspot/models.hpp"
#include "sweetspot/text.hpp"
#include "sweetspot/parallel.hpp"
#include "sweetspot/production.hpp"
#include "sweetspot/resample.hpp"

namespace sweetspot {

/// Rows with a present (phase, horizon) target; features keep their missing
/// entries for split-local imputation. With log_target the modelling target is
/// log1p(cumulative production). Throws EmptyDataset.
Dataset assemble_dataset(const CumulativeProductionFrame& frame, Phase phase, int horizon_months,
                         bool log_target = true);

/// Throws Mismatch unless sizes agree and are at least 2.
double rmse(const Eigen::VectorXd& obs, const Eigen::VectorXd& pred);
/// NaN (missing) when either side has zero variance or fewer than 3 points.
double pearson(const Eigen::VectorXd& obs, const Eigen::VectorXd& pred);

struct ModelBenchmark {
  std::string name;
  Hyper hyper;                // grid point with the smallest mean CV RMSE
  std::vector<double> rmse;   // K * B values at that grid point
  double median = 0.0;
  double iqr = 0.0;
  double mean = 0.0;
  std::vector<std::vector<std::string>> selected_features;  // per resample
};

struct BenchmarkResult {
  std::vector<ModelBenchmark> models;   // zoo order, failed models removed
  std::vector<std::string> ranking;     // by median, then IQR, then name
  std::vector<std::pair<std::string, std::string>> failures;

  const ModelBenchmark* find(const std::string& name) const;
};

BenchmarkResult benchmark(const Dataset& ds, const std::vector<ModelSpec>& zoo, const ResamplePlan& plan,
                          Exec exec = Exec::Parallel);

struct LooConfig {
  std::size_t K = 10;
  std::size_t B = 1;
  std::uint64_t seed = 20190101;
  std::size_t top_m = 3;
  std::vector<std::string> finalists;  // evaluated and reported regardless of inner rank
  Exec exec = Exec::Parallel;
};

/// One outer leave-one-well-out step: everything here is trained on the other
/// N - 1 rows.
struct OuterIteration {
  std::size_t row = 0;
  std::string well_id;
  bool ok = false;
  std::string error;
  std::vector<std::string> ranking;
  std::vector<double> predictions;  // per zoo model, zoo order; NaN if that model failed
  std::string state;                // trained inner state (selection, scaling, fits)
};

OuterIteration loo_iteration(const Dataset& ds, std::size_t row, const std::vector<ModelSpec>& zoo,
                             const LooConfig& cfg);

struct LooEntry {
  std::string name;
  std::vector<double> predicted;  // aligned with LooReport::well_ids, target scale
  double rmse = kMissing;         // target scale
  double rmse_std = kMissing;     // divided by the sd of the observed target
  double rmse_raw = kMissing;     // volume units
  double pearson = kMissing;
  std::size_t first_count = 0;    // outer iterations where the model ranked first
  double mean_rank = kMissing;
};

struct LooReport {
  std::vector<std::string> well_ids;
  Eigen::VectorXd observed;       // target scale
  Eigen::VectorXd observed_raw;
  bool log_target = false;
  std::vector<LooEntry> models;   // zoo order
  LooEntry selected;              // the inner rank-1 model's prediction at each well
  std::vector<std::string> finalists;
  std::optional<LooEntry> baseline;
  std::vector<OuterIteration> iterations;
  std::vector<std::string> failed_wells;

  const LooEntry* find(const std::string& name) const;
};

/// Throws EmptyDataset when fewer than 10 rows.
LooReport nested_loo(const Dataset& ds, const std::vector<ModelSpec>& zoo, const LooConfig& cfg);

struct BaselineConfig {
  VariogramFamily family = VariogramFamily::Exponential;
  std::size_t n_bins = 12;
  std::size_t neighbors = 32;
  Exec exec = Exec::Parallel;
};

/// Leave-one-well-out ordinary kriging of the target over surface coordinates,
/// variogram refitted on every fold.
LooEntry kriging_baseline(const Dataset& ds, const BaselineConfig& cfg = {});

/// Scores a prediction vector against the dataset target (rows with NaN predictions skipped).
LooEntry score_predictions(const std::string& name, const Dataset& ds, const std::vector<double>& predicted);

}  // namespace sweetspot
