#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "sweetspot/las.hpp"

namespace sweetspot {

/// Modelling table. X may hold missing entries (NaN); they are imputed inside
/// every training split, never globally.
struct Dataset {
  Eigen::MatrixXd X;                      // N x p
  Eigen::VectorXd y;                      // modelling target (possibly log-transformed)
  Eigen::VectorXd y_raw;                  // cumulative production in volume units
  std::vector<std::string> feature_names;
  std::vector<std::string> well_ids;
  std::vector<Point> coords;              // surface locations, for the kriging baseline
  bool log_target = false;

  std::size_t rows() const { return static_cast<std::size_t>(X.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(X.cols()); }
};

Dataset subset_rows(const Dataset& ds, const std::vector<std::size_t>& rows);

/// Training-split statistics: imputation means, zero-variance drops, z-scoring
/// (sample sd, N - 1) of X and y.
class Standardizer {
public:
  static Standardizer fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

  /// Imputes missing with the stored means, keeps retained columns, z-scores.
  Eigen::MatrixXd transform(const Eigen::MatrixXd& X) const;
  Eigen::VectorXd transform_y(const Eigen::VectorXd& y) const;
  double inverse_y(double z) const { return y_mean_ + y_sd_ * z; }

  const std::vector<std::size_t>& retained() const { return retained_; }
  const std::vector<std::size_t>& dropped() const { return dropped_; }
  nlohmann::ordered_json state() const;

private:
  std::vector<double> mean_;  // per original column
  std::vector<double> sd_;
  std::vector<std::size_t> retained_;
  std::vector<std::size_t> dropped_;
  double y_mean_ = 0.0;
  double y_sd_ = 1.0;
};

struct ScaledDataset {
  Standardizer scaler;
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
};

ScaledDataset standardize(const Dataset& ds);

// ---------------------------------------------------------------------------
// Elastic net: (1/2N) |y - b0 - X b|^2 + lambda (alpha |b|_1 + (1 - alpha)/2 |b|^2)

struct EnetOptions {
  double tol = 1e-7;         // max coefficient change in a full sweep
  int max_sweeps = 10000;
  bool record_objective = false;
};

struct EnetFit {
  Eigen::VectorXd beta;
  double intercept = 0.0;
  int sweeps = 0;
  bool converged = true;  // false: NonConvergence, last iterate returned
  std::vector<double> objective_trace;
};

/// Centered Gram form of one problem; solves at any (alpha, lambda) with warm starts.
class EnetProblem {
public:
  EnetProblem(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

  EnetFit solve(double alpha, double lambda, const Eigen::VectorXd* warm = nullptr,
                const EnetOptions& opts = {}) const;
  /// Smallest lambda at which every coefficient is zero (alpha > 0).
  double lambda_max(double alpha) const;
  double objective(const Eigen::VectorXd& beta, double alpha, double lambda) const;
  std::size_t cols() const { return static_cast<std::size_t>(xty_.size()); }

private:
  Eigen::MatrixXd gram_;  // Xc^T Xc / N
  Eigen::VectorXd xty_;   // Xc^T yc / N
  Eigen::VectorXd x_mean_;
  double y_mean_ = 0.0;
  double yy_ = 0.0;       // yc^T yc / N
};

EnetFit fit_elastic_net(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double alpha, double lambda,
                        const EnetOptions& opts = {});

/// Largest violation of the subgradient optimality conditions.
double enet_kkt_residual(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const EnetFit& fit, double alpha,
                         double lambda);

struct FeatureSelection {
  std::vector<std::size_t> selected;  // column indices with nonzero coefficient at lambda*
  double lambda = 0.0;
  std::vector<double> lambdas;
  std::vector<double> cv_error;
};

/// Elastic net (alpha 0.5) over a 50-point log grid, K-fold CV, ties toward the larger lambda.
FeatureSelection select_features_enet(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::size_t K,
                                      std::uint64_t seed);

// ---------------------------------------------------------------------------
// Model zoo

enum class Selection { BuiltIn, ElasticNetPre };

using Hyper = std::vector<std::pair<std::string, double>>;

double hyper_value(const Hyper& h, std::string_view key);
std::string hyper_string(const Hyper& h);

/// Works on standardized inputs; predictions are on the standardized target scale.
class Regressor {
public:
  virtual ~Regressor() = default;
  virtual void fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) = 0;
  virtual Eigen::VectorXd predict(const Eigen::MatrixXd& X) const = 0;
  virtual nlohmann::ordered_json state() const = 0;
};

struct ModelSpec {
  std::string name;
  Selection selection = Selection::BuiltIn;
  std::vector<Hyper> grid;
  std::function<std::unique_ptr<Regressor>(const Hyper&)> make;
};

/// ols, ridge, lasso, elastic_net, kernel_ridge_rbf, knn, mean.
const std::vector<ModelSpec>& registry();
const ModelSpec& find_model(std::string_view name);
/// The six-model default zoo (registry without `mean`).
std::vector<ModelSpec> default_zoo();
std::vector<ModelSpec> zoo_from_names(const std::vector<std::string>& names);

/// Imputation, scaling and (for ElasticNetPre models) feature pre-selection on
/// one training split. Shared by every model and grid point of that split.
struct PreparedSplit {
  Standardizer scaler;
  Eigen::MatrixXd X;  // standardized retained columns
  Eigen::VectorXd y;
  FeatureSelection selection;  // indices into X's columns
  bool has_selection = false;
};

PreparedSplit prepare_split(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, bool with_selection,
                            std::size_t selection_folds, std::uint64_t seed);

class TrainedPipeline {
public:
  TrainedPipeline(const ModelSpec& spec, const Hyper& hyper, const PreparedSplit& split,
                  const std::vector<std::string>& feature_names);

  /// Raw feature rows in, predictions on the training target scale out.
  Eigen::VectorXd predict(const Eigen::MatrixXd& X) const;
  const std::vector<std::string>& used_features() const { return used_names_; }
  nlohmann::ordered_json state() const;

private:
  std::string name_;
  Hyper hyper_;
  Standardizer scaler_;
  std::vector<std::size_t> columns_;  // into the scaler's retained columns
  std::vector<std::string> used_names_;
  std::unique_ptr<Regressor> model_;
};

/// Fit on train, predict test rows. Throws ColumnMismatch.
Eigen::VectorXd fit_predict(const ModelSpec& spec, const Hyper& hyper, const Dataset& train,
                            const Eigen::MatrixXd& test_X, std::size_t selection_folds = 10,
                            std::uint64_t seed = 0);

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace sweetspot
