#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sweetspot {

/// Discretized functional PCA of one (property, formation) block on a uniform
/// grid over normalized depth [0, 1] with trapezoid quadrature.
struct FpcaModel {
  std::string property;
  std::string formation;
  std::vector<std::string> well_ids;  // row order of `scores`
  Eigen::VectorXd grid;               // n points on [0, 1]
  Eigen::VectorXd weights;            // trapezoid weights
  Eigen::VectorXd mean_curve;         // n
  Eigen::MatrixXd eigenfunctions;     // k_max x n, unit quadrature norm
  Eigen::VectorXd eigenvalues;        // k_max, non-increasing, >= 0
  Eigen::MatrixXd scores;             // N x k_max

  std::size_t k_max() const { return static_cast<std::size_t>(eigenvalues.size()); }
};

Eigen::VectorXd trapezoid_weights(std::size_t n);

/// Throws TooFewWells (N < 3) and DegenerateGrid (n < 2).
FpcaModel fit_fpca(const Eigen::MatrixXd& block);

struct ScoreColumns {
  Eigen::MatrixXd scores;           // N x k
  std::vector<std::string> names;   // <property>_<formation>_fpc<j>
};

/// First k score columns. Throws KOutOfRange unless 1 <= k <= k_max.
ScoreColumns fpca_scores(const FpcaModel& model, std::size_t k);

/// mean + sum_{j<=k} scores_j * phi_j. Throws KOutOfRange.
Eigen::MatrixXd reconstruct(const FpcaModel& model, std::size_t k);

/// Inner product under the model's quadrature.
double quadrature_inner(const Eigen::VectorXd& weights, const Eigen::VectorXd& f, const Eigen::VectorXd& g);

std::string fpca_model_json(const FpcaModel& model);
std::string fpca_scores_csv(const FpcaModel& model);

}  // namespace sweetspot
