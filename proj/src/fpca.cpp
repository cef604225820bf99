#include "sweetspot/fpca.hpp"

#include <sstream>

#include <json.hpp>

#include "sweetspot/error.hpp"
#include "sweetspot/text.hpp"

namespace sweetspot {

Eigen::VectorXd trapezoid_weights(std::size_t n) {
  if (n < 2) throw Error(Errc::DegenerateGrid, "grid needs at least 2 points");
  const double h = 1.0 / static_cast<double>(n - 1);
  Eigen::VectorXd w = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), h);
  w(0) = w(static_cast<Eigen::Index>(n) - 1) = 0.5 * h;
  return w;
}

double quadrature_inner(const Eigen::VectorXd& weights, const Eigen::VectorXd& f, const Eigen::VectorXd& g) {
  return (weights.array() * f.array() * g.array()).sum();
}

FpcaModel fit_fpca(const Eigen::MatrixXd& block) {
  const Eigen::Index N = block.rows();
  const Eigen::Index n = block.cols();
  if (n < 2) throw Error(Errc::DegenerateGrid, "grid needs at least 2 points");
  if (N < 3) throw Error(Errc::TooFewWells, std::to_string(N) + " wells");

  FpcaModel m;
  m.grid = Eigen::VectorXd::LinSpaced(n, 0.0, 1.0);
  m.weights = trapezoid_weights(static_cast<std::size_t>(n));
  m.mean_curve = block.colwise().mean().transpose();
  const Eigen::MatrixXd centered = block.rowwise() - m.mean_curve.transpose();

  // Symmetrized operator W^1/2 (C^T C / (N-1)) W^1/2; eigenfunctions are W^-1/2 u.
  const Eigen::VectorXd sqrt_w = m.weights.cwiseSqrt();
  const Eigen::MatrixXd scaled = centered * sqrt_w.asDiagonal();
  const Eigen::MatrixXd op = (scaled.transpose() * scaled) / static_cast<double>(N - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(op);
  if (solver.info() != Eigen::Success) throw Error(Errc::NonConvergence, "fPCA eigen-decomposition failed");

  const Eigen::Index k_max = std::min(N - 1, n);
  m.eigenvalues.resize(k_max);
  m.eigenfunctions.resize(k_max, n);
  for (Eigen::Index j = 0; j < k_max; ++j) {
    const Eigen::Index src = n - 1 - j;  // solver sorts ascending
    double lambda = solver.eigenvalues()(src);
    if (lambda < 0.0) lambda = 0.0;
    m.eigenvalues(j) = lambda;
    Eigen::VectorXd phi = solver.eigenvectors().col(src).cwiseQuotient(sqrt_w);
    Eigen::Index arg = 0;
    phi.cwiseAbs().maxCoeff(&arg);
    if (phi(arg) < 0.0) phi = -phi;
    m.eigenfunctions.row(j) = phi.transpose();
  }
  m.scores = centered * m.weights.asDiagonal() * m.eigenfunctions.transpose();
  return m;
}

ScoreColumns fpca_scores(const FpcaModel& model, std::size_t k) {
  if (k < 1 || k > model.k_max()) {
    throw Error(Errc::KOutOfRange, "k=" + std::to_string(k) + " outside [1, " + std::to_string(model.k_max()) + "]");
  }
  ScoreColumns out;
  out.scores = model.scores.leftCols(static_cast<Eigen::Index>(k));
  for (std::size_t j = 1; j <= k; ++j) {
    out.names.push_back(model.property + "_" + model.formation + "_fpc" + std::to_string(j));
  }
  return out;
}

Eigen::MatrixXd reconstruct(const FpcaModel& model, std::size_t k) {
  if (k < 1 || k > model.k_max()) {
    throw Error(Errc::KOutOfRange, "k=" + std::to_string(k) + " outside [1, " + std::to_string(model.k_max()) + "]");
  }
  const auto kk = static_cast<Eigen::Index>(k);
  Eigen::MatrixXd out = model.scores.leftCols(kk) * model.eigenfunctions.topRows(kk);
  out.rowwise() += model.mean_curve.transpose();
  return out;
}

std::string fpca_model_json(const FpcaModel& model) {
  const auto vec = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  nlohmann::ordered_json j;
  j["property"] = model.property;
  j["formation"] = model.formation;
  j["n"] = model.grid.size();
  j["wells"] = model.well_ids.size();
  j["mean_curve"] = vec(model.mean_curve);
  j["eigenvalues"] = vec(model.eigenvalues);
  auto& ef = j["eigenfunctions"] = nlohmann::ordered_json::array();
  for (Eigen::Index r = 0; r < model.eigenfunctions.rows(); ++r) {
    ef.push_back(vec(model.eigenfunctions.row(r).transpose()));
  }
  return j.dump() + "\n";
}

std::string fpca_scores_csv(const FpcaModel& model) {
  std::ostringstream os;
  os << "well_id";
  for (std::size_t j = 1; j <= model.k_max(); ++j) os << ",fpc" << j;
  os << '\n';
  for (std::size_t i = 0; i < model.well_ids.size(); ++i) {
    os << model.well_ids[i];
    for (Eigen::Index j = 0; j < model.scores.cols(); ++j) {
      os << ',' << format_double(model.scores(static_cast<Eigen::Index>(i), j));
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace sweetspot
