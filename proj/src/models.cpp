#include "sweetspot/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "sweetspot/error.hpp"
#include "sweetspot/resample.hpp"
#include "sweetspot/text.hpp"

namespace sweetspot {

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  // splitmix64 finalizer over a combined state
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Dataset subset_rows(const Dataset& ds, const std::vector<std::size_t>& rows) {
  Dataset out;
  out.feature_names = ds.feature_names;
  out.log_target = ds.log_target;
  out.X.resize(static_cast<Eigen::Index>(rows.size()), ds.X.cols());
  out.y.resize(static_cast<Eigen::Index>(rows.size()));
  out.y_raw.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto src = static_cast<Eigen::Index>(rows[r]);
    const auto dst = static_cast<Eigen::Index>(r);
    out.X.row(dst) = ds.X.row(src);
    out.y(dst) = ds.y(src);
    out.y_raw(dst) = ds.y_raw.size() ? ds.y_raw(src) : kMissing;
    if (!ds.well_ids.empty()) out.well_ids.push_back(ds.well_ids[rows[r]]);
    if (!ds.coords.empty()) out.coords.push_back(ds.coords[rows[r]]);
  }
  return out;
}

// ---------------------------------------------------------------------------

Standardizer Standardizer::fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  Standardizer s;
  const Eigen::Index N = X.rows();
  s.mean_.assign(static_cast<std::size_t>(X.cols()), 0.0);
  s.sd_.assign(static_cast<std::size_t>(X.cols()), 0.0);
  for (Eigen::Index c = 0; c < X.cols(); ++c) {
    double sum = 0.0;
    Eigen::Index count = 0;
    for (Eigen::Index r = 0; r < N; ++r) {
      if (!is_missing(X(r, c))) {
        sum += X(r, c);
        ++count;
      }
    }
    const auto cc = static_cast<std::size_t>(c);
    if (count == 0) {
      s.dropped_.push_back(cc);
      continue;
    }
    const double mean = sum / static_cast<double>(count);
    double ss = 0.0;
    for (Eigen::Index r = 0; r < N; ++r) {
      const double v = is_missing(X(r, c)) ? mean : X(r, c);
      ss += (v - mean) * (v - mean);
    }
    const double sd = N > 1 ? std::sqrt(ss / static_cast<double>(N - 1)) : 0.0;
    s.mean_[cc] = mean;
    s.sd_[cc] = sd;
    if (sd > 1e-12 * std::max(1.0, std::abs(mean))) {
      s.retained_.push_back(cc);
    } else {
      s.dropped_.push_back(cc);
    }
  }
  s.y_mean_ = y.size() ? y.mean() : 0.0;
  const double yss = (y.array() - s.y_mean_).square().sum();
  const double ysd = y.size() > 1 ? std::sqrt(yss / static_cast<double>(y.size() - 1)) : 0.0;
  s.y_sd_ = ysd > 0.0 ? ysd : 1.0;
  return s;
}

Eigen::MatrixXd Standardizer::transform(const Eigen::MatrixXd& X) const {
  if (static_cast<std::size_t>(X.cols()) != mean_.size()) {
    throw Error(Errc::ColumnMismatch, std::to_string(X.cols()) + " columns, scaler fitted on " +
                                          std::to_string(mean_.size()));
  }
  Eigen::MatrixXd out(X.rows(), static_cast<Eigen::Index>(retained_.size()));
  for (std::size_t k = 0; k < retained_.size(); ++k) {
    const std::size_t c = retained_[k];
    for (Eigen::Index r = 0; r < X.rows(); ++r) {
      const double v = X(r, static_cast<Eigen::Index>(c));
      out(r, static_cast<Eigen::Index>(k)) = ((is_missing(v) ? mean_[c] : v) - mean_[c]) / sd_[c];
    }
  }
  return out;
}

Eigen::VectorXd Standardizer::transform_y(const Eigen::VectorXd& y) const {
  return (y.array() - y_mean_) / y_sd_;
}

nlohmann::ordered_json Standardizer::state() const {
  nlohmann::ordered_json j;
  j["mean"] = mean_;
  j["sd"] = sd_;
  j["retained"] = retained_;
  j["y_mean"] = y_mean_;
  j["y_sd"] = y_sd_;
  return j;
}

ScaledDataset standardize(const Dataset& ds) {
  ScaledDataset out{Standardizer::fit(ds.X, ds.y), {}, {}};
  out.X = out.scaler.transform(ds.X);
  out.y = out.scaler.transform_y(ds.y);
  return out;
}

// ---------------------------------------------------------------------------

EnetProblem::EnetProblem(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  const double n = static_cast<double>(X.rows());
  x_mean_ = X.colwise().mean().transpose();
  y_mean_ = y.mean();
  const Eigen::MatrixXd xc = X.rowwise() - x_mean_.transpose();
  const Eigen::VectorXd yc = y.array() - y_mean_;
  gram_ = (xc.transpose() * xc) / n;
  xty_ = (xc.transpose() * yc) / n;
  yy_ = yc.squaredNorm() / n;
}

double EnetProblem::lambda_max(double alpha) const {
  if (xty_.size() == 0) return 0.0;
  return xty_.cwiseAbs().maxCoeff() / std::max(alpha, 1e-3);
}

double EnetProblem::objective(const Eigen::VectorXd& beta, double alpha, double lambda) const {
  const double fit = 0.5 * yy_ - beta.dot(xty_) + 0.5 * beta.dot(gram_ * beta);
  return fit + lambda * (alpha * beta.cwiseAbs().sum() + 0.5 * (1.0 - alpha) * beta.squaredNorm());
}

namespace {

double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

}  // namespace

EnetFit EnetProblem::solve(double alpha, double lambda, const Eigen::VectorXd* warm,
                           const EnetOptions& opts) const {
  const Eigen::Index p = xty_.size();
  EnetFit fit;
  fit.beta = warm ? *warm : Eigen::VectorXd::Zero(p);
  Eigen::VectorXd g = gram_ * fit.beta;  // maintained G * beta
  const double l1 = lambda * alpha;
  const double l2 = lambda * (1.0 - alpha);

  auto sweep = [&](bool active_only) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      const double old = fit.beta(j);
      if (active_only && old == 0.0) continue;
      const double gjj = gram_(j, j);
      const double denom = gjj + l2;
      const double rho = xty_(j) - g(j) + gjj * old;
      const double updated = denom > 0.0 ? soft_threshold(rho, l1) / denom : 0.0;
      const double delta = updated - old;
      if (delta != 0.0) {
        g.noalias() += delta * gram_.col(j);
        fit.beta(j) = updated;
        max_change = std::max(max_change, std::abs(delta));
      }
    }
    ++fit.sweeps;
    if (opts.record_objective) fit.objective_trace.push_back(objective(fit.beta, alpha, lambda));
    return max_change;
  };

  // Active-set steps: minimize the quadratic on the current support with fixed signs, moving
  // only as far as the first sign change and pinning that coordinate at zero. One factorization
  // serves all steps; pinned coordinates enter through a bordered correction. Every step lowers
  // the objective; returns true when the reached point satisfies the optimality conditions.
  auto polish = [&]() {
    std::vector<Eigen::Index> active;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (fit.beta(j) != 0.0) active.push_back(j);
    }
    const auto a = static_cast<Eigen::Index>(active.size());
    if (a == 0) return false;
    Eigen::MatrixXd h(a, a);
    Eigen::VectorXd rhs(a), cur(a);
    for (Eigen::Index r = 0; r < a; ++r) {
      const Eigen::Index j = active[static_cast<std::size_t>(r)];
      for (Eigen::Index c = 0; c < a; ++c) h(r, c) = gram_(j, active[static_cast<std::size_t>(c)]);
      h(r, r) += l2;
      rhs(r) = xty_(j) - l1 * (fit.beta(j) > 0.0 ? 1.0 : -1.0);
      cur(r) = fit.beta(j);
    }
    const Eigen::LLT<Eigen::MatrixXd> llt(h);
    std::optional<Eigen::LDLT<Eigen::MatrixXd>> ldlt;
    if (llt.info() != Eigen::Success) {
      ldlt.emplace(h);
      if (ldlt->info() != Eigen::Success) return false;
    }
    auto solve_h = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
      if (ldlt) return ldlt->solve(v);
      return llt.solve(v);
    };
    const Eigen::VectorXd b0 = solve_h(rhs);
    const double scale = 1.0 + rhs.cwiseAbs().maxCoeff();
    if (!b0.allFinite() || (h * b0 - rhs).cwiseAbs().maxCoeff() > 1e-10 * scale) return false;

    std::vector<Eigen::Index> pinned;
    Eigen::MatrixXd z(a, 0);  // columns H^-1 e_d for pinned d
    for (Eigen::Index step = 0; step <= a; ++step) {
      Eigen::VectorXd b = b0;
      if (!pinned.empty()) {
        const auto d = static_cast<Eigen::Index>(pinned.size());
        Eigen::MatrixXd zdd(d, d);
        Eigen::VectorXd b0d(d);
        for (Eigen::Index r = 0; r < d; ++r) {
          b0d(r) = b0(pinned[static_cast<std::size_t>(r)]);
          for (Eigen::Index c = 0; c < d; ++c) zdd(r, c) = z(pinned[static_cast<std::size_t>(r)], c);
        }
        b -= z * zdd.ldlt().solve(b0d);
        for (Eigen::Index r : pinned) b(r) = 0.0;
        if (!b.allFinite()) return false;
      }

      double t = 1.0;
      Eigen::Index blocking = -1;
      for (Eigen::Index r = 0; r < a; ++r) {
        if (cur(r) == 0.0) continue;
        if ((b(r) > 0.0) != (cur(r) > 0.0) || b(r) == 0.0) {
          const double tr = cur(r) / (cur(r) - b(r));
          if (tr < t) {
            t = tr;
            blocking = r;
          }
        }
      }
      cur += t * (b - cur);
      if (blocking >= 0) {
        cur(blocking) = 0.0;
        pinned.push_back(blocking);
        z.conservativeResize(Eigen::NoChange, z.cols() + 1);
        z.col(z.cols() - 1) = solve_h(Eigen::VectorXd::Unit(a, blocking));
      }
      for (Eigen::Index r = 0; r < a; ++r) fit.beta(active[static_cast<std::size_t>(r)]) = cur(r);
      if (opts.record_objective) fit.objective_trace.push_back(objective(fit.beta, alpha, lambda));
      if (blocking < 0) break;
    }
    g = gram_ * fit.beta;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (fit.beta(j) == 0.0 && std::abs(xty_(j) - g(j)) > l1 + 1e-12 * scale) return false;
    }
    return true;
  };

  constexpr std::size_t kPolishEvery = 10;
  fit.converged = false;
  while (fit.sweeps < opts.max_sweeps) {
    if (sweep(false) < opts.tol) {
      fit.converged = true;
      break;
    }
    if (polish()) continue;
    std::size_t since_polish = 0;
    while (fit.sweeps < opts.max_sweeps && sweep(true) >= opts.tol) {
      if (++since_polish == kPolishEvery) {
        since_polish = 0;
        if (polish()) break;
      }
    }
  }
  fit.intercept = y_mean_ - x_mean_.dot(fit.beta);
  return fit;
}

EnetFit fit_elastic_net(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double alpha, double lambda,
                        const EnetOptions& opts) {
  return EnetProblem(X, y).solve(alpha, lambda, nullptr, opts);
}

double enet_kkt_residual(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const EnetFit& fit, double alpha,
                         double lambda) {
  const double n = static_cast<double>(X.rows());
  const Eigen::VectorXd r = ((y - X * fit.beta).array() - fit.intercept).matrix();
  double worst = std::abs(r.sum()) / n;  // intercept stationarity
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double grad = X.col(j).dot(r) / n - (1.0 - alpha) * lambda * fit.beta(j);
    const double b = fit.beta(j);
    const double v = b == 0.0 ? std::max(0.0, std::abs(grad) - alpha * lambda)
                              : std::abs(grad - alpha * lambda * (b > 0 ? 1.0 : -1.0));
    worst = std::max(worst, v);
  }
  return worst;
}

FeatureSelection select_features_enet(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::size_t K,
                                      std::uint64_t seed) {
  constexpr double kAlpha = 0.5;
  constexpr std::size_t kGrid = 50;
  const std::size_t N = static_cast<std::size_t>(X.rows());
  FeatureSelection out;
  if (X.cols() == 0) return out;
  K = std::clamp<std::size_t>(K, 2, std::max<std::size_t>(N / 2, 2));

  const EnetProblem full(X, y);
  const double lmax = full.lambda_max(kAlpha);
  if (!(lmax > 0.0)) return out;
  for (std::size_t i = 0; i < kGrid; ++i) {
    out.lambdas.push_back(lmax * std::pow(1e-3, static_cast<double>(i) / static_cast<double>(kGrid - 1)));
  }

  const ResamplePlan plan = make_plan(N, K, 1, seed);
  out.cv_error.assign(kGrid, 0.0);
  for (std::size_t k = 0; k < K; ++k) {
    const auto train = plan.train_rows(0, k);
    const auto test = plan.test_rows(0, k);
    Eigen::MatrixXd xt(static_cast<Eigen::Index>(train.size()), X.cols());
    Eigen::VectorXd yt(static_cast<Eigen::Index>(train.size()));
    for (std::size_t r = 0; r < train.size(); ++r) {
      xt.row(static_cast<Eigen::Index>(r)) = X.row(static_cast<Eigen::Index>(train[r]));
      yt(static_cast<Eigen::Index>(r)) = y(static_cast<Eigen::Index>(train[r]));
    }
    const EnetProblem prob(xt, yt);
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(X.cols());
    for (std::size_t g = 0; g < kGrid; ++g) {
      const EnetFit fit = prob.solve(kAlpha, out.lambdas[g], &beta);
      beta = fit.beta;
      double sse = 0.0;
      for (std::size_t r : test) {
        const double pred = fit.intercept + X.row(static_cast<Eigen::Index>(r)).dot(beta);
        const double e = y(static_cast<Eigen::Index>(r)) - pred;
        sse += e * e;
      }
      out.cv_error[g] += sse / static_cast<double>(test.size()) / static_cast<double>(K);
    }
  }

  std::size_t best = 0;
  for (std::size_t g = 1; g < kGrid; ++g) {
    if (out.cv_error[g] < out.cv_error[best]) best = g;
  }
  out.lambda = out.lambdas[best];

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(X.cols());
  for (std::size_t g = 0; g <= best; ++g) beta = full.solve(kAlpha, out.lambdas[g], &beta).beta;
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    if (beta(j) != 0.0) out.selected.push_back(static_cast<std::size_t>(j));
  }
  return out;
}

// ---------------------------------------------------------------------------

double hyper_value(const Hyper& h, std::string_view key) {
  for (const auto& [k, v] : h) {
    if (k == key) return v;
  }
  throw Error(Errc::ConfigInvalid, "missing hyperparameter " + std::string(key));
}

std::string hyper_string(const Hyper& h) {
  std::string out;
  for (const auto& [k, v] : h) {
    if (!out.empty()) out += ",";
    out += k + "=" + format_double(v);
  }
  return out;
}

namespace {

nlohmann::ordered_json vec_json(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

class MeanModel final : public Regressor {
public:
  void fit(const Eigen::MatrixXd&, const Eigen::VectorXd& y) override { mean_ = y.size() ? y.mean() : 0.0; }
  Eigen::VectorXd predict(const Eigen::MatrixXd& X) const override {
    return Eigen::VectorXd::Constant(X.rows(), mean_);
  }
  nlohmann::ordered_json state() const override { return {{"mean", mean_}}; }

private:
  double mean_ = 0.0;
};

class LinearModel : public Regressor {
public:
  Eigen::VectorXd predict(const Eigen::MatrixXd& X) const override {
    return (X * beta_).array() + intercept_;
  }
  nlohmann::ordered_json state() const override { return {{"intercept", intercept_}, {"beta", vec_json(beta_)}}; }

protected:
  Eigen::VectorXd beta_;
  double intercept_ = 0.0;
};

class OlsModel final : public LinearModel {
public:
  void fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) override {
    const Eigen::RowVectorXd xm = X.colwise().mean();
    const double ym = y.mean();
    const Eigen::MatrixXd xc = X.rowwise() - xm;
    beta_ = xc.completeOrthogonalDecomposition().solve((y.array() - ym).matrix());
    intercept_ = ym - xm.dot(beta_);
  }
};

class RidgeModel final : public LinearModel {
public:
  explicit RidgeModel(double lambda) : lambda_(lambda) {}
  void fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) override {
    const double n = static_cast<double>(X.rows());
    const Eigen::RowVectorXd xm = X.colwise().mean();
    const double ym = y.mean();
    const Eigen::MatrixXd xc = X.rowwise() - xm;
    Eigen::MatrixXd a = xc.transpose() * xc / n;
    a.diagonal().array() += lambda_;
    beta_ = a.llt().solve(xc.transpose() * (y.array() - ym).matrix() / n);
    intercept_ = ym - xm.dot(beta_);
  }

private:
  double lambda_;
};

// lambda expressed as a fraction of the training lambda_max
class ElasticNetModel final : public LinearModel {
public:
  ElasticNetModel(double alpha, double ratio) : alpha_(alpha), ratio_(ratio) {}
  void fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) override {
    const EnetProblem prob(X, y);
    const double lambda = ratio_ * prob.lambda_max(alpha_);
    const EnetFit f = prob.solve(alpha_, lambda);
    beta_ = f.beta;
    intercept_ = f.intercept;
  }

private:
  double alpha_;
  double ratio_;
};

double squared_distance(const Eigen::MatrixXd& a, Eigen::Index i, const Eigen::MatrixXd& b, Eigen::Index j) {
  return (a.row(i) - b.row(j)).squaredNorm();
}

class KernelRidgeModel final : public Regressor {
public:
  KernelRidgeModel(double lambda, double bandwidth) : lambda_(lambda), bandwidth_(bandwidth) {}
  void fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) override {
    train_ = X;
    mean_ = y.mean();
    const double p = std::max<double>(1.0, static_cast<double>(X.cols()));
    gamma_ = 1.0 / (2.0 * bandwidth_ * bandwidth_ * p);
    Eigen::MatrixXd k = gram(X, X);
    k.diagonal().array() += lambda_;
    dual_ = k.llt().solve((y.array() - mean_).matrix());
  }
  Eigen::VectorXd predict(const Eigen::MatrixXd& X) const override {
    return (gram(X, train_) * dual_).array() + mean_;
  }
  nlohmann::ordered_json state() const override {
    return {{"gamma", gamma_}, {"mean", mean_}, {"dual", vec_json(dual_)}};
  }

private:
  Eigen::MatrixXd gram(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) const {
    Eigen::MatrixXd k(a.rows(), b.rows());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index j = 0; j < b.rows(); ++j) k(i, j) = std::exp(-gamma_ * squared_distance(a, i, b, j));
    }
    return k;
  }

  double lambda_, bandwidth_;
  double gamma_ = 1.0;
  double mean_ = 0.0;
  Eigen::MatrixXd train_;
  Eigen::VectorXd dual_;
};

class KnnModel final : public Regressor {
public:
  explicit KnnModel(double k) : k_(static_cast<std::size_t>(k)) {}
  void fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) override {
    train_ = X;
    y_ = y;
  }
  Eigen::VectorXd predict(const Eigen::MatrixXd& X) const override {
    const std::size_t n = static_cast<std::size_t>(train_.rows());
    const std::size_t k = std::min(k_, n);
    Eigen::VectorXd out(X.rows());
    std::vector<std::size_t> idx(n);
    std::vector<double> d(n);
    for (Eigen::Index r = 0; r < X.rows(); ++r) {
      for (std::size_t i = 0; i < n; ++i) d[i] = squared_distance(X, r, train_, static_cast<Eigen::Index>(i));
      std::iota(idx.begin(), idx.end(), 0);
      std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                        [&](std::size_t a, std::size_t b) { return d[a] < d[b] || (d[a] == d[b] && a < b); });
      double sum = 0.0;
      for (std::size_t i = 0; i < k; ++i) sum += y_(static_cast<Eigen::Index>(idx[i]));
      out(r) = sum / static_cast<double>(k);
    }
    return out;
  }
  nlohmann::ordered_json state() const override { return {{"k", k_}, {"rows", train_.rows()}}; }

private:
  std::size_t k_;
  Eigen::MatrixXd train_;
  Eigen::VectorXd y_;
};

std::vector<Hyper> single(const std::string& key, const std::vector<double>& values) {
  std::vector<Hyper> grid;
  for (double v : values) grid.push_back({{key, v}});
  return grid;
}

const std::vector<double> kRatioGrid{0.5, 0.3, 0.2, 0.1, 0.05, 0.02, 0.01};

std::vector<ModelSpec> build_registry() {
  std::vector<ModelSpec> r;
  r.push_back({"ols", Selection::ElasticNetPre, {Hyper{}},
               [](const Hyper&) { return std::make_unique<OlsModel>(); }});
  r.push_back({"ridge", Selection::ElasticNetPre, single("lambda", {0.01, 0.03, 0.1, 0.3, 1.0, 3.0, 10.0}),
               [](const Hyper& h) { return std::make_unique<RidgeModel>(hyper_value(h, "lambda")); }});
  r.push_back({"lasso", Selection::BuiltIn, single("lambda_ratio", kRatioGrid), [](const Hyper& h) {
                 return std::make_unique<ElasticNetModel>(1.0, hyper_value(h, "lambda_ratio"));
               }});
  std::vector<Hyper> enet_grid;
  for (double a : {0.25, 0.5, 0.75}) {
    for (double ratio : kRatioGrid) enet_grid.push_back({{"alpha", a}, {"lambda_ratio", ratio}});
  }
  r.push_back({"elastic_net", Selection::BuiltIn, enet_grid, [](const Hyper& h) {
                 return std::make_unique<ElasticNetModel>(hyper_value(h, "alpha"), hyper_value(h, "lambda_ratio"));
               }});
  std::vector<Hyper> krr_grid;
  for (double l : {1e-3, 1e-2, 1e-1, 1.0}) {
    for (double bw : {0.5, 1.0, 2.0, 4.0}) krr_grid.push_back({{"lambda", l}, {"bandwidth", bw}});
  }
  r.push_back({"kernel_ridge_rbf", Selection::ElasticNetPre, krr_grid, [](const Hyper& h) {
                 return std::make_unique<KernelRidgeModel>(hyper_value(h, "lambda"), hyper_value(h, "bandwidth"));
               }});
  r.push_back({"knn", Selection::ElasticNetPre, single("k", {3, 5, 7, 9}),
               [](const Hyper& h) { return std::make_unique<KnnModel>(hyper_value(h, "k")); }});
  r.push_back({"mean", Selection::BuiltIn, {Hyper{}}, [](const Hyper&) { return std::make_unique<MeanModel>(); }});
  return r;
}

}  // namespace

const std::vector<ModelSpec>& registry() {
  static const std::vector<ModelSpec> r = build_registry();
  return r;
}

const ModelSpec& find_model(std::string_view name) {
  for (const auto& m : registry()) {
    if (m.name == name) return m;
  }
  throw Error(Errc::ConfigInvalid, "unknown model '" + std::string(name) + "'");
}

std::vector<ModelSpec> default_zoo() {
  std::vector<ModelSpec> zoo;
  for (const auto& m : registry()) {
    if (m.name != "mean") zoo.push_back(m);
  }
  return zoo;
}

std::vector<ModelSpec> zoo_from_names(const std::vector<std::string>& names) {
  if (names.empty()) return default_zoo();
  std::vector<ModelSpec> zoo;
  for (const auto& n : names) zoo.push_back(find_model(n));
  return zoo;
}

PreparedSplit prepare_split(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, bool with_selection,
                            std::size_t selection_folds, std::uint64_t seed) {
  PreparedSplit s;
  s.scaler = Standardizer::fit(X, y);
  s.X = s.scaler.transform(X);
  s.y = s.scaler.transform_y(y);
  if (with_selection) {
    s.selection = select_features_enet(s.X, s.y, selection_folds, seed);
    s.has_selection = true;
  }
  return s;
}

TrainedPipeline::TrainedPipeline(const ModelSpec& spec, const Hyper& hyper, const PreparedSplit& split,
                                 const std::vector<std::string>& feature_names)
    : name_(spec.name), hyper_(hyper), scaler_(split.scaler) {
  if (spec.selection == Selection::ElasticNetPre) {
    if (!split.has_selection) throw Error(Errc::ConfigInvalid, spec.name + " needs a pre-selected split");
    columns_ = split.selection.selected;
  } else {
    columns_.resize(static_cast<std::size_t>(split.X.cols()));
    std::iota(columns_.begin(), columns_.end(), 0);
  }
  for (std::size_t c : columns_) {
    const std::size_t original = scaler_.retained()[c];
    used_names_.push_back(original < feature_names.size() ? feature_names[original] : "x" + std::to_string(original));
  }
  Eigen::MatrixXd xs(split.X.rows(), static_cast<Eigen::Index>(columns_.size()));
  for (std::size_t k = 0; k < columns_.size(); ++k) {
    xs.col(static_cast<Eigen::Index>(k)) = split.X.col(static_cast<Eigen::Index>(columns_[k]));
  }
  model_ = columns_.empty() ? std::make_unique<MeanModel>() : spec.make(hyper);
  model_->fit(xs, split.y);
}

Eigen::VectorXd TrainedPipeline::predict(const Eigen::MatrixXd& X) const {
  const Eigen::MatrixXd scaled = scaler_.transform(X);
  Eigen::MatrixXd xs(scaled.rows(), static_cast<Eigen::Index>(columns_.size()));
  for (std::size_t k = 0; k < columns_.size(); ++k) {
    xs.col(static_cast<Eigen::Index>(k)) = scaled.col(static_cast<Eigen::Index>(columns_[k]));
  }
  Eigen::VectorXd z = model_->predict(xs);
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = scaler_.inverse_y(z(i));
  return z;
}

nlohmann::ordered_json TrainedPipeline::state() const {
  nlohmann::ordered_json j;
  j["model"] = name_;
  j["hyperparameters"] = hyper_string(hyper_);
  j["features"] = used_names_;
  j["scaling"] = scaler_.state();
  j["fit"] = model_->state();
  return j;
}

Eigen::VectorXd fit_predict(const ModelSpec& spec, const Hyper& hyper, const Dataset& train,
                            const Eigen::MatrixXd& test_X, std::size_t selection_folds, std::uint64_t seed) {
  if (test_X.cols() != train.X.cols()) {
    throw Error(Errc::ColumnMismatch, "test has " + std::to_string(test_X.cols()) + " columns, train " +
                                          std::to_string(train.X.cols()));
  }
  const PreparedSplit split =
      prepare_split(train.X, train.y, spec.selection == Selection::ElasticNetPre, selection_folds, seed);
  return TrainedPipeline(spec, hyper, split, train.feature_names).predict(test_X);
}

}  // namespace sweetspot
