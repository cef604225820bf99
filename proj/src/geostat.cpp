#include "sweetspot/geostat.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "sweetspot/error.hpp"
#include "sweetspot/text.hpp"

namespace sweetspot {

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

void SpatialSamples::add(std::string id, Point p, double value) {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (distance(points_[i], p) < kCoincident) {
      ++counts_[i];
      values_[i] += (value - values_[i]) / static_cast<double>(counts_[i]);
      return;
    }
  }
  ids_.push_back(std::move(id));
  points_.push_back(p);
  values_.push_back(value);
  counts_.push_back(1);
}

std::string_view family_name(VariogramFamily f) {
  switch (f) {
    case VariogramFamily::Spherical: return "spherical";
    case VariogramFamily::Exponential: return "exponential";
    case VariogramFamily::Gaussian: return "gaussian";
  }
  return "exponential";
}

VariogramFamily parse_family(std::string_view name) {
  const std::string n = to_lower(name);
  if (n == "spherical") return VariogramFamily::Spherical;
  if (n == "exponential") return VariogramFamily::Exponential;
  if (n == "gaussian") return VariogramFamily::Gaussian;
  throw Error(Errc::ConfigInvalid, "unknown variogram family '" + std::string(name) + "'");
}

double VariogramModel::operator()(double h) const {
  if (h <= 0.0) return 0.0;
  const double r = h / range;
  double structure = 1.0;
  switch (family) {
    case VariogramFamily::Spherical:
      structure = r >= 1.0 ? 1.0 : 1.5 * r - 0.5 * r * r * r;
      break;
    case VariogramFamily::Exponential:
      structure = 1.0 - std::exp(-r);
      break;
    case VariogramFamily::Gaussian:
      structure = 1.0 - std::exp(-r * r);
      break;
  }
  return nugget + partial_sill * structure;
}

namespace {

double default_max_dist(const SpatialSamples& s) {
  double dmax = 0.0;
  const auto& p = s.points();
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) dmax = std::max(dmax, distance(p[i], p[j]));
  }
  return 0.5 * dmax;
}

std::vector<EmpiricalPoint> finish_bins(const std::vector<double>& lag_sum, const std::vector<double>& gamma_sum,
                                        const std::vector<std::size_t>& count) {
  std::vector<EmpiricalPoint> out;
  for (std::size_t b = 0; b < count.size(); ++b) {
    if (count[b] == 0) continue;
    const double n = static_cast<double>(count[b]);
    out.push_back({lag_sum[b] / n, gamma_sum[b] / n, count[b]});
  }
  return out;
}

std::size_t bin_of(double h, double width, std::size_t n_bins) {
  const auto b = static_cast<std::size_t>(std::ceil(h / width)) - 1;
  return std::min(b, n_bins - 1);
}

}  // namespace

std::vector<EmpiricalPoint> empirical_variogram(const SpatialSamples& s, std::size_t n_bins, double max_dist,
                                                Exec exec) {
  if (s.size() < 2) throw Error(Errc::TooFewSamples, "empirical variogram needs at least 2 samples");
  if (n_bins == 0) throw Error(Errc::ConfigInvalid, "n_bins must be positive");
  if (max_dist <= 0.0) max_dist = default_max_dist(s);
  const double width = max_dist / static_cast<double>(n_bins);
  const auto& p = s.points();
  const auto& v = s.values();
  const auto n = static_cast<std::ptrdiff_t>(p.size());

  // Per-row partial bins, reduced afterwards in row order so the result does
  // not depend on the thread count.
  std::vector<double> row_lag(p.size() * n_bins, 0.0);
  std::vector<double> row_gamma(p.size() * n_bins, 0.0);
  std::vector<std::size_t> row_count(p.size() * n_bins, 0);

#pragma omp parallel for schedule(dynamic, 4) if (exec == Exec::Parallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const std::size_t base = static_cast<std::size_t>(i) * n_bins;
    for (std::ptrdiff_t j = i + 1; j < n; ++j) {
      const double h = distance(p[i], p[j]);
      if (h <= 0.0 || h > max_dist) continue;
      const std::size_t b = base + bin_of(h, width, n_bins);
      const double d = v[i] - v[j];
      row_lag[b] += h;
      row_gamma[b] += 0.5 * d * d;
      ++row_count[b];
    }
  }

  std::vector<double> lag_sum(n_bins, 0.0), gamma_sum(n_bins, 0.0);
  std::vector<std::size_t> count(n_bins, 0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t b = 0; b < n_bins; ++b) {
      lag_sum[b] += row_lag[i * n_bins + b];
      gamma_sum[b] += row_gamma[i * n_bins + b];
      count[b] += row_count[i * n_bins + b];
    }
  }
  return finish_bins(lag_sum, gamma_sum, count);
}

namespace reference {

std::vector<EmpiricalPoint> empirical_variogram(const SpatialSamples& s, std::size_t n_bins, double max_dist) {
  if (s.size() < 2) throw Error(Errc::TooFewSamples, "empirical variogram needs at least 2 samples");
  if (max_dist <= 0.0) max_dist = default_max_dist(s);
  const double width = max_dist / static_cast<double>(n_bins);
  std::vector<double> lag_sum(n_bins, 0.0), gamma_sum(n_bins, 0.0);
  std::vector<std::size_t> count(n_bins, 0);
  const auto& p = s.points();
  const auto& v = s.values();
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      const double h = distance(p[i], p[j]);
      if (h <= 0.0 || h > max_dist) continue;
      const std::size_t b = bin_of(h, width, n_bins);
      lag_sum[b] += h;
      gamma_sum[b] += 0.5 * (v[i] - v[j]) * (v[i] - v[j]);
      ++count[b];
    }
  }
  return finish_bins(lag_sum, gamma_sum, count);
}

}  // namespace reference

namespace {

using Params = std::array<double, 3>;

template <class F>
Params nelder_mead(F&& f, Params start, const Params& step, int max_iter, double& best_value) {
  constexpr std::size_t D = 3;
  std::array<Params, D + 1> simplex;
  std::array<double, D + 1> fv{};
  simplex[0] = start;
  for (std::size_t i = 0; i < D; ++i) {
    simplex[i + 1] = start;
    simplex[i + 1][i] += step[i];
  }
  for (std::size_t i = 0; i <= D; ++i) fv[i] = f(simplex[i]);

  for (int iter = 0; iter < max_iter; ++iter) {
    std::array<std::size_t, D + 1> order{};
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = order[0], worst = order[D], second = order[D - 1];

    double diameter = 0.0;
    for (std::size_t i = 1; i <= D; ++i) {
      for (std::size_t k = 0; k < D; ++k) {
        diameter = std::max(diameter, std::abs(simplex[order[i]][k] - simplex[best][k]));
      }
    }
    if (diameter < 1e-11 && fv[worst] - fv[best] <= 1e-15 * (std::abs(fv[best]) + 1e-300)) break;

    Params centroid{};
    for (std::size_t i = 0; i < D; ++i) {
      for (std::size_t k = 0; k < D; ++k) centroid[k] += simplex[order[i]][k] / D;
    }
    auto along = [&](double t) {
      Params p{};
      for (std::size_t k = 0; k < D; ++k) p[k] = centroid[k] + t * (simplex[worst][k] - centroid[k]);
      return p;
    };

    const Params reflected = along(-1.0);
    const double fr = f(reflected);
    if (fr < fv[best]) {
      const Params expanded = along(-2.0);
      const double fe = f(expanded);
      if (fe < fr) {
        simplex[worst] = expanded;
        fv[worst] = fe;
      } else {
        simplex[worst] = reflected;
        fv[worst] = fr;
      }
    } else if (fr < fv[second]) {
      simplex[worst] = reflected;
      fv[worst] = fr;
    } else {
      const Params contracted = fr < fv[worst] ? along(-0.5) : along(0.5);
      const double fc = f(contracted);
      if (fc < std::min(fr, fv[worst])) {
        simplex[worst] = contracted;
        fv[worst] = fc;
      } else {
        for (std::size_t i = 1; i <= D; ++i) {
          const std::size_t idx = order[i];
          for (std::size_t k = 0; k < D; ++k) {
            simplex[idx][k] = simplex[best][k] + 0.5 * (simplex[idx][k] - simplex[best][k]);
          }
          fv[idx] = f(simplex[idx]);
        }
      }
    }
  }
  const auto best = static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
  best_value = fv[best];
  return simplex[best];
}

VariogramFit pure_nugget(const std::vector<EmpiricalPoint>& emp, VariogramFamily family) {
  double wsum = 0.0, gsum = 0.0, max_lag = 0.0;
  for (const auto& e : emp) {
    wsum += static_cast<double>(e.pairs);
    gsum += static_cast<double>(e.pairs) * e.gamma;
    max_lag = std::max(max_lag, e.lag);
  }
  VariogramFit fit;
  fit.model = VariogramModel{family, wsum > 0 ? gsum / wsum : 0.0, 0.0, max_lag > 0 ? max_lag : 1.0};
  fit.degenerate = true;
  return fit;
}

}  // namespace

VariogramFit fit_variogram(const std::vector<EmpiricalPoint>& emp, VariogramFamily family) {
  if (emp.size() < 3) return pure_nugget(emp, family);
  double gmin = std::numeric_limits<double>::infinity(), gmax = 0.0;
  double min_lag = std::numeric_limits<double>::infinity(), max_lag = 0.0;
  for (const auto& e : emp) {
    gmin = std::min(gmin, e.gamma);
    gmax = std::max(gmax, e.gamma);
    min_lag = std::min(min_lag, e.lag);
    max_lag = std::max(max_lag, e.lag);
  }
  if (gmax - gmin <= 1e-12 * std::max(gmax, 1e-300) || max_lag <= 0.0) return pure_nugget(emp, family);

  // Optimise in units of (max gamma, max lag) so the simplex is well scaled.
  const double gscale = gmax;
  const double lscale = max_lag;
  const double rmin = min_lag / lscale, rmax = 2.0;
  auto project = [&](Params p) {
    p[0] = std::max(p[0], 0.0);
    p[1] = std::max(p[1], 0.0);
    p[2] = std::clamp(p[2], rmin, rmax);
    return p;
  };
  auto to_model = [&](const Params& p) {
    return VariogramModel{family, p[0] * gscale, p[1] * gscale, p[2] * lscale};
  };
  auto loss = [&](const Params& raw) {
    const VariogramModel m = to_model(project(raw));
    double l = 0.0;
    for (const auto& e : emp) {
      const double w = static_cast<double>(e.pairs) / (e.lag * e.lag) * lscale * lscale;
      const double r = (e.gamma - m(e.lag)) / gscale;
      l += w * r * r;
    }
    return l;
  };

  const double first_gamma = emp.front().gamma / gscale;
  VariogramFit best;
  best.loss = std::numeric_limits<double>::infinity();
  for (double nug : {0.0, 0.5 * first_gamma}) {
    for (double sill : {1.0, 0.5}) {
      for (double range : {0.1, 0.25, 0.5, 1.0}) {
        Params start = project({nug, std::max(sill - nug, 0.05), std::max(range, rmin)});
        const Params step{0.1, 0.1 * std::max(start[1], 0.1), 0.1 * start[2]};
        double value = 0.0;
        Params p = nelder_mead(loss, start, step, 3000, value);
        p = project(p);
        const Params restep{std::max(0.01 * p[0], 1e-3), std::max(0.01 * p[1], 1e-3), 0.01 * p[2]};
        p = project(nelder_mead(loss, p, restep, 3000, value));
        value = loss(p);
        if (value < best.loss) {
          best.loss = value;
          best.model = to_model(p);
        }
      }
    }
  }
  best.loss *= gscale * gscale / (lscale * lscale);
  return best;
}

namespace {

std::vector<std::size_t> nearest(const SpatialSamples& s, const Point& target, std::size_t m) {
  std::vector<std::size_t> idx(s.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<double> d(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) d[i] = distance(s.points()[i], target);
  m = std::min(m, s.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(m), idx.end(),
                    [&](std::size_t a, std::size_t b) { return d[a] < d[b] || (d[a] == d[b] && a < b); });
  idx.resize(m);
  return idx;
}

double idw_one(const SpatialSamples& s, const Point& t, double power) {
  double wsum = 0.0, vsum = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double d = distance(s.points()[i], t);
    if (d < SpatialSamples::kCoincident) return s.values()[i];
    const double w = std::pow(d, -power);
    wsum += w;
    vsum += w * s.values()[i];
  }
  return vsum / wsum;
}

}  // namespace

KrigingWeights kriging_weights(const SpatialSamples& s, const VariogramModel& vm, const Point& target,
                               std::size_t neighbors) {
  if (s.empty()) throw Error(Errc::NoSamples, "kriging needs at least one sample");
  KrigingWeights out;
  out.indices = nearest(s, target, std::max<std::size_t>(neighbors, 1));
  const std::size_t m = out.indices.size();
  if (m == 1) {
    out.weights = {1.0};
    return out;
  }
  Eigen::MatrixXd a(m + 1, m + 1);
  Eigen::VectorXd rhs(m + 1);
  for (std::size_t i = 0; i < m; ++i) {
    const Point& pi = s.points()[out.indices[i]];
    for (std::size_t j = 0; j < m; ++j) a(i, j) = vm(distance(pi, s.points()[out.indices[j]]));
    a(i, m) = 1.0;
    a(m, i) = 1.0;
    rhs(i) = vm(distance(pi, target));
  }
  a(m, m) = 0.0;
  rhs(m) = 1.0;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-12)) {
    out.singular = true;
    return out;
  }
  const Eigen::VectorXd sol = lu.solve(rhs);
  out.weights.assign(sol.data(), sol.data() + m);
  out.lagrange = sol(m);
  return out;
}

std::vector<KrigingEstimate> krige(const SpatialSamples& s, const VariogramModel& vm,
                                   const std::vector<Point>& targets, const KrigingOptions& opts) {
  if (s.empty()) throw Error(Errc::NoSamples, "kriging needs at least one sample");
  std::vector<KrigingEstimate> out(targets.size());
  const auto n = static_cast<std::ptrdiff_t>(targets.size());
#pragma omp parallel for schedule(dynamic, 8) if (opts.exec == Exec::Parallel)
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    const Point& target = targets[static_cast<std::size_t>(t)];
    const KrigingWeights kw = kriging_weights(s, vm, target, opts.neighbors);
    KrigingEstimate& est = out[static_cast<std::size_t>(t)];
    est.donors = kw.indices.size();
    if (kw.singular) {
      est.value = idw_one(s, target, opts.fallback_power);
      est.variance = kMissing;
      est.fallback = true;
      continue;
    }
    double value = 0.0, variance = kw.lagrange;
    for (std::size_t i = 0; i < kw.indices.size(); ++i) {
      const std::size_t k = kw.indices[i];
      value += kw.weights[i] * s.values()[k];
      variance += kw.weights[i] * vm(distance(s.points()[k], target));
    }
    est.value = value;
    est.variance = std::max(variance, 0.0);
  }
  return out;
}

std::vector<double> idw(const SpatialSamples& s, const std::vector<Point>& targets, double power) {
  if (s.empty()) throw Error(Errc::NoSamples, "IDW needs at least one sample");
  std::vector<double> out;
  out.reserve(targets.size());
  for (const auto& t : targets) out.push_back(idw_one(s, t, power));
  return out;
}

}  // namespace sweetspot
