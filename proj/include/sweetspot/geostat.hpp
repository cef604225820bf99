#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sweetspot/las.hpp"
#include "sweetspot/parallel.hpp"

namespace sweetspot {

/// Point values keyed by id. Points closer than kCoincident are merged into one
/// sample holding the mean value.
class SpatialSamples {
public:
  static constexpr double kCoincident = 1e-9;

  void add(std::string id, Point p, double value);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const std::vector<Point>& points() const { return points_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<std::string>& ids() const { return ids_; }

private:
  std::vector<std::string> ids_;
  std::vector<Point> points_;
  std::vector<double> values_;
  std::vector<std::size_t> counts_;
};

double distance(const Point& a, const Point& b);

enum class VariogramFamily { Spherical, Exponential, Gaussian };

std::string_view family_name(VariogramFamily f);
VariogramFamily parse_family(std::string_view name);

struct VariogramModel {
  VariogramFamily family = VariogramFamily::Exponential;
  double nugget = 0.0;
  double partial_sill = 1.0;
  double range = 1.0;

  /// Semivariance; exactly 0 at h = 0, nugget + partial structure beyond.
  double operator()(double h) const;
  double sill() const { return nugget + partial_sill; }
};

struct EmpiricalPoint {
  double lag = 0.0;  // mean pair distance within the bin
  double gamma = 0.0;
  std::size_t pairs = 0;
};

/// Binned semivariance over n_bins equal-width lag bins on (0, max_dist].
/// max_dist <= 0 selects half the maximum pairwise distance. Empty bins are omitted.
std::vector<EmpiricalPoint> empirical_variogram(const SpatialSamples& s, std::size_t n_bins,
                                                double max_dist = 0.0, Exec exec = Exec::Parallel);

struct VariogramFit {
  VariogramModel model;
  double loss = 0.0;
  bool degenerate = false;  // pure-nugget fallback taken
};

/// Weighted least squares (weights pairs / lag^2) by multi-start Nelder-Mead.
VariogramFit fit_variogram(const std::vector<EmpiricalPoint>& emp, VariogramFamily family);

struct KrigingEstimate {
  double value = 0.0;
  double variance = 0.0;
  bool fallback = false;  // singular system, IDW used
  std::size_t donors = 0;
};

struct KrigingOptions {
  std::size_t neighbors = 32;
  double fallback_power = 2.0;
  Exec exec = Exec::Parallel;
};

struct KrigingWeights {
  std::vector<std::size_t> indices;  // into the sample list, nearest first
  std::vector<double> weights;
  double lagrange = 0.0;
  bool singular = false;
};

/// Ordinary-kriging weights for one target over its nearest neighbours.
KrigingWeights kriging_weights(const SpatialSamples& s, const VariogramModel& vm, const Point& target,
                               std::size_t neighbors = 32);

/// Ordinary kriging at every target. Throws NoSamples on an empty sample set.
std::vector<KrigingEstimate> krige(const SpatialSamples& s, const VariogramModel& vm,
                                   const std::vector<Point>& targets, const KrigingOptions& opts = {});

/// Shepard inverse-distance weighting; exact at coincident points.
std::vector<double> idw(const SpatialSamples& s, const std::vector<Point>& targets, double power = 2.0);

namespace reference {
// Straightforward serial double loop over pairs, kept as the oracle for the
// parallel kernel.
std::vector<EmpiricalPoint> empirical_variogram(const SpatialSamples& s, std::size_t n_bins, double max_dist);
}  // namespace reference

}  // namespace sweetspot
