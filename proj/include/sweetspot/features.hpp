#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sweetspot/fpca.hpp"
#include "sweetspot/geostat.hpp"
#include "sweetspot/log_frame.hpp"
#include "sweetspot/production.hpp"

namespace sweetspot {

/// Per-well feature values of one (property, formation) block at vertical wells.
struct FeatureSource {
  std::string property;
  std::string formation;
  std::vector<std::string> well_ids;
  std::vector<std::string> suffixes;  // column j is appended as <property>_<suffix>
  Eigen::MatrixXd values;             // wells x suffixes
};

/// First k fPC scores of a model as a feature source (fewer if k_max < k).
FeatureSource scores_source(const FpcaModel& model, std::size_t k);
/// Mean, variance, max and min of every resampled section in the block.
FeatureSource summary_source(const std::string& property, const std::string& formation, const LogBlock& block);

enum class InterpolationMethod { Kriging, Idw };

struct FeatureConfig {
  std::size_t k = 10;
  bool summary_stats = false;
  std::size_t min_donors = 5;
  InterpolationMethod method = InterpolationMethod::Kriging;
  VariogramFamily family = VariogramFamily::Exponential;
  std::size_t n_bins = 12;
  std::size_t neighbors = 32;
  double idw_power = 2.0;
  Exec exec = Exec::Parallel;
};

struct InterpolationAudit {
  std::string well_id;
  std::string feature;
  std::string formation;
  std::size_t donors = 0;
  bool fallback = false;
  std::string note;
};

struct VariogramRecord {
  std::string feature;  // <property>_<formation>_<suffix>
  VariogramFit fit;
  std::size_t donors = 0;
};

struct FeatureResult {
  CumulativeProductionFrame frame;
  std::vector<InterpolationAudit> audit;
  std::vector<VariogramRecord> variograms;
};

/// Appends one column per (property, suffix). A horizontal well's value comes
/// only from sources in its own target formation, kriged (or IDW) from the
/// vertical wells scored there. Formations with fewer than min_donors scored
/// wells leave the value missing and add an audit row.
FeatureResult interpolate_features(const CumulativeProductionFrame& frame, const std::vector<FeatureSource>& sources,
                                   const std::map<std::string, Point>& vertical_coords,
                                   const std::vector<std::string>& properties, const FeatureConfig& cfg);

FeatureResult interpolate_features(const CumulativeProductionFrame& frame, const std::vector<FpcaModel>& models,
                                   const std::map<std::string, Point>& vertical_coords, const FeatureConfig& cfg);

std::string audit_csv(const std::vector<InterpolationAudit>& audit);
std::string variograms_json(const std::vector<VariogramRecord>& records);

}  // namespace sweetspot
