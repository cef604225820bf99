#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sweetspot/formation_map.hpp"
#include "sweetspot/las.hpp"

namespace sweetspot {

/// round(mean(counts)) clamped to at least 16. Throws EmptyList.
std::size_t choose_resample_count(const std::vector<std::size_t>& sample_counts);

/// Samples the curve at n equally spaced depths from interval.top to
/// interval.bottom by linear interpolation between bracketing finite samples.
/// Entries that cannot be bracketed come back missing.
///
/// Throws CurveAbsent, or InsufficientCoverage when the logged range covers
/// less than half of the interval or more than 20% of the result is missing.
std::vector<double> extract_log_section(const LasFile& file, const std::string& curve,
                                        const FormationInterval& interval, std::size_t n);

struct LogBlock {
  std::vector<std::string> well_ids;  // sorted
  Eigen::MatrixXd values;             // wells x n
  std::size_t n = 0;
  std::vector<std::size_t> sample_counts;  // raw samples inside the interval, per well
};

struct Rejection {
  std::string well_id;
  std::string formation;
  std::string reason;
};

struct StandardizedLogFrame {
  std::string property;
  std::map<std::string, LogBlock> blocks;  // by formation
  std::vector<Rejection> rejections;
  std::vector<std::string> empty_blocks;
};

StandardizedLogFrame build_standardized_frame(const std::vector<LasFile>& files, const Formation3dMap& map,
                                              const std::string& property,
                                              const std::vector<std::string>& targets);

/// CSV keyed by well_id with columns d0..d{n-1}.
std::string block_csv(const LogBlock& block);
/// n, rejections and per-well raw sample counts.
std::string frame_sidecar_json(const StandardizedLogFrame& frame);

}  // namespace sweetspot
