#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sweetspot/evaluation.hpp"
#include "sweetspot/features.hpp"
#include "sweetspot/formation_map.hpp"
#include "sweetspot/fpca.hpp"
#include "sweetspot/las.hpp"
#include "sweetspot/log_frame.hpp"
#include "sweetspot/production.hpp"

namespace sweetspot {

struct PipelineConfig {
  std::filesystem::path base_dir;  // relative paths resolve against this
  struct Inputs {
    std::filesystem::path las_dir;
    std::filesystem::path dictionary;
    std::filesystem::path tops;
    std::filesystem::path coords;
    std::filesystem::path formation_order;
    std::filesystem::path meta;
    std::filesystem::path production;
  } inputs;
  std::vector<Point> polygon;  // empty = no spatial filter
  std::vector<std::string> targets;
  std::vector<std::string> properties;
  std::vector<int> horizons{6, 12, 18};
  std::size_t k = 10;
  bool summary_stats = false;
  struct Geostat {
    VariogramFamily family = VariogramFamily::Exponential;
    InterpolationMethod method = InterpolationMethod::Kriging;
    std::size_t n_bins = 12;
    std::size_t neighbors = 32;
    std::size_t min_donors = 5;
    double idw_power = 2.0;
  } geostat;
  struct Evaluation {
    std::vector<Phase> phases{Phase::Oil, Phase::Gas};
    int horizon_months = 12;
    std::size_t K = 10;
    std::size_t B = 3;
    std::size_t inner_B = 1;
    std::uint64_t seed = 20190101;
    std::size_t top_m = 3;
    std::vector<std::string> zoo;        // empty = default zoo
    std::vector<std::string> finalists;
    bool log_target = true;
  } evaluation;
  std::filesystem::path output_dir{"out"};
  Exec exec = Exec::Parallel;
};

/// JSON text; throws ConfigInvalid.
PipelineConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir);
PipelineConfig load_config(const std::filesystem::path& path);
/// Throws ConfigInvalid naming the first missing input.
void check_inputs(const PipelineConfig& cfg);
std::filesystem::path resolve(const PipelineConfig& cfg, const std::filesystem::path& p);

/// Even-odd rule; boundary points count as inside.
bool point_in_polygon(const Point& p, const std::vector<Point>& polygon);

struct IngestNote {
  std::string file;
  std::string well_id;
  std::string note;
};

struct PreprocessResult {
  std::vector<LasFile> las;
  std::vector<IngestNote> ingest;
  TopsTable tops;  // after inference, restricted to the polygon
  Formation3dMap map;
  std::vector<StandardizedLogFrame> frames;  // configured property order
  CumulativeProductionFrame production;
};

/// las_ingest -> formation_map -> log_frame -> production_frame.
PreprocessResult preprocess(const PipelineConfig& cfg);
void write_preprocess(const PreprocessResult& r, const std::filesystem::path& out);

struct FeatureStage {
  std::vector<FpcaModel> models;
  FeatureResult result;
};

/// Fits fPCA per (property, formation) block and interpolates scores to horizontal wells.
FeatureStage extract_features(const PipelineConfig& cfg, const std::vector<StandardizedLogFrame>& frames,
                              const std::map<std::string, Point>& vertical_coords,
                              const CumulativeProductionFrame& production);
void write_features(const FeatureStage& f, const std::filesystem::path& out);

/// Reads back the block CSVs written by write_preprocess.
std::vector<StandardizedLogFrame> read_frames(const PipelineConfig& cfg, const std::filesystem::path& out);
std::map<std::string, Point> read_coords(const std::filesystem::path& csv);

struct PhaseValidation {
  Phase phase = Phase::Oil;
  int horizon_months = 12;
  Dataset data;
  BenchmarkResult bench;
  LooReport loo;
};

struct ValidationResult {
  std::vector<PhaseValidation> phases;
};

/// Benchmark, nested LOO and kriging baseline per configured phase. Throws EmptyDataset
/// when the frame carries no feature columns.
ValidationResult validate_frame(const PipelineConfig& cfg, const CumulativeProductionFrame& frame);

std::string report_json(const PipelineConfig& cfg, const ValidationResult& v);
std::string per_well_csv(const PhaseValidation& pv);
std::string scatter_svg(const std::string& title, const std::vector<double>& observed,
                        const std::vector<double>& predicted, double rmse, double r);
/// report.json, predictions_<phase>.csv and one SVG per (phase, finalist or kriging).
void write_validation(const PipelineConfig& cfg, const ValidationResult& v, const std::filesystem::path& out);

}  // namespace sweetspot
