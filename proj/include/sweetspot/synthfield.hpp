#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "sweetspot/las.hpp"

namespace sweetspot {

struct SynthFormation {
  std::string name;
  double mean_thickness = 60.0;
};

/// Synthetic field sized like a small study area. Latent Gaussian fields with
/// exponential covariance drive both the vertical-well log shapes (per target
/// formation, property and component) and the horizontal-well production.
struct SynthConfig {
  std::size_t n_vertical = 90;
  std::size_t n_horizontal = 98;
  double extent = 10000.0;  // square side, meters
  std::vector<SynthFormation> formations{{"Upper", 80.0}, {"WolfcampA", 60.0}, {"WolfcampB", 70.0}, {"Strawn", 60.0}};
  std::vector<std::string> targets{"WolfcampA", "WolfcampB"};
  std::vector<std::string> properties{"RHOB", "GR", "LIME", "NPHI", "RDEEP", "RSHAL", "PEF", "RMED", "DTC", "DTS"};
  double correlation_length = 3000.0;
  double amplitude = 1.0;
  std::size_t latent_components = 2;
  /// "<property>:<component>" -> weight on the log-production scale.
  std::map<std::string, double> signal_coefficients{{"GR:1", 0.5}, {"RHOB:2", -0.4}, {"NPHI:1", 0.3}};
  double noise_sd = 0.7071067811865476;  // sqrt of the summed squared weights: true-signal R^2 = 0.5
  double log_noise_sd = 0.02;
  std::uint64_t seed = 1;
  int horizon_months = 12;
  std::size_t short_history_wells = 10;  // both phases end before the horizon
  std::size_t short_gas_wells = 2;       // gas reporting stops before the horizon
  double missing_top_fraction = 0.05;
  double missing_curve_fraction = 0.03;
  double sample_step = 0.5;
  double oil_log_mean = 10.3;
  double gas_log_mean = 11.4;
};

/// Throws ConfigInvalid.
void validate(const SynthConfig& cfg);

/// Configuration with all signal coefficients set to zero.
SynthConfig null_signal(SynthConfig cfg);

struct TruthRow {
  std::string well_id;
  std::string formation;
  Point surface;
  std::map<std::string, double> latent;  // "<property>:<component>" in the well's formation
  double log_signal = 0.0;               // sum of weighted latent values
  double true_mean_oil = 0.0;            // noise-free cumulative volume at the horizon
  double true_mean_gas = 0.0;
  bool oil_censored = false;
  bool gas_censored = false;
};

struct GroundTruth {
  std::vector<TruthRow> horizontal;
  std::map<std::string, std::map<std::string, double>> vertical_latent;  // well -> "<formation>:<property>:<component>"
};

struct SynthOutput {
  std::map<std::string, std::string> files;  // relative path -> content
  GroundTruth truth;
  std::vector<LasFile> las;                  // the parsed form of the emitted LAS files
};

SynthOutput generate(const SynthConfig& cfg);
void write_synth(const SynthOutput& out, const std::filesystem::path& dir);

std::string ground_truth_json(const GroundTruth& truth);

/// Squared correlation between predictions and truth over the shared ids.
/// Throws Mismatch when a prediction id is absent from the truth; zero
/// variance gives 0.
double oracle_r2(const std::map<std::string, double>& truth, const std::map<std::string, double>& predictions);

}  // namespace sweetspot
