#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sweetspot/error.hpp"
#include "sweetspot/pipeline.hpp"
#include "sweetspot/synthfield.hpp"
#include "sweetspot/text.hpp"

namespace fs = std::filesystem;
using namespace sweetspot;

namespace {

enum Exit { kOk = 0, kConfig = 1, kData = 2, kInternal = 3 };

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> phase;
  std::optional<int> horizon;
  std::optional<std::string> out;
};

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("SWEETSPOT_SEED");
  if (!s || !*s) return std::nullopt;
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used != std::string(s).size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(Errc::ConfigInvalid, std::string("SWEETSPOT_SEED is not an unsigned integer: ") + s);
  }
}

PipelineConfig configure(const Overrides& o) {
  if (o.config.empty()) throw Error(Errc::ConfigInvalid, "--config is required");
  PipelineConfig cfg = load_config(o.config);
  if (const auto s = env_seed()) cfg.evaluation.seed = *s;
  if (o.seed) cfg.evaluation.seed = *o.seed;
  if (o.phase) {
    try {
      cfg.evaluation.phases = {parse_phase(*o.phase)};
    } catch (const Error& e) {
      throw Error(Errc::ConfigInvalid, e.what());
    }
  }
  if (o.horizon) {
    if (*o.horizon < 1) throw Error(Errc::ConfigInvalid, "--horizon must be >= 1");
    cfg.evaluation.horizon_months = *o.horizon;
    if (std::find(cfg.horizons.begin(), cfg.horizons.end(), *o.horizon) == cfg.horizons.end()) {
      cfg.horizons.push_back(*o.horizon);
    }
  }
  if (o.out) {
    cfg.output_dir = fs::absolute(*o.out);
  } else {
    cfg.output_dir = resolve(cfg, cfg.output_dir);
  }
  return cfg;
}

void run_preprocess(const PipelineConfig& cfg) {
  const PreprocessResult r = preprocess(cfg);
  write_preprocess(r, cfg.output_dir);
  std::size_t blocks = 0;
  for (const auto& f : r.frames) {
    blocks += f.blocks.size();
    for (const auto& e : f.empty_blocks) std::cerr << "warning: no usable " << f.property << " logs in " << e << '\n';
  }
  if (!r.ingest.empty()) std::cerr << "warning: " << r.ingest.size() << " ingest notes, see ingest_audit.csv\n";
  std::cout << "preprocess: " << r.las.size() << " LAS files, " << blocks << " log blocks, "
            << r.production.rows.size() << " horizontal wells -> " << cfg.output_dir.string() << '\n';
}

void run_features(const PipelineConfig& cfg) {
  const fs::path frame_csv = cfg.output_dir / "production_frame.csv";
  if (!fs::exists(frame_csv)) throw Error(Errc::Io, "run preprocess first: " + frame_csv.string() + " not found");
  CumulativeProductionFrame frame = parse_production_frame(read_file(frame_csv));
  if (!frame.feature_names.empty()) {
    // re-running the stage starts from the bare production columns
    for (auto& row : frame.rows) row.features.clear();
    frame.feature_names.clear();
  }
  const auto frames = read_frames(cfg, cfg.output_dir);
  const auto coords = read_coords(cfg.output_dir / "vertical_coords.csv");
  const FeatureStage st = extract_features(cfg, frames, coords, frame);
  write_features(st, cfg.output_dir);
  std::size_t fallbacks = 0;
  for (const auto& a : st.result.audit) fallbacks += a.fallback ? 1 : 0;
  if (fallbacks) std::cerr << "warning: " << fallbacks << " interpolation fallbacks, see interpolation_audit.csv\n";
  std::cout << "features: " << st.models.size() << " fPCA models, " << st.result.frame.feature_names.size()
            << " feature columns\n";
}

void run_validate(const PipelineConfig& cfg) {
  const fs::path frame_csv = cfg.output_dir / "production_frame.csv";
  if (!fs::exists(frame_csv)) throw Error(Errc::Io, "run preprocess and features first");
  const CumulativeProductionFrame frame = parse_production_frame(read_file(frame_csv));
  const ValidationResult v = validate_frame(cfg, frame);
  write_validation(cfg, v, cfg.output_dir);
  for (const auto& pv : v.phases) {
    std::cout << phase_name(pv.phase) << " (" << pv.data.rows() << " wells, " << pv.data.cols() << " features)\n";
    auto line = [](const LooEntry& e) {
      std::cout << "  " << e.name << "  rmse=" << (is_missing(e.rmse) ? "NA" : format_fixed(e.rmse, 4))
                << "  r=" << (is_missing(e.pearson) ? "NA" : format_fixed(e.pearson, 3)) << '\n';
    };
    for (const auto& f : pv.loo.finalists) {
      if (const LooEntry* e = pv.loo.find(f)) line(*e);
    }
    if (pv.loo.baseline) line(*pv.loo.baseline);
  }
}

void run_report(const PipelineConfig& cfg) {
  const fs::path report = cfg.output_dir / "report.json";
  if (!fs::exists(report)) throw Error(Errc::Io, "run validate first: " + report.string() + " not found");
  const auto j = nlohmann::json::parse(read_file(report));
  auto num = [](const nlohmann::json& v, int digits) {
    return v.is_null() ? std::string("NA") : format_fixed(v.get<double>(), digits);
  };
  for (const auto& p : j.at("phases")) {
    std::cout << p.at("phase").get<std::string>() << ", " << p.at("horizon_months").get<int>() << " months, "
              << p.at("n_wells").get<int>() << " wells\n";
    std::cout << "  model                 rmse    rmse_std  pearson\n";
    for (const auto& e : p.at("summary")) {
      std::string name = e.at("name").get<std::string>();
      name.resize(std::max<std::size_t>(name.size(), 20), ' ');
      std::cout << "  " << name << "  " << num(e.at("rmse"), 4) << "  " << num(e.at("rmse_std"), 4) << "  "
                << num(e.at("pearson"), 3) << '\n';
    }
  }
}

void run_synth(const std::string& out, std::optional<std::uint64_t> seed, bool null_model) {
  SynthConfig sc;
  if (const auto s = env_seed()) sc.seed = *s;
  if (seed) sc.seed = *seed;
  if (null_model) sc = null_signal(sc);
  const SynthOutput o = generate(sc);
  write_synth(o, out);
  std::cout << "synth: " << sc.n_vertical << " vertical, " << sc.n_horizontal << " horizontal wells -> " << out << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sweet-spot identification from well logs and production"};
  app.require_subcommand(1);
  Overrides o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "pipeline configuration (JSON)")->required();
    sub->add_option("--seed", o.seed, "evaluation seed");
    sub->add_option("--phase", o.phase, "oil or gas");
    sub->add_option("--horizon", o.horizon, "cumulative production horizon in months");
    sub->add_option("--out", o.out, "output directory");
  };
  auto* pre = app.add_subcommand("preprocess", "ingest logs, tops and production into frames");
  auto* feat = app.add_subcommand("features", "fPCA feature extraction and interpolation");
  auto* val = app.add_subcommand("validate", "benchmark, nested LOO and kriging baseline");
  auto* rep = app.add_subcommand("report", "print the summary table of the last validation");
  for (auto* s : {pre, feat, val, rep}) add_common(s);

  auto* syn = app.add_subcommand("synth", "write a synthetic field");
  std::string synth_out = "synth";
  std::optional<std::uint64_t> synth_seed;
  bool null_model = false;
  syn->add_option("--out", synth_out, "output directory");
  syn->add_option("--seed", synth_seed, "generator seed");
  syn->add_flag("--null-signal", null_model, "production independent of the logs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (syn->parsed()) {
      run_synth(synth_out, synth_seed, null_model);
      return kOk;
    }
    const PipelineConfig cfg = configure(o);
    if (pre->parsed()) run_preprocess(cfg);
    if (feat->parsed()) run_features(cfg);
    if (val->parsed()) run_validate(cfg);
    if (rep->parsed()) run_report(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == Errc::ConfigInvalid ? kConfig : kData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kOk;
}
