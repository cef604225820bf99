#include "sweetspot/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "sweetspot/error.hpp"
#include "sweetspot/resample.hpp"
#include "sweetspot/text.hpp"

namespace sweetspot {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(Errc::ConfigInvalid, std::string(key) + ": " + e.what());
  }
}

InterpolationMethod parse_method(const std::string& s) {
  const std::string l = to_lower(s);
  if (l == "kriging") return InterpolationMethod::Kriging;
  if (l == "idw") return InterpolationMethod::Idw;
  throw Error(Errc::ConfigInvalid, "unknown interpolation method " + s);
}

std::string property_dir(const std::string& property) { return "frames/" + property; }

double cell(const std::string& s) {
  if (s == "NA" || s.empty()) return kMissing;
  const auto v = parse_double(s);
  if (!v) throw Error(Errc::Parse, "not a number: " + s);
  return *v;
}

}  // namespace

PipelineConfig parse_config(std::string_view json_text, const fs::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(Errc::ConfigInvalid, e.what());
  }
  if (!j.is_object()) throw Error(Errc::ConfigInvalid, "configuration must be a JSON object");

  PipelineConfig cfg;
  cfg.base_dir = base_dir;
  if (!j.contains("inputs")) throw Error(Errc::ConfigInvalid, "missing inputs");
  const json& in = j.at("inputs");
  auto path_of = [&](const char* key) {
    if (!in.contains(key)) throw Error(Errc::ConfigInvalid, std::string("missing inputs.") + key);
    return fs::path(in.at(key).get<std::string>());
  };
  cfg.inputs.las_dir = path_of("las_dir");
  cfg.inputs.dictionary = path_of("dictionary");
  cfg.inputs.tops = path_of("tops");
  cfg.inputs.coords = path_of("coords");
  cfg.inputs.formation_order = path_of("formation_order");
  cfg.inputs.meta = path_of("meta");
  cfg.inputs.production = path_of("production");

  if (j.contains("polygon")) {
    for (const auto& v : j.at("polygon")) {
      if (!v.is_array() || v.size() != 2) throw Error(Errc::ConfigInvalid, "polygon vertices must be [x, y]");
      cfg.polygon.push_back(Point{v[0].get<double>(), v[1].get<double>()});
    }
    if (!cfg.polygon.empty() && cfg.polygon.size() < 3) throw Error(Errc::ConfigInvalid, "polygon needs 3 vertices");
  }
  cfg.targets = get_or(j, "targets", std::vector<std::string>{});
  cfg.properties = get_or(j, "properties", std::vector<std::string>{});
  if (cfg.targets.empty()) throw Error(Errc::ConfigInvalid, "targets must not be empty");
  if (cfg.properties.empty()) throw Error(Errc::ConfigInvalid, "properties must not be empty");
  cfg.horizons = get_or(j, "horizons", cfg.horizons);
  for (int h : cfg.horizons) {
    if (h < 1) throw Error(Errc::ConfigInvalid, "horizons must be >= 1");
  }

  if (j.contains("fpca")) {
    const long k = get_or<long>(j.at("fpca"), "k", 10);
    if (k < 1) throw Error(Errc::ConfigInvalid, "fpca.k must be >= 1");
    cfg.k = static_cast<std::size_t>(k);
    cfg.summary_stats = get_or(j.at("fpca"), "summary_stats", false);
  }
  if (j.contains("geostat")) {
    const json& g = j.at("geostat");
    try {
      cfg.geostat.family = parse_family(get_or<std::string>(g, "family", "exponential"));
    } catch (const Error& e) {
      throw Error(Errc::ConfigInvalid, e.what());
    }
    cfg.geostat.method = parse_method(get_or<std::string>(g, "method", "kriging"));
    cfg.geostat.n_bins = get_or<std::size_t>(g, "n_bins", cfg.geostat.n_bins);
    cfg.geostat.neighbors = get_or<std::size_t>(g, "neighbors", cfg.geostat.neighbors);
    cfg.geostat.min_donors = get_or<std::size_t>(g, "min_donors", cfg.geostat.min_donors);
    cfg.geostat.idw_power = get_or<double>(g, "idw_power", cfg.geostat.idw_power);
  }
  if (j.contains("evaluation")) {
    const json& e = j.at("evaluation");
    auto& ev = cfg.evaluation;
    if (e.contains("phases")) {
      ev.phases.clear();
      for (const auto& p : e.at("phases")) {
        try {
          ev.phases.push_back(parse_phase(p.get<std::string>()));
        } catch (const Error& err) {
          throw Error(Errc::ConfigInvalid, err.what());
        }
      }
    }
    ev.horizon_months = get_or(e, "horizon_months", ev.horizon_months);
    ev.K = get_or(e, "K", ev.K);
    ev.B = get_or(e, "B", ev.B);
    ev.inner_B = get_or(e, "inner_B", ev.inner_B);
    ev.seed = get_or(e, "seed", ev.seed);
    ev.top_m = get_or(e, "top_m", ev.top_m);
    ev.zoo = get_or(e, "zoo", ev.zoo);
    ev.finalists = get_or(e, "finalists", ev.finalists);
    const std::string transform = get_or<std::string>(e, "target_transform", "log1p");
    if (transform == "log1p") {
      ev.log_target = true;
    } else if (transform == "none") {
      ev.log_target = false;
    } else {
      throw Error(Errc::ConfigInvalid, "target_transform must be log1p or none");
    }
    if (ev.K < 2) throw Error(Errc::ConfigInvalid, "evaluation.K must be >= 2");
    if (ev.B < 1 || ev.inner_B < 1) throw Error(Errc::ConfigInvalid, "evaluation.B must be >= 1");
    if (std::find(cfg.horizons.begin(), cfg.horizons.end(), ev.horizon_months) == cfg.horizons.end()) {
      cfg.horizons.push_back(ev.horizon_months);
    }
    for (const auto& name : ev.zoo) {
      try {
        find_model(name);
      } catch (const Error& err) {
        throw Error(Errc::ConfigInvalid, err.what());
      }
    }
  }
  cfg.output_dir = get_or<std::string>(j, "output_dir", "out");
  return cfg;
}

PipelineConfig load_config(const fs::path& path) {
  if (!fs::exists(path)) throw Error(Errc::ConfigInvalid, "configuration file not found: " + path.string());
  return parse_config(read_file(path), path.parent_path());
}

fs::path resolve(const PipelineConfig& cfg, const fs::path& p) { return p.is_absolute() ? p : cfg.base_dir / p; }

void check_inputs(const PipelineConfig& cfg) {
  const std::vector<std::pair<std::string, fs::path>> paths{
      {"las_dir", cfg.inputs.las_dir},   {"dictionary", cfg.inputs.dictionary},
      {"tops", cfg.inputs.tops},         {"coords", cfg.inputs.coords},
      {"formation_order", cfg.inputs.formation_order},
      {"meta", cfg.inputs.meta},         {"production", cfg.inputs.production}};
  for (const auto& [key, p] : paths) {
    const fs::path full = resolve(cfg, p);
    if (!fs::exists(full)) throw Error(Errc::ConfigInvalid, key + " not found: " + full.string());
  }
  std::vector<std::string> order;
  for (const auto& line : split(read_file(resolve(cfg, cfg.inputs.formation_order)), '\n')) {
    const std::string name(trim(line));
    if (!name.empty() && name[0] != '#') order.push_back(name);
  }
  for (const auto& t : cfg.targets) {
    if (std::find(order.begin(), order.end(), t) == order.end()) {
      throw Error(Errc::ConfigInvalid, "target " + t + " is not in the formation order file");
    }
  }
}

bool point_in_polygon(const Point& p, const std::vector<Point>& poly) {
  const std::size_t n = poly.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& a = poly[i];
    const Point& b = poly[j];
    const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    if (std::abs(cross) <= 1e-12 * (1.0 + std::abs(b.x - a.x) + std::abs(b.y - a.y)) &&
        p.x >= std::min(a.x, b.x) - 1e-12 && p.x <= std::max(a.x, b.x) + 1e-12 &&
        p.y >= std::min(a.y, b.y) - 1e-12 && p.y <= std::max(a.y, b.y) + 1e-12) {
      return true;
    }
    if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) inside = !inside;
  }
  return inside;
}

PreprocessResult preprocess(const PipelineConfig& cfg) {
  check_inputs(cfg);
  PreprocessResult r;
  auto in_area = [&](const Point& p) { return cfg.polygon.empty() || point_in_polygon(p, cfg.polygon); };

  const AliasDictionary dict = load_dictionary(read_file(resolve(cfg, cfg.inputs.dictionary)));
  TopsTable tops = load_tops(read_file(resolve(cfg, cfg.inputs.tops)), read_file(resolve(cfg, cfg.inputs.coords)),
                             read_file(resolve(cfg, cfg.inputs.formation_order)));
  for (auto it = tops.well_coords.begin(); it != tops.well_coords.end();) {
    it = in_area(it->second) ? std::next(it) : tops.well_coords.erase(it);
  }
  for (auto it = tops.records.begin(); it != tops.records.end();) {
    it = tops.well_coords.count(it->first.first) ? std::next(it) : tops.records.erase(it);
  }
  if (tops.well_coords.empty()) throw Error(Errc::EmptyDataset, "no vertical wells inside the study area");
  r.tops = infer_missing_tops(tops);
  r.map = build_formation_map(r.tops, cfg.targets);

  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(resolve(cfg, cfg.inputs.las_dir))) {
    if (e.is_regular_file() && to_lower(e.path().extension().string()) == ".las") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    const std::string name = f.filename().string();
    try {
      LasFile las = parse_las(read_file(f));
      if (las.dropped_rows > 0) {
        r.ingest.push_back({name, las.well_id, std::to_string(las.dropped_rows) + " non-increasing depth rows dropped"});
      }
      DictionaryResult d = apply_dictionary(las, dict);
      for (const auto& s : d.skipped) r.ingest.push_back({name, las.well_id, "curve " + s + " not in dictionary"});
      if (!r.tops.well_coords.count(d.file.well_id)) {
        r.ingest.push_back({name, d.file.well_id, "well outside the study area or without coordinates"});
        continue;
      }
      r.las.push_back(std::move(d.file));
    } catch (const Error& e) {
      r.ingest.push_back({name, "", e.what()});
    }
  }
  if (r.las.empty()) throw Error(Errc::EmptyDataset, "no usable LAS files");

  for (const auto& p : cfg.properties) r.frames.push_back(build_standardized_frame(r.las, r.map, p, cfg.targets));

  const MetaTable meta_all = load_meta(read_file(resolve(cfg, cfg.inputs.meta)));
  MetaTable meta;
  for (const auto& w : meta_all.wells) {
    if (in_area(w.surface)) meta.wells.push_back(w);
  }
  if (meta.wells.empty()) throw Error(Errc::EmptyDataset, "no horizontal wells inside the study area");
  const DailyProduction daily = load_daily(read_file(resolve(cfg, cfg.inputs.production)));
  r.production = build_production_frame(daily, meta, cfg.horizons, r.tops.formation_order);
  return r;
}

void write_preprocess(const PreprocessResult& r, const fs::path& out) {
  std::ostringstream ingest;
  ingest << "file,well_id,note\n";
  for (const auto& n : r.ingest) ingest << n.file << ',' << n.well_id << ',' << n.note << '\n';
  write_file(out / "ingest_audit.csv", ingest.str());
  write_file(out / "formation_map.json", formation_map_json(r.map));

  std::ostringstream coords;
  coords << "well_id,x,y\n";
  for (const auto& [id, p] : r.tops.well_coords) coords << id << ',' << format_double(p.x) << ',' << format_double(p.y) << '\n';
  write_file(out / "vertical_coords.csv", coords.str());

  for (const auto& f : r.frames) {
    const fs::path dir = out / property_dir(f.property);
    if (fs::exists(dir)) fs::remove_all(dir);
    for (const auto& [formation, block] : f.blocks) write_file(dir / (formation + ".csv"), block_csv(block));
    write_file(dir / "frame.json", frame_sidecar_json(f));
  }
  write_file(out / "production_frame.csv", production_frame_csv(r.production));
}

std::map<std::string, Point> read_coords(const fs::path& csv) {
  const CsvTable t = parse_csv(read_file(csv));
  const std::size_t id = t.require_column("well_id"), x = t.require_column("x"), y = t.require_column("y");
  std::map<std::string, Point> m;
  for (const auto& row : t.rows) m[row[id]] = Point{cell(row[x]), cell(row[y])};
  return m;
}

std::vector<StandardizedLogFrame> read_frames(const PipelineConfig& cfg, const fs::path& out) {
  std::vector<StandardizedLogFrame> frames;
  for (const auto& p : cfg.properties) {
    StandardizedLogFrame f;
    f.property = p;
    const fs::path dir = out / property_dir(p);
    if (!fs::exists(dir)) throw Error(Errc::Io, "missing preprocess output " + dir.string());
    for (const auto& formation : cfg.targets) {
      const fs::path file = dir / (formation + ".csv");
      if (!fs::exists(file)) {
        f.empty_blocks.push_back(formation);
        continue;
      }
      const CsvTable t = parse_csv(read_file(file));
      LogBlock b;
      b.n = t.header.size() - 1;
      b.values.resize(static_cast<Eigen::Index>(t.rows.size()), static_cast<Eigen::Index>(b.n));
      for (std::size_t i = 0; i < t.rows.size(); ++i) {
        b.well_ids.push_back(t.rows[i][0]);
        for (std::size_t k = 0; k < b.n; ++k) {
          b.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = cell(t.rows[i][k + 1]);
        }
      }
      f.blocks.emplace(formation, std::move(b));
    }
    frames.push_back(std::move(f));
  }
  return frames;
}

FeatureStage extract_features(const PipelineConfig& cfg, const std::vector<StandardizedLogFrame>& frames,
                              const std::map<std::string, Point>& vertical_coords,
                              const CumulativeProductionFrame& production) {
  FeatureStage st;
  std::vector<FeatureSource> sources;
  for (const auto& f : frames) {
    for (const auto& formation : cfg.targets) {
      const auto it = f.blocks.find(formation);
      if (it == f.blocks.end()) continue;
      const LogBlock& block = it->second;
      if (block.well_ids.size() >= 3) {
        FpcaModel m = fit_fpca(block.values);
        m.property = f.property;
        m.formation = formation;
        m.well_ids = block.well_ids;
        sources.push_back(scores_source(m, cfg.k));
        st.models.push_back(std::move(m));
      }
      if (cfg.summary_stats) sources.push_back(summary_source(f.property, formation, block));
    }
  }
  FeatureConfig fc;
  fc.k = cfg.k;
  fc.summary_stats = cfg.summary_stats;
  fc.min_donors = cfg.geostat.min_donors;
  fc.method = cfg.geostat.method;
  fc.family = cfg.geostat.family;
  fc.n_bins = cfg.geostat.n_bins;
  fc.neighbors = cfg.geostat.neighbors;
  fc.idw_power = cfg.geostat.idw_power;
  fc.exec = cfg.exec;
  st.result = interpolate_features(production, sources, vertical_coords, cfg.properties, fc);
  return st;
}

void write_features(const FeatureStage& f, const fs::path& out) {
  const fs::path dir = out / "fpca";
  if (fs::exists(dir)) fs::remove_all(dir);
  for (const auto& m : f.models) {
    const std::string stem = m.property + "_" + m.formation;
    write_file(dir / (stem + ".json"), fpca_model_json(m));
    write_file(dir / (stem + "_scores.csv"), fpca_scores_csv(m));
  }
  write_file(out / "interpolation_audit.csv", audit_csv(f.result.audit));
  write_file(out / "variograms.json", variograms_json(f.result.variograms));
  write_file(out / "production_frame.csv", production_frame_csv(f.result.frame));
}

ValidationResult validate_frame(const PipelineConfig& cfg, const CumulativeProductionFrame& frame) {
  if (frame.feature_names.empty()) {
    throw Error(Errc::EmptyDataset, "production frame has no feature columns; run the features stage first");
  }
  const auto& ev = cfg.evaluation;
  const std::vector<ModelSpec> zoo = ev.zoo.empty() ? default_zoo() : zoo_from_names(ev.zoo);
  ValidationResult v;
  for (Phase phase : ev.phases) {
    PhaseValidation pv;
    pv.phase = phase;
    pv.horizon_months = ev.horizon_months;
    pv.data = assemble_dataset(frame, phase, ev.horizon_months, ev.log_target);
    const std::uint64_t phase_seed = mix_seed(ev.seed, phase == Phase::Oil ? 1 : 2);
    const ResamplePlan plan = make_plan(pv.data.rows(), ev.K, ev.B, phase_seed);
    pv.bench = benchmark(pv.data, zoo, plan, cfg.exec);

    LooConfig lc;
    lc.K = ev.K;
    lc.B = ev.inner_B;
    lc.seed = phase_seed;
    lc.top_m = ev.top_m;
    lc.finalists = ev.finalists;
    lc.exec = cfg.exec;
    pv.loo = nested_loo(pv.data, zoo, lc);

    BaselineConfig bc;
    bc.family = cfg.geostat.family;
    bc.n_bins = cfg.geostat.n_bins;
    bc.neighbors = cfg.geostat.neighbors;
    bc.exec = cfg.exec;
    pv.loo.baseline = kriging_baseline(pv.data, bc);
    v.phases.push_back(std::move(pv));
  }
  return v;
}

namespace {

ordered_json number(double v) {
  if (is_missing(v) || !std::isfinite(v)) return nullptr;
  return v;
}

ordered_json entry_json(const LooEntry& e) {
  ordered_json j;
  j["name"] = e.name;
  j["rmse"] = number(e.rmse);
  j["rmse_std"] = number(e.rmse_std);
  j["rmse_raw"] = number(e.rmse_raw);
  j["pearson"] = number(e.pearson);
  j["first_count"] = e.first_count;
  j["mean_rank"] = number(e.mean_rank);
  return j;
}

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

std::string report_json(const PipelineConfig& cfg, const ValidationResult& v) {
  ordered_json j;
  j["seed"] = cfg.evaluation.seed;
  j["K"] = cfg.evaluation.K;
  j["B"] = cfg.evaluation.B;
  j["inner_B"] = cfg.evaluation.inner_B;
  j["target_transform"] = cfg.evaluation.log_target ? "log1p" : "none";
  auto& phases = j["phases"] = ordered_json::array();
  for (const auto& pv : v.phases) {
    ordered_json p;
    p["phase"] = std::string(phase_name(pv.phase));
    p["horizon_months"] = pv.horizon_months;
    p["n_wells"] = pv.data.rows();
    p["n_features"] = pv.data.cols();

    ordered_json bench;
    bench["ranking"] = pv.bench.ranking;
    auto& bm = bench["models"] = ordered_json::array();
    for (const auto& m : pv.bench.models) {
      ordered_json e;
      e["name"] = m.name;
      e["hyper"] = hyper_string(m.hyper);
      e["median"] = number(m.median);
      e["iqr"] = number(m.iqr);
      e["mean"] = number(m.mean);
      ordered_json r = ordered_json::array();
      for (double x : m.rmse) r.push_back(number(x));
      e["rmse"] = std::move(r);
      bm.push_back(std::move(e));
    }
    auto& fails = bench["failures"] = ordered_json::array();
    for (const auto& [name, msg] : pv.bench.failures) fails.push_back({{"model", name}, {"error", msg}});
    p["benchmark"] = std::move(bench);

    ordered_json loo;
    auto& models = loo["models"] = ordered_json::array();
    for (const auto& m : pv.loo.models) models.push_back(entry_json(m));
    loo["selected"] = entry_json(pv.loo.selected);
    loo["finalists"] = pv.loo.finalists;
    if (pv.loo.baseline) loo["kriging"] = entry_json(*pv.loo.baseline);
    loo["failed_wells"] = pv.loo.failed_wells;
    p["nested_loo"] = std::move(loo);

    auto& summary = p["summary"] = ordered_json::array();
    for (const auto& f : pv.loo.finalists) {
      if (const LooEntry* e = pv.loo.find(f)) summary.push_back(entry_json(*e));
    }
    if (pv.loo.baseline) summary.push_back(entry_json(*pv.loo.baseline));
    phases.push_back(std::move(p));
  }
  return j.dump(2) + "\n";
}

std::string per_well_csv(const PhaseValidation& pv) {
  const LooReport& r = pv.loo;
  std::ostringstream os;
  os << "well_id,observed,observed_raw";
  for (const auto& m : r.models) os << ',' << m.name;
  os << ",selected";
  if (r.baseline) os << ",kriging";
  os << '\n';
  for (std::size_t i = 0; i < r.well_ids.size(); ++i) {
    const auto ei = static_cast<Eigen::Index>(i);
    os << r.well_ids[i] << ',' << format_double(r.observed(ei)) << ',' << format_double(r.observed_raw(ei));
    for (const auto& m : r.models) os << ',' << format_double(m.predicted[i]);
    os << ',' << format_double(r.selected.predicted[i]);
    if (r.baseline) os << ',' << format_double(r.baseline->predicted[i]);
    os << '\n';
  }
  return os.str();
}

std::string scatter_svg(const std::string& title, const std::vector<double>& observed,
                        const std::vector<double>& predicted, double rmse_value, double r) {
  constexpr double W = 480, H = 480, L = 70, R = 20, T = 40, B = 60;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (is_missing(observed[i]) || is_missing(predicted[i])) continue;
    lo = std::min({lo, observed[i], predicted[i]});
    hi = std::max({hi, observed[i], predicted[i]});
  }
  if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
  if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
  auto sx = [&](double v) { return L + (v - lo) / (hi - lo) * (W - L - R); };
  auto sy = [&](double v) { return H - B - (v - lo) / (hi - lo) * (H - T - B); };
  auto f = [](double v) { return format_fixed(v, 2); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
     << ' ' << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\" font-family=\"sans-serif\">"
     << title << "</text>\n";
  os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double v = lo + (hi - lo) * t / 4.0;
    os << "<text x=\"" << f(sx(v)) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\" font-size=\"10\" "
       << "font-family=\"sans-serif\">" << f(v) << "</text>\n";
    os << "<text x=\"" << L - 6 << "\" y=\"" << f(sy(v) + 3) << "\" text-anchor=\"end\" font-size=\"10\" "
       << "font-family=\"sans-serif\">" << f(v) << "</text>\n";
  }
  os << "<line x1=\"" << f(sx(lo)) << "\" y1=\"" << f(sy(lo)) << "\" x2=\"" << f(sx(hi)) << "\" y2=\"" << f(sy(hi))
     << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (is_missing(observed[i]) || is_missing(predicted[i])) continue;
    os << "<circle cx=\"" << f(sx(observed[i])) << "\" cy=\"" << f(sy(predicted[i]))
       << "\" r=\"3\" fill=\"steelblue\" fill-opacity=\"0.7\"/>\n";
  }
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 20
     << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">Observed</text>\n";
  os << "<text x=\"18\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" font-size=\"12\" "
     << "font-family=\"sans-serif\" transform=\"rotate(-90 18 " << (T + H - B) / 2 << ")\">Predicted</text>\n";
  os << "<text x=\"" << L + 8 << "\" y=\"" << T + 16 << "\" font-size=\"12\" font-family=\"sans-serif\">RMSE = "
     << (is_missing(rmse_value) ? "NA" : format_fixed(rmse_value, 3)) << "</text>\n";
  os << "<text x=\"" << L + 8 << "\" y=\"" << T + 32 << "\" font-size=\"12\" font-family=\"sans-serif\">r = "
     << (is_missing(r) ? "NA" : format_fixed(r, 3)) << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

void write_validation(const PipelineConfig& cfg, const ValidationResult& v, const fs::path& out) {
  write_file(out / "report.json", report_json(cfg, v));
  const fs::path plots = out / "plots";
  for (const auto& pv : v.phases) {
    const std::string phase(phase_name(pv.phase));
    write_file(out / ("predictions_" + phase + ".csv"), per_well_csv(pv));
    const std::vector<double> obs = to_vector(pv.loo.observed);
    std::vector<const LooEntry*> entries;
    for (const auto& f : pv.loo.finalists) {
      if (const LooEntry* e = pv.loo.find(f)) entries.push_back(e);
    }
    if (pv.loo.baseline) entries.push_back(&*pv.loo.baseline);
    for (const LooEntry* e : entries) {
      const std::string title = phase + " " + std::to_string(pv.horizon_months) + "-month: " + e->name;
      write_file(plots / (phase + "_" + e->name + ".svg"), scatter_svg(title, obs, e->predicted, e->rmse, e->pearson));
    }
  }
}

}  // namespace sweetspot
