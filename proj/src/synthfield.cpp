#include "sweetspot/synthfield.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Dense>
#include <json.hpp>

#include "sweetspot/error.hpp"
#include "sweetspot/evaluation.hpp"
#include "sweetspot/production.hpp"
#include "sweetspot/text.hpp"

namespace sweetspot {

namespace {

struct PropertyStyle {
  double base;
  double scale;
  std::vector<std::string> mnemonics;  // raw names seen in the wild; first is canonical
};

const std::map<std::string, PropertyStyle>& styles() {
  static const std::map<std::string, PropertyStyle> s{
      {"RHOB", {2.45, 0.08, {"RHOB", "DEN", "Density", "ZDEN"}}},
      {"GR", {75.0, 20.0, {"GR", "GammaRay", "Gamma", "GR_EDTC"}}},
      {"LIME", {0.10, 0.03, {"LIME", "LPHI", "Limestone"}}},
      {"NPHI", {0.20, 0.05, {"NPHI", "NeutronPorosity", "TNPH"}}},
      {"RDEEP", {20.0, 5.0, {"RDEEP", "ILD", "RT", "AT90"}}},
      {"RSHAL", {15.0, 4.0, {"RSHAL", "SFL", "MSFL", "AT10"}}},
      {"PEF", {3.0, 0.5, {"PEF", "PE", "PEFZ"}}},
      {"RMED", {18.0, 4.0, {"RMED", "ILM", "AT30"}}},
      {"DTC", {70.0, 8.0, {"DTC", "DT", "DTCO", "AC"}}},
      {"DTS", {120.0, 12.0, {"DTS", "DTSM", "DTSH"}}},
  };
  return s;
}

PropertyStyle style_of(const std::string& property) {
  const auto it = styles().find(property);
  if (it != styles().end()) return it->second;
  return PropertyStyle{0.0, 1.0, {property}};
}

std::string well_name(char prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%c%03zu", prefix, i + 1);
  return buf;
}

double basis(std::size_t component, double t) {
  if (component == 1) return 1.0;
  return std::numbers::sqrt2 * std::cos(std::numbers::pi * static_cast<double>(component - 1) * t);
}

double component_amplitude(std::size_t component) { return component == 1 ? 1.0 : 0.6 / static_cast<double>(component - 1); }

}  // namespace

void validate(const SynthConfig& cfg) {
  if (cfg.n_vertical < 1 || cfg.n_horizontal < 1) throw Error(Errc::ConfigInvalid, "well counts must be >= 1");
  if (cfg.noise_sd < 0.0 || cfg.log_noise_sd < 0.0) throw Error(Errc::ConfigInvalid, "noise sd must be >= 0");
  if (!(cfg.correlation_length > 0.0)) throw Error(Errc::ConfigInvalid, "correlation length must be > 0");
  if (cfg.formations.size() < 2) throw Error(Errc::ConfigInvalid, "need at least two formations");
  if (cfg.targets.empty() || cfg.properties.empty()) throw Error(Errc::ConfigInvalid, "targets and properties required");
  if (cfg.latent_components < 1) throw Error(Errc::ConfigInvalid, "latent_components must be >= 1");
  if (cfg.horizon_months < 2) throw Error(Errc::ConfigInvalid, "horizon must be at least 2 months");
  if (cfg.short_history_wells + cfg.short_gas_wells > cfg.n_horizontal) {
    throw Error(Errc::ConfigInvalid, "more censored wells than horizontal wells");
  }
  for (const auto& t : cfg.targets) {
    const auto it = std::find_if(cfg.formations.begin(), cfg.formations.end(),
                                 [&](const SynthFormation& f) { return f.name == t; });
    if (it == cfg.formations.end() || it + 1 == cfg.formations.end()) {
      throw Error(Errc::ConfigInvalid, "target " + t + " must be a formation with another below it");
    }
    if (it->mean_thickness < 25.0) throw Error(Errc::ConfigInvalid, "target formations must be at least 25 m thick");
  }
}

SynthConfig null_signal(SynthConfig cfg) {
  for (auto& [k, v] : cfg.signal_coefficients) v = 0.0;
  return cfg;
}

SynthOutput generate(const SynthConfig& cfg) {
  validate(cfg);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  SynthOutput out;

  const std::size_t nv = cfg.n_vertical, nh = cfg.n_horizontal, np = nv + nh;
  std::vector<Point> pts(np);
  for (auto& p : pts) p = Point{cfg.extent * unif(rng), cfg.extent * unif(rng)};
  std::vector<std::string> h_formation(nh);
  for (auto& f : h_formation) f = cfg.targets[static_cast<std::size_t>(unif(rng) * static_cast<double>(cfg.targets.size())) % cfg.targets.size()];

  // Latent fields at every well location: L * e with L the Cholesky factor of exp(-h / L).
  Eigen::MatrixXd cov(static_cast<Eigen::Index>(np), static_cast<Eigen::Index>(np));
  for (std::size_t i = 0; i < np; ++i) {
    for (std::size_t j = 0; j < np; ++j) {
      const double h = std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y);
      cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = std::exp(-h / cfg.correlation_length);
    }
  }
  cov.diagonal().array() += 1e-10;
  const Eigen::MatrixXd chol = cov.llt().matrixL();
  std::map<std::string, Eigen::VectorXd> latent;  // "<formation>:<property>:<component>"
  for (const auto& f : cfg.targets) {
    for (const auto& p : cfg.properties) {
      for (std::size_t m = 1; m <= cfg.latent_components; ++m) {
        Eigen::VectorXd e(static_cast<Eigen::Index>(np));
        for (Eigen::Index i = 0; i < e.size(); ++i) e(i) = gauss(rng);
        latent[f + ":" + p + ":" + std::to_string(m)] = cfg.amplitude * (chol * e);
      }
    }
  }

  // Gently undulating formation tops.
  const std::size_t nf = cfg.formations.size();
  std::vector<double> base_depth(nf);
  std::vector<std::array<double, 2>> phase(nf);
  double depth = 2000.0;
  for (std::size_t k = 0; k < nf; ++k) {
    base_depth[k] = depth;
    depth += cfg.formations[k].mean_thickness;
    phase[k] = {2.0 * std::numbers::pi * unif(rng), 2.0 * std::numbers::pi * unif(rng)};
  }
  auto top_at = [&](std::size_t k, const Point& p) {
    const double w = 2.0 * std::numbers::pi / cfg.extent;
    return base_depth[k] + 6.0 * std::sin(1.3 * w * p.x + phase[k][0]) + 4.0 * std::cos(0.9 * w * p.y + phase[k][1]);
  };

  std::ostringstream dict, tops, coords;
  dict << "raw,alias\n";
  for (const auto& p : cfg.properties) {
    for (const auto& raw : style_of(p).mnemonics) dict << raw << ',' << p << '\n';
  }
  tops << "well_id,formation,top_depth\n";
  coords << "well_id,x,y\n";

  for (std::size_t i = 0; i < nv; ++i) {
    const std::string id = well_name('V', i);
    const Point& loc = pts[i];
    coords << id << ',' << format_double(loc.x) << ',' << format_double(loc.y) << '\n';
    std::vector<double> well_tops(nf);
    for (std::size_t k = 0; k < nf; ++k) {
      well_tops[k] = top_at(k, loc);
      if (unif(rng) >= cfg.missing_top_fraction) {
        tops << id << ',' << cfg.formations[k].name << ',' << format_double(well_tops[k]) << '\n';
      }
    }
    for (const auto& [key, field] : latent) out.truth.vertical_latent[id][key] = field(static_cast<Eigen::Index>(i));

    LasFile las;
    las.well_id = id;
    las.location = loc;
    las.depth_unit = "M";
    const double start = std::floor((well_tops.front() - 20.0) / cfg.sample_step);
    const double stop = std::ceil((well_tops.back() + 30.0) / cfg.sample_step);
    for (double k = start; k <= stop; k += 1.0) las.depth.push_back(k * cfg.sample_step);

    for (const auto& p : cfg.properties) {
      const PropertyStyle st = style_of(p);
      const std::string raw = st.mnemonics[static_cast<std::size_t>(unif(rng) * static_cast<double>(st.mnemonics.size())) % st.mnemonics.size()];
      const bool drop_curve = unif(rng) < cfg.missing_curve_fraction;
      const double template_phase = 2.0 * std::numbers::pi * unif(rng);
      LasCurve curve{raw, "", {}};
      curve.values.reserve(las.depth.size());
      for (double d : las.depth) {
        std::size_t k = 0;
        while (k + 1 < nf && d >= well_tops[k + 1]) ++k;
        const double top = well_tops[k];
        const double bottom = k + 1 < nf ? well_tops[k + 1] : top + cfg.formations[k].mean_thickness;
        const double t = std::clamp((d - top) / (bottom - top), 0.0, 1.0);
        double shape = 0.6 * std::sin(2.0 * std::numbers::pi * t + 0.7 * static_cast<double>(k) + 0.3 * template_phase);
        const std::string& fname = cfg.formations[k].name;
        if (std::find(cfg.targets.begin(), cfg.targets.end(), fname) != cfg.targets.end()) {
          for (std::size_t m = 1; m <= cfg.latent_components; ++m) {
            const double z = latent.at(fname + ":" + p + ":" + std::to_string(m))(static_cast<Eigen::Index>(i));
            shape += component_amplitude(m) * z * basis(m, t);
          }
        }
        curve.values.push_back(st.base + st.scale * (shape + cfg.log_noise_sd * gauss(rng)));
      }
      // occasional short null runs
      if (unif(rng) < 0.3) {
        const auto len = static_cast<std::size_t>(3 + 6 * unif(rng));
        const auto at = static_cast<std::size_t>(unif(rng) * static_cast<double>(curve.values.size() - len));
        for (std::size_t r = at; r < at + len; ++r) curve.values[r] = kMissing;
      }
      if (!drop_curve) las.curves.push_back(std::move(curve));
    }
    out.files["las/" + id + ".las"] = serialize_las(las);
    out.las.push_back(std::move(las));
  }

  std::ostringstream order;
  for (const auto& f : cfg.formations) order << f.name << '\n';

  // Horizontal wells: log-normal production driven by latent values at the surface location.
  std::vector<std::size_t> perm(nh);
  for (std::size_t i = 0; i < nh; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<int> censor(nh, 0);  // 1: both phases short, 2: gas short
  for (std::size_t i = 0; i < cfg.short_history_wells; ++i) censor[perm[i]] = 1;
  for (std::size_t i = 0; i < cfg.short_gas_wells; ++i) censor[perm[cfg.short_history_wells + i]] = 2;

  std::ostringstream meta, daily;
  meta << "well_id,target_formation,x,y\n";
  daily << "well_id,date,oil,gas\n";
  const Date epoch = parse_date("2018-01-01");
  for (std::size_t h = 0; h < nh; ++h) {
    const std::string id = well_name('H', h);
    const std::size_t gi = nv + h;
    const Point& loc = pts[gi];
    TruthRow row;
    row.well_id = id;
    row.formation = h_formation[h];
    row.surface = loc;
    for (std::size_t m = 1; m <= cfg.latent_components; ++m) {
      for (const auto& p : cfg.properties) {
        row.latent[p + ":" + std::to_string(m)] =
            latent.at(row.formation + ":" + p + ":" + std::to_string(m))(static_cast<Eigen::Index>(gi));
      }
    }
    for (const auto& [key, w] : cfg.signal_coefficients) {
      const auto it = row.latent.find(key);
      if (it != row.latent.end()) row.log_signal += w * it->second;
    }
    const double log_oil = cfg.oil_log_mean + row.log_signal + cfg.noise_sd * gauss(rng);
    const double log_gas = cfg.gas_log_mean + row.log_signal + cfg.noise_sd * gauss(rng);
    row.true_mean_oil = std::exp(cfg.oil_log_mean + row.log_signal);
    row.true_mean_gas = std::exp(cfg.gas_log_mean + row.log_signal);

    const Date first = epoch + std::chrono::days{static_cast<int>(365.0 * unif(rng))};
    const Date horizon_end = add_months(first, cfg.horizon_months);
    const double horizon_days = static_cast<double>((horizon_end - first).count());
    const double oil_rate = std::exp(log_oil) / horizon_days;
    const double gas_rate = std::exp(log_gas) / horizon_days;
    const int short_months = 2 + static_cast<int>(unif(rng) * static_cast<double>(cfg.horizon_months - 2));
    Date oil_end = add_months(first, std::max(cfg.horizon_months, 18) + 1);
    Date gas_end = oil_end;
    if (censor[h] == 1) {
      oil_end = gas_end = add_months(first, short_months);
      row.oil_censored = row.gas_censored = true;
    } else if (censor[h] == 2) {
      gas_end = add_months(first, short_months);
      row.gas_censored = true;
    }

    std::string formation_text = row.formation;
    if (unif(rng) < 0.2) {
      // dirty metadata: lower-cased with a space before the trailing member letter
      formation_text = to_lower(row.formation);
      if (formation_text.size() > 1) formation_text.insert(formation_text.size() - 1, " ");
    }
    meta << id << ',' << formation_text << ',' << format_double(loc.x) << ',' << format_double(loc.y) << '\n';
    const std::string oil_text = format_double(oil_rate), gas_text = format_double(gas_rate);
    for (Date d = first; d < oil_end; d += std::chrono::days{1}) {
      daily << id << ',' << format_date(d) << ',' << oil_text << ',' << (d < gas_end ? gas_text : "") << '\n';
    }
    out.truth.horizontal.push_back(std::move(row));
  }

  out.files["dictionary.csv"] = dict.str();
  out.files["tops.csv"] = tops.str();
  out.files["vertical_coords.csv"] = coords.str();
  out.files["formations.txt"] = order.str();
  out.files["meta.csv"] = meta.str();
  out.files["daily_production.csv"] = daily.str();
  out.files["ground_truth.json"] = ground_truth_json(out.truth);

  nlohmann::ordered_json config;
  config["inputs"] = {{"las_dir", "las"},
                      {"dictionary", "dictionary.csv"},
                      {"tops", "tops.csv"},
                      {"coords", "vertical_coords.csv"},
                      {"formation_order", "formations.txt"},
                      {"meta", "meta.csv"},
                      {"production", "daily_production.csv"}};
  config["targets"] = cfg.targets;
  config["properties"] = cfg.properties;
  config["horizons"] = {6, cfg.horizon_months, 18};
  config["fpca"] = {{"k", 10}};
  config["evaluation"] = {{"horizon_months", cfg.horizon_months}, {"seed", cfg.seed}};
  config["output_dir"] = "out";
  out.files["config.json"] = config.dump(2) + "\n";
  return out;
}

void write_synth(const SynthOutput& out, const std::filesystem::path& dir) {
  for (const auto& [rel, content] : out.files) write_file(dir / rel, content);
}

std::string ground_truth_json(const GroundTruth& truth) {
  nlohmann::ordered_json j;
  auto& h = j["horizontal"] = nlohmann::ordered_json::array();
  for (const auto& r : truth.horizontal) {
    nlohmann::ordered_json row;
    row["well_id"] = r.well_id;
    row["formation"] = r.formation;
    row["x"] = r.surface.x;
    row["y"] = r.surface.y;
    row["log_signal"] = r.log_signal;
    row["true_mean_oil"] = r.true_mean_oil;
    row["true_mean_gas"] = r.true_mean_gas;
    row["oil_censored"] = r.oil_censored;
    row["gas_censored"] = r.gas_censored;
    row["latent"] = r.latent;
    h.push_back(std::move(row));
  }
  j["vertical_latent"] = truth.vertical_latent;
  return j.dump() + "\n";
}

double oracle_r2(const std::map<std::string, double>& truth, const std::map<std::string, double>& predictions) {
  std::vector<double> a, b;
  for (const auto& [id, p] : predictions) {
    const auto it = truth.find(id);
    if (it == truth.end()) throw Error(Errc::Mismatch, "no ground truth for " + id);
    if (is_missing(p)) continue;
    a.push_back(it->second);
    b.push_back(p);
  }
  if (a.size() < 3) throw Error(Errc::Mismatch, "fewer than 3 aligned predictions");
  const Eigen::Map<const Eigen::VectorXd> va(a.data(), static_cast<Eigen::Index>(a.size()));
  const Eigen::Map<const Eigen::VectorXd> vb(b.data(), static_cast<Eigen::Index>(b.size()));
  const double r = pearson(va, vb);
  return is_missing(r) ? 0.0 : r * r;
}

}  // namespace sweetspot
