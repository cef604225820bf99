#include "sweetspot/features.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sweetspot/error.hpp"
#include "sweetspot/text.hpp"

namespace sweetspot {

FeatureSource scores_source(const FpcaModel& model, std::size_t k) {
  FeatureSource s;
  s.property = model.property;
  s.formation = model.formation;
  s.well_ids = model.well_ids;
  const std::size_t kk = std::min(k, model.k_max());
  s.values = model.scores.leftCols(static_cast<Eigen::Index>(kk));
  for (std::size_t j = 1; j <= kk; ++j) s.suffixes.push_back("fpc" + std::to_string(j));
  return s;
}

FeatureSource summary_source(const std::string& property, const std::string& formation, const LogBlock& block) {
  FeatureSource s;
  s.property = property;
  s.formation = formation;
  s.well_ids = block.well_ids;
  s.suffixes = {"mean", "var", "max", "min"};
  s.values.resize(block.values.rows(), 4);
  for (Eigen::Index i = 0; i < block.values.rows(); ++i) {
    const Eigen::RowVectorXd row = block.values.row(i);
    const double mean = row.mean();
    s.values(i, 0) = mean;
    s.values(i, 1) = row.size() > 1 ? (row.array() - mean).square().sum() / static_cast<double>(row.size() - 1) : 0.0;
    s.values(i, 2) = row.maxCoeff();
    s.values(i, 3) = row.minCoeff();
  }
  return s;
}

namespace {

struct Task {
  const FeatureSource* source;
  std::size_t column;
  std::string feature;                // appended column name
  std::vector<std::size_t> targets;  // frame rows targeting this formation
};

struct TaskOutput {
  std::map<std::string, double> values;
  std::vector<InterpolationAudit> audit;
  std::optional<VariogramRecord> variogram;
};

TaskOutput run_task(const Task& task, const CumulativeProductionFrame& frame,
                    const std::map<std::string, Point>& coords, const FeatureConfig& cfg) {
  TaskOutput out;
  const FeatureSource& src = *task.source;
  SpatialSamples samples;
  for (std::size_t i = 0; i < src.well_ids.size(); ++i) {
    const auto it = coords.find(src.well_ids[i]);
    const double v = src.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(task.column));
    if (it == coords.end() || is_missing(v)) continue;
    samples.add(src.well_ids[i], it->second, v);
  }
  const std::string source_name = src.property + "_" + src.formation + "_" + src.suffixes[task.column];
  if (samples.size() < cfg.min_donors) {
    for (std::size_t r : task.targets) {
      out.audit.push_back({frame.rows[r].well_id, task.feature, src.formation, samples.size(), false,
                           "fewer than " + std::to_string(cfg.min_donors) + " donors"});
    }
    return out;
  }
  std::vector<Point> targets;
  for (std::size_t r : task.targets) targets.push_back(frame.rows[r].surface);

  if (cfg.method == InterpolationMethod::Idw) {
    const auto v = idw(samples, targets, cfg.idw_power);
    for (std::size_t t = 0; t < task.targets.size(); ++t) {
      const auto& well = frame.rows[task.targets[t]].well_id;
      out.values[well] = v[t];
      out.audit.push_back({well, task.feature, src.formation, samples.size(), false, "idw"});
    }
    return out;
  }

  const VariogramFit fit = fit_variogram(empirical_variogram(samples, cfg.n_bins, 0.0, Exec::Serial), cfg.family);
  out.variogram = VariogramRecord{source_name, fit, samples.size()};
  KrigingOptions opts;
  opts.neighbors = cfg.neighbors;
  opts.fallback_power = cfg.idw_power;
  opts.exec = Exec::Serial;
  const auto est = krige(samples, fit.model, targets, opts);
  for (std::size_t t = 0; t < task.targets.size(); ++t) {
    const auto& well = frame.rows[task.targets[t]].well_id;
    out.values[well] = est[t].value;
    out.audit.push_back({well, task.feature, src.formation, est[t].donors, est[t].fallback,
                         est[t].fallback ? "singular kriging system; idw used" : "kriged"});
  }
  return out;
}

}  // namespace

FeatureResult interpolate_features(const CumulativeProductionFrame& frame, const std::vector<FeatureSource>& sources,
                                   const std::map<std::string, Point>& vertical_coords,
                                   const std::vector<std::string>& properties, const FeatureConfig& cfg) {
  std::set<std::string> formations;
  for (const auto& row : frame.rows) formations.insert(row.target_formation);

  // Column order: property order, then suffix order of the first source seen for that property.
  std::vector<std::string> columns;
  std::map<std::string, std::vector<const FeatureSource*>> by_property;
  for (const auto& s : sources) by_property[s.property].push_back(&s);
  for (const auto& p : properties) {
    std::vector<std::string> suffixes;
    for (const auto* s : by_property[p]) {
      for (const auto& suf : s->suffixes) {
        if (std::find(suffixes.begin(), suffixes.end(), suf) == suffixes.end()) suffixes.push_back(suf);
      }
    }
    for (const auto& suf : suffixes) columns.push_back(p + "_" + suf);
  }

  std::vector<Task> tasks;
  FeatureResult result;
  for (const auto& p : properties) {
    for (const auto& formation : formations) {
      std::vector<std::size_t> targets;
      for (std::size_t r = 0; r < frame.rows.size(); ++r) {
        if (frame.rows[r].target_formation == formation) targets.push_back(r);
      }
      const FeatureSource* src = nullptr;
      for (const auto* s : by_property[p]) {
        if (s->formation == formation && (!src || s->suffixes.size() > src->suffixes.size())) src = s;
      }
      for (const auto* s : by_property[p]) {
        if (s->formation != formation) continue;
        for (std::size_t c = 0; c < s->suffixes.size(); ++c) {
          tasks.push_back({s, c, p + "_" + s->suffixes[c], targets});
        }
      }
      if (!src) {
        for (std::size_t r : targets) {
          result.audit.push_back({frame.rows[r].well_id, p, formation, 0, false, "no feature source for formation"});
        }
      }
    }
  }

  std::vector<TaskOutput> outputs(tasks.size());
  const auto n = static_cast<std::ptrdiff_t>(tasks.size());
#pragma omp parallel for schedule(dynamic, 1) if (cfg.exec == Exec::Parallel)
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    outputs[static_cast<std::size_t>(t)] = run_task(tasks[static_cast<std::size_t>(t)], frame, vertical_coords, cfg);
  }

  std::map<std::string, std::map<std::string, double>> values;
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    auto& col = values[tasks[t].feature];
    for (const auto& [well, v] : outputs[t].values) col[well] = v;
    result.audit.insert(result.audit.end(), outputs[t].audit.begin(), outputs[t].audit.end());
    if (outputs[t].variogram) result.variograms.push_back(*outputs[t].variogram);
  }
  result.frame = frame;
  for (const auto& c : columns) result.frame = append_features(result.frame, c, values[c]);
  return result;
}

FeatureResult interpolate_features(const CumulativeProductionFrame& frame, const std::vector<FpcaModel>& models,
                                   const std::map<std::string, Point>& vertical_coords, const FeatureConfig& cfg) {
  std::vector<FeatureSource> sources;
  std::vector<std::string> properties;
  for (const auto& m : models) {
    sources.push_back(scores_source(m, cfg.k));
    if (std::find(properties.begin(), properties.end(), m.property) == properties.end()) {
      properties.push_back(m.property);
    }
  }
  return interpolate_features(frame, sources, vertical_coords, properties, cfg);
}

std::string audit_csv(const std::vector<InterpolationAudit>& audit) {
  std::ostringstream os;
  os << "well_id,feature,formation,donors,fallback,note\n";
  for (const auto& a : audit) {
    os << a.well_id << ',' << a.feature << ',' << a.formation << ',' << a.donors << ',' << (a.fallback ? 1 : 0)
       << ',' << a.note << '\n';
  }
  return os.str();
}

std::string variograms_json(const std::vector<VariogramRecord>& records) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    j.push_back({{"feature", r.feature},
                 {"family", family_name(r.fit.model.family)},
                 {"nugget", r.fit.model.nugget},
                 {"partial_sill", r.fit.model.partial_sill},
                 {"range", r.fit.model.range},
                 {"loss", r.fit.loss},
                 {"degenerate", r.fit.degenerate},
                 {"donors", r.donors}});
  }
  return j.dump(2) + "\n";
}

}  // namespace sweetspot
