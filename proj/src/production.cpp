#include "sweetspot/production.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sweetspot/error.hpp"
#include "sweetspot/text.hpp"

namespace sweetspot {

using namespace std::chrono;

std::string_view phase_name(Phase p) { return p == Phase::Oil ? "oil" : "gas"; }

Phase parse_phase(std::string_view s) {
  const std::string n = to_lower(trim(s));
  if (n == "oil") return Phase::Oil;
  if (n == "gas") return Phase::Gas;
  throw Error(Errc::ConfigInvalid, "unknown phase '" + std::string(s) + "'");
}

Date parse_date(std::string_view s) {
  const auto parts = split(trim(s), '-');
  if (parts.size() != 3) throw Error(Errc::Parse, "bad date '" + std::string(s) + "'");
  const auto y = parse_double(parts[0]), m = parse_double(parts[1]), d = parse_double(parts[2]);
  if (!y || !m || !d) throw Error(Errc::Parse, "bad date '" + std::string(s) + "'");
  const year_month_day ymd{year{static_cast<int>(*y)}, month{static_cast<unsigned>(*m)},
                           day{static_cast<unsigned>(*d)}};
  if (!ymd.ok()) throw Error(Errc::Parse, "invalid date '" + std::string(s) + "'");
  return sys_days{ymd};
}

std::string format_date(Date d) {
  const year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

Date add_months(Date d, int n) {
  const year_month_day ymd{d};
  const year_month shifted = year_month{ymd.year(), ymd.month()} + months{n};
  const day last = year_month_day_last{shifted.year(), month_day_last{shifted.month()}}.day();
  return sys_days{year_month_day{shifted.year(), shifted.month(), std::min(ymd.day(), last)}};
}

double sum_volumes(const std::vector<DailyVolume>& series, Date from, Date to) {
  double sum = 0.0;
  for (const auto& dv : series) {
    if (dv.date >= from && dv.date < to) sum += dv.volume;
  }
  return sum;
}

double cumulative_production(const std::vector<DailyVolume>& series, int months) {
  for (const auto& dv : series) {
    if (dv.volume < 0.0) throw Error(Errc::NegativeVolume, "negative daily volume on " + format_date(dv.date));
  }
  if (series.empty()) return kMissing;
  const Date start = series.front().date;
  const Date end = add_months(start, months);
  if (series.back().date < end - days{1}) return kMissing;
  return sum_volumes(series, start, end);
}

const WellMeta* MetaTable::find(std::string_view well_id) const {
  for (const auto& w : wells) {
    if (w.well_id == well_id) return &w;
  }
  return nullptr;
}

MetaTable load_meta(std::string_view csv_text) {
  const CsvTable t = parse_csv(csv_text);
  const std::size_t cw = t.require_column("well_id");
  const std::size_t cf = t.require_column("target_formation");
  const std::size_t cx = t.require_column("x");
  const std::size_t cy = t.require_column("y");
  MetaTable meta;
  for (const auto& row : t.rows) {
    if (meta.find(row[cw])) throw Error(Errc::Parse, "duplicate well " + row[cw] + " in metadata");
    const auto x = parse_double(row[cx]);
    const auto y = parse_double(row[cy]);
    if (!x || !y) throw Error(Errc::MissingCoordinates, "well " + row[cw]);
    meta.wells.push_back({row[cw], row[cf], Point{*x, *y}});
  }
  return meta;
}

std::string find_target_formation(const MetaTable& meta, std::string_view well_id,
                                   const std::vector<std::string>& formation_order) {
  const WellMeta* w = meta.find(well_id);
  if (!w) throw Error(Errc::WellAbsent, std::string(well_id));
  const std::string key = fold_name(w->target_formation);
  for (const auto& f : formation_order) {
    if (fold_name(f) == key) return f;
  }
  throw Error(Errc::FormationUnrecognized, "well " + w->well_id + ": '" + w->target_formation + "'");
}

DailyProduction load_daily(std::string_view csv_text) {
  const CsvTable t = parse_csv(csv_text);
  const std::size_t cw = t.require_column("well_id");
  const std::size_t cd = t.require_column("date");
  const std::size_t co = t.require_column("oil");
  const std::size_t cg = t.require_column("gas");
  DailyProduction out;
  for (const auto& row : t.rows) {
    const Date date = parse_date(row[cd]);
    for (auto [col, series] : {std::pair{co, &out.oil}, std::pair{cg, &out.gas}}) {
      if (trim(row[col]).empty()) continue;
      const auto v = parse_double(row[col]);
      if (!v) throw Error(Errc::Parse, "bad volume '" + row[col] + "' for well " + row[cw]);
      (*series)[row[cw]].push_back({date, *v});
    }
  }
  for (auto* series : {&out.oil, &out.gas}) {
    for (auto& [well, s] : *series) {
      std::stable_sort(s.begin(), s.end(), [](const DailyVolume& a, const DailyVolume& b) { return a.date < b.date; });
    }
  }
  return out;
}

std::string cum_column_name(const CumKey& key) {
  return "Cum_" + std::to_string(key.months) + "month_" + std::string(phase_name(key.phase)) + "_Prod";
}

const ProductionRow* CumulativeProductionFrame::find(std::string_view well_id) const {
  const auto it = std::lower_bound(rows.begin(), rows.end(), well_id,
                                   [](const ProductionRow& r, std::string_view id) { return r.well_id < id; });
  return it != rows.end() && it->well_id == well_id ? &*it : nullptr;
}

std::size_t CumulativeProductionFrame::feature_index(std::string_view name) const {
  const auto it = std::find(feature_names.begin(), feature_names.end(), name);
  return it == feature_names.end() ? std::string::npos : static_cast<std::size_t>(it - feature_names.begin());
}

CumulativeProductionFrame build_production_frame(const DailyProduction& daily, const MetaTable& meta,
                                                 const std::vector<int>& horizons,
                                                 const std::vector<std::string>& formation_order) {
  CumulativeProductionFrame frame;
  for (Phase p : {Phase::Oil, Phase::Gas}) {
    for (int m : horizons) frame.cum_columns.push_back({p, m});
  }
  for (const auto& w : meta.wells) {
    ProductionRow row;
    row.well_id = w.well_id;
    row.target_formation = find_target_formation(meta, w.well_id, formation_order);
    row.surface = w.surface;
    for (const auto& key : frame.cum_columns) {
      const auto& by_well = key.phase == Phase::Oil ? daily.oil : daily.gas;
      const auto it = by_well.find(w.well_id);
      row.cum[key] = it == by_well.end() ? kMissing : cumulative_production(it->second, key.months);
    }
    frame.rows.push_back(std::move(row));
  }
  std::sort(frame.rows.begin(), frame.rows.end(),
            [](const ProductionRow& a, const ProductionRow& b) { return a.well_id < b.well_id; });
  return frame;
}

CumulativeProductionFrame append_features(const CumulativeProductionFrame& frame, const std::string& feature_name,
                                          const std::map<std::string, double>& values) {
  if (frame.feature_index(feature_name) != std::string::npos) {
    throw Error(Errc::DuplicateFeature, feature_name);
  }
  CumulativeProductionFrame out = frame;
  out.feature_names.push_back(feature_name);
  for (auto& row : out.rows) {
    const auto it = values.find(row.well_id);
    row.features.push_back(it == values.end() ? kMissing : it->second);
  }
  return out;
}

std::string production_frame_csv(const CumulativeProductionFrame& frame) {
  std::ostringstream os;
  os << "API,TARGET_FORMATION,surface_X,surface_Y";
  for (const auto& key : frame.cum_columns) os << ',' << cum_column_name(key);
  for (const auto& f : frame.feature_names) os << ',' << f;
  os << '\n';
  for (const auto& row : frame.rows) {
    os << row.well_id << ',' << row.target_formation << ',' << format_double(row.surface.x) << ','
       << format_double(row.surface.y);
    for (const auto& key : frame.cum_columns) os << ',' << format_double(row.cum.at(key));
    for (double v : row.features) os << ',' << format_double(v);
    os << '\n';
  }
  return os.str();
}

CumulativeProductionFrame parse_production_frame(std::string_view csv_text) {
  const CsvTable t = parse_csv(csv_text);
  if (t.header.size() < 4 || t.header[0] != "API" || t.header[1] != "TARGET_FORMATION") {
    throw Error(Errc::Parse, "not a cumulative production frame");
  }
  CumulativeProductionFrame frame;
  std::vector<std::size_t> cum_cols, feat_cols;
  for (std::size_t c = 4; c < t.header.size(); ++c) {
    const std::string& h = t.header[c];
    bool is_cum = false;
    if (h.rfind("Cum_", 0) == 0 && h.size() > 9 && h.substr(h.size() - 5) == "_Prod") {
      const std::string mid = h.substr(4, h.size() - 9);  // <m>month_<phase>
      const std::size_t us = mid.find("month_");
      if (us != std::string::npos) {
        const auto m = parse_double(mid.substr(0, us));
        if (m) {
          frame.cum_columns.push_back({parse_phase(mid.substr(us + 6)), static_cast<int>(*m)});
          cum_cols.push_back(c);
          is_cum = true;
        }
      }
    }
    if (!is_cum) {
      frame.feature_names.push_back(h);
      feat_cols.push_back(c);
    }
  }
  const auto value = [](const std::string& s) {
    if (s == "NA" || s.empty()) return kMissing;
    const auto v = parse_double(s);
    if (!v) throw Error(Errc::Parse, "bad number '" + s + "'");
    return *v;
  };
  for (const auto& r : t.rows) {
    ProductionRow row;
    row.well_id = r[0];
    row.target_formation = r[1];
    row.surface = Point{value(r[2]), value(r[3])};
    for (std::size_t i = 0; i < cum_cols.size(); ++i) row.cum[frame.cum_columns[i]] = value(r[cum_cols[i]]);
    for (std::size_t c : feat_cols) row.features.push_back(value(r[c]));
    frame.rows.push_back(std::move(row));
  }
  std::sort(frame.rows.begin(), frame.rows.end(),
            [](const ProductionRow& a, const ProductionRow& b) { return a.well_id < b.well_id; });
  return frame;
}

}  // namespace sweetspot
