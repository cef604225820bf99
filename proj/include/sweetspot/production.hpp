#pragma once

#include <chrono>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sweetspot/las.hpp"

namespace sweetspot {

enum class Phase { Oil, Gas };

std::string_view phase_name(Phase p);
Phase parse_phase(std::string_view s);

using Date = std::chrono::sys_days;

/// Parses YYYY-MM-DD.
Date parse_date(std::string_view s);
std::string format_date(Date d);
/// Calendar-month addition; days past the end of the target month clamp to its last day.
Date add_months(Date d, int months);

struct DailyVolume {
  Date date;
  double volume = 0.0;
};

/// Sum of daily volumes in [from, to).
double sum_volumes(const std::vector<DailyVolume>& series, Date from, Date to);

/// Cumulative volume over [first date, first date + months). Missing (NaN) when
/// the series is empty or stops before the last day of the horizon.
/// Throws NegativeVolume.
double cumulative_production(const std::vector<DailyVolume>& series, int months);

struct WellMeta {
  std::string well_id;
  std::string target_formation;  // as written in the metadata
  Point surface;
};

struct MetaTable {
  std::vector<WellMeta> wells;  // file order, unique ids
  const WellMeta* find(std::string_view well_id) const;
};

/// CSV well_id,target_formation,x,y.
MetaTable load_meta(std::string_view csv_text);

/// Canonical formation for the well, matching after whitespace removal and case folding.
/// Throws WellAbsent, FormationUnrecognized.
std::string find_target_formation(const MetaTable& meta, std::string_view well_id,
                                   const std::vector<std::string>& formation_order);

struct DailyProduction {
  std::map<std::string, std::vector<DailyVolume>> oil;  // per well, date-sorted
  std::map<std::string, std::vector<DailyVolume>> gas;
};

/// CSV well_id,date,oil,gas. An empty volume field means that phase was not reported.
DailyProduction load_daily(std::string_view csv_text);

struct CumKey {
  Phase phase;
  int months;
  auto operator<=>(const CumKey&) const = default;
};

std::string cum_column_name(const CumKey& key);  // Cum_<m>month_<phase>_Prod

struct ProductionRow {
  std::string well_id;
  std::string target_formation;
  Point surface;
  std::map<CumKey, double> cum;  // NaN = missing
  std::vector<double> features;  // aligned with CumulativeProductionFrame::feature_names
};

/// One row per horizontal well, sorted by well_id. Immutable once built;
/// append_features returns a new frame.
struct CumulativeProductionFrame {
  std::vector<CumKey> cum_columns;
  std::vector<std::string> feature_names;
  std::vector<ProductionRow> rows;

  const ProductionRow* find(std::string_view well_id) const;
  std::size_t feature_index(std::string_view name) const;  // npos if absent
};

CumulativeProductionFrame build_production_frame(const DailyProduction& daily, const MetaTable& meta,
                                                 const std::vector<int>& horizons,
                                                 const std::vector<std::string>& formation_order);

/// Throws DuplicateFeature. Wells absent from `values` get missing.
CumulativeProductionFrame append_features(const CumulativeProductionFrame& frame, const std::string& feature_name,
                                          const std::map<std::string, double>& values);

std::string production_frame_csv(const CumulativeProductionFrame& frame);
CumulativeProductionFrame parse_production_frame(std::string_view csv_text);

}  // namespace sweetspot
