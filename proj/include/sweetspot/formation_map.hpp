#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sweetspot/las.hpp"

namespace sweetspot {

using WellFormation = std::pair<std::string, std::string>;

struct FormationTop {
  double depth = 0.0;
  bool inferred = false;
};

/// Formation tops per (well, formation), surface coordinates per well, and the
/// stratigraphic order (shallowest first).
struct TopsTable {
  std::map<WellFormation, FormationTop> records;
  std::map<std::string, Point> well_coords;
  std::vector<std::string> formation_order;

  std::size_t formation_index(std::string_view name) const;  // npos if absent
};

/// tops CSV: well_id,formation,top_depth; coords CSV: well_id,x,y; order: one name per line.
/// Throws DuplicateTop, UnknownFormation, MissingCoordinates.
TopsTable load_tops(std::string_view tops_csv, std::string_view coords_csv, std::string_view order_text);

/// Fills every missing (well, formation) top by inverse-distance weighting over
/// the wells where that formation is known. Known tops are left untouched.
/// Throws NoDonors when a formation has no known top anywhere.
TopsTable infer_missing_tops(const TopsTable& tops, double power = 2.0);

struct FormationInterval {
  double top = 0.0;
  double bottom = 0.0;
  bool inferred_top = false;
  bool inferred_bottom = false;

  double thickness() const { return bottom - top; }
};

struct IntervalExclusion {
  std::string well_id;
  std::string formation;
  std::string reason;
};

struct Formation3dMap {
  std::map<WellFormation, FormationInterval> intervals;
  std::vector<std::string> targets;
  std::vector<IntervalExclusion> excluded;

  const FormationInterval* find(const std::string& well, const std::string& formation) const;
};

/// interval(well, F) = (top(F), top(next formation below F)). Wells whose
/// interval is inverted are excluded for that formation and reported.
/// Throws NoFormationBelow when a target is the deepest formation.
Formation3dMap build_formation_map(const TopsTable& tops, const std::vector<std::string>& targets);

std::string formation_map_json(const Formation3dMap& map);

}  // namespace sweetspot
