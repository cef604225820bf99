#include "sweetspot/formation_map.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

#include "sweetspot/error.hpp"
#include "sweetspot/geostat.hpp"
#include "sweetspot/text.hpp"

namespace sweetspot {

std::size_t TopsTable::formation_index(std::string_view name) const {
  for (std::size_t i = 0; i < formation_order.size(); ++i) {
    if (formation_order[i] == name) return i;
  }
  return std::string::npos;
}

TopsTable load_tops(std::string_view tops_csv, std::string_view coords_csv, std::string_view order_text) {
  TopsTable t;
  for (const auto& line : split(order_text, '\n')) {
    const auto name = trim(line);
    if (name.empty() || name.front() == '#') continue;
    t.formation_order.emplace_back(name);
  }

  const CsvTable coords = parse_csv(coords_csv);
  const std::size_t cw = coords.require_column("well_id");
  const std::size_t cx = coords.require_column("x");
  const std::size_t cy = coords.require_column("y");
  for (const auto& row : coords.rows) {
    const auto x = parse_double(row[cx]);
    const auto y = parse_double(row[cy]);
    if (!x || !y) throw Error(Errc::Parse, "bad coordinates for well " + row[cw]);
    t.well_coords[row[cw]] = Point{*x, *y};
  }

  const CsvTable tops = parse_csv(tops_csv);
  const std::size_t tw = tops.require_column("well_id");
  const std::size_t tf = tops.require_column("formation");
  const std::size_t td = tops.require_column("top_depth");
  for (const auto& row : tops.rows) {
    const std::string& well = row[tw];
    const std::string& formation = row[tf];
    if (t.formation_index(formation) == std::string::npos) {
      throw Error(Errc::UnknownFormation, "formation '" + formation + "' (well " + well + ") is not in the order list");
    }
    if (!t.well_coords.count(well)) throw Error(Errc::MissingCoordinates, "well " + well);
    const auto depth = parse_double(row[td]);
    if (!depth) throw Error(Errc::Parse, "bad top depth for well " + well);
    if (!t.records.emplace(WellFormation{well, formation}, FormationTop{*depth, false}).second) {
      throw Error(Errc::DuplicateTop, "(" + well + ", " + formation + ")");
    }
  }
  return t;
}

TopsTable infer_missing_tops(const TopsTable& tops, double power) {
  TopsTable out = tops;
  for (const auto& formation : tops.formation_order) {
    SpatialSamples donors;
    for (const auto& [well, xy] : tops.well_coords) {
      const auto it = tops.records.find({well, formation});
      if (it != tops.records.end() && !it->second.inferred) donors.add(well, xy, it->second.depth);
    }
    bool needs_fill = false;
    for (const auto& [well, xy] : tops.well_coords) {
      if (!tops.records.count({well, formation})) needs_fill = true;
    }
    if (!needs_fill) continue;
    if (donors.empty()) throw Error(Errc::NoDonors, "formation " + formation + " has no known top");
    for (const auto& [well, xy] : tops.well_coords) {
      if (tops.records.count({well, formation})) continue;
      const double v = idw(donors, std::vector<Point>{xy}, power).front();
      out.records[{well, formation}] = FormationTop{v, true};
    }
  }
  return out;
}

const FormationInterval* Formation3dMap::find(const std::string& well, const std::string& formation) const {
  const auto it = intervals.find({well, formation});
  return it == intervals.end() ? nullptr : &it->second;
}

Formation3dMap build_formation_map(const TopsTable& tops, const std::vector<std::string>& targets) {
  Formation3dMap map;
  map.targets = targets;
  for (const auto& target : targets) {
    const std::size_t idx = tops.formation_index(target);
    if (idx == std::string::npos) throw Error(Errc::UnknownFormation, target);
    if (idx + 1 >= tops.formation_order.size()) {
      throw Error(Errc::NoFormationBelow, target + " is the deepest formation");
    }
    const std::string& below = tops.formation_order[idx + 1];
    for (const auto& [well, xy] : tops.well_coords) {
      const auto top = tops.records.find({well, target});
      const auto bottom = tops.records.find({well, below});
      if (top == tops.records.end() || bottom == tops.records.end()) {
        map.excluded.push_back({well, target, "missing top"});
        continue;
      }
      if (!(top->second.depth < bottom->second.depth)) {
        map.excluded.push_back({well, target, std::string(errc_name(Errc::InvertedInterval))});
        continue;
      }
      map.intervals[{well, target}] = FormationInterval{top->second.depth, bottom->second.depth,
                                                        top->second.inferred, bottom->second.inferred};
    }
  }
  return map;
}

std::string formation_map_json(const Formation3dMap& map) {
  nlohmann::ordered_json j;
  j["targets"] = map.targets;
  auto& intervals = j["intervals"] = nlohmann::ordered_json::array();
  for (const auto& [key, iv] : map.intervals) {
    intervals.push_back({{"well_id", key.first},
                         {"formation", key.second},
                         {"top", iv.top},
                         {"bottom", iv.bottom},
                         {"inferred_top", iv.inferred_top},
                         {"inferred_bottom", iv.inferred_bottom}});
  }
  auto& excluded = j["excluded"] = nlohmann::ordered_json::array();
  for (const auto& e : map.excluded) {
    excluded.push_back({{"well_id", e.well_id}, {"formation", e.formation}, {"reason", e.reason}});
  }
  return j.dump(2) + "\n";
}

}  // namespace sweetspot
