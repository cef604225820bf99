#include "sweetspot/log_frame.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "sweetspot/error.hpp"
#include "sweetspot/text.hpp"

namespace sweetspot {

std::size_t choose_resample_count(const std::vector<std::size_t>& sample_counts) {
  if (sample_counts.empty()) throw Error(Errc::EmptyList, "no sample counts");
  double sum = 0.0;
  for (auto c : sample_counts) sum += static_cast<double>(c);
  const auto n = static_cast<std::size_t>(std::llround(sum / static_cast<double>(sample_counts.size())));
  return std::max<std::size_t>(n, 16);
}

namespace {

double coverage(const LasFile& file, const FormationInterval& iv) {
  if (file.depth.empty()) return 0.0;
  const double lo = std::max(iv.top, file.depth.front());
  const double hi = std::min(iv.bottom, file.depth.back());
  return std::max(hi - lo, 0.0) / iv.thickness();
}

std::size_t samples_inside(const LasFile& file, const FormationInterval& iv) {
  const auto lo = std::lower_bound(file.depth.begin(), file.depth.end(), iv.top);
  const auto hi = std::upper_bound(file.depth.begin(), file.depth.end(), iv.bottom);
  return hi > lo ? static_cast<std::size_t>(hi - lo) : 0;
}

double interpolate_at(const std::vector<double>& depth, const std::vector<double>& values, double q) {
  const auto it = std::lower_bound(depth.begin(), depth.end(), q);
  if (it == depth.end()) return kMissing;
  const auto hi = static_cast<std::size_t>(it - depth.begin());
  if (depth[hi] == q) return values[hi];
  if (hi == 0) return kMissing;
  const std::size_t lo = hi - 1;
  if (is_missing(values[lo]) || is_missing(values[hi])) return kMissing;
  const double t = (q - depth[lo]) / (depth[hi] - depth[lo]);
  return values[lo] + t * (values[hi] - values[lo]);
}

// Within-row linear gap filling; leading/trailing gaps take the nearest finite value.
void fill_row_gaps(std::vector<double>& row) {
  std::vector<std::size_t> finite;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (!is_missing(row[i])) finite.push_back(i);
  }
  if (finite.empty() || finite.size() == row.size()) return;
  for (std::size_t i = 0; i < finite.front(); ++i) row[i] = row[finite.front()];
  for (std::size_t i = finite.back() + 1; i < row.size(); ++i) row[i] = row[finite.back()];
  for (std::size_t k = 0; k + 1 < finite.size(); ++k) {
    const std::size_t a = finite[k], b = finite[k + 1];
    for (std::size_t i = a + 1; i < b; ++i) {
      const double t = static_cast<double>(i - a) / static_cast<double>(b - a);
      row[i] = row[a] + t * (row[b] - row[a]);
    }
  }
}

}  // namespace

std::vector<double> extract_log_section(const LasFile& file, const std::string& curve,
                                        const FormationInterval& interval, std::size_t n) {
  const LasCurve* c = file.find(curve);
  if (!c) throw Error(Errc::CurveAbsent, "well " + file.well_id + " has no curve " + curve);
  if (n < 2) throw Error(Errc::DegenerateGrid, "resample count must be at least 2");
  if (coverage(file, interval) < 0.5) {
    throw Error(Errc::InsufficientCoverage, "well " + file.well_id + " logs under half of the interval");
  }
  std::vector<double> out(n);
  std::size_t missing = 0;
  const double step = interval.thickness() / static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) {
    const double q = k + 1 == n ? interval.bottom : interval.top + static_cast<double>(k) * step;
    out[k] = interpolate_at(file.depth, c->values, q);
    if (is_missing(out[k])) ++missing;
  }
  if (static_cast<double>(missing) > 0.2 * static_cast<double>(n)) {
    throw Error(Errc::InsufficientCoverage, "well " + file.well_id + ": " + std::to_string(missing) + " of " +
                                                std::to_string(n) + " resampled values missing");
  }
  return out;
}

StandardizedLogFrame build_standardized_frame(const std::vector<LasFile>& files, const Formation3dMap& map,
                                              const std::string& property,
                                              const std::vector<std::string>& targets) {
  StandardizedLogFrame frame;
  frame.property = property;

  std::vector<const LasFile*> sorted;
  for (const auto& f : files) sorted.push_back(&f);
  std::sort(sorted.begin(), sorted.end(),
            [](const LasFile* a, const LasFile* b) { return a->well_id < b->well_id; });

  for (const auto& formation : targets) {
    struct Candidate {
      const LasFile* file;
      const FormationInterval* interval;
      std::size_t count;
    };
    std::vector<Candidate> candidates;
    for (const LasFile* f : sorted) {
      const FormationInterval* iv = map.find(f->well_id, formation);
      if (!iv) {
        frame.rejections.push_back({f->well_id, formation, "no formation interval"});
        continue;
      }
      if (!f->find(property)) {
        frame.rejections.push_back({f->well_id, formation, std::string(errc_name(Errc::CurveAbsent))});
        continue;
      }
      if (coverage(*f, *iv) < 0.5) {
        frame.rejections.push_back({f->well_id, formation, std::string(errc_name(Errc::InsufficientCoverage))});
        continue;
      }
      candidates.push_back({f, iv, samples_inside(*f, *iv)});
    }
    if (candidates.empty()) {
      frame.empty_blocks.push_back(formation);
      continue;
    }

    std::vector<std::size_t> counts;
    for (const auto& c : candidates) counts.push_back(std::max<std::size_t>(c.count, 2));
    const std::size_t n = choose_resample_count(counts);

    LogBlock block;
    block.n = n;
    std::vector<std::vector<double>> rows;
    for (const auto& c : candidates) {
      try {
        auto row = extract_log_section(*c.file, property, *c.interval, n);
        fill_row_gaps(row);
        rows.push_back(std::move(row));
        block.well_ids.push_back(c.file->well_id);
        block.sample_counts.push_back(c.count);
      } catch (const Error& e) {
        frame.rejections.push_back({c.file->well_id, formation, std::string(errc_name(e.code()))});
      }
    }
    if (rows.empty()) {
      frame.empty_blocks.push_back(formation);
      continue;
    }
    block.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        block.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
      }
    }
    frame.blocks.emplace(formation, std::move(block));
  }
  return frame;
}

std::string block_csv(const LogBlock& block) {
  std::ostringstream os;
  os << "well_id";
  for (std::size_t k = 0; k < block.n; ++k) os << ",d" << k;
  os << '\n';
  for (std::size_t i = 0; i < block.well_ids.size(); ++i) {
    os << block.well_ids[i];
    for (std::size_t k = 0; k < block.n; ++k) {
      os << ',' << format_double(block.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)));
    }
    os << '\n';
  }
  return os.str();
}

std::string frame_sidecar_json(const StandardizedLogFrame& frame) {
  nlohmann::ordered_json j;
  j["property"] = frame.property;
  auto& blocks = j["blocks"] = nlohmann::ordered_json::object();
  for (const auto& [formation, block] : frame.blocks) {
    nlohmann::ordered_json b;
    b["n"] = block.n;
    b["wells"] = block.well_ids.size();
    auto& prov = b["raw_sample_counts"] = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < block.well_ids.size(); ++i) prov[block.well_ids[i]] = block.sample_counts[i];
    blocks[formation] = std::move(b);
  }
  auto& rej = j["rejections"] = nlohmann::ordered_json::array();
  for (const auto& r : frame.rejections) {
    rej.push_back({{"well_id", r.well_id}, {"formation", r.formation}, {"reason", r.reason}});
  }
  j["empty_blocks"] = frame.empty_blocks;
  return j.dump(2) + "\n";
}

}  // namespace sweetspot
