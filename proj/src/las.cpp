#include "sweetspot/las.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sweetspot/error.hpp"
#include "sweetspot/text.hpp"

namespace sweetspot {

namespace {

struct HeaderLine {
  std::string mnemonic;
  std::string unit;
  std::string data;
};

// MNEM.UNIT  DATA : DESCRIPTION
std::optional<HeaderLine> parse_header_line(std::string_view line) {
  const std::size_t dot = line.find('.');
  if (dot == std::string_view::npos) return std::nullopt;
  HeaderLine h;
  h.mnemonic = std::string(trim(line.substr(0, dot)));
  std::string_view rest = line.substr(dot + 1);
  const std::size_t space = rest.find_first_of(" \t");
  const std::size_t colon = rest.rfind(':');
  const std::size_t unit_end = std::min(space, colon);
  h.unit = std::string(trim(rest.substr(0, unit_end == std::string_view::npos ? rest.size() : unit_end)));
  if (unit_end != std::string_view::npos) {
    std::string_view data = rest.substr(unit_end);
    const std::size_t c = data.rfind(':');
    if (c != std::string_view::npos) data = data.substr(0, c);
    h.data = std::string(trim(data));
  }
  return h;
}

bool is_depth_mnemonic(std::string_view name) {
  const std::string n = to_lower(name);
  return n == "dept" || n == "depth" || n == "md";
}

enum class Section { None, Version, Well, Curve, Parameter, Other, Ascii };

Section section_of(std::string_view line) {
  if (line.size() < 2) return Section::Other;
  switch (std::toupper(static_cast<unsigned char>(line[1]))) {
    case 'V': return Section::Version;
    case 'W': return Section::Well;
    case 'C': return Section::Curve;
    case 'P': return Section::Parameter;
    case 'A': return Section::Ascii;
    default: return Section::Other;
  }
}

}  // namespace

std::size_t LasCurve::missing_count() const {
  return static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(), [](double v) { return is_missing(v); }));
}

const LasCurve* LasFile::find(std::string_view name) const {
  for (const auto& c : curves) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

LasFile parse_las(std::string_view text) {
  LasFile out;
  Section section = Section::None;
  bool saw_curve = false;
  bool saw_ascii = false;
  std::vector<HeaderLine> curve_defs;
  std::string api, uwi, well_name;
  std::optional<double> x, y;
  std::vector<std::vector<double>> columns;
  std::size_t line_no = 0;

  for (const std::string& raw_line : split(text, '\n')) {
    ++line_no;
    const std::string_view line = trim(raw_line);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '~') {
      section = section_of(line);
      if (section == Section::Curve) saw_curve = true;
      if (section == Section::Ascii) {
        saw_ascii = true;
        if (curve_defs.empty()) throw Error(Errc::MissingSection, "~ASCII before any curve definition");
        if (!is_depth_mnemonic(curve_defs.front().mnemonic)) {
          throw Error(Errc::NoDepthCurve, "first curve is '" + curve_defs.front().mnemonic + "'");
        }
        out.depth_unit = curve_defs.front().unit;
        columns.assign(curve_defs.size(), {});
      }
      continue;
    }

    switch (section) {
      case Section::Version: {
        const auto h = parse_header_line(line);
        if (h && to_lower(h->mnemonic) == "wrap" && to_lower(h->data) == "yes") {
          throw Error(Errc::MissingSection, "wrapped LAS (WRAP=YES) is not supported");
        }
        break;
      }
      case Section::Well: {
        const auto h = parse_header_line(line);
        if (!h) break;
        const std::string key = to_lower(h->mnemonic);
        if (key == "null") {
          if (auto v = parse_double(h->data)) out.null_value = *v;
        } else if (key == "api") {
          api = h->data;
        } else if (key == "uwi") {
          uwi = h->data;
        } else if (key == "well") {
          well_name = h->data;
        } else if (key == "x" || key == "xcoord" || key == "easting") {
          x = parse_double(h->data);
        } else if (key == "y" || key == "ycoord" || key == "northing") {
          y = parse_double(h->data);
        }
        break;
      }
      case Section::Curve: {
        if (auto h = parse_header_line(line)) curve_defs.push_back(std::move(*h));
        break;
      }
      case Section::Ascii: {
        const auto fields = split_ws(line);
        if (fields.size() != curve_defs.size()) {
          throw Error(Errc::RowArity, "line " + std::to_string(line_no) + ": " +
                                          std::to_string(fields.size()) + " fields for " +
                                          std::to_string(curve_defs.size()) + " curves");
        }
        for (std::size_t c = 0; c < fields.size(); ++c) {
          const auto v = parse_double(fields[c]);
          if (!v) throw Error(Errc::Parse, "line " + std::to_string(line_no) + ": bad number '" + fields[c] + "'");
          columns[c].push_back(*v);
        }
        break;
      }
      default:
        break;
    }
  }

  if (!saw_curve) throw Error(Errc::MissingSection, "no ~CURVE section");
  if (!saw_ascii) throw Error(Errc::MissingSection, "no ~ASCII section");

  out.well_id = !api.empty() ? api : (!uwi.empty() ? uwi : well_name);
  if (x && y) out.location = Point{*x, *y};

  for (std::size_t c = 1; c < curve_defs.size(); ++c) {
    out.curves.push_back(LasCurve{curve_defs[c].mnemonic, curve_defs[c].unit, {}});
  }
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (std::size_t r = 0; r < rows; ++r) {
    const double d = columns[0][r];
    if (d == out.null_value || std::isnan(d) || (!out.depth.empty() && !(d > out.depth.back()))) {
      ++out.dropped_rows;
      continue;
    }
    out.depth.push_back(d);
    for (std::size_t c = 1; c < curve_defs.size(); ++c) {
      const double v = columns[c][r];
      out.curves[c - 1].values.push_back(v == out.null_value ? kMissing : v);
    }
  }
  return out;
}

std::string serialize_las(const LasFile& file) {
  std::ostringstream os;
  const auto fmt = [&](double v) { return is_missing(v) ? format_double(file.null_value) : format_double(v); };
  os << "~VERSION INFORMATION\n";
  os << " VERS.   2.0 : CWLS LOG ASCII STANDARD - VERSION 2.0\n";
  os << " WRAP.   NO : ONE LINE PER DEPTH STEP\n";
  os << "~WELL INFORMATION\n";
  if (!file.depth.empty()) {
    os << " STRT." << file.depth_unit << " " << format_double(file.depth.front()) << " : START DEPTH\n";
    os << " STOP." << file.depth_unit << " " << format_double(file.depth.back()) << " : STOP DEPTH\n";
  }
  os << " STEP." << file.depth_unit << " 0 : STEP\n";
  os << " NULL. " << format_double(file.null_value) << " : NULL VALUE\n";
  os << " API. " << file.well_id << " : API NUMBER\n";
  if (file.location) {
    os << " X.m " << format_double(file.location->x) << " : SURFACE EASTING\n";
    os << " Y.m " << format_double(file.location->y) << " : SURFACE NORTHING\n";
  }
  os << "~CURVE INFORMATION\n";
  os << " DEPT." << file.depth_unit << " : DEPTH\n";
  for (const auto& c : file.curves) os << " " << c.name << "." << c.unit << " : \n";
  os << "~ASCII\n";
  for (std::size_t r = 0; r < file.depth.size(); ++r) {
    os << format_double(file.depth[r]);
    for (const auto& c : file.curves) os << ' ' << fmt(c.values[r]);
    os << '\n';
  }
  return os.str();
}

void AliasDictionary::add(std::string_view raw, std::string_view alias) {
  const std::string key = to_lower(trim(raw));
  const std::string value(trim(alias));
  if (key.empty() || value.empty()) throw Error(Errc::Parse, "empty dictionary entry");
  const auto [it, inserted] = entries_.emplace(key, value);
  if (!inserted && it->second != value) {
    throw Error(Errc::DuplicateRaw, "'" + std::string(raw) + "' maps to both '" + it->second + "' and '" + value + "'");
  }
  canonical_.insert(value);
}

std::optional<std::string> AliasDictionary::lookup(std::string_view raw) const {
  const auto it = entries_.find(to_lower(trim(raw)));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

AliasDictionary load_dictionary(std::string_view csv_text) {
  const CsvTable table = parse_csv(csv_text);
  const std::size_t raw_col = table.require_column("raw");
  const std::size_t alias_col = table.require_column("alias");
  AliasDictionary dict;
  for (const auto& row : table.rows) dict.add(row[raw_col], row[alias_col]);
  const std::set<std::string> canonical = dict.canonical_set();
  for (const auto& alias : canonical) dict.add(alias, alias);
  return dict;
}

DictionaryResult apply_dictionary(const LasFile& file, const AliasDictionary& dict) {
  DictionaryResult out;
  out.file = file;
  out.file.curves.clear();
  for (const auto& curve : file.curves) {
    const auto alias = dict.lookup(curve.name);
    if (!alias) {
      out.skipped.push_back(curve.name);
      continue;
    }
    auto existing = std::find_if(out.file.curves.begin(), out.file.curves.end(),
                                 [&](const LasCurve& c) { return c.name == *alias; });
    if (existing == out.file.curves.end()) {
      LasCurve renamed = curve;
      renamed.name = *alias;
      out.file.curves.push_back(std::move(renamed));
    } else if (curve.missing_count() < existing->missing_count()) {
      existing->unit = curve.unit;
      existing->values = curve.values;
    }
  }
  return out;
}

}  // namespace sweetspot
