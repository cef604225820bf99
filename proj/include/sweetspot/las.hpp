#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace sweetspot {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct LasCurve {
  std::string name;
  std::string unit;
  std::vector<double> values;  // aligned with LasFile::depth, NaN = missing

  std::size_t missing_count() const;
};

/// One vertical well's logs. `depth` is strictly increasing and every curve has
/// the same length as `depth`.
struct LasFile {
  std::string well_id;
  std::optional<Point> location;
  double null_value = -999.25;
  std::string depth_unit;
  std::vector<double> depth;
  std::vector<LasCurve> curves;  // file order, depth curve excluded
  std::size_t dropped_rows = 0;  // non-increasing depth rows discarded while parsing

  const LasCurve* find(std::string_view name) const;
};

/// Parses an unwrapped LAS 2.0 document.
///
/// Throws Error{MissingSection} when ~CURVE or ~ASCII is absent (or WRAP=YES),
/// Error{RowArity} on a data row whose field count differs from the curve count,
/// Error{NoDepthCurve} when the first curve is not a depth mnemonic.
LasFile parse_las(std::string_view text);

/// Writes a normalized LAS 2.0 document that parse_las reads back identically.
std::string serialize_las(const LasFile& file);

class AliasDictionary {
public:
  /// Adds raw -> alias. Raw mnemonics compare case-insensitively.
  /// Throws Error{DuplicateRaw} if raw already maps to a different alias.
  void add(std::string_view raw, std::string_view alias);

  std::optional<std::string> lookup(std::string_view raw) const;
  std::size_t size() const { return entries_.size(); }
  const std::set<std::string>& canonical_set() const { return canonical_; }

private:
  std::map<std::string, std::string> entries_;  // lower-cased raw -> alias
  std::set<std::string> canonical_;
};

/// CSV with header `raw,alias`. Canonical aliases are added as self-mappings.
AliasDictionary load_dictionary(std::string_view csv_text);

struct DictionaryResult {
  LasFile file;
  std::vector<std::string> skipped;  // raw names with no dictionary entry
};

/// Renames curves to canonical aliases. Curves without an entry are dropped and
/// listed; when two curves collapse onto one alias the one with fewer missing
/// samples wins, ties going to the earlier curve.
DictionaryResult apply_dictionary(const LasFile& file, const AliasDictionary& dict);

}  // namespace sweetspot
