#pragma once

#include <cmath>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sweetspot {

/// Missing samples, features, and targets are quiet NaNs throughout.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
inline bool is_missing(double v) noexcept { return std::isnan(v); }

std::string_view trim(std::string_view s) noexcept;
std::string to_lower(std::string_view s);
/// Lower-case with all whitespace removed ("Wolfcamp A" and "wolfcampa" fold equal).
std::string fold_name(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_ws(std::string_view s);

/// Shortest text that parses back to the same double. NaN prints as "NA".
std::string format_double(double v);
/// Fixed-precision rendering for human-facing output.
std::string format_fixed(double v, int digits);
std::optional<double> parse_double(std::string_view s) noexcept;

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

/// Minimal comma-separated table: no quoting, header row required.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by (case-insensitive) name, or npos.
  std::size_t column(std::string_view name) const;
  std::size_t require_column(std::string_view name) const;
};

CsvTable parse_csv(std::string_view text);

}  // namespace sweetspot
