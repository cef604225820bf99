#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sweetspot {

enum class Errc {
  // las_ingest
  MissingSection,
  RowArity,
  NoDepthCurve,
  DuplicateRaw,
  // formation_map
  DuplicateTop,
  UnknownFormation,
  MissingCoordinates,
  NoDonors,
  NoFormationBelow,
  InvertedInterval,
  // log_frame
  EmptyList,
  CurveAbsent,
  InsufficientCoverage,
  EmptyBlock,
  // production_frame
  NegativeVolume,
  WellAbsent,
  FormationUnrecognized,
  DuplicateFeature,
  // fpca
  TooFewWells,
  DegenerateGrid,
  KOutOfRange,
  // geostat
  TooFewSamples,
  NoSamples,
  // models / evaluation
  NonConvergence,
  ColumnMismatch,
  BadK,
  EmptyDataset,
  ZeroVariance,
  // synthfield / cli
  ConfigInvalid,
  Mismatch,
  Parse,
  Io,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

}  // namespace sweetspot
