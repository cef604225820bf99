#include "sweetspot/error.hpp"

namespace sweetspot {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::MissingSection: return "MissingSection";
    case Errc::RowArity: return "RowArity";
    case Errc::NoDepthCurve: return "NoDepthCurve";
    case Errc::DuplicateRaw: return "DuplicateRaw";
    case Errc::DuplicateTop: return "DuplicateTop";
    case Errc::UnknownFormation: return "UnknownFormation";
    case Errc::MissingCoordinates: return "MissingCoordinates";
    case Errc::NoDonors: return "NoDonors";
    case Errc::NoFormationBelow: return "NoFormationBelow";
    case Errc::InvertedInterval: return "InvertedInterval";
    case Errc::EmptyList: return "EmptyList";
    case Errc::CurveAbsent: return "CurveAbsent";
    case Errc::InsufficientCoverage: return "InsufficientCoverage";
    case Errc::EmptyBlock: return "EmptyBlock";
    case Errc::NegativeVolume: return "NegativeVolume";
    case Errc::WellAbsent: return "WellAbsent";
    case Errc::FormationUnrecognized: return "FormationUnrecognized";
    case Errc::DuplicateFeature: return "DuplicateFeature";
    case Errc::TooFewWells: return "TooFewWells";
    case Errc::DegenerateGrid: return "DegenerateGrid";
    case Errc::KOutOfRange: return "KOutOfRange";
    case Errc::TooFewSamples: return "TooFewSamples";
    case Errc::NoSamples: return "NoSamples";
    case Errc::NonConvergence: return "NonConvergence";
    case Errc::ColumnMismatch: return "ColumnMismatch";
    case Errc::BadK: return "BadK";
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::ZeroVariance: return "ZeroVariance";
    case Errc::ConfigInvalid: return "ConfigInvalid";
    case Errc::Mismatch: return "Mismatch";
    case Errc::Parse: return "Parse";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace sweetspot
