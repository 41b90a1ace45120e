#include "climbprint/errors.hpp"

namespace climbprint {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::DegeneratePath: return "DegeneratePath";
        case ErrorCode::SelfIntersection: return "SelfIntersection";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::OffsetExceedsCurvatureRadius: return "OffsetExceedsCurvatureRadius";
        case ErrorCode::ChordExceedsDiameter: return "ChordExceedsDiameter";
        case ErrorCode::NonPositiveInput: return "NonPositiveInput";
        case ErrorCode::NonMonotonicTimestamps: return "NonMonotonicTimestamps";
        case ErrorCode::WallTooCurved: return "WallTooCurved";
        case ErrorCode::SpeedLimitExceeded: return "SpeedLimitExceeded";
        case ErrorCode::WallTooThin: return "WallTooThin";
        case ErrorCode::WallTooThick: return "WallTooThick";
        case ErrorCode::ExtrusionActiveDuringClimb: return "ExtrusionActiveDuringClimb";
        case ErrorCode::OpenPathSpiral: return "OpenPathSpiral";
        case ErrorCode::HeadTravelExceeded: return "HeadTravelExceeded";
        case ErrorCode::InclinationTooSteep: return "InclinationTooSteep";
        case ErrorCode::CureTimeInfeasible: return "CureTimeInfeasible";
        case ErrorCode::FootprintInvalid: return "FootprintInvalid";
        case ErrorCode::FootprintTooShort: return "FootprintTooShort";
        case ErrorCode::FootprintUnclampable: return "FootprintUnclampable";
        case ErrorCode::LimitViolation: return "LimitViolation";
        case ErrorCode::TraceDesignMismatch: return "TraceDesignMismatch";
        case ErrorCode::EmptyStructure: return "EmptyStructure";
        case ErrorCode::TooFewLayers: return "TooFewLayers";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::ValidationError: return "ValidationError";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "UnknownError";
}

}  // namespace climbprint
