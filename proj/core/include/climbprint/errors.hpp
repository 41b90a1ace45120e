#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace climbprint {

// Every failure carries a machine-readable code plus a message that names the
// offending value. Codes are stable identifiers used by tests and the CLI.
enum class ErrorCode {
    // geometry
    DegeneratePath,
    SelfIntersection,
    OutOfRange,
    OffsetExceedsCurvatureRadius,
    ChordExceedsDiameter,
    // deposition
    NonPositiveInput,
    NonMonotonicTimestamps,
    // kinematics
    WallTooCurved,
    SpeedLimitExceeded,
    WallTooThin,
    WallTooThick,
    ExtrusionActiveDuringClimb,
    OpenPathSpiral,
    HeadTravelExceeded,
    // planner
    InclinationTooSteep,
    CureTimeInfeasible,
    FootprintInvalid,
    FootprintTooShort,
    FootprintUnclampable,
    // controller / simulator
    LimitViolation,
    TraceDesignMismatch,
    EmptyStructure,
    TooFewLayers,
    // io
    ParseError,
    ValidationError,
    IoError,
    // contract violations (bad call arguments)
    InvalidArgument,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
          code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// One finding from a validator that reports all problems instead of the first.
struct Issue {
    std::string path;     // field path, e.g. "design.footprint.thickness_m"
    std::string code;     // machine-readable code, e.g. "validation/out_of_range"
    std::string message;  // human-readable, includes the offending value
};

}  // namespace climbprint
