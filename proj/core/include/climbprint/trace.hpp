#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "climbprint/kinematics.hpp"

namespace climbprint {

// Quantizes to the 1e-9 grid used by the trace format, so a value written
// with 9 decimals reads back bit-identical.
inline double q9(double x) { return std::nearbyint(x * 1e9) / 1e9; }

// One controller output record: the commands in effect from this timestamp
// until the next record. Head offsets are position setpoints that the head
// servo reaches exactly at t_s, moving linearly from the previous setpoint;
// all other fields hold constant over the interval.
//
// extrusion_mm3s is a flow node at t_s: the deposited volume of an interval
// is the trapezoid of its two endpoint nodes, gated by the *left* record's
// extruding flag. A record that switches extrusion off therefore still
// carries the closing flow node of the interval it terminates.
struct ControlRecord {
    double t_s = 0.0;
    Mode mode = Mode::Idle;
    WheelSpeeds wheels;
    double foot_angle_deg = 0.0;
    double clamp_gap_m = 0.0;
    double head_u_m = 0.0;
    double head_v_m = 0.0;
    double extrusion_mm3s = 0.0;
    bool extruding = false;
};

// Quantizes every numeric field to the trace grid. Records are quantized at
// creation so in-memory values, CSV round-trips, and replays agree exactly.
ControlRecord quantized(const ControlRecord& r);

struct ControlTrace {
    std::vector<ControlRecord> records;
    std::uint64_t plan_digest = 0;
};

// Structural validation: timestamps strictly increasing (throws
// NonMonotonicTimestamps), starts Idle with extrusion off, ends Done, no
// record extrudes while climbing or reversing (throws ValidationError).
void validate_trace(const ControlTrace& trace);

}  // namespace climbprint
