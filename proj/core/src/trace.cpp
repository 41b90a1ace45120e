#include "climbprint/trace.hpp"

#include <sstream>

namespace climbprint {

ControlRecord quantized(const ControlRecord& r) {
    ControlRecord out = r;
    out.t_s = q9(r.t_s);
    out.wheels.front_left = q9(r.wheels.front_left);
    out.wheels.front_right = q9(r.wheels.front_right);
    out.wheels.rear_left = q9(r.wheels.rear_left);
    out.wheels.rear_right = q9(r.wheels.rear_right);
    out.foot_angle_deg = q9(r.foot_angle_deg);
    out.clamp_gap_m = q9(r.clamp_gap_m);
    out.head_u_m = q9(r.head_u_m);
    out.head_v_m = q9(r.head_v_m);
    out.extrusion_mm3s = q9(r.extrusion_mm3s);
    return out;
}

void validate_trace(const ControlTrace& trace) {
    const auto& recs = trace.records;
    if (recs.empty()) {
        throw Error(ErrorCode::ValidationError, "trace has no records");
    }
    for (std::size_t i = 1; i < recs.size(); ++i) {
        if (!(recs[i].t_s > recs[i - 1].t_s)) {
            std::ostringstream os;
            os << "record " << i << " at t=" << recs[i].t_s
               << " does not advance past t=" << recs[i - 1].t_s;
            throw Error(ErrorCode::NonMonotonicTimestamps, os.str());
        }
    }
    if (recs.front().mode != Mode::Idle || recs.front().extruding) {
        throw Error(ErrorCode::ValidationError,
                    "trace must start idle with extrusion off");
    }
    if (recs.back().mode != Mode::Done) {
        throw Error(ErrorCode::ValidationError, "trace must end in done mode");
    }
    for (std::size_t i = 0; i < recs.size(); ++i) {
        if (recs[i].extruding &&
            (recs[i].mode == Mode::Climbing || recs[i].mode == Mode::Reversing)) {
            std::ostringstream os;
            os << "record " << i << " extrudes in mode " << mode_name(recs[i].mode);
            throw Error(ErrorCode::ValidationError, os.str());
        }
    }
}

}  // namespace climbprint
