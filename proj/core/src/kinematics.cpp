#include "climbprint/kinematics.hpp"

#include <cmath>
#include <sstream>

namespace climbprint {

std::string_view mode_name(Mode mode) {
    switch (mode) {
        case Mode::Idle: return "idle";
        case Mode::Printing: return "printing";
        case Mode::Climbing: return "climbing";
        case Mode::Reversing: return "reversing";
        case Mode::Done: return "done";
    }
    return "unknown";
}

Mode mode_from_name(std::string_view name) {
    if (name == "idle") return Mode::Idle;
    if (name == "printing") return Mode::Printing;
    if (name == "climbing") return Mode::Climbing;
    if (name == "reversing") return Mode::Reversing;
    if (name == "done") return Mode::Done;
    throw Error(ErrorCode::InvalidArgument, "unknown mode name: " + std::string(name));
}

WheelSpeeds wheel_speeds(double v_mps, double curvature, double wall_thickness_m,
                         const DeviceConfig& device) {
    if (!(wall_thickness_m > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "wall thickness must be positive");
    }
    double half_kt = std::abs(curvature) * wall_thickness_m / 2.0;
    if (half_kt >= 1.0) {
        std::ostringstream os;
        os << "wall of thickness " << wall_thickness_m
           << " degenerates at curvature " << curvature;
        throw Error(ErrorCode::WallTooCurved, os.str());
    }
    // Positive curvature puts the turn center on the left, so the left side
    // travels the shorter arc.
    double left = v_mps * (1.0 - curvature * wall_thickness_m / 2.0);
    double right = v_mps * (1.0 + curvature * wall_thickness_m / 2.0);
    double worst = std::max(std::abs(left), std::abs(right));
    if (worst > device.max_wheel_speed_mps + 1e-12) {
        std::ostringstream os;
        os << "wheel speed " << worst << " exceeds limit " << device.max_wheel_speed_mps;
        throw Error(ErrorCode::SpeedLimitExceeded, os.str());
    }
    return {left, right, left, right};
}

double clamp_onto_wall(double wall_thickness_m, const DeviceConfig& device) {
    if (wall_thickness_m < device.clamp_min_m) {
        std::ostringstream os;
        os << "wall thickness " << wall_thickness_m << " below clamp minimum "
           << device.clamp_min_m;
        throw Error(ErrorCode::WallTooThin, os.str());
    }
    if (wall_thickness_m > device.clamp_max_m) {
        std::ostringstream os;
        os << "wall thickness " << wall_thickness_m << " above clamp maximum "
           << device.clamp_max_m;
        throw Error(ErrorCode::WallTooThick, os.str());
    }
    return wall_thickness_m;
}

DeviceState climb_step(const DeviceState& state, double layer_height_m,
                       const DeviceConfig& device) {
    if (!(layer_height_m > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "layer height must be positive");
    }
    if (state.extruding) {
        throw Error(ErrorCode::ExtrusionActiveDuringClimb,
                    "extrusion must stop before climbing");
    }
    (void)device;
    DeviceState next = state;
    next.mode = Mode::Climbing;
    next.foot_angle_deg = 90.0;
    next.z_m = state.z_m + layer_height_m;
    return next;
}

double spiral_tilt_deg(double layer_height_m, double layer_perimeter_m) {
    if (!(layer_height_m > 0.0) || !(layer_perimeter_m > 0.0)) {
        throw Error(ErrorCode::InvalidArgument,
                    "layer height and perimeter must be positive");
    }
    return std::atan(layer_height_m / layer_perimeter_m) * 180.0 / M_PI;
}

DeviceState head_offset(const DeviceState& state, double u_m, double v_m,
                        const DeviceConfig& device) {
    if (std::abs(u_m) > device.head_side_travel_m + 1e-12) {
        std::ostringstream os;
        os << "head side offset " << u_m << " exceeds travel "
           << device.head_side_travel_m;
        throw Error(ErrorCode::HeadTravelExceeded, os.str());
    }
    if (std::abs(v_m) > device.head_fb_travel_m + 1e-12) {
        std::ostringstream os;
        os << "head fore/aft offset " << v_m << " exceeds travel "
           << device.head_fb_travel_m;
        throw Error(ErrorCode::HeadTravelExceeded, os.str());
    }
    DeviceState next = state;
    next.head_u_m = u_m;
    next.head_v_m = v_m;
    return next;
}

}  // namespace climbprint
