#pragma once

#include <string_view>

#include "climbprint/errors.hpp"

namespace climbprint {

// Controller/device operating mode. Printing covers both layered travel and
// spiral travel (the foot angle distinguishes them); Reversing is the
// direction flip between boustrophedon layers on open walls.
enum class Mode {
    Idle,
    Printing,
    Climbing,
    Reversing,
    Done,
};

std::string_view mode_name(Mode mode);
Mode mode_from_name(std::string_view name);

// Mechanical envelope of the positioning device. All lengths in meters.
struct DeviceConfig {
    double wheelbase_m = 0.0;         // front-to-rear wheel contact distance
    double clamp_min_m = 0.0;         // clampable wall thickness range
    double clamp_max_m = 0.0;
    double head_side_travel_m = 0.0;  // max |u| of the print head, across the wall
    double head_fb_travel_m = 0.0;    // max |v| of the print head, along the wall
    double foot_height_m = 0.0;       // wheel contact to lowest foot point
    double wheel_radius_m = 0.0;
    double max_wheel_speed_mps = 0.0; // wheel surface speed limit
};

// Surface speeds of the four wheels, signed; positive rolls the device
// toward increasing arclength. Left wheels ride the left side of the wall
// (the side the left normal points into).
struct WheelSpeeds {
    double front_left = 0.0;
    double front_right = 0.0;
    double rear_left = 0.0;
    double rear_right = 0.0;

    double mean() const {
        return (front_left + front_right + rear_left + rear_right) / 4.0;
    }
};

// Full kinematic state of the device. The controller emits commands; this is
// what those commands integrate into.
struct DeviceState {
    double t_s = 0.0;
    double s_m = 0.0;          // device reference arclength (wrapped on closed paths)
    double s_total_m = 0.0;    // unwrapped rolled arclength
    double z_m = 0.0;          // nozzle tip height above the footprint base
    double foot_angle_deg = 0.0;
    double clamp_gap_m = 0.0;
    double head_u_m = 0.0;     // lateral head offset, positive along the left normal
    double head_v_m = 0.0;     // fore/aft head offset, positive toward increasing s
    WheelSpeeds wheels;
    bool extruding = false;
    Mode mode = Mode::Idle;
};

// Differential wheel speeds that carry the device along a wall of the given
// curvature at reference speed v (signed). The two wall sides travel arcs of
// radius R -/+ t/2, so the wheels scale by (1 -/+ curvature * t / 2).
// Throws WallTooCurved when a wall side degenerates (|curvature| * t / 2 >= 1)
// and SpeedLimitExceeded when a wheel exceeds the device surface speed limit.
WheelSpeeds wheel_speeds(double v_mps, double curvature, double wall_thickness_m,
                         const DeviceConfig& device);

// Clamp gap for the given wall: equal to the wall thickness. Throws
// WallTooThin / WallTooThick outside the clampable range.
double clamp_onto_wall(double wall_thickness_m, const DeviceConfig& device);

// One climbing move: foot rotated to 90 degrees, wheels vertical, device
// rises by exactly one layer height. Extrusion must be off. Returns the
// state after the climb (z raised, mode Climbing preserved until the caller
// transitions out).
DeviceState climb_step(const DeviceState& state, double layer_height_m,
                       const DeviceConfig& device);

// Foot tilt for continuous spiral printing: atan(layer_height / perimeter),
// in degrees. One full revolution then rises exactly one layer height.
double spiral_tilt_deg(double layer_height_m, double layer_perimeter_m);

// Applies a print-head offset command, validating the travel envelope.
// Throws HeadTravelExceeded when |u| or |v| leaves the reachable range.
DeviceState head_offset(const DeviceState& state, double u_m, double v_m,
                        const DeviceConfig& device);

}  // namespace climbprint
