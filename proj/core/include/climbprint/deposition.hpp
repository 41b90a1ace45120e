#pragma once

#include "climbprint/errors.hpp"
#include "climbprint/trace.hpp"

namespace climbprint {

// Material and process window of the extrusion system.
struct MaterialModel {
    double extrusion_min_mm3s = 0.0;
    double extrusion_max_mm3s = 0.0;
    double cure_time_s = 0.0;          // time a layer needs before carrying the next
    double bead_width_min_m = 0.0;     // printable bead width range
    double bead_width_max_m = 0.0;
};

// One continuous run of deposited material: a constant-width, constant-height
// rectangular bead swept along a centerline.
struct BeadSegment {
    int layer = 0;
    double width_m = 0.0;
    double height_m = 0.0;
    // Centerline in wall coordinates: arclength along the footprint, lateral
    // offset along the left normal, and nozzle height (the bead top; the
    // cross-section center sits at z - height/2).
    std::vector<double> s_m;
    std::vector<double> u_m;
    std::vector<double> z_m;
    double volume_mm3() const;
    double length_m() const;
};

// Bead width from volume conservation: flow = width * height * speed.
// Flow is in mm^3/s, lengths in meters (1 mm^3 = 1e-9 m^3). Throws
// NonPositiveInput when flow, speed, or layer height is not positive.
double bead_width(double flow_mm3s, double speed_mps, double layer_height_m);

// Flow required to lay the given bead at the given speed; inverse of
// bead_width in the flow argument.
double required_flow_mm3s(double bead_width_m, double speed_mps, double layer_height_m);

// Fastest device speed that still leaves every point of a layer cured before
// the device returns: full layer path length / cure time.
double max_device_speed(const MaterialModel& material, double layer_path_length_m);

// Total deposited volume of a trace in mm^3, by exact trapezoidal
// integration of the flow nodes, gated per interval by the left record's
// extruding flag. Throws NonMonotonicTimestamps on unordered records.
double deposited_volume(const ControlTrace& trace);

}  // namespace climbprint
