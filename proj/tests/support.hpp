#pragma once

// Shared fixture builders for the test suite. The circular footprints use a
// regular polygon whose vertices sit at radius R / cos(pi/n): after corner
// blending the resampled centerline is then exactly the circle of radius R,
// which makes circle-based oracles (curvature, offsets, wheel arcs) closed
// form instead of polygon approximations.

#include <cmath>
#include <vector>

#include "climbprint/planner.hpp"

namespace climbprint::testing {

inline DeviceConfig test_device() {
    DeviceConfig d;
    d.wheelbase_m = 0.4;
    d.clamp_min_m = 0.02;
    d.clamp_max_m = 0.10;
    d.head_side_travel_m = 0.15;
    d.head_fb_travel_m = 0.25;
    d.foot_height_m = 0.06;
    d.wheel_radius_m = 0.03;
    d.max_wheel_speed_mps = 0.05;
    return d;
}

inline MaterialModel test_material() {
    MaterialModel m;
    m.extrusion_min_mm3s = 4000.0;
    m.extrusion_max_mm3s = 12000.0;
    m.cure_time_s = 300.0;
    m.bead_width_min_m = 0.02;
    m.bead_width_max_m = 0.08;
    return m;
}

inline PathSpec circle_spec(double radius, int n = 96, double top_height = 0.10,
                            double thickness = 0.04) {
    PathSpec spec;
    double rv = radius / std::cos(M_PI / n);
    spec.points.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double a = 2.0 * M_PI * i / n;
        spec.points.push_back({rv * std::cos(a), rv * std::sin(a)});
    }
    spec.closed = true;
    spec.thickness_m = thickness;
    spec.top_height_m = PiecewiseLinear(top_height);
    return spec;
}

inline PathSpec line_spec(double length, double top_height = 0.10,
                          double thickness = 0.04) {
    PathSpec spec;
    spec.points = {{0.0, 0.0}, {length, 0.0}};
    spec.closed = false;
    spec.thickness_m = thickness;
    spec.top_height_m = PiecewiseLinear(top_height);
    return spec;
}

// Unit-circle design: v = 0.01 m/s and flow = 8000 mm^3/s fall out of the
// material window, giving one lap per 2*pi/0.01 seconds.
inline Design circle_design(PlanMode mode, int n_layers, double inclination_deg = 0.0) {
    Design d;
    d.footprint = circle_spec(1.0);
    d.mode = mode;
    d.n_layers = n_layers;
    d.layer_height_m = 0.02;
    d.target_bead_width_m = 0.04;
    if (inclination_deg != 0.0) {
        d.inclination = InclinationProfile::constant(inclination_deg);
    }
    d.material = test_material();
    d.device = test_device();
    d.resample_step_m = 0.005;
    d.dt_s = 0.1;
    return d;
}

// Open straight wall sized so the cure-time speed bound still needs a flow
// inside the extruder window.
inline Design wall_design(int n_layers, double length = 2.0) {
    Design d;
    d.footprint = line_spec(length);
    d.mode = PlanMode::OpenBoustrophedon;
    d.n_layers = n_layers;
    d.layer_height_m = 0.02;
    d.target_bead_width_m = 0.04;
    d.material = test_material();
    d.device = test_device();
    d.resample_step_m = 0.005;
    d.dt_s = 0.1;
    return d;
}

}  // namespace climbprint::testing
