#include "climbprint/deposition.hpp"

#include <cmath>
#include <sstream>

namespace climbprint {

double BeadSegment::length_m() const {
    double len = 0.0;
    for (std::size_t i = 1; i < s_m.size(); ++i) len += std::abs(s_m[i] - s_m[i - 1]);
    return len;
}

double BeadSegment::volume_mm3() const {
    return width_m * height_m * length_m() * 1e9;
}

double bead_width(double flow_mm3s, double speed_mps, double layer_height_m) {
    if (!(flow_mm3s > 0.0) || !(speed_mps > 0.0) || !(layer_height_m > 0.0)) {
        std::ostringstream os;
        os << "flow " << flow_mm3s << " mm^3/s, speed " << speed_mps
           << " m/s and layer height " << layer_height_m << " m must all be positive";
        throw Error(ErrorCode::NonPositiveInput, os.str());
    }
    return flow_mm3s * 1e-9 / (speed_mps * layer_height_m);
}

double required_flow_mm3s(double bead_width_m, double speed_mps, double layer_height_m) {
    if (!(bead_width_m > 0.0) || !(speed_mps > 0.0) || !(layer_height_m > 0.0)) {
        std::ostringstream os;
        os << "bead width " << bead_width_m << " m, speed " << speed_mps
           << " m/s and layer height " << layer_height_m << " m must all be positive";
        throw Error(ErrorCode::NonPositiveInput, os.str());
    }
    return bead_width_m * speed_mps * layer_height_m * 1e9;
}

double max_device_speed(const MaterialModel& material, double layer_path_length_m) {
    if (!(material.cure_time_s > 0.0) || !(layer_path_length_m > 0.0)) {
        throw Error(ErrorCode::NonPositiveInput,
                    "cure time and layer path length must be positive");
    }
    return layer_path_length_m / material.cure_time_s;
}

double deposited_volume(const ControlTrace& trace) {
    const auto& recs = trace.records;
    double total = 0.0;
    for (std::size_t i = 1; i < recs.size(); ++i) {
        double dt = recs[i].t_s - recs[i - 1].t_s;
        if (!(dt > 0.0)) {
            std::ostringstream os;
            os << "record " << i << " at t=" << recs[i].t_s
               << " does not advance past t=" << recs[i - 1].t_s;
            throw Error(ErrorCode::NonMonotonicTimestamps, os.str());
        }
        if (!recs[i - 1].extruding) continue;
        total += dt * (recs[i - 1].extrusion_mm3s + recs[i].extrusion_mm3s) / 2.0;
    }
    return total;
}

}  // namespace climbprint
