#include "climbprint/planner.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "climbprint/digest.hpp"
#include "climbprint/trace.hpp"

namespace climbprint {

namespace {

constexpr double kDegToRad = M_PI / 180.0;

double polyline_length(const PathSpec& spec) {
    double len = 0.0;
    const auto& p = spec.points;
    for (std::size_t i = 1; i < p.size(); ++i) len += (p[i] - p[i - 1]).norm();
    if (spec.closed && p.size() > 1) len += (p.front() - p.back()).norm();
    return len;
}

void require(bool ok, ErrorCode code, const std::string& message) {
    if (!ok) throw Error(code, message);
}

std::string at_s(double s) {
    std::ostringstream os;
    os << " at s=" << s;
    return os.str();
}

double tan_deg_checked(double deg, int layer, double s) {
    if (std::abs(deg) >= 90.0 - 1e-9) {
        std::ostringstream os;
        os << "inclination " << deg << " deg at layer " << layer << at_s(s)
           << " has no finite shift";
        throw Error(ErrorCode::InclinationTooSteep, os.str());
    }
    return std::tan(deg * kDegToRad);
}

}  // namespace

std::string_view plan_mode_name(PlanMode mode) {
    switch (mode) {
        case PlanMode::ClosedLayered: return "closed_layered";
        case PlanMode::Spiral: return "spiral";
        case PlanMode::OpenBoustrophedon: return "open_boustrophedon";
    }
    return "unknown";
}

PlanMode plan_mode_from_name(std::string_view name) {
    if (name == "closed_layered") return PlanMode::ClosedLayered;
    if (name == "spiral") return PlanMode::Spiral;
    if (name == "open_boustrophedon") return PlanMode::OpenBoustrophedon;
    throw Error(ErrorCode::InvalidArgument, "unknown plan mode: " + std::string(name));
}

InclinationProfile InclinationProfile::constant(double deg) {
    InclinationProfile p;
    if (deg != 0.0) p.rows_.push_back(PiecewiseLinear(deg));
    return p;
}

InclinationProfile InclinationProfile::per_layer(std::vector<double> deg) {
    InclinationProfile p;
    p.rows_.reserve(deg.size());
    for (double d : deg) p.rows_.push_back(PiecewiseLinear(d));
    return p;
}

InclinationProfile InclinationProfile::per_layer_profiles(std::vector<PiecewiseLinear> rows) {
    InclinationProfile p;
    p.rows_ = std::move(rows);
    return p;
}

double InclinationProfile::deg(int layer, double s_m) const {
    if (rows_.empty()) return 0.0;
    auto idx = std::min<std::size_t>(static_cast<std::size_t>(std::max(layer, 0)),
                                     rows_.size() - 1);
    return rows_[idx](s_m);
}

bool InclinationProfile::is_zero() const {
    for (const auto& row : rows_) {
        if (row.min_value() != 0.0 || row.max_value() != 0.0) return false;
    }
    return true;
}

double deviation_correction(double curvature, double wheelbase_m) {
    require(wheelbase_m > 0.0, ErrorCode::InvalidArgument, "wheelbase must be positive");
    if (curvature == 0.0) return 0.0;
    double sag = chord_sagitta(curvature, wheelbase_m);
    // The chord midpoint sits toward the turn center; compensate outward.
    return curvature > 0.0 ? -sag : sag;
}

double inclination_shift(const InclinationProfile& inclination, int layer_index,
                         double layer_height_m, double s_m) {
    require(layer_index >= 0, ErrorCode::InvalidArgument, "layer index must be >= 0");
    require(layer_height_m > 0.0, ErrorCode::InvalidArgument,
            "layer height must be positive");
    double cum = 0.0;
    for (int i = 1; i <= layer_index; ++i) {
        cum += layer_height_m * tan_deg_checked(inclination.deg(i, s_m), i, s_m);
    }
    return cum;
}

FootprintReport footprint_check(const Design& design) {
    FootprintReport report;
    double min_top = design.footprint.top_height_m.min_value();
    if (min_top < design.device.foot_height_m) {
        std::ostringstream os;
        os << "wall top height " << min_top << " m is below the device foot height "
           << design.device.foot_height_m << " m; the device cannot hang from it";
        report.errors.push_back(
            {"design.footprint.top_height_m", "FootprintTooShort", os.str()});
    }
    if (design.footprint.thickness_m < design.device.clamp_min_m ||
        design.footprint.thickness_m > design.device.clamp_max_m) {
        std::ostringstream os;
        os << "wall thickness " << design.footprint.thickness_m
           << " m is outside the clamp range [" << design.device.clamp_min_m << ", "
           << design.device.clamp_max_m << "] m";
        report.errors.push_back(
            {"design.footprint.thickness_m", "FootprintUnclampable", os.str()});
    }
    if (design.target_bead_width_m > 0.0) {
        double diff = std::abs(design.footprint.thickness_m - design.target_bead_width_m);
        if (diff > 0.25 * design.target_bead_width_m) {
            std::ostringstream os;
            os << "wall thickness " << design.footprint.thickness_m
               << " m differs from the target bead width " << design.target_bead_width_m
               << " m by more than 25%";
            report.warnings.push_back(
                {"design.footprint.thickness_m", "bead_width_mismatch", os.str()});
        }
    }
    return report;
}

namespace {

void validate_design(const Design& d) {
    auto bad = [](const std::string& m) { throw Error(ErrorCode::ValidationError, m); };
    if (d.n_layers < 1) bad("n_layers must be >= 1");
    if (!(d.layer_height_m > 0.0)) bad("layer_height_m must be positive");
    if (!(d.footprint.thickness_m > 0.0)) bad("footprint thickness must be positive");
    if (!(d.dt_s > 0.0)) bad("dt must be positive");
    if (d.resample_step_m < 0.0) bad("resample step must be positive");
    const auto& dev = d.device;
    if (!(dev.wheelbase_m > 0.0) || !(dev.wheel_radius_m > 0.0) ||
        !(dev.foot_height_m > 0.0) || !(dev.max_wheel_speed_mps > 0.0) ||
        !(dev.head_side_travel_m > 0.0) || !(dev.head_fb_travel_m > 0.0)) {
        bad("device dimensions and speed limit must be positive");
    }
    if (!(dev.clamp_min_m > 0.0) || !(dev.clamp_max_m >= dev.clamp_min_m)) {
        bad("device clamp range must satisfy 0 < min <= max");
    }
    const auto& mat = d.material;
    if (!(mat.extrusion_min_mm3s > 0.0) ||
        !(mat.extrusion_max_mm3s >= mat.extrusion_min_mm3s)) {
        bad("extrusion rate range must satisfy 0 < min <= max");
    }
    if (!(mat.cure_time_s > 0.0)) bad("cure_time_s must be positive");
    if (!(mat.bead_width_min_m > 0.0) ||
        !(mat.bead_width_max_m >= mat.bead_width_min_m)) {
        bad("bead width range must satisfy 0 < min <= max");
    }
    if (d.target_bead_width_m < mat.bead_width_min_m ||
        d.target_bead_width_m > mat.bead_width_max_m) {
        std::ostringstream os;
        os << "target bead width " << d.target_bead_width_m
           << " m is outside the printable range [" << mat.bead_width_min_m << ", "
           << mat.bead_width_max_m << "] m";
        bad(os.str());
    }
}

ErrorCode issue_code(const Issue& issue) {
    if (issue.code == "FootprintTooShort") return ErrorCode::FootprintTooShort;
    if (issue.code == "FootprintUnclampable") return ErrorCode::FootprintUnclampable;
    return ErrorCode::FootprintInvalid;
}

}  // namespace

PrintPlan compile(const Design& design, const PlannerOptions& options) {
    validate_design(design);

    FootprintReport fp = footprint_check(design);
    if (!fp.ok()) {
        const Issue& first = fp.errors.front();
        throw Error(issue_code(first), first.message);
    }

    bool closed = design.footprint.closed;
    switch (design.mode) {
        case PlanMode::ClosedLayered:
            require(closed, ErrorCode::ValidationError,
                    "closed_layered requires a closed footprint");
            break;
        case PlanMode::Spiral:
            require(closed, ErrorCode::OpenPathSpiral,
                    "spiral printing requires a closed footprint");
            require(design.footprint.top_height_m.max_value() ==
                        design.footprint.top_height_m.min_value(),
                    ErrorCode::FootprintInvalid,
                    "spiral printing requires a constant footprint top height");
            break;
        case PlanMode::OpenBoustrophedon:
            require(!closed, ErrorCode::ValidationError,
                    "open_boustrophedon requires an open footprint");
            break;
    }

    double step = design.resample_step_m;
    if (step <= 0.0) {
        step = std::clamp(polyline_length(design.footprint) / 200.0, 1e-4, 0.01);
    }
    ArcLengthPath path = resample(design.footprint, step);
    double length = path.total_length();
    double wb = design.device.wheelbase_m;
    double thickness = design.footprint.thickness_m;
    double h = design.layer_height_m;
    double width = design.target_bead_width_m;

    if (design.mode == PlanMode::OpenBoustrophedon) {
        require(design.device.head_fb_travel_m >= wb / 2.0 - 1e-12,
                ErrorCode::HeadTravelExceeded,
                "end coverage needs head fore/aft travel >= wheelbase/2");
        std::ostringstream os;
        os << "wall length " << length << " m is not longer than the wheelbase " << wb;
        require(length > wb, ErrorCode::FootprintInvalid, os.str());
    }

    const auto& samples = path.samples();
    double worst_scale = 1.0;
    for (const PathSample& smp : samples) {
        double k = std::abs(smp.curvature);
        if (k * thickness / 2.0 >= 1.0) {
            std::ostringstream os;
            os << "wall thickness " << thickness << " degenerates at curvature "
               << smp.curvature << at_s(smp.s);
            throw Error(ErrorCode::WallTooCurved, os.str());
        }
        if (k * wb / 2.0 >= 1.0 - 1e-12) {
            std::ostringstream os;
            os << "wheelbase " << wb << " cannot chord curvature " << smp.curvature
               << at_s(smp.s);
            throw Error(ErrorCode::WallTooCurved, os.str());
        }
        worst_scale = std::max(worst_scale, 1.0 + k * thickness / 2.0);
    }

    // Layer speed: volume conservation at mid-window flow, bounded by the
    // cure-time lap limit and the wheel speed limit on the outer wall side.
    // Floored onto the trace quantization grid: every bound is an upper
    // bound, and a command that rounded up would drift past it over a long
    // phase (an open wall's end, the cure revisit time).
    double v_wheel = design.device.max_wheel_speed_mps / worst_scale;
    double v_cure = max_device_speed(design.material, length);
    double flow_mid =
        (design.material.extrusion_min_mm3s + design.material.extrusion_max_mm3s) / 2.0;
    double v_flow = flow_mid * 1e-9 / (width * h);
    double v = std::floor(std::min({v_flow, v_cure, v_wheel}) * 1e9) / 1e9;
    double flow = q9(required_flow_mm3s(width, v, h));
    if (flow + 1e-12 < design.material.extrusion_min_mm3s) {
        std::ostringstream os;
        os << "printable speed " << v << " m/s needs flow " << flow
           << " mm^3/s, below the extruder minimum " << design.material.extrusion_min_mm3s
           << "; the wall is too long for the cure time or the device too slow";
        throw Error(ErrorCode::CureTimeInfeasible, os.str());
    }

    std::size_t m = samples.size();
    std::vector<double> corr(m, 0.0);
    if (options.deviation_correction) {
        for (std::size_t i = 0; i < m; ++i) {
            corr[i] = deviation_correction(samples[i].curvature, wb);
        }
    }

    auto check_shift = [&](double shift, int layer, double s) {
        if (std::abs(shift) > design.device.head_side_travel_m + 1e-12) {
            std::ostringstream os;
            os << "lateral shift " << shift << " m at layer " << layer << at_s(s)
               << " exceeds head side travel " << design.device.head_side_travel_m;
            throw Error(ErrorCode::InclinationTooSteep, os.str());
        }
    };
    auto check_overhang = [&](double delta, int layer, double s) {
        if (std::abs(delta) > width / 2.0 + 1e-12) {
            std::ostringstream os;
            os << "per-layer shift " << delta << " m at layer " << layer << at_s(s)
               << " exceeds half the bead width " << width / 2.0
               << "; the bead would miss the layer below";
            throw Error(ErrorCode::InclinationTooSteep, os.str());
        }
    };

    PrintPlan plan;
    plan.mode = design.mode;
    plan.n_layers = design.n_layers;
    plan.layer_height_m = h;
    plan.wall_thickness_m = thickness;
    plan.resample_step_m = step;
    plan.dt_s = design.dt_s;
    plan.path = path;
    plan.top_height_m = design.footprint.top_height_m;

    // Climbs run at the wheel limit, floored onto the trace grid like v.
    double climb_v = std::floor(design.device.max_wheel_speed_mps * 1e9) / 1e9;
    double climb_time = h / climb_v;

    if (design.mode == PlanMode::Spiral) {
        plan.foot_tilt_deg = spiral_tilt_deg(h, length);
        std::size_t ring = m - 1;  // closed: last sample duplicates the first
        LayerPlan layer;
        layer.index = 0;
        std::size_t total_nodes = static_cast<std::size_t>(design.n_layers) * ring + 1;
        layer.s_grid_m.reserve(total_nodes);
        layer.shift_m.reserve(total_nodes);
        double cum = 0.0;
        double prev_s = 0.0;
        for (std::size_t p = 0; p < total_nodes; ++p) {
            std::size_t lap = p / ring;
            std::size_t i = p % ring;
            if (p + 1 == total_nodes) {  // closing node of the last lap
                lap = design.n_layers - 1;
                i = ring;
            }
            double s = double(lap) * length + samples[i].s;
            // Continuous inclination shift: the per-lap rise spread along the
            // lap, accumulated with the midpoint rule (exact for constant rows).
            if (p > 0) {
                double mid = (prev_s + s) / 2.0;
                int mid_lap = static_cast<int>(mid / length);
                double d = tan_deg_checked(
                    design.inclination.deg(mid_lap, std::fmod(mid, length)), mid_lap,
                    std::fmod(mid, length));
                cum += (h / length) * d * (s - prev_s);
            }
            int lap_i = static_cast<int>(lap);
            double delta = h * tan_deg_checked(design.inclination.deg(lap_i, samples[i].s),
                                               lap_i, samples[i].s);
            if (lap_i >= 1) check_overhang(delta, lap_i, samples[i].s);
            double shift = corr[i] + cum;
            check_shift(shift, lap_i, samples[i].s);
            layer.s_grid_m.push_back(s);
            layer.shift_m.push_back(shift);
            prev_s = s;
        }
        layer.speed_mps.assign(total_nodes, v);
        layer.flow_mm3s.assign(total_nodes, flow);
        plan.layers.push_back(std::move(layer));
        // Along-wall speed under a tilted foot is v*cos(tilt); the tilt is
        // taken as quantized because that is what the trace will command.
        double cphi = std::cos(q9(plan.foot_tilt_deg) * kDegToRad);
        double t_print = double(design.n_layers) * length / (v * cphi);
        plan.total_time_s = design.dt_s + t_print;
        plan.total_volume_mm3 = flow * t_print;
    } else {
        std::vector<double> cum(m, 0.0);
        for (int k = 0; k < design.n_layers; ++k) {
            if (k >= 1) {
                for (std::size_t i = 0; i < m; ++i) {
                    double delta =
                        h * tan_deg_checked(design.inclination.deg(k, samples[i].s), k,
                                            samples[i].s);
                    check_overhang(delta, k, samples[i].s);
                    cum[i] += delta;
                }
            }
            LayerPlan layer;
            layer.index = k;
            layer.reverse = design.mode == PlanMode::OpenBoustrophedon && (k % 2 == 1);
            // Every finished layer ends with a climb of one layer height, the
            // last included: the device parks on top of the completed print.
            layer.climb_after_m = h;
            layer.s_grid_m.reserve(m);
            for (const PathSample& smp : samples) layer.s_grid_m.push_back(smp.s);
            layer.speed_mps.assign(m, v);
            layer.flow_mm3s.assign(m, flow);
            layer.shift_m.resize(m);
            for (std::size_t i = 0; i < m; ++i) {
                double shift = corr[i] + cum[i];
                check_shift(shift, k, samples[i].s);
                layer.shift_m[i] = shift;
            }
            plan.layers.push_back(std::move(layer));
        }
        double t_print = double(design.n_layers) * length / v;
        double t_climb = double(design.n_layers) * climb_time;
        double t_reverse = design.mode == PlanMode::OpenBoustrophedon
                               ? double(design.n_layers - 1) * design.dt_s
                               : 0.0;
        plan.total_time_s = design.dt_s + t_print + t_climb + t_reverse;
        plan.total_volume_mm3 = flow * t_print;
    }

    Fnv1a64 hash;
    hash.update_i32(static_cast<std::int32_t>(plan.mode));
    hash.update_i32(plan.n_layers);
    hash.update_double(plan.layer_height_m);
    hash.update_double(plan.wall_thickness_m);
    hash.update_double(plan.resample_step_m);
    hash.update_double(plan.dt_s);
    hash.update_double(plan.foot_tilt_deg);
    hash.update_double(length);
    for (const PathSample& smp : samples) {
        hash.update_double(smp.s);
        hash.update_double(smp.position.x);
        hash.update_double(smp.position.y);
        hash.update_double(smp.curvature);
    }
    for (const auto& [s, z] : plan.top_height_m.knots()) {
        hash.update_double(s);
        hash.update_double(z);
    }
    for (const LayerPlan& layer : plan.layers) {
        hash.update_i32(layer.index);
        hash.update_i32(layer.reverse ? 1 : 0);
        hash.update_double(layer.climb_after_m);
        for (double x : layer.s_grid_m) hash.update_double(x);
        for (double x : layer.speed_mps) hash.update_double(x);
        for (double x : layer.flow_mm3s) hash.update_double(x);
        for (double x : layer.shift_m) hash.update_double(x);
    }
    plan.digest = hash.value();
    return plan;
}

}  // namespace climbprint
