#include "climbprint/controller.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace climbprint {

namespace {

constexpr double kDegToRad = M_PI / 180.0;
constexpr double kTimeTol = 1e-9;

double wrap_s(double s, double length) {
    double w = std::fmod(s, length);
    return w < 0.0 ? w + length : w;
}

double lerp_profile(const std::vector<double>& grid, const std::vector<double>& values,
                    double x) {
    if (x <= grid.front()) return values.front();
    if (x >= grid.back()) return values.back();
    auto it = std::upper_bound(grid.begin(), grid.end(), x);
    std::size_t i = static_cast<std::size_t>(it - grid.begin());
    double t = (x - grid[i - 1]) / (grid[i] - grid[i - 1]);
    return values[i - 1] + t * (values[i] - values[i - 1]);
}

void limit(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorCode::LimitViolation, what);
}

}  // namespace

DeviceState initial_state(const PrintPlan& plan, const DeviceConfig& device) {
    DeviceState st;
    st.t_s = 0.0;
    st.s_m = plan.mode == PlanMode::OpenBoustrophedon ? device.wheelbase_m / 2.0 : 0.0;
    st.s_total_m = st.s_m;
    st.z_m = plan.top_height_m(st.s_m) + plan.layer_height_m;
    st.mode = Mode::Idle;
    return st;
}

DeviceState step(const DeviceState& state, const ControlRecord& record,
                 const StepContext& ctx) {
    double dt = record.t_s - state.t_s;
    if (dt < 0.0) {
        std::ostringstream os;
        os << "record at t=" << record.t_s << " precedes state at t=" << state.t_s;
        throw Error(ErrorCode::NonMonotonicTimestamps, os.str());
    }
    if (state.mode == Mode::Done && record.mode != Mode::Done) {
        throw Error(ErrorCode::LimitViolation, "record arrives after completion");
    }

    DeviceState next = state;
    if (dt > 0.0) {
        double speed = state.wheels.mean();
        double phi = state.foot_angle_deg * kDegToRad;
        double c = std::cos(phi);
        double sn = std::sin(phi);
        if (std::abs(c) < 1e-15) c = 0.0;
        if (std::abs(sn) < 1e-15) sn = 0.0;
        double ds = speed * c * dt;
        double s_raw = state.s_m + ds;
        next.s_total_m = state.s_total_m + ds;
        if (ctx.closed) {
            next.s_m = wrap_s(s_raw, ctx.path_length_m);
        } else {
            if (s_raw < -kTimeTol || s_raw > ctx.path_length_m + kTimeTol) {
                std::ostringstream os;
                os << "device reference s=" << s_raw << " leaves the wall [0, "
                   << ctx.path_length_m << "]";
                throw Error(ErrorCode::LimitViolation, os.str());
            }
            next.s_m = std::clamp(s_raw, 0.0, ctx.path_length_m);
        }
        next.z_m = state.z_m + speed * sn * dt +
                   (ctx.top_height_m(next.s_m) - ctx.top_height_m(state.s_m));
    }

    const DeviceConfig& dev = ctx.device;
    for (double w : {record.wheels.front_left, record.wheels.front_right,
                     record.wheels.rear_left, record.wheels.rear_right}) {
        limit(std::abs(w) <= dev.max_wheel_speed_mps + 1e-9, "wheel speed over limit");
    }
    limit(std::abs(record.head_u_m) <= dev.head_side_travel_m + 1e-9,
          "head side travel exceeded");
    limit(std::abs(record.head_v_m) <= dev.head_fb_travel_m + 1e-9,
          "head fore/aft travel exceeded");
    limit(record.foot_angle_deg >= -1e-9 && record.foot_angle_deg <= 180.0 + 1e-9,
          "foot angle outside [0, 180] deg");
    limit(record.clamp_gap_m >= dev.clamp_min_m - 1e-9 &&
              record.clamp_gap_m <= dev.clamp_max_m + 1e-9,
          "clamp gap outside the clampable range");
    limit(record.extrusion_mm3s >= 0.0, "negative extrusion rate");
    limit(!(record.extruding &&
            (record.mode == Mode::Climbing || record.mode == Mode::Reversing)),
          "extrusion active while climbing or reversing");

    next.t_s = record.t_s;
    next.mode = record.mode;
    next.wheels = record.wheels;
    next.foot_angle_deg = record.foot_angle_deg;
    next.clamp_gap_m = record.clamp_gap_m;
    next.head_u_m = record.head_u_m;
    next.head_v_m = record.head_v_m;
    next.extruding = record.extruding;
    return next;
}

namespace {

// Shared emission machinery: keeps a mirror of the device state by folding
// every emitted record through step(), so commands that depend on position
// (wheel differentials, lateral shift) use exactly what a replay will see.
struct Emitter {
    const PrintPlan& plan;
    const DeviceConfig& device;
    StepContext ctx;
    double dt;
    double clamp_gap;
    DeviceState state;
    std::vector<ControlRecord> records;

    Emitter(const PrintPlan& p, const DeviceConfig& d, double dt_s)
        : plan(p),
          device(d),
          ctx{d, p.top_height_m, p.path.total_length(), p.path.closed()},
          dt(dt_s),
          clamp_gap(clamp_onto_wall(p.wall_thickness_m, d)),
          state(initial_state(p, d)) {}

    void emit(const ControlRecord& raw) {
        ControlRecord r = quantized(raw);
        state = step(state, r, ctx);
        records.push_back(r);
    }

    // Projects the rolled arclength forward from the mirror state, assuming
    // the currently held commands (exactly what step() will integrate).
    double project_s_total(double t) const {
        double phi = state.foot_angle_deg * kDegToRad;
        double c = std::cos(phi);
        if (std::abs(c) < 1e-15) c = 0.0;
        return state.s_total_m + state.wheels.mean() * c * (t - state.t_s);
    }

    // Emits the phase-start record plus every dt tick strictly inside
    // (t_start, t_start + duration). The phase-end boundary belongs to the
    // next phase's start record.
    void phase(double t_start, double duration,
               const std::function<ControlRecord(double)>& make) {
        emit(make(t_start));
        double t_end = t_start + duration;
        auto k = static_cast<long long>(std::floor((t_start + kTimeTol) / dt)) + 1;
        for (;; ++k) {
            double t = double(k) * dt;
            if (t <= t_start + kTimeTol) continue;
            if (t >= t_end - kTimeTol) break;
            emit(make(t));
        }
    }
};

}  // namespace

ControlTrace execute(const PrintPlan& plan, const DeviceConfig& device, double dt_s) {
    if (!(dt_s > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "dt must be positive");
    }

    Emitter em(plan, device, dt_s);
    double length = plan.path.total_length();
    double wb = device.wheelbase_m;
    // On the trace grid (as the planner assumed when pricing climb time).
    double climb_speed = std::floor(device.max_wheel_speed_mps * 1e9) / 1e9;

    auto shift_at = [&](const LayerPlan& layer, double s) {
        return lerp_profile(layer.s_grid_m, layer.shift_m, s);
    };
    auto base_record = [&](double t, Mode mode) {
        ControlRecord r;
        r.t_s = t;
        r.mode = mode;
        r.clamp_gap_m = em.clamp_gap;
        r.foot_angle_deg = 0.0;
        r.head_u_m = em.state.head_u_m;
        r.head_v_m = em.state.head_v_m;
        return r;
    };

    // Staging record at t=0: clamped on, head on the first bead line.
    {
        ControlRecord r = base_record(0.0, Mode::Idle);
        if (!plan.layers.empty()) {
            const LayerPlan& first = plan.layers.front();
            if (plan.mode == PlanMode::OpenBoustrophedon) {
                r.head_v_m = -wb / 2.0;
                r.head_u_m = shift_at(first, em.state.s_m + r.head_v_m);
            } else {
                r.head_u_m = shift_at(first, 0.0);
            }
        }
        em.emit(r);
    }

    double t = dt_s;  // one staging tick before motion starts
    double last_flow = 0.0;
    double hv_final = em.state.head_v_m;

    for (std::size_t li = 0; li < plan.layers.size(); ++li) {
        const LayerPlan& layer = plan.layers[li];
        double v = layer.speed_mps.front();
        double flow = layer.flow_mm3s.front();
        double dir = layer.reverse ? -1.0 : 1.0;
        last_flow = flow;

        auto roll_record = [&](double tt) {
            ControlRecord r = base_record(tt, Mode::Printing);
            double s_tot = em.project_s_total(tt);
            double s_path = plan.path.closed() ? wrap_s(s_tot, length)
                                               : std::clamp(s_tot, 0.0, length);
            double curvature = point_at(plan.path, s_path).curvature;
            r.wheels = wheel_speeds(dir * v, curvature, plan.wall_thickness_m, device);
            r.foot_angle_deg = plan.foot_tilt_deg;
            double lookup = plan.mode == PlanMode::Spiral ? s_tot : s_path;
            r.head_u_m = shift_at(layer, lookup);
            // Head parked at center while rolling. Setting this explicitly
            // (not the mirrored value) lands the preceding sweep, whose ramp
            // endpoint is reached exactly at this record's timestamp.
            r.head_v_m = plan.mode == PlanMode::OpenBoustrophedon ? 0.0
                                                                  : em.state.head_v_m;
            r.extrusion_mm3s = flow;
            r.extruding = true;
            return r;
        };

        if (plan.mode == PlanMode::OpenBoustrophedon) {
            // Three sub-phases cover the whole wall while the wheels stay on
            // it: head sweep to center, roll, head sweep to the far end.
            double t_head = (wb / 2.0) / v;
            double t_roll = (length - wb) / v;
            double hv0 = -dir * wb / 2.0;

            auto head_record = [&](double t0, double hv_start, double hv_rate) {
                return [&, t0, hv_start, hv_rate](double tt) {
                    ControlRecord r = base_record(tt, Mode::Printing);
                    r.head_v_m = hv_start + hv_rate * (tt - t0);
                    r.head_u_m = shift_at(layer, em.state.s_m + r.head_v_m);
                    r.extrusion_mm3s = flow;
                    r.extruding = true;
                    return r;
                };
            };

            em.phase(t, t_head, head_record(t, hv0, dir * v));
            t += t_head;
            em.phase(t, t_roll, roll_record);
            t += t_roll;
            em.phase(t, t_head, head_record(t, 0.0, dir * v));
            t += t_head;
        } else {
            double lap_count = plan.mode == PlanMode::Spiral ? double(plan.n_layers) : 1.0;
            // Along-wall speed under a tilted foot is v*cos(tilt), with the
            // tilt quantized exactly as the emitted records carry it.
            double cphi = std::cos(q9(plan.foot_tilt_deg) * kDegToRad);
            double t_print = lap_count * length / (v * cphi);
            em.phase(t, t_print, roll_record);
            t += t_print;
        }

        // Where the final head sweep of this layer parks (and the next
        // layer's opposite sweep begins). Phase-start records command it
        // exactly so the sweep ramp closes at the boundary timestamp.
        double hv_park = plan.mode == PlanMode::OpenBoustrophedon ? dir * wb / 2.0
                                                                  : em.state.head_v_m;
        hv_final = hv_park;

        if (layer.climb_after_m > 0.0) {
            double t_climb = layer.climb_after_m / climb_speed;
            double t0 = t;
            em.phase(t, t_climb, [&](double tt) {
                ControlRecord r = base_record(tt, Mode::Climbing);
                r.foot_angle_deg = 90.0;
                r.wheels = {climb_speed, climb_speed, climb_speed, climb_speed};
                r.head_v_m = tt == t0 ? hv_park : em.state.head_v_m;
                // The climb-start record closes the layer's flow integral.
                r.extrusion_mm3s = tt == t0 ? flow : 0.0;
                r.extruding = false;
                return r;
            });
            t += t_climb;
            // The climb-start record carried the closing flow node; from here
            // the commanded flow is zero (the Done record must not re-close).
            last_flow = 0.0;

            if (plan.mode == PlanMode::OpenBoustrophedon &&
                li + 1 < plan.layers.size()) {
                em.phase(t, dt_s, [&](double tt) {
                    ControlRecord r = base_record(tt, Mode::Reversing);
                    return r;
                });
                t += dt_s;
            }
        }
    }

    {
        ControlRecord r = base_record(t, Mode::Done);
        r.head_v_m = hv_final;
        r.extrusion_mm3s = plan.layers.empty() ? 0.0 : last_flow;
        em.emit(r);
    }

    ControlTrace trace;
    trace.records = std::move(em.records);
    trace.plan_digest = plan.digest;
    validate_trace(trace);
    return trace;
}

}  // namespace climbprint
