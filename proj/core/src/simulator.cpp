#include "climbprint/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace climbprint {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double wrap_s(double s, double length) {
    double w = std::fmod(s, length);
    return w < 0.0 ? w + length : w;
}

struct ChordFrame {
    Vec2 mid;
    Vec2 t_hat;
    Vec2 n_hat;
};

// Wheel contacts are path points one wheelbase apart as a straight chord,
// straddling the device reference arclength. Solved by bisection; near the
// ends of an open wall the clipped contact stays on the wall and the chord
// grows asymmetric.
ChordFrame chord_frame(const ArcLengthPath& path, double s_center, double wheelbase) {
    double length = path.total_length();
    auto chord = [&](double sa, double sb) {
        return (point_at(path, sb).position - point_at(path, sa).position).norm();
    };
    auto frame = [&](double sa, double sb) {
        Vec2 a = point_at(path, sa).position;
        Vec2 b = point_at(path, sb).position;
        ChordFrame f;
        f.mid = 0.5 * (a + b);
        f.t_hat = (b - a).normalized();
        f.n_hat = f.t_hat.rot90();
        return f;
    };

    double cap = path.closed() ? length / 2.0
                               : std::min(s_center, length - s_center);
    double lo = wheelbase / 2.0;  // chord(s-d, s+d) <= 2d, so f(lo) <= 0
    double hi = std::min(lo * 1.2 + 1e-12, cap);
    bool clipped = cap < lo;
    if (!clipped) {
        while (chord(s_center - hi, s_center + hi) < wheelbase && hi < cap) {
            hi = std::min(hi * 1.25, cap);
        }
        if (chord(s_center - hi, s_center + hi) >= wheelbase) {
            for (int it = 0; it < 60; ++it) {
                double mid = 0.5 * (lo + hi);
                (chord(s_center - mid, s_center + mid) < wheelbase ? lo : hi) = mid;
            }
            double d = 0.5 * (lo + hi);
            return frame(s_center - d, s_center + d);
        }
        if (path.closed()) {
            std::ostringstream os;
            os << "wheel contacts cannot span the wheelbase at s=" << s_center;
            throw Error(ErrorCode::LimitViolation, os.str());
        }
        clipped = true;
    }
    // Open wall end: pin the near contact to the wall end and bisect the far
    // one along the remaining length.
    bool at_start = s_center < length / 2.0;
    double pin = at_start ? 0.0 : length;
    double a = at_start ? s_center : 0.0;
    double b = at_start ? length : s_center;
    auto off = [&](double sx) { return chord(pin, sx) - wheelbase; };
    // chord(pin, x) grows from below wheelbase: bracket the root.
    double xlo = at_start ? a : b;   // nearest to the pin: chord too short
    double xhi = at_start ? b : a;   // farthest: chord long enough
    if (off(xhi) < 0.0) {
        std::ostringstream os;
        os << "wall cannot carry both wheel pairs near s=" << s_center;
        throw Error(ErrorCode::LimitViolation, os.str());
    }
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (xlo + xhi);
        (off(mid) < 0.0 ? xlo : xhi) = mid;
    }
    double far = 0.5 * (xlo + xhi);
    return at_start ? frame(pin, far) : frame(far, pin);
}

struct NozzleEval {
    Vec2 xy;
    double s_n = 0.0;   // nominal nozzle arclength (unwrapped)
    double u = 0.0;     // lateral offset from the footprint centerline
    double z = 0.0;
};

NozzleEval eval_nozzle(const ArcLengthPath& path, const DeviceState& st,
                       double wheelbase) {
    double length = path.total_length();
    double s_dev = path.closed() ? wrap_s(st.s_m, length) : st.s_m;
    ChordFrame cf = chord_frame(path, s_dev, wheelbase);
    NozzleEval out;
    out.xy = cf.mid + st.head_u_m * cf.n_hat + st.head_v_m * cf.t_hat;
    out.s_n = st.s_total_m + st.head_v_m;
    out.z = st.z_m;
    // Quantized wheel commands can land the nozzle a hair past an open wall
    // end; measure such points against the endpoint frame.
    double s_ref = path.closed() ? out.s_n : std::clamp(out.s_n, 0.0, length);
    PathSample ps = point_at(path, s_ref);
    out.u = (out.xy - ps.position).dot(ps.tangent.rot90());
    return out;
}

}  // namespace

SimResult simulate(const ControlTrace& trace, const Design& design,
                   const PlannerOptions& options) {
    PrintPlan plan = compile(design, options);
    if (plan.digest != trace.plan_digest) {
        std::ostringstream os;
        os << "trace was planned from a different design (plan digest "
           << trace.plan_digest << ", design compiles to " << plan.digest << ")";
        throw Error(ErrorCode::TraceDesignMismatch, os.str());
    }
    validate_trace(trace);

    const ArcLengthPath& path = plan.path;
    double length = path.total_length();
    double h = plan.layer_height_m;
    double wb = design.device.wheelbase_m;
    bool spiral = plan.mode == PlanMode::Spiral;
    std::size_t cells = path.ring_size();
    double cell_w = length / double(cells);

    int max_layers = plan.n_layers;
    std::vector<std::vector<double>> touch_time(
        max_layers, std::vector<double>(cells, kNaN));
    std::vector<std::vector<double>> z_sum(max_layers, std::vector<double>(cells, 0.0));
    std::vector<std::vector<int>> pt_count(max_layers, std::vector<int>(cells, 0));

    // Marks every cell the nozzle swept over [s_a, s_b] (unwrapped). Cells
    // overlapped by less than kTouch carry no meaningful material and are
    // skipped: a lap start whose rolled arclength has drifted a few 1e-12
    // below the exact lap boundary must not count as a deposit pass over the
    // cell before the seam. Drift accumulates at ~1e-12 per lap; 1e-9 m of
    // bead (~1e-2 mm^3) stays negligible while clearing it by orders.
    constexpr double kTouch = 1e-9;
    auto attribute_cells = [&](int layer, double s_a, double s_b, double z_mid,
                               double t_mid) {
        double lo = std::min(s_a, s_b);
        double hi = std::max(s_a, s_b);
        auto c0 = static_cast<long long>(std::floor(lo / cell_w));
        auto c1 = static_cast<long long>(std::floor(hi / cell_w));
        for (long long c = c0; c <= c1; ++c) {
            double overlap = std::min(hi, double(c + 1) * cell_w) -
                             std::max(lo, double(c) * cell_w);
            if (overlap < kTouch) continue;
            long long cc = c;
            if (path.closed()) {
                cc = ((c % static_cast<long long>(cells)) + static_cast<long long>(cells)) %
                     static_cast<long long>(cells);
            } else {
                cc = std::clamp<long long>(c, 0, static_cast<long long>(cells) - 1);
            }
            auto cell = static_cast<std::size_t>(cc);
            // A helix interval can straddle a lap boundary; the unwrapped
            // cell index pins each cell's material to its own lap exactly.
            int cell_layer = spiral ? static_cast<int>(std::clamp(
                                          c / static_cast<long long>(cells), 0LL,
                                          static_cast<long long>(max_layers) - 1))
                                    : layer;
            if (cell_layer < 0 || cell_layer >= max_layers) continue;
            z_sum[cell_layer][cell] += z_mid;
            pt_count[cell_layer][cell] += 1;
            if (std::isnan(touch_time[cell_layer][cell])) {
                touch_time[cell_layer][cell] = t_mid;
            }
        }
    };
    std::vector<double> lap_cross_z(spiral ? plan.n_layers + 1 : 0, kNaN);

    SimResult out;
    out.structure.path = path;
    out.structure.layer_height_m = h;
    SimReport& rep = out.report;
    rep.record_count = trace.records.size();
    rep.duration_s = trace.records.back().t_s - trace.records.front().t_s;

    StepContext ctx{design.device, plan.top_height_m, length, path.closed()};
    DeviceState state = initial_state(plan, design.device);
    if (spiral) lap_cross_z[0] = state.z_m;

    const LayerPlan* unified = spiral ? &plan.layers.front() : nullptr;
    auto intended_u = [&](int layer, double s_n_unwrapped) {
        // The intended bead line is the inclination-shifted centerline; the
        // deviation-correction component of the command is not part of it.
        double cum;
        if (spiral) {
            const auto& g = unified->s_grid_m;
            const auto& sh = unified->shift_m;
            double x = std::clamp(s_n_unwrapped, g.front(), g.back());
            auto it = std::upper_bound(g.begin(), g.end(), x);
            std::size_t i = std::min<std::size_t>(
                std::max<std::ptrdiff_t>(it - g.begin(), 1), g.size() - 1);
            double t = (x - g[i - 1]) / (g[i] - g[i - 1]);
            double shift = sh[i - 1] + t * (sh[i] - sh[i - 1]);
            double corr = 0.0;
            if (options.deviation_correction) {
                corr = deviation_correction(
                    point_at(path, wrap_s(s_n_unwrapped, length)).curvature, wb);
            }
            cum = shift - corr;
        } else {
            double s_local = path.closed() ? wrap_s(s_n_unwrapped, length)
                                           : std::clamp(s_n_unwrapped, 0.0, length);
            cum = inclination_shift(design.inclination, layer, h, s_local);
        }
        return cum;
    };

    BeadSegment* open_seg = nullptr;
    std::size_t open_seg_last_record = 0;
    int layer_counter = 0;
    bool had_nozzle_eval = false;
    NozzleEval noz_prev;

    // Bead points keep the unwrapped nozzle arclength: it is continuous and
    // monotone within a segment, and every consumer (point lookups, binning)
    // wraps closed paths itself.
    auto add_point = [&](BeadSegment& seg, const NozzleEval& ne, int layer) {
        double s = path.closed() ? ne.s_n : std::clamp(ne.s_n, 0.0, length);
        seg.s_m.push_back(s);
        seg.u_m.push_back(ne.u);
        seg.z_m.push_back(ne.z);
        double err = std::abs(ne.u - intended_u(layer, ne.s_n));
        rep.max_nozzle_path_error_m = std::max(rep.max_nozzle_path_error_m, err);
    };

    for (std::size_t i = 1; i < trace.records.size(); ++i) {
        const ControlRecord& rec = trace.records[i];
        const ControlRecord& prev_rec = trace.records[i - 1];
        DeviceState pre = state;
        state = step(state, rec, ctx);

        if (spiral) {
            // Per-revolution rise, interpolated at exact lap boundaries.
            for (int k = 1; k <= plan.n_layers; ++k) {
                double target = double(k) * length;
                if (pre.s_total_m < target && state.s_total_m >= target) {
                    double f = (target - pre.s_total_m) /
                               (state.s_total_m - pre.s_total_m);
                    lap_cross_z[k] = pre.z_m + f * (state.z_m - pre.z_m);
                }
            }
        }

        bool climbing_ended = pre.mode == Mode::Climbing && state.mode != Mode::Climbing;
        if (climbing_ended && !spiral) layer_counter += 1;

        if (state.mode == Mode::Printing) {
            double contact_z = state.z_m - h;
            double clearance = contact_z - design.device.foot_height_m;
            if (clearance < -1e-9) {
                rep.collisions.push_back({state.t_s, state.s_m, clearance});
            }
        }

        if (!pre.extruding) {
            open_seg = nullptr;
            had_nozzle_eval = false;
            continue;
        }

        double dt = rec.t_s - pre.t_s;
        double q0 = prev_rec.extrusion_mm3s;
        double q1 = rec.extrusion_mm3s;
        double q_mean = (q0 + q1) / 2.0;

        NozzleEval n0 = had_nozzle_eval ? noz_prev : eval_nozzle(path, pre, wb);
        NozzleEval n1 = eval_nozzle(path, state, wb);
        noz_prev = n1;
        had_nozzle_eval = true;

        double ds_n = n1.s_n - n0.s_n;
        if (std::abs(ds_n) < 1e-15) {
            if (q_mean > 0.0) {
                std::ostringstream os;
                os << "extruding while the nozzle is stationary at t=" << rec.t_s;
                throw Error(ErrorCode::LimitViolation, os.str());
            }
            continue;
        }
        if (q_mean <= 0.0) continue;

        double v_n = std::abs(ds_n) / dt;
        double width = bead_width(q_mean, v_n, h);
        int layer = layer_counter;
        if (spiral) {
            double mid = (n0.s_n + n1.s_n) / 2.0;
            layer = std::clamp(static_cast<int>(std::floor(mid / length)), 0,
                               plan.n_layers - 1);
        }

        bool fresh = open_seg == nullptr || open_seg_last_record + 1 != i ||
                     open_seg->layer != layer ||
                     std::abs(open_seg->width_m - width) > 1e-9;
        if (fresh) {
            out.structure.beads.emplace_back();
            open_seg = &out.structure.beads.back();
            open_seg->layer = layer;
            open_seg->width_m = width;
            open_seg->height_m = h;
            add_point(*open_seg, n0, layer);
        }
        add_point(*open_seg, n1, layer);
        attribute_cells(layer, n0.s_n, n1.s_n, (n0.z + n1.z) / 2.0,
                        (pre.t_s + rec.t_s) / 2.0);
        open_seg_last_record = i;
    }

    // Volume balance: swept bead volume against the flow integral.
    rep.deposited_mm3 = deposited_volume(trace);
    double bead_total = 0.0;
    int top_layer = -1;
    for (const BeadSegment& seg : out.structure.beads) {
        bead_total += seg.volume_mm3();
        top_layer = std::max(top_layer, seg.layer);
        for (std::size_t i = 0; i < seg.z_m.size(); ++i) {
            double s_local = path.closed() ? wrap_s(seg.s_m[i], length) : seg.s_m[i];
            double printed = seg.z_m[i] - plan.top_height_m(s_local);
            rep.final_height_m = std::max(rep.final_height_m, printed);
        }
    }
    rep.bead_volume_mm3 = bead_total;
    rep.volume_balance_rel =
        rep.deposited_mm3 > 0.0
            ? std::abs(bead_total - rep.deposited_mm3) / rep.deposited_mm3
            : (bead_total > 0.0 ? 1.0 : 0.0);
    out.structure.final_height_m = rep.final_height_m;
    out.structure.n_layers = top_layer + 1;

    // Layer heights. [0]: first layer against wall top + h; [k]: between
    // consecutive layers, from per-cell mean bead heights (spiral: from the
    // per-revolution rise instead).
    int printed_layers = top_layer + 1;
    if (printed_layers > 0) {
        rep.layer_height_error_m.assign(static_cast<std::size_t>(printed_layers), 0.0);
        // Intended first-layer bead height: wall top + h, plus the helix ramp
        // for spiral mode (the first revolution legitimately rises h..2h).
        double ramp = spiral ? std::tan(q9(plan.foot_tilt_deg) * M_PI / 180.0) : 0.0;
        double e0 = 0.0;
        for (std::size_t c = 0; c < cells; ++c) {
            if (pt_count[0][c] == 0) continue;
            double z_mean = z_sum[0][c] / pt_count[0][c];
            double s_mid = (double(c) + 0.5) * cell_w;
            e0 = std::max(e0, std::abs(z_mean - plan.top_height_m(s_mid) - h -
                                       ramp * s_mid));
        }
        rep.layer_height_error_m[0] = e0;
        for (int k = 1; k < printed_layers; ++k) {
            double ek = 0.0;
            if (spiral) {
                if (!std::isnan(lap_cross_z[k]) && !std::isnan(lap_cross_z[k - 1])) {
                    ek = std::abs(lap_cross_z[k] - lap_cross_z[k - 1] - h);
                }
            } else {
                for (std::size_t c = 0; c < cells; ++c) {
                    if (pt_count[k][c] == 0 || pt_count[k - 1][c] == 0) continue;
                    double zk = z_sum[k][c] / pt_count[k][c];
                    double zp = z_sum[k - 1][c] / pt_count[k - 1][c];
                    ek = std::max(ek, std::abs(zk - zp - h));
                }
            }
            rep.layer_height_error_m[static_cast<std::size_t>(k)] = ek;
        }
    }

    // Coverage gaps: per layer, maximal runs of cells no bead touched.
    for (int k = 0; k < printed_layers; ++k) {
        std::size_t c = 0;
        while (c < cells) {
            if (!std::isnan(touch_time[k][c])) {
                ++c;
                continue;
            }
            std::size_t begin = c;
            while (c < cells && std::isnan(touch_time[k][c])) ++c;
            rep.coverage_gaps.push_back(
                {k, double(begin) * cell_w, double(c) * cell_w});
        }
    }

    // Cure violations: a layer arriving before the one below finished curing.
    for (int k = 1; k < printed_layers; ++k) {
        for (std::size_t c = 0; c < cells; ++c) {
            double t0 = touch_time[k - 1][c];
            double t1 = touch_time[k][c];
            if (std::isnan(t0) || std::isnan(t1)) continue;
            double gap = t1 - t0;
            if (gap < design.material.cure_time_s - 1e-9) {
                rep.cure_violations.push_back({k, (double(c) + 0.5) * cell_w, gap});
            }
        }
    }

    return out;
}

MeasuredInclination measure_inclination(const PrintedStructure& structure) {
    const ArcLengthPath& path = structure.path;
    double length = path.total_length();
    std::size_t cells = path.ring_size();
    double cell_w = length / double(cells);

    int layers = structure.n_layers;
    if (layers < 2) {
        throw Error(ErrorCode::TooFewLayers,
                    "inclination needs at least two printed layers");
    }
    std::vector<std::vector<double>> u_sum(layers, std::vector<double>(cells, 0.0));
    std::vector<std::vector<int>> count(layers, std::vector<int>(cells, 0));
    for (const BeadSegment& seg : structure.beads) {
        for (std::size_t i = 0; i < seg.s_m.size(); ++i) {
            double w = path.closed() ? std::fmod(seg.s_m[i], length) : seg.s_m[i];
            if (w < 0.0) w += length;
            auto c = std::min(static_cast<std::size_t>(std::clamp(w, 0.0, length) / cell_w),
                              cells - 1);
            u_sum[seg.layer][c] += seg.u_m[i];
            count[seg.layer][c] += 1;
        }
    }

    MeasuredInclination out;
    out.s_m.resize(cells);
    for (std::size_t c = 0; c < cells; ++c) out.s_m[c] = (double(c) + 0.5) * cell_w;
    out.pair_deg.assign(layers - 1, std::vector<double>(cells, kNaN));
    for (int k = 0; k + 1 < layers; ++k) {
        for (std::size_t c = 0; c < cells; ++c) {
            if (count[k][c] == 0 || count[k + 1][c] == 0) continue;
            double u0 = u_sum[k][c] / count[k][c];
            double u1 = u_sum[k + 1][c] / count[k + 1][c];
            out.pair_deg[k][c] =
                std::atan2(u1 - u0, structure.layer_height_m) * 180.0 / M_PI;
        }
    }
    return out;
}

}  // namespace climbprint
