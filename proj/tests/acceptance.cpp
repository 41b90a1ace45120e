// End-to-end acceptance suite. Each numbered check prints exactly one
// PASS/FAIL line; the process exit code is the number of failures. The
// checks compare full pipeline behavior (plan -> trace -> replay -> exports)
// against closed-form references on circle and straight-wall fixtures.

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "climbprint/controller.hpp"
#include "climbprint/design_io.hpp"
#include "climbprint/mesh_obj.hpp"
#include "climbprint/simulator.hpp"
#include "climbprint/trace_csv.hpp"
#include "support.hpp"

using namespace climbprint;
using namespace climbprint::testing;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void criterion(int number, bool pass, const std::string& detail) {
    std::printf("C%02d %s %s\n", number, pass ? "PASS" : "FAIL", detail.c_str());
    if (!pass) ++g_failures;
}

void criterion_error(int number, const std::string& what) {
    criterion(number, false, "unexpected error: " + what);
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

struct Pipeline {
    Design design;
    PrintPlan plan;
    ControlTrace trace;
    SimResult sim;
};

Pipeline run_pipeline(const Design& design, const PlannerOptions& options = {}) {
    Pipeline p;
    p.design = design;
    p.plan = compile(design, options);
    p.trace = execute(p.plan, design.device, design.dt_s);
    p.sim = simulate(p.trace, design, options);
    return p;
}

std::vector<DeviceState> replay_states(const ControlTrace& trace,
                                       const PrintPlan& plan,
                                       const DeviceConfig& device) {
    StepContext ctx{device, plan.top_height_m, plan.path.total_length(),
                    plan.path.closed()};
    std::vector<DeviceState> states;
    states.reserve(trace.records.size() + 1);
    states.push_back(initial_state(plan, device));
    for (const ControlRecord& r : trace.records) {
        states.push_back(step(states.back(), r, ctx));
    }
    return states;
}

int count_climb_entries(const ControlTrace& trace) {
    int n = 0;
    Mode prev = Mode::Done;
    for (const ControlRecord& r : trace.records) {
        if (r.mode == Mode::Climbing && prev != Mode::Climbing) ++n;
        prev = r.mode;
    }
    return n;
}

// Signed volume of a triangulated OBJ mesh via the divergence theorem;
// valid for watertight meshes of any genus.
double obj_volume_m3(const std::string& obj) {
    std::vector<double> xs, ys, zs;
    double vol6 = 0.0;
    std::istringstream in(obj);
    std::string line;
    while (std::getline(in, line)) {
        if (line.size() < 2) continue;
        if (line[0] == 'v' && line[1] == ' ') {
            double x, y, z;
            if (std::sscanf(line.c_str(), "v %lf %lf %lf", &x, &y, &z) == 3) {
                xs.push_back(x);
                ys.push_back(y);
                zs.push_back(z);
            }
        } else if (line[0] == 'f' && line[1] == ' ') {
            long a, b, c;
            if (std::sscanf(line.c_str(), "f %ld %ld %ld", &a, &b, &c) == 3) {
                std::size_t i = static_cast<std::size_t>(a - 1);
                std::size_t j = static_cast<std::size_t>(b - 1);
                std::size_t k = static_cast<std::size_t>(c - 1);
                vol6 += xs[i] * (ys[j] * zs[k] - ys[k] * zs[j]) -
                        ys[i] * (xs[j] * zs[k] - xs[k] * zs[j]) +
                        zs[i] * (xs[j] * ys[k] - xs[k] * ys[j]);
            }
        }
    }
    return std::abs(vol6) / 6.0;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// Runs the installed command-line binary; returns its exit code and stderr.
struct CliResult {
    int exit_code = -1;
    std::string err;
};

CliResult run_cli_process(const std::string& args, const fs::path& err_file) {
    std::string cmd = std::string(ACCEPTANCE_CLI_PATH) + " " + args + " > /dev/null 2> " +
                      err_file.string();
    int status = std::system(cmd.c_str());
    CliResult res;
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    res.err = read_file(err_file);
    return res;
}

constexpr double kSagitta = 0.020204102886728803;  // unit circle, 0.4 m chord

}  // namespace

int main() {
    fs::path work = fs::temp_directory_path() / "climbprint_acceptance";
    fs::remove_all(work);
    fs::create_directories(work);

    // Shared fixtures, built once.
    Pipeline circle10, spiral6, wall4, drum30;
    try {
        circle10 = run_pipeline(circle_design(PlanMode::ClosedLayered, 10));
        spiral6 = run_pipeline(circle_design(PlanMode::Spiral, 6));
        wall4 = run_pipeline(wall_design(4));
        drum30 = run_pipeline(circle_design(PlanMode::ClosedLayered, 4, 30.0));
    } catch (const std::exception& e) {
        std::fprintf(stderr, "fixture construction failed: %s\n", e.what());
        return 10;
    }

    // 1. Riding the wheelbase chord without correction deviates by the
    //    sagitta; the lateral pre-compensation removes it.
    try {
        PlannerOptions raw;
        raw.deviation_correction = false;
        Pipeline uncorrected =
            run_pipeline(circle_design(PlanMode::ClosedLayered, 1), raw);
        Pipeline corrected = run_pipeline(circle_design(PlanMode::ClosedLayered, 1));
        double e_raw = uncorrected.sim.report.max_nozzle_path_error_m;
        double e_fix = corrected.sim.report.max_nozzle_path_error_m;
        bool pass = std::abs(e_raw - kSagitta) < 1e-4 && e_fix < 1e-4;
        criterion(1, pass,
                  fmt("uncorrected path error %.6f m (expect %.6f +/- 1e-4), "
                      "corrected %.2e m (< 1e-4)",
                      e_raw, kSagitta, e_fix));
    } catch (const std::exception& e) {
        criterion_error(1, e.what());
    }

    // 2. Over one closed revolution each wheel rolls its own wall-face
    //    circumference; outer/inner ratio matches the face radii.
    try {
        Pipeline lap = run_pipeline(circle_design(PlanMode::ClosedLayered, 1));
        double d_left = 0.0;
        double d_right = 0.0;
        const auto& recs = lap.trace.records;
        for (std::size_t i = 1; i < recs.size(); ++i) {
            if (recs[i - 1].mode != Mode::Printing) continue;
            double dt = recs[i].t_s - recs[i - 1].t_s;
            d_left += std::abs(recs[i - 1].wheels.front_left) * dt;
            d_right += std::abs(recs[i - 1].wheels.front_right) * dt;
        }
        double c_inner = 2.0 * M_PI * 0.98;  // left wheels, turn center side
        double c_outer = 2.0 * M_PI * 1.02;
        double rel_l = std::abs(d_left - c_inner) / c_inner;
        double rel_r = std::abs(d_right - c_outer) / c_outer;
        double ratio = d_right / d_left;
        bool pass = rel_l < 1e-6 && rel_r < 1e-6 &&
                    std::abs(ratio - 1.040816) < 1e-6;
        criterion(2, pass,
                  fmt("wheel distances %.8f/%.8f m vs faces %.8f/%.8f m "
                      "(rel %.1e, %.1e), ratio %.7f (expect 1.040816 +/- 1e-6)",
                      d_left, d_right, c_inner, c_outer, rel_l, rel_r, ratio));
    } catch (const std::exception& e) {
        criterion_error(2, e.what());
    }

    // 3. Bead width follows volume conservation: halving speed at constant
    //    flow doubles the width, across randomized process points.
    try {
        std::mt19937 rng(20240813);
        std::uniform_real_distribution<double> pick_q(1.0, 20000.0);
        std::uniform_real_distribution<double> pick_v(1e-4, 0.1);
        std::uniform_real_distribution<double> pick_h(1e-3, 0.1);
        int bad = 0;
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            double q = pick_q(rng);
            double v = pick_v(rng);
            double h = pick_h(rng);
            double w = bead_width(q, v, h);
            double doubling = bead_width(q, v / 2.0, h) / w;
            double oracle = q * 1e-9 / (v * h);
            worst = std::max(worst, std::abs(doubling - 2.0));
            if (std::abs(doubling - 2.0) > 1e-9 ||
                std::abs(w - oracle) / oracle > 1e-12) {
                ++bad;
            }
        }
        criterion(3, bad == 0,
                  fmt("100 random (flow, speed, height) triples: width matches "
                      "conservation, halving speed doubles width (worst "
                      "doubling error %.1e, tol 1e-9)",
                      worst));
    } catch (const std::exception& e) {
        criterion_error(3, e.what());
    }

    // 4. Ten-layer closed wall: one climb per layer, exact stack height, no
    //    extrusion while climbing, each lap closes on its starting point.
    try {
        int climbs = count_climb_entries(circle10.trace);
        double height = circle10.sim.report.final_height_m;
        bool no_climb_extrusion = true;
        for (const ControlRecord& r : circle10.trace.records) {
            if (r.mode == Mode::Climbing && r.extruding) no_climb_extrusion = false;
        }
        // Gated deposition during climb intervals must be zero too.
        double climb_volume = 0.0;
        const auto& recs = circle10.trace.records;
        for (std::size_t i = 1; i < recs.size(); ++i) {
            if (recs[i - 1].mode != Mode::Climbing || !recs[i - 1].extruding) continue;
            climb_volume += (recs[i].t_s - recs[i - 1].t_s) *
                            (recs[i - 1].extrusion_mm3s + recs[i].extrusion_mm3s) / 2.0;
        }
        auto states = replay_states(circle10.trace, circle10.plan,
                                    circle10.design.device);
        double L = circle10.plan.path.total_length();
        double step_m = circle10.plan.resample_step_m;
        double worst_return = 0.0;
        for (std::size_t i = 1; i < states.size(); ++i) {
            if (states[i].mode == Mode::Climbing && states[i - 1].mode != Mode::Climbing) {
                double s = states[i - 1].s_m;
                worst_return = std::max(worst_return, std::min(s, L - s));
            }
        }
        bool pass = climbs == 10 && std::abs(height - 0.200000) < 1e-6 &&
                    no_climb_extrusion && climb_volume == 0.0 &&
                    worst_return <= step_m;
        criterion(4, pass,
                  fmt("10-layer closed wall: %d climbs (expect 10), height "
                      "%.6f m (expect 0.200000 +/- 1e-6), climb extrusion "
                      "%s, lap closure %.2e m (<= %.0e m step)",
                      climbs, height, no_climb_extrusion ? "off" : "ON",
                      worst_return, step_m));
    } catch (const std::exception& e) {
        criterion_error(4, e.what());
    }

    // 5. Spiral mode: height is an affine function of deposited arclength
    //    with slope h/perimeter, rising one layer height per revolution,
    //    with no climb events.
    try {
        auto states = replay_states(spiral6.trace, spiral6.plan,
                                    spiral6.design.device);
        double L = spiral6.plan.path.total_length();
        double h = spiral6.plan.layer_height_m;
        const DeviceState* first = nullptr;
        const DeviceState* last = nullptr;
        for (const DeviceState& st : states) {
            if (st.mode != Mode::Printing) continue;
            if (!first) first = &st;
            last = &st;
        }
        double slope = (last->z_m - first->z_m) / (last->s_total_m - first->s_total_m);
        double slope_err = std::abs(slope - h / L);
        double residual = 0.0;
        for (const DeviceState& st : states) {
            if (st.mode != Mode::Printing) continue;
            double zi = first->z_m + slope * (st.s_total_m - first->s_total_m);
            residual = std::max(residual, std::abs(st.z_m - zi));
        }
        double worst_rise = 0.0;
        for (std::size_t k = 1; k < spiral6.sim.report.layer_height_error_m.size();
             ++k) {
            worst_rise =
                std::max(worst_rise, spiral6.sim.report.layer_height_error_m[k]);
        }
        int climbs = count_climb_entries(spiral6.trace);
        bool pass = slope_err < 1e-9 && residual < 1e-8 && worst_rise < 1e-6 &&
                    climbs == 0;
        criterion(5, pass,
                  fmt("helix slope error %.1e (tol 1e-9), affine residual "
                      "%.1e m, per-revolution rise error %.1e m (tol 1e-6), "
                      "%d climbs (expect 0)",
                      slope_err, residual, worst_rise, climbs));
    } catch (const std::exception& e) {
        criterion_error(5, e.what());
    }

    // 6. Four-layer open wall: passes alternate forward/reverse and each
    //    layer covers the whole wall, ends included, with no gaps wider
    //    than one resample step.
    try {
        bool directions = wall4.plan.layers.size() == 4 &&
                          !wall4.plan.layers[0].reverse && wall4.plan.layers[1].reverse &&
                          !wall4.plan.layers[2].reverse && wall4.plan.layers[3].reverse;
        double L = wall4.plan.path.total_length();
        double step_m = wall4.plan.resample_step_m;
        bool ends_covered = true;
        for (int layer = 0; layer < 4; ++layer) {
            double lo = 1e300;
            double hi = -1e300;
            for (const BeadSegment& seg : wall4.sim.structure.beads) {
                if (seg.layer != layer) continue;
                for (double s : seg.s_m) {
                    lo = std::min(lo, s);
                    hi = std::max(hi, s);
                }
            }
            if (lo > step_m || hi < L - step_m) ends_covered = false;
        }
        std::size_t gaps = wall4.sim.report.coverage_gaps.size();
        bool pass = directions && ends_covered && gaps == 0;
        criterion(6, pass,
                  fmt("directions F,R,F,R %s; all layers reach both wall ends "
                      "%s; %zu coverage gaps (expect 0 above one step)",
                      directions ? "ok" : "WRONG", ends_covered ? "ok" : "NO",
                      gaps));
    } catch (const std::exception& e) {
        criterion_error(6, e.what());
    }

    // 7. Interface inclination round-trip at 0, 15 and 30 degrees; an
    //    inclination whose cumulative shift exceeds the head travel fails
    //    compilation instead of being clipped.
    try {
        double worst = 0.0;
        bool ok = true;
        for (double deg : {0.0, 15.0, 30.0}) {
            Pipeline p = deg == 30.0
                             ? drum30
                             : run_pipeline(circle_design(PlanMode::ClosedLayered, 4, deg));
            MeasuredInclination m = measure_inclination(p.sim.structure);
            for (const auto& pair : m.pair_deg) {
                double sum = 0.0;
                int n = 0;
                for (double d : pair) {
                    if (!std::isnan(d)) {
                        sum += d;
                        ++n;
                    }
                }
                double err = std::abs(sum / n - deg);
                worst = std::max(worst, err);
                if (!(n > 0) || err > 0.1) ok = false;
            }
        }
        bool steep_rejected = false;
        std::string steep_code;
        try {
            (void)compile(circle_design(PlanMode::ClosedLayered, 10, 44.0));
        } catch (const Error& e) {
            steep_rejected = e.code() == ErrorCode::InclinationTooSteep;
            steep_code = std::string(error_code_name(e.code()));
        }
        criterion(7, ok && steep_rejected,
                  fmt("measured inclination worst error %.4f deg (tol 0.1) at "
                      "0/15/30 deg; over-travel design rejected with %s",
                      worst, steep_rejected ? steep_code.c_str() : "NO ERROR"));
    } catch (const std::exception& e) {
        criterion_error(7, e.what());
    }

    // 8. Conservation on every fixture: swept bead volume matches the flow
    //    integral, and the exported mesh volume stays within 1%.
    try {
        double worst_balance = 0.0;
        double worst_mesh = 0.0;
        for (const Pipeline* p : {&circle10, &spiral6, &wall4, &drum30}) {
            worst_balance = std::max(worst_balance, p->sim.report.volume_balance_rel);
            double mesh_mm3 = obj_volume_m3(export_obj(p->sim.structure)) * 1e9;
            double rel = std::abs(mesh_mm3 - p->sim.report.deposited_mm3) /
                         p->sim.report.deposited_mm3;
            worst_mesh = std::max(worst_mesh, rel);
        }
        bool pass = worst_balance < 1e-6 && worst_mesh < 0.01;
        criterion(8, pass,
                  fmt("4 fixtures: worst bead/flow balance %.1e (tol 1e-6), "
                      "worst mesh volume error %.2e (tol 1e-2)",
                      worst_balance, worst_mesh));
    } catch (const std::exception& e) {
        criterion_error(8, e.what());
    }

    // 9. Determinism: two identical pipeline invocations produce
    //    byte-identical outputs, and replaying the written trace lands on a
    //    field-exact copy of the in-memory final state.
    try {
        Design design = circle_design(PlanMode::ClosedLayered, 2);
        fs::path dpath = work / "determinism.json";
        std::ofstream(dpath) << design_json(design);
        fs::path out_a = work / "run_a";
        fs::path out_b = work / "run_b";
        CliResult ra = run_cli_process("run " + dpath.string() + " -o " +
                                           out_a.string() + " -q",
                                       work / "run_a.err");
        CliResult rb = run_cli_process("run " + dpath.string() + " -o " +
                                           out_b.string() + " -q",
                                       work / "run_b.err");
        bool both_ok = ra.exit_code == 0 && rb.exit_code == 0;

        // Byte comparison; the manifest's wall-clock runtime field is
        // informational and excluded by design.
        auto strip_runtime = [](std::string text) {
            std::size_t pos = text.find("\"runtime_s\"");
            if (pos != std::string::npos) {
                std::size_t end = text.find('\n', pos);
                text.erase(pos, end - pos);
            }
            return text;
        };
        bool identical = both_ok;
        int files = 0;
        if (both_ok) {
            for (const auto& entry : fs::recursive_directory_iterator(out_a)) {
                if (!entry.is_regular_file()) continue;
                ++files;
                fs::path rel = fs::relative(entry.path(), out_a);
                std::string a = read_file(entry.path());
                std::string b = read_file(out_b / rel);
                if (rel.filename() == "manifest.json") {
                    a = strip_runtime(a);
                    b = strip_runtime(b);
                }
                if (a != b) identical = false;
            }
        }

        // Field-exact replay of the written trace.
        bool replay_exact = false;
        if (both_ok) {
            ControlTrace parsed = parse_trace_csv(read_file(out_a / "trace.csv"));
            PrintPlan plan = compile(design);
            ControlTrace direct = execute(plan, design.device, design.dt_s);
            DeviceState a = replay_states(parsed, plan, design.device).back();
            DeviceState b = replay_states(direct, plan, design.device).back();
            replay_exact =
                a.t_s == b.t_s && a.s_m == b.s_m && a.s_total_m == b.s_total_m &&
                a.z_m == b.z_m && a.foot_angle_deg == b.foot_angle_deg &&
                a.clamp_gap_m == b.clamp_gap_m && a.head_u_m == b.head_u_m &&
                a.head_v_m == b.head_v_m &&
                a.wheels.front_left == b.wheels.front_left &&
                a.wheels.front_right == b.wheels.front_right &&
                a.wheels.rear_left == b.wheels.rear_left &&
                a.wheels.rear_right == b.wheels.rear_right &&
                a.extruding == b.extruding && a.mode == b.mode;
        }
        bool pass = both_ok && identical && replay_exact && files >= 5;
        criterion(9, pass,
                  fmt("two runs byte-identical over %d files (wall-clock "
                      "manifest field excluded) %s; trace replay field-exact %s",
                      files, identical ? "yes" : "NO", replay_exact ? "yes" : "NO"));
    } catch (const std::exception& e) {
        criterion_error(9, e.what());
    }

    // 10. The static gate rejects unbuildable footprints at `check` with
    //     exit code 1, naming the violated constraint.
    try {
        Design short_wall = circle_design(PlanMode::ClosedLayered, 2);
        short_wall.footprint.top_height_m = PiecewiseLinear(0.03);
        fs::path short_path = work / "short_wall.json";
        std::ofstream(short_path) << design_json(short_wall);
        CliResult rs = run_cli_process("check " + short_path.string(),
                                       work / "short.err");

        Design thick_wall = circle_design(PlanMode::ClosedLayered, 2);
        thick_wall.footprint.thickness_m = 0.15;
        fs::path thick_path = work / "thick_wall.json";
        std::ofstream(thick_path) << design_json(thick_wall);
        CliResult rt = run_cli_process("check " + thick_path.string(),
                                       work / "thick.err");

        bool short_ok = rs.exit_code == 1 &&
                        rs.err.find("FootprintTooShort") != std::string::npos;
        bool thick_ok = rt.exit_code == 1 &&
                        rt.err.find("FootprintUnclampable") != std::string::npos;
        criterion(10, short_ok && thick_ok,
                  fmt("foot-height fixture: exit %d, names FootprintTooShort %s; "
                      "clamp fixture: exit %d, names FootprintUnclampable %s",
                      rs.exit_code, short_ok ? "yes" : "NO", rt.exit_code,
                      thick_ok ? "yes" : "NO"));
    } catch (const std::exception& e) {
        criterion_error(10, e.what());
    }

    if (g_failures == 0) {
        std::printf("all 10 criteria passed\n");
    } else {
        std::printf("%d criteria FAILED\n", g_failures);
    }
    return g_failures;
}
