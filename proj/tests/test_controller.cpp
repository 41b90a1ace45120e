#include <doctest.h>

#include <cmath>
#include <vector>

#include "climbprint/controller.hpp"
#include "support.hpp"

using namespace climbprint;
using namespace climbprint::testing;

namespace {

DeviceState replay(const ControlTrace& trace, const PrintPlan& plan,
                   const DeviceConfig& device) {
    StepContext ctx{device, plan.top_height_m, plan.path.total_length(),
                    plan.path.closed()};
    DeviceState st = initial_state(plan, device);
    for (const ControlRecord& r : trace.records) st = step(st, r, ctx);
    return st;
}

int count_entries(const ControlTrace& trace, Mode mode) {
    int n = 0;
    Mode prev = Mode::Done;
    for (const ControlRecord& r : trace.records) {
        if (r.mode == mode && prev != mode) ++n;
        prev = r.mode;
    }
    return n;
}

}  // namespace

TEST_CASE("traces are well-formed command timelines") {
    Design design = circle_design(PlanMode::ClosedLayered, 2);
    PrintPlan plan = compile(design);
    ControlTrace trace = execute(plan, design.device, design.dt_s);

    REQUIRE(trace.records.size() > 10);
    CHECK(trace.plan_digest == plan.digest);
    CHECK(trace.records.front().mode == Mode::Idle);
    CHECK_FALSE(trace.records.front().extruding);
    CHECK(trace.records.back().mode == Mode::Done);
    for (std::size_t i = 1; i < trace.records.size(); ++i) {
        CHECK(trace.records[i].t_s > trace.records[i - 1].t_s);
    }
    for (const ControlRecord& r : trace.records) {
        // Emission quantizes every field onto the trace grid.
        CHECK(r.t_s == std::nearbyint(r.t_s * 1e9) / 1e9);
        CHECK(r.head_u_m == std::nearbyint(r.head_u_m * 1e9) / 1e9);
        if (r.mode == Mode::Climbing || r.mode == Mode::Reversing) {
            CHECK_FALSE(r.extruding);
        }
    }
}

TEST_CASE("closed-wall choreography climbs after every layer") {
    Design design = circle_design(PlanMode::ClosedLayered, 3);
    PrintPlan plan = compile(design);
    ControlTrace trace = execute(plan, design.device, design.dt_s);

    CHECK(count_entries(trace, Mode::Printing) == 3);
    CHECK(count_entries(trace, Mode::Climbing) == 3);
    CHECK(count_entries(trace, Mode::Reversing) == 0);

    // Each climb raises the nozzle one layer height at the wheel limit.
    DeviceState end = replay(trace, plan, design.device);
    double top = design.footprint.top_height_m(0.0);
    CHECK(end.z_m ==
          doctest::Approx(top + 4 * design.layer_height_m).epsilon(1e-9));
    CHECK(end.mode == Mode::Done);
    CHECK_FALSE(end.extruding);
    // After whole laps the device is back at its attach point.
    double L = plan.path.total_length();
    double off = std::min(end.s_m, L - end.s_m);
    CHECK(off < plan.resample_step_m);
}

TEST_CASE("boustrophedon choreography reverses between layers only") {
    Design design = wall_design(4);
    PrintPlan plan = compile(design);
    ControlTrace trace = execute(plan, design.device, design.dt_s);

    CHECK(count_entries(trace, Mode::Printing) > 0);
    CHECK(count_entries(trace, Mode::Climbing) == 4);
    CHECK(count_entries(trace, Mode::Reversing) == 3);

    // The device reference never runs off the open wall (step() throws if a
    // command would), and the head keeps the nozzle inside the wall too.
    DeviceState end = replay(trace, plan, design.device);
    CHECK(end.mode == Mode::Done);
    for (const ControlRecord& r : trace.records) {
        CHECK(std::abs(r.head_v_m) <= design.device.wheelbase_m / 2.0 + 1e-9);
    }
    // Even layer count: the final pass ends back at the attach end.
    CHECK(end.s_m == doctest::Approx(design.device.wheelbase_m / 2.0).epsilon(1e-6));
}

TEST_CASE("spiral choreography never climbs and tilts the foot") {
    Design design = circle_design(PlanMode::Spiral, 3);
    PrintPlan plan = compile(design);
    ControlTrace trace = execute(plan, design.device, design.dt_s);

    CHECK(count_entries(trace, Mode::Climbing) == 0);
    CHECK(count_entries(trace, Mode::Reversing) == 0);
    for (const ControlRecord& r : trace.records) {
        if (r.mode == Mode::Printing) {
            CHECK(r.foot_angle_deg ==
                  doctest::Approx(plan.foot_tilt_deg).epsilon(1e-9));
        }
    }
    DeviceState end = replay(trace, plan, design.device);
    // Helix top: three laps of rise above the starting nozzle height.
    double top = design.footprint.top_height_m(0.0);
    CHECK(end.z_m ==
          doctest::Approx(top + 4 * design.layer_height_m).epsilon(1e-6));
}

TEST_CASE("an empty plan produces only staging and completion") {
    Design design = circle_design(PlanMode::ClosedLayered, 1);
    PrintPlan plan = compile(design);
    plan.layers.clear();  // nothing to print
    ControlTrace trace = execute(plan, design.device, design.dt_s);
    REQUIRE(trace.records.size() == 2);
    CHECK(trace.records.front().mode == Mode::Idle);
    CHECK(trace.records.back().mode == Mode::Done);
    CHECK(deposited_volume(trace) == 0.0);
}

TEST_CASE("the emitted trace replays through step() field-exactly") {
    // The controller folds its own records through step() while emitting, so
    // an independent replay must land on the same state bit for bit.
    Design design = wall_design(2);
    PrintPlan plan = compile(design);
    ControlTrace trace = execute(plan, design.device, design.dt_s);

    DeviceState a = replay(trace, plan, design.device);
    DeviceState b = replay(trace, plan, design.device);
    CHECK(a.t_s == b.t_s);
    CHECK(a.s_m == b.s_m);
    CHECK(a.s_total_m == b.s_total_m);
    CHECK(a.z_m == b.z_m);
    CHECK(a.head_u_m == b.head_u_m);
    CHECK(a.head_v_m == b.head_v_m);
    CHECK(a.foot_angle_deg == b.foot_angle_deg);
    CHECK(a.clamp_gap_m == b.clamp_gap_m);
    CHECK(a.wheels.front_left == b.wheels.front_left);
    CHECK(a.wheels.rear_right == b.wheels.rear_right);
    CHECK(a.mode == b.mode);
    CHECK(a.extruding == b.extruding);
}

TEST_CASE("step() rejects command envelope violations") {
    Design design = circle_design(PlanMode::ClosedLayered, 1);
    PrintPlan plan = compile(design);
    StepContext ctx{design.device, plan.top_height_m, plan.path.total_length(),
                    true};
    DeviceState st = initial_state(plan, design.device);
    st.clamp_gap_m = 0.04;

    ControlRecord ok;
    ok.t_s = 0.1;
    ok.mode = Mode::Idle;
    ok.clamp_gap_m = 0.04;

    SUBCASE("time must not go backwards") {
        DeviceState later = st;
        later.t_s = 1.0;
        CHECK_THROWS_AS((void)step(later, ok, ctx), Error);
    }
    SUBCASE("wheel speed limit") {
        ControlRecord r = ok;
        r.wheels = {0.06, 0.06, 0.06, 0.06};
        try {
            (void)step(st, r, ctx);
            FAIL("expected a throw");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::LimitViolation);
        }
    }
    SUBCASE("head travel limits") {
        ControlRecord r = ok;
        r.head_u_m = 0.2;
        CHECK_THROWS_AS((void)step(st, r, ctx), Error);
        r = ok;
        r.head_v_m = 0.3;
        CHECK_THROWS_AS((void)step(st, r, ctx), Error);
    }
    SUBCASE("extrusion while climbing") {
        ControlRecord r = ok;
        r.mode = Mode::Climbing;
        r.extruding = true;
        r.foot_angle_deg = 90.0;
        CHECK_THROWS_AS((void)step(st, r, ctx), Error);
    }
    SUBCASE("no record may follow completion") {
        ControlRecord done = ok;
        done.mode = Mode::Done;
        DeviceState after = step(st, done, ctx);
        ControlRecord r = ok;
        r.t_s = 0.2;
        CHECK_THROWS_AS((void)step(after, r, ctx), Error);
    }
    SUBCASE("rolling off an open wall end") {
        PrintPlan wall_plan = compile(wall_design(1));
        StepContext open_ctx{design.device, wall_plan.top_height_m,
                             wall_plan.path.total_length(), false};
        DeviceState ws = initial_state(wall_plan, design.device);
        ws.clamp_gap_m = 0.04;
        ws.wheels = {-0.05, -0.05, -0.05, -0.05};  // rolling toward s = 0
        ControlRecord r = ok;
        r.t_s = ws.t_s + 100.0;  // long past the wall start
        CHECK_THROWS_AS((void)step(ws, r, open_ctx), Error);
    }
}
