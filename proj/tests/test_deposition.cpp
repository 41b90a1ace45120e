#include <doctest.h>

#include <cmath>
#include <random>
#include <tuple>

#include "climbprint/deposition.hpp"

using namespace climbprint;

TEST_CASE("bead width follows volume conservation") {
    // 10 mm^3/s at 5 mm/s and 2 mm layer height spreads into a 1 mm bead.
    CHECK(bead_width(10.0, 0.005, 0.002) == doctest::Approx(0.001).epsilon(1e-12));
    // Doubling the flow doubles the width; doubling the speed halves it.
    CHECK(bead_width(20.0, 0.005, 0.002) == doctest::Approx(0.002).epsilon(1e-12));
    CHECK(bead_width(10.0, 0.010, 0.002) == doctest::Approx(0.0005).epsilon(1e-12));
}

TEST_CASE("bead width and required flow invert each other") {
    std::mt19937 rng(20240812);
    std::uniform_real_distribution<double> pick_q(1.0, 20000.0);
    std::uniform_real_distribution<double> pick_v(1e-4, 0.1);
    std::uniform_real_distribution<double> pick_h(1e-3, 0.1);
    for (int i = 0; i < 200; ++i) {
        double q = pick_q(rng);
        double v = pick_v(rng);
        double h = pick_h(rng);
        double w = bead_width(q, v, h);
        CHECK(w == doctest::Approx(q * 1e-9 / (v * h)).epsilon(1e-12));
        CHECK(required_flow_mm3s(w, v, h) == doctest::Approx(q).epsilon(1e-12));
        // Dividing the speed by two at fixed flow doubles the width exactly.
        CHECK(bead_width(q, v / 2.0, h) / w == doctest::Approx(2.0).epsilon(1e-9));
    }
}

TEST_CASE("non-positive deposition inputs are rejected") {
    using Triple = std::tuple<double, double, double>;
    for (auto [q, v, h] : {Triple{0.0, 0.01, 0.02}, Triple{5.0, 0.0, 0.02},
                           Triple{5.0, 0.01, 0.0}, Triple{-1.0, 0.01, 0.02}}) {
        try {
            (void)bead_width(q, v, h);
            FAIL("expected a throw");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::NonPositiveInput);
        }
    }
}

TEST_CASE("cure-limited device speed is length over cure time") {
    MaterialModel m;
    m.cure_time_s = 100.0;
    CHECK(max_device_speed(m, 4.0) == doctest::Approx(0.04).epsilon(1e-12));
    m.cure_time_s = 628.32;
    CHECK(max_device_speed(m, 6.2832) == doctest::Approx(0.01).epsilon(1e-12));
}

TEST_CASE("deposited volume integrates flow nodes per extruding interval") {
    ControlTrace trace;
    auto rec = [](double t, double q, bool on) {
        ControlRecord r;
        r.t_s = t;
        r.mode = Mode::Printing;
        r.extrusion_mm3s = q;
        r.extruding = on;
        return r;
    };
    SUBCASE("a linear ramp integrates exactly") {
        // Flow ramping 0 -> 10 mm^3/s over 10 s deposits 50 mm^3; the
        // trapezoid rule is exact on the linear ramp at any tick size.
        for (double t = 0.0; t <= 10.0 + 1e-12; t += 0.5) {
            trace.records.push_back(rec(t, t, true));
        }
        trace.records.back().extruding = false;  // closing node
        CHECK(deposited_volume(trace) == doctest::Approx(50.0).epsilon(1e-12));
    }
    SUBCASE("intervals whose left record is not extruding deposit nothing") {
        trace.records = {rec(0.0, 8.0, false), rec(1.0, 8.0, true),
                         rec(2.0, 8.0, false), rec(3.0, 8.0, true),
                         rec(4.0, 8.0, false)};
        CHECK(deposited_volume(trace) == doctest::Approx(16.0).epsilon(1e-12));
    }
    SUBCASE("time going backwards is rejected") {
        trace.records = {rec(0.0, 1.0, true), rec(1.0, 1.0, true),
                         rec(0.5, 1.0, false)};
        try {
            (void)deposited_volume(trace);
            FAIL("expected a throw");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::NonMonotonicTimestamps);
        }
    }
}

TEST_CASE("bead segments report swept length and volume") {
    BeadSegment seg;
    seg.width_m = 0.04;
    seg.height_m = 0.02;
    seg.s_m = {0.0, 0.5, 1.5};
    seg.u_m = {0.0, 0.0, 0.0};
    seg.z_m = {0.12, 0.12, 0.12};
    CHECK(seg.length_m() == doctest::Approx(1.5).epsilon(1e-12));
    // 0.04 m * 0.02 m * 1.5 m = 1.2e-3 m^3 = 1.2e6 mm^3.
    CHECK(seg.volume_mm3() == doctest::Approx(1.2e6).epsilon(1e-12));
}
