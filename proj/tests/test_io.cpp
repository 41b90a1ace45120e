#include <doctest.h>

#include <algorithm>
#include <string>

#include "climbprint/controller.hpp"
#include "climbprint/design_io.hpp"
#include "climbprint/digest.hpp"
#include "climbprint/manifest.hpp"
#include "climbprint/trace_csv.hpp"
#include "support.hpp"

using namespace climbprint;
using namespace climbprint::testing;

namespace {

bool has_issue(const ParseOutcome& out, const std::string& path,
               const std::string& code) {
    return std::any_of(out.issues.begin(), out.issues.end(), [&](const Issue& i) {
        return i.path == path && i.code == code;
    });
}

}  // namespace

TEST_CASE("designs round-trip through their document form") {
    Design original = circle_design(PlanMode::ClosedLayered, 3, 10.0);
    std::string text = design_json(original);
    ParseOutcome out = parse_design(text);
    REQUIRE(out.ok());
    // Strongest equivalence check available: both compile to the same plan.
    CHECK(compile(*out.design).digest == compile(original).digest);
    CHECK(design_json(*out.design) == text);
}

TEST_CASE("one misspelled field fails with a path-precise error") {
    std::string text = design_json(wall_design(2));
    std::size_t pos = text.find("\"thickness_m\"");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 13, "\"thicknes_m\"");

    ParseOutcome out = parse_design(text);
    CHECK_FALSE(out.ok());
    CHECK(has_issue(out, "$.design.footprint.thicknes_m", "parse/unknown_field"));
    CHECK(has_issue(out, "$.design.footprint.thickness_m", "parse/missing_field"));
}

TEST_CASE("all validation problems are collected, not just the first") {
    std::string text = design_json(circle_design(PlanMode::ClosedLayered, 2));
    auto patch = [&](const std::string& from, const std::string& to) {
        std::size_t pos = text.find(from);
        REQUIRE(pos != std::string::npos);
        text.replace(pos, from.size(), to);
    };
    patch("\"mode\": \"closed_layered\"", "\"mode\": \"sideways\"");
    patch("\"layer_height_m\": 0.02", "\"layer_height_m\": -0.02");
    patch("\"cure_time_s\": 300.0", "\"cure_time_s\": 0.0");

    ParseOutcome out = parse_design(text);
    CHECK_FALSE(out.ok());
    CHECK(out.issues.size() >= 3);
    CHECK(has_issue(out, "$.design.mode", "validation/unknown_mode"));

    SUBCASE("messages carry the offending value") {
        for (const Issue& issue : out.issues) {
            if (issue.path == "$.design.layer_height_m") {
                CHECK(issue.message.find("-0.02") != std::string::npos);
            }
        }
    }
}

TEST_CASE("layer count can be given as a target height") {
    std::string text = design_json(circle_design(PlanMode::ClosedLayered, 10));
    std::size_t pos = text.find("\"n_layers\": 10");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 14, "\"target_height_m\": 0.2");
    ParseOutcome out = parse_design(text);
    REQUIRE(out.ok());
    CHECK(out.design->n_layers == 10);

    SUBCASE("giving both is a conflict") {
        std::string both = design_json(circle_design(PlanMode::ClosedLayered, 10));
        std::size_t p = both.find("\"n_layers\": 10");
        both.replace(p, 14, "\"n_layers\": 10, \"target_height_m\": 0.2");
        ParseOutcome conflicted = parse_design(both);
        CHECK_FALSE(conflicted.ok());
        CHECK(has_issue(conflicted, "$.design", "validation/conflicting_fields"));
    }
}

TEST_CASE("mode and footprint topology conflicts are caught at parse time") {
    std::string text = design_json(wall_design(2));
    std::size_t pos = text.find("\"mode\": \"open_boustrophedon\"");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 28, "\"mode\": \"spiral\"");
    ParseOutcome out = parse_design(text);
    CHECK_FALSE(out.ok());
    CHECK(has_issue(out, "$.design.footprint.closed", "validation/mode_conflict"));
}

TEST_CASE("malformed JSON reports the position") {
    ParseOutcome out = parse_design("{\"schema_version\": 1, }");
    CHECK_FALSE(out.ok());
    REQUIRE(out.issues.size() == 1);
    CHECK(out.issues.front().code == "ParseError");
}

TEST_CASE("trace CSV round-trips every record bit-identically") {
    Design design = wall_design(1);
    PrintPlan plan = compile(design);
    ControlTrace trace = execute(plan, design.device, design.dt_s);

    std::string csv = trace_csv(trace);
    ControlTrace back = parse_trace_csv(csv);
    REQUIRE(back.records.size() == trace.records.size());
    for (std::size_t i = 0; i < trace.records.size(); ++i) {
        const ControlRecord& a = trace.records[i];
        const ControlRecord& b = back.records[i];
        CHECK(a.t_s == b.t_s);
        CHECK(a.mode == b.mode);
        CHECK(a.wheels.front_left == b.wheels.front_left);
        CHECK(a.wheels.front_right == b.wheels.front_right);
        CHECK(a.wheels.rear_left == b.wheels.rear_left);
        CHECK(a.wheels.rear_right == b.wheels.rear_right);
        CHECK(a.foot_angle_deg == b.foot_angle_deg);
        CHECK(a.clamp_gap_m == b.clamp_gap_m);
        CHECK(a.head_u_m == b.head_u_m);
        CHECK(a.head_v_m == b.head_v_m);
        CHECK(a.extrusion_mm3s == b.extrusion_mm3s);
        CHECK(a.extruding == b.extruding);
    }
    // A second serialization is byte-identical.
    CHECK(trace_csv(back) == csv);
}

TEST_CASE("malformed trace rows are rejected with their line number") {
    std::string good = std::string(kTraceCsvHeader) +
                       "\n0.000000000,idle,0,0,0,0,0,0.04,0,0,0,0\n";
    CHECK(parse_trace_csv(good).records.size() == 1);

    auto expect_parse_error = [](const std::string& text, const char* what) {
        try {
            (void)parse_trace_csv(text);
            FAIL("expected a throw for " << what);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::ParseError);
            CHECK(std::string(e.what()).find("line") != std::string::npos);
        }
    };
    expect_parse_error("not,the,header\n", "wrong header");
    expect_parse_error(std::string(kTraceCsvHeader) + "\n1.0,idle,0,0\n",
                       "truncated row");
    expect_parse_error(std::string(kTraceCsvHeader) +
                           "\n1.0,idle,zero,0,0,0,0,0.04,0,0,0,0\n",
                       "non-numeric field");
    expect_parse_error(std::string(kTraceCsvHeader) +
                           "\n1.0,sideways,0,0,0,0,0,0.04,0,0,0,0\n",
                       "unknown mode");

    // Empty input has no offending line to cite; it still refuses to parse.
    try {
        (void)parse_trace_csv("");
        FAIL("expected a throw for empty input");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParseError);
    }
}

TEST_CASE("content digests match the reference vectors") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
    CHECK(hex64(0xaf63dc4c8601ec8cull) == "af63dc4c8601ec8c");
    CHECK(hex64(0x1ull) == "0000000000000001");

    SUBCASE("streaming raw updates equal one-shot hashing") {
        Fnv1a64 h;
        h.update("foo", 3);
        h.update("bar", 3);
        CHECK(h.value() == fnv1a64("foobar"));
    }

    SUBCASE("field updates are length-framed, so field splits do not collide") {
        Fnv1a64 a, b;
        a.update_string("foo");
        a.update_string("bar");
        b.update_string("foob");
        b.update_string("ar");
        CHECK(a.value() != b.value());
    }
}

TEST_CASE("run manifests serialize deterministically") {
    RunManifest m;
    m.tool_name = "climbprint";
    m.tool_version = "0.1.0";
    m.input_path = "designs/demo.json";
    m.input_digest = fnv1a64("content");
    m.resample_step_m = 0.005;
    m.dt_s = 0.1;
    m.params_digest = params_digest(0.005, 0.1);
    m.plan_digest = 42;
    m.outputs.push_back({"trace.csv", 128, fnv1a64("rows")});
    m.runtime_s = 1.25;

    std::string a = manifest_json(m);
    CHECK(a == manifest_json(m));
    CHECK(a.find("\"runtime_s\"") != std::string::npos);
    CHECK(a.find(hex64(m.plan_digest)) != std::string::npos);
    // Equal parameters hash equal; different parameters differ.
    CHECK(params_digest(0.005, 0.1) == m.params_digest);
    CHECK(params_digest(0.005, 0.2) != m.params_digest);
}
