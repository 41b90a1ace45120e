#include "climbprint/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#if defined(__unix__) || defined(__APPLE__)
#include <unistd.h>
#endif

#include "climbprint/controller.hpp"
#include "climbprint/design_io.hpp"
#include "climbprint/digest.hpp"
#include "climbprint/manifest.hpp"
#include "climbprint/mesh_obj.hpp"
#include "climbprint/simulator.hpp"
#include "climbprint/svg.hpp"
#include "climbprint/trace_csv.hpp"
#include "climbprint/version.hpp"

namespace climbprint {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

bool color_diagnostics() {
    static const bool enabled = [] {
        if (std::getenv("NO_COLOR") != nullptr) return false;
#if defined(__unix__) || defined(__APPLE__)
        return isatty(fileno(stderr)) != 0;
#else
        return false;
#endif
    }();
    return enabled;
}

void diag(const char* kind, const std::string& message) {
    if (color_diagnostics()) {
        std::fprintf(stderr, "\x1b[%sm%s:\x1b[0m %s\n",
                     std::string_view(kind) == "error" ? "31" : "33", kind,
                     message.c_str());
    } else {
        std::fprintf(stderr, "%s: %s\n", kind, message.c_str());
    }
}

void diag_error(const Error& e) {
    diag("error", "[" + std::string(error_code_name(e.code())) + "] " + e.what());
}

void diag_issues(const std::vector<Issue>& issues, const char* kind) {
    for (const Issue& issue : issues) {
        diag(kind, issue.path + ": " + issue.code + ": " + issue.message);
    }
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot read " + path.string());
    }
    std::ostringstream os;
    os << in.rdbuf();
    if (!in.good() && !in.eof()) {
        throw Error(ErrorCode::IoError, "read failed: " + path.string());
    }
    return std::move(os).str();
}

void write_file(const fs::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot write " + path.string());
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
        throw Error(ErrorCode::IoError, "write failed: " + path.string());
    }
}

struct CommonArgs {
    std::string design_path;
    double step = 0.0;   // 0: keep the design/default value
    double dt = 0.0;
    std::uint64_t seed = 0;  // reserved for future stochastic tracking models
    bool quiet = false;
};

// Loads and strictly parses a design, applying command-line overrides.
// nullopt means the problem was already reported; *exit_code is set.
std::optional<Design> load_design(const CommonArgs& args, int* exit_code) {
    std::string text;
    try {
        text = read_file(args.design_path);
    } catch (const Error& e) {
        diag_error(e);
        *exit_code = 2;
        return std::nullopt;
    }
    ParseOutcome outcome = parse_design(text);
    if (!outcome.ok()) {
        diag_issues(outcome.issues, "error");
        *exit_code = 1;
        return std::nullopt;
    }
    Design design = std::move(*outcome.design);
    if (args.step > 0.0) design.resample_step_m = args.step;
    if (args.dt > 0.0) design.dt_s = args.dt;
    return design;
}

// check/plan front half: footprint gate plus full compile. Compile failures
// are design problems, hence exit 1.
std::optional<PrintPlan> gate_and_compile(const Design& design, bool quiet,
                                          int* exit_code) {
    FootprintReport gate = footprint_check(design);
    if (!quiet) diag_issues(gate.warnings, "warning");
    if (!gate.ok()) {
        diag_issues(gate.errors, "error");
        *exit_code = 1;
        return std::nullopt;
    }
    try {
        return compile(design);
    } catch (const Error& e) {
        diag_error(e);
        *exit_code = 1;
        return std::nullopt;
    }
}

std::string plan_json(const PrintPlan& plan) {
    ordered_json j;
    j["schema_version"] = 1;
    j["mode"] = std::string(plan_mode_name(plan.mode));
    j["n_layers"] = plan.n_layers;
    j["layer_height_m"] = plan.layer_height_m;
    j["wall_thickness_m"] = plan.wall_thickness_m;
    j["resample_step_m"] = plan.resample_step_m;
    j["dt_s"] = plan.dt_s;
    j["foot_tilt_deg"] = plan.foot_tilt_deg;
    j["path"] = {{"length_m", plan.path.total_length()},
                 {"closed", plan.path.closed()},
                 {"samples", plan.path.samples().size()}};
    ordered_json layers = ordered_json::array();
    for (const LayerPlan& layer : plan.layers) {
        double shift_min = 0.0, shift_max = 0.0;
        if (!layer.shift_m.empty()) {
            shift_min = *std::min_element(layer.shift_m.begin(), layer.shift_m.end());
            shift_max = *std::max_element(layer.shift_m.begin(), layer.shift_m.end());
        }
        layers.push_back({{"index", layer.index},
                          {"reverse", layer.reverse},
                          {"climb_after_m", layer.climb_after_m},
                          {"speed_mps", layer.speed_mps.empty() ? 0.0 : layer.speed_mps.front()},
                          {"flow_mm3s", layer.flow_mm3s.empty() ? 0.0 : layer.flow_mm3s.front()},
                          {"shift_min_m", shift_min},
                          {"shift_max_m", shift_max}});
    }
    j["layers"] = std::move(layers);
    j["total_time_s"] = plan.total_time_s;
    j["total_volume_mm3"] = plan.total_volume_mm3;
    j["digest"] = hex64(plan.digest);
    return j.dump(2) + "\n";
}

std::string report_json(const SimResult& sim) {
    const SimReport& r = sim.report;
    ordered_json j;
    j["schema_version"] = 1;
    j["duration_s"] = r.duration_s;
    j["record_count"] = r.record_count;
    j["n_layers"] = sim.structure.n_layers;
    j["bead_count"] = sim.structure.beads.size();
    j["final_height_m"] = r.final_height_m;
    j["deposited_mm3"] = r.deposited_mm3;
    j["bead_volume_mm3"] = r.bead_volume_mm3;
    j["volume_balance_rel"] = r.volume_balance_rel;
    j["max_nozzle_path_error_m"] = r.max_nozzle_path_error_m;
    j["layer_height_error_m"] = r.layer_height_error_m;
    ordered_json gaps = ordered_json::array();
    for (const CoverageGap& g : r.coverage_gaps) {
        gaps.push_back(
            {{"layer", g.layer}, {"s_begin_m", g.s_begin_m}, {"s_end_m", g.s_end_m}});
    }
    j["coverage_gaps"] = std::move(gaps);
    ordered_json cures = ordered_json::array();
    for (const CureViolation& v : r.cure_violations) {
        cures.push_back({{"layer", v.layer}, {"s_m", v.s_m}, {"gap_s", v.gap_s}});
    }
    j["cure_violations"] = std::move(cures);
    ordered_json hits = ordered_json::array();
    for (const CollisionEvent& ev : r.collisions) {
        hits.push_back(
            {{"t_s", ev.t_s}, {"s_m", ev.s_m}, {"clearance_m", ev.clearance_m}});
    }
    j["collisions"] = std::move(hits);
    return j.dump(2) + "\n";
}

void print_plan_summary(const PrintPlan& plan) {
    const LayerPlan& first = plan.layers.front();
    std::printf("plan: %s, %d layer%s, path %.3f m, speed %.4f m/s, flow %.1f mm^3/s\n",
                std::string(plan_mode_name(plan.mode)).c_str(), plan.n_layers,
                plan.n_layers == 1 ? "" : "s", plan.path.total_length(),
                first.speed_mps.empty() ? 0.0 : first.speed_mps.front(),
                first.flow_mm3s.empty() ? 0.0 : first.flow_mm3s.front());
    std::printf("estimate: %.1f s, %.1f mm^3, digest %s\n", plan.total_time_s,
                plan.total_volume_mm3, hex64(plan.digest).c_str());
}

int cmd_check(const CommonArgs& args) {
    int code = 0;
    auto design = load_design(args, &code);
    if (!design) return code;
    auto plan = gate_and_compile(*design, args.quiet, &code);
    if (!plan) return code;
    if (!args.quiet) {
        print_plan_summary(*plan);
        std::printf("ok\n");
    }
    return 0;
}

int cmd_plan(const CommonArgs& args, const std::string& out_path) {
    int code = 0;
    auto design = load_design(args, &code);
    if (!design) return code;
    auto plan = gate_and_compile(*design, args.quiet, &code);
    if (!plan) return code;
    try {
        write_file(out_path, plan_json(*plan));
    } catch (const Error& e) {
        diag_error(e);
        return 2;
    }
    if (!args.quiet) {
        print_plan_summary(*plan);
        std::printf("wrote %s\n", out_path.c_str());
    }
    return 0;
}

int cmd_run(const CommonArgs& args, const std::string& out_dir) {
    auto t_begin = std::chrono::steady_clock::now();
    int code = 0;
    std::string design_text;
    try {
        design_text = read_file(args.design_path);
    } catch (const Error& e) {
        diag_error(e);
        return 2;
    }
    ParseOutcome outcome = parse_design(design_text);
    if (!outcome.ok()) {
        diag_issues(outcome.issues, "error");
        return 1;
    }
    Design design = std::move(*outcome.design);
    if (args.step > 0.0) design.resample_step_m = args.step;
    if (args.dt > 0.0) design.dt_s = args.dt;
    auto plan = gate_and_compile(design, args.quiet, &code);
    if (!plan) return code;

    ControlTrace trace;
    SimResult sim;
    std::string obj_text;
    std::vector<std::string> layer_svgs;
    try {
        trace = execute(*plan, design.device, plan->dt_s);
        sim = simulate(trace, design);
        obj_text = export_obj(sim.structure);
        layer_svgs.reserve(static_cast<std::size_t>(sim.structure.n_layers));
        for (int layer = 0; layer < sim.structure.n_layers; ++layer) {
            layer_svgs.push_back(layer_svg(sim.structure, layer));
        }
    } catch (const Error& e) {
        diag_error(e);
        return 2;
    }

    RunManifest manifest;
    manifest.tool_name = "climbprint";
    manifest.tool_version = kVersion;
    manifest.input_path = args.design_path;
    manifest.input_digest = fnv1a64(design_text);
    manifest.resample_step_m = plan->resample_step_m;
    manifest.dt_s = plan->dt_s;
    manifest.params_digest = params_digest(plan->resample_step_m, plan->dt_s);
    manifest.plan_digest = plan->digest;

    try {
        fs::create_directories(fs::path(out_dir) / "layers");
        auto emit = [&](const std::string& name, const std::string& content) {
            write_file(fs::path(out_dir) / name, content);
            manifest.outputs.push_back({name, content.size(), fnv1a64(content)});
        };
        emit("plan.json", plan_json(*plan));
        emit("trace.csv", trace_csv(trace));
        emit("structure.obj", obj_text);
        for (std::size_t i = 0; i < layer_svgs.size(); ++i) {
            char name[48];
            std::snprintf(name, sizeof(name), "layers/layer_%03zu.svg", i);
            emit(name, layer_svgs[i]);
        }
        emit("report.json", report_json(sim));
        manifest.runtime_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin)
                .count();
        write_file(fs::path(out_dir) / "manifest.json", manifest_json(manifest));
    } catch (const std::exception& e) {  // fs errors and Error alike
        diag("error", e.what());
        return 2;
    }

    const SimReport& r = sim.report;
    if (!r.coverage_gaps.empty() || !r.cure_violations.empty() ||
        !r.collisions.empty()) {
        std::ostringstream os;
        os << r.coverage_gaps.size() << " coverage gap(s), " << r.cure_violations.size()
           << " cure-time violation(s), " << r.collisions.size()
           << " collision(s); see report.json";
        diag("warning", os.str());
    }
    if (!args.quiet) {
        print_plan_summary(*plan);
        std::printf("trace: %zu records, %.1f s\n", r.record_count, r.duration_s);
        std::printf(
            "sim: height %.6f m, volume balance %.2e, max nozzle error %.6f m\n",
            r.final_height_m, r.volume_balance_rel, r.max_nozzle_path_error_m);
        std::printf("wrote %s (%zu files)\n", out_dir.c_str(),
                    manifest.outputs.size() + 1);
    }
    return 0;
}

int cmd_report(const std::string& out_dir, bool quiet) {
    std::string report_text;
    try {
        report_text = read_file(fs::path(out_dir) / "report.json");
    } catch (const Error& e) {
        diag_error(e);
        return 2;
    }
    nlohmann::json report;
    try {
        report = nlohmann::json::parse(report_text);
    } catch (const nlohmann::json::parse_error& e) {
        diag("error", std::string("report.json: ") + e.what());
        return 1;
    }

    nlohmann::json manifest;
    try {
        manifest = nlohmann::json::parse(read_file(fs::path(out_dir) / "manifest.json"));
    } catch (const std::exception&) {
        manifest = nullptr;  // manifest is optional for the summary
    }

    std::printf("run summary: %s\n", out_dir.c_str());
    if (manifest.is_object()) {
        std::printf("  tool        %s %s\n",
                    manifest["tool"]["name"].get<std::string>().c_str(),
                    manifest["tool"]["version"].get<std::string>().c_str());
        std::printf("  input       %s (fnv1a64 %s)\n",
                    manifest["input"]["path"].get<std::string>().c_str(),
                    manifest["input"]["fnv1a64"].get<std::string>().c_str());
        std::printf("  plan digest %s\n",
                    manifest["plan"]["digest"].get<std::string>().c_str());
    }
    std::printf("  duration    %.1f s (%llu records)\n",
                report.value("duration_s", 0.0),
                static_cast<unsigned long long>(report.value("record_count", 0ull)));
    std::printf("  layers      %d, final height %.6f m\n", report.value("n_layers", 0),
                report.value("final_height_m", 0.0));
    std::printf("  volume      deposited %.1f mm^3, beads %.1f mm^3, balance %.2e\n",
                report.value("deposited_mm3", 0.0), report.value("bead_volume_mm3", 0.0),
                report.value("volume_balance_rel", 0.0));
    std::printf("  nozzle err  max %.6f m\n", report.value("max_nozzle_path_error_m", 0.0));
    double worst_layer = 0.0;
    if (auto it = report.find("layer_height_error_m");
        it != report.end() && it->is_array()) {
        for (const auto& v : *it) {
            if (v.is_number()) worst_layer = std::max(worst_layer, std::abs(v.get<double>()));
        }
    }
    std::printf("  layer err   worst %.6f m\n", worst_layer);
    auto count = [&](const char* key) -> std::size_t {
        auto it = report.find(key);
        return it != report.end() && it->is_array() ? it->size() : 0;
    };
    std::printf("  findings    %zu coverage gap(s), %zu cure violation(s), %zu collision(s)\n",
                count("coverage_gaps"), count("cure_violations"), count("collisions"));
    (void)quiet;
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"toolpath planner, controller and simulator for a wall-climbing "
                 "print head"};
    app.set_version_flag("--version", std::string("climbprint ") + kVersion);
    app.require_subcommand(1);

    CommonArgs check_args, plan_args, run_args;
    std::string plan_out, run_out, report_dir;
    bool report_quiet = false;

    auto add_common = [](CLI::App* sub, CommonArgs& a, const char* design_help) {
        sub->add_option("design", a.design_path, design_help)->required();
        sub->add_option("--step", a.step, "resample step override, meters")
            ->check(CLI::PositiveNumber);
        sub->add_option("--dt", a.dt, "controller tick override, seconds")
            ->check(CLI::PositiveNumber);
        sub->add_option("--seed", a.seed, "reserved; accepted for interface stability");
        sub->add_flag("-q,--quiet", a.quiet, "suppress informational output");
    };

    CLI::App* check = app.add_subcommand("check", "validate a design and dry-run the planner");
    add_common(check, check_args, "design JSON file");

    CLI::App* plan = app.add_subcommand("plan", "compile a design to a plan summary");
    add_common(plan, plan_args, "design JSON file");
    plan->add_option("-o,--output", plan_out, "plan JSON output path")->required();

    CLI::App* run = app.add_subcommand("run",
                                       "full pipeline: plan, execute, simulate, export");
    add_common(run, run_args, "design JSON file");
    run->add_option("-o,--output", run_out, "output directory")->required();

    CLI::App* report = app.add_subcommand("report", "summarize a finished run directory");
    report->add_option("outdir", report_dir, "run output directory")->required();
    report->add_flag("-q,--quiet", report_quiet, "suppress informational output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);  // prints help or the usage error
        return code == 0 ? 0 : 1;
    }

    if (*check) return cmd_check(check_args);
    if (*plan) return cmd_plan(plan_args, plan_out);
    if (*run) return cmd_run(run_args, run_out);
    if (*report) return cmd_report(report_dir, report_quiet);
    return 1;
}

}  // namespace climbprint
