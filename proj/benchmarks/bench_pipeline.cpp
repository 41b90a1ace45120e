// Microbenchmarks for the hot pipeline stages: footprint resampling, plan
// compilation, trace emission, replay simulation, and trace serialization.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "climbprint/controller.hpp"
#include "climbprint/simulator.hpp"
#include "climbprint/trace_csv.hpp"

namespace {

using namespace climbprint;

// Regular 96-gon with the circumradius inflated by 1/cos(pi/n), so the
// arc-blend resampler reproduces an exact circle of the given radius.
PathSpec drum_spec(double radius_m) {
    constexpr int n = 96;
    PathSpec spec;
    spec.closed = true;
    spec.thickness_m = 0.04;
    spec.top_height_m = PiecewiseLinear(0.10);
    double r = radius_m / std::cos(M_PI / n);
    for (int i = 0; i < n; ++i) {
        double a = 2.0 * M_PI * i / n;
        spec.points.push_back({r * std::cos(a), r * std::sin(a)});
    }
    return spec;
}

Design drum_design(int n_layers) {
    Design d;
    d.footprint = drum_spec(1.0);
    d.mode = PlanMode::ClosedLayered;
    d.n_layers = n_layers;
    d.layer_height_m = 0.02;
    d.target_bead_width_m = 0.04;
    d.resample_step_m = 0.005;
    d.dt_s = 0.1;
    d.material = {4000.0, 12000.0, 300.0, 0.02, 0.08};
    d.device = {0.4, 0.02, 0.10, 0.15, 0.25, 0.06, 0.03, 0.05};
    return d;
}

void bm_resample(benchmark::State& state) {
    PathSpec spec = drum_spec(1.0);
    for (auto _ : state) {
        ArcLengthPath path = resample(spec, 0.005);
        benchmark::DoNotOptimize(path.total_length());
    }
}
BENCHMARK(bm_resample);

void bm_compile(benchmark::State& state) {
    Design design = drum_design(10);
    for (auto _ : state) {
        PrintPlan plan = compile(design);
        benchmark::DoNotOptimize(plan.digest);
    }
}
BENCHMARK(bm_compile);

void bm_execute(benchmark::State& state) {
    Design design = drum_design(2);
    PrintPlan plan = compile(design);
    for (auto _ : state) {
        ControlTrace trace = execute(plan, design.device, design.dt_s);
        benchmark::DoNotOptimize(trace.records.size());
    }
    state.counters["records"] = static_cast<double>(
        execute(plan, design.device, design.dt_s).records.size());
}
BENCHMARK(bm_execute);

void bm_simulate(benchmark::State& state) {
    Design design = drum_design(2);
    PrintPlan plan = compile(design);
    ControlTrace trace = execute(plan, design.device, design.dt_s);
    for (auto _ : state) {
        SimResult sim = simulate(trace, design);
        benchmark::DoNotOptimize(sim.report.deposited_mm3);
    }
}
BENCHMARK(bm_simulate);

void bm_trace_csv_roundtrip(benchmark::State& state) {
    Design design = drum_design(2);
    PrintPlan plan = compile(design);
    ControlTrace trace = execute(plan, design.device, design.dt_s);
    for (auto _ : state) {
        std::string text = trace_csv(trace);
        ControlTrace parsed = parse_trace_csv(text);
        benchmark::DoNotOptimize(parsed.records.size());
    }
}
BENCHMARK(bm_trace_csv_roundtrip);

}  // namespace

BENCHMARK_MAIN();
