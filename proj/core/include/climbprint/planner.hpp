#pragma once

#include <cstdint>
#include <vector>

#include "climbprint/deposition.hpp"
#include "climbprint/geometry.hpp"
#include "climbprint/kinematics.hpp"

namespace climbprint {

// How the wall is built up.
//  ClosedLayered:     closed footprint, one lap per layer, climb between laps.
//  Spiral:            closed footprint, tilted foot, continuous helix, no climbs.
//  OpenBoustrophedon: open footprint, alternating travel direction per layer.
enum class PlanMode {
    ClosedLayered,
    Spiral,
    OpenBoustrophedon,
};

std::string_view plan_mode_name(PlanMode mode);
PlanMode plan_mode_from_name(std::string_view name);

// Target interface inclination per layer, optionally varying along the wall.
// One row serves every layer; multiple rows are indexed by layer (the last
// row extends upward). Row 0 belongs to the first layer, which sits on the
// footprint centerline, so only rows 1+ produce relative shifts.
class InclinationProfile {
public:
    InclinationProfile() = default;  // zero inclination
    static InclinationProfile constant(double deg);
    static InclinationProfile per_layer(std::vector<double> deg);
    static InclinationProfile per_layer_profiles(std::vector<PiecewiseLinear> rows);

    double deg(int layer, double s_m) const;
    bool is_zero() const;
    int rows() const { return static_cast<int>(rows_.size()); }

private:
    std::vector<PiecewiseLinear> rows_;
};

// A complete print job description: what to build and with which device and
// material. This is the authored input; compile() turns it into a PrintPlan.
struct Design {
    PathSpec footprint;
    PlanMode mode = PlanMode::ClosedLayered;
    int n_layers = 0;
    double layer_height_m = 0.0;
    double target_bead_width_m = 0.0;
    InclinationProfile inclination;
    MaterialModel material;
    DeviceConfig device;
    double resample_step_m = 0.0;  // 0 selects the automatic step
    double dt_s = 0.1;             // controller tick
};

// One printed layer (Spiral plans hold a single layer spanning all laps).
// Profiles are node values on s_grid_m; the controller interpolates
// linearly. Speed and flow are constant per layer by construction but kept
// as profiles so the trace format does not constrain future planners.
struct LayerPlan {
    int index = 0;
    bool reverse = false;          // odd boustrophedon layers run s: L -> 0
    double climb_after_m = 0.0;    // climb height after this layer, 0 = none
    std::vector<double> s_grid_m;  // unwrapped for spiral (laps concatenated)
    std::vector<double> speed_mps;
    std::vector<double> flow_mm3s;
    std::vector<double> shift_m;   // lateral head offset along the left normal
};

struct PrintPlan {
    PlanMode mode = PlanMode::ClosedLayered;
    int n_layers = 0;
    double layer_height_m = 0.0;
    double wall_thickness_m = 0.0;
    double resample_step_m = 0.0;
    double dt_s = 0.1;
    double foot_tilt_deg = 0.0;    // nonzero only for spiral plans
    ArcLengthPath path;
    PiecewiseLinear top_height_m{0.0};
    std::vector<LayerPlan> layers;
    double total_time_s = 0.0;
    double total_volume_mm3 = 0.0;
    std::uint64_t digest = 0;      // over everything above
};

struct PlannerOptions {
    // Lateral pre-compensation of the wheelbase chord deviation. On by
    // default; disabled only to quantify the uncorrected error.
    bool deviation_correction = true;
};

struct FootprintReport {
    std::vector<Issue> errors;
    std::vector<Issue> warnings;
    bool ok() const { return errors.empty(); }
};

// Lateral offset that places the nozzle back on the centerline when the
// device hangs from a chord of the curved wall: -sign(curvature) times the
// chord sagitta of the wheelbase. Zero on straight walls.
double deviation_correction(double curvature, double wheelbase_m);

// Cumulative lateral shift of layer `layer_index` relative to the footprint
// centerline: the sum over layers 1..k of layer_height * tan(inclination).
// Layer 0 is anchored at zero. Throws InclinationTooSteep at |deg| >= 90.
double inclination_shift(const InclinationProfile& inclination, int layer_index,
                         double layer_height_m, double s_m);

// Static printability checks of footprint against device: wall height covers
// the device foot everywhere (FootprintTooShort), thickness clampable
// (FootprintUnclampable). Warns when wall thickness and target bead width
// disagree by more than 25%.
FootprintReport footprint_check(const Design& design);

// Compiles a design into an executable plan: resamples the footprint, picks
// layer speed and flow from the process window, lays out layers with lateral
// shifts, and prices total time and volume. Throws (see planner error codes)
// instead of emitting an infeasible plan.
PrintPlan compile(const Design& design, const PlannerOptions& options = {});

}  // namespace climbprint
