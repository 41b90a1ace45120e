#pragma once

#include <cstddef>
#include <vector>

#include "climbprint/controller.hpp"
#include "climbprint/deposition.hpp"
#include "climbprint/planner.hpp"

namespace climbprint {

// Everything the replay deposited, referenced to the footprint path.
struct PrintedStructure {
    ArcLengthPath path;
    double layer_height_m = 0.0;
    int n_layers = 0;
    std::vector<BeadSegment> beads;
    double final_height_m = 0.0;  // printed height above the starter wall top
};

struct CoverageGap {
    int layer = 0;
    double s_begin_m = 0.0;
    double s_end_m = 0.0;
};

struct CureViolation {
    int layer = 0;      // upper layer of the offending pair
    double s_m = 0.0;
    double gap_s = 0.0;  // actual revisit time, below the cure time
};

struct CollisionEvent {
    double t_s = 0.0;
    double s_m = 0.0;
    double clearance_m = 0.0;  // negative: foot below the structure base
};

struct SimReport {
    double duration_s = 0.0;
    std::size_t record_count = 0;
    double final_height_m = 0.0;
    double deposited_mm3 = 0.0;      // from the flow integral
    double bead_volume_mm3 = 0.0;    // from swept bead geometry
    double volume_balance_rel = 0.0;
    double max_nozzle_path_error_m = 0.0;  // lateral, against the intended line
    // [0]: first layer against wall top + layer height; [k]: layer k against
    // layer k-1. Spiral plans measure per-revolution rise instead.
    std::vector<double> layer_height_error_m;
    std::vector<CoverageGap> coverage_gaps;
    std::vector<CureViolation> cure_violations;
    std::vector<CollisionEvent> collisions;
};

struct SimResult {
    PrintedStructure structure;
    SimReport report;
};

// Replays a trace against its design: recompiles the plan (the digest must
// match, else TraceDesignMismatch), folds every record through step(), and
// sweeps the extruded bead with the wheel contacts placed a wheelbase chord
// apart on the path, which is where the uncorrected curvature deviation
// comes from. Throws on structurally invalid traces; physical findings
// (gaps, cure violations, collisions) are reported, not thrown.
SimResult simulate(const ControlTrace& trace, const Design& design,
                   const PlannerOptions& options = {});

// Interface inclination measured from the deposited beads, per consecutive
// layer pair per path cell (NaN where a cell lacks bead material on either
// layer). Throws TooFewLayers with fewer than two printed layers.
struct MeasuredInclination {
    std::vector<double> s_m;                    // cell centers
    std::vector<std::vector<double>> pair_deg;  // [k] = layer k -> k+1
};
MeasuredInclination measure_inclination(const PrintedStructure& structure);

}  // namespace climbprint
