#pragma once

#include "climbprint/planner.hpp"
#include "climbprint/trace.hpp"

namespace climbprint {

// Immutable context step() needs besides the state and the record.
struct StepContext {
    const DeviceConfig& device;
    const PiecewiseLinear& top_height_m;
    double path_length_m = 0.0;
    bool closed = false;
};

// Device state at t = 0, before the first record is applied: parked at the
// attach point with the nozzle one layer height above the wall top.
DeviceState initial_state(const PrintPlan& plan, const DeviceConfig& device);

// Advances the state to record.t_s and adopts the record's commands.
//
// Motion over the interval uses the commands already held in `state` (the
// previous record): ds = mean wheel speed * cos(foot) * dt along the wall,
// dz = mean wheel speed * sin(foot) * dt, plus the wall-top change under the
// device. Head offsets are setpoints reached exactly at record.t_s.
//
// The controller uses this same function to project its own emissions, so
// replaying a trace reproduces the controller's states field-exactly.
// Throws NonMonotonicTimestamps on time going backwards and LimitViolation
// on command envelope violations (wheel speed, head travel, foot angle,
// clamp range, extrusion while climbing or reversing, motion past an open
// wall end, any record after Done).
DeviceState step(const DeviceState& state, const ControlRecord& record,
                 const StepContext& ctx);

// Emits the control trace for a compiled plan: one record at t = 0 (idle,
// clamped, head staged), one at every dt tick, and one at every phase
// boundary (print start, climb, reversal, done). Timestamps and values are
// quantized to the trace grid at emission.
ControlTrace execute(const PrintPlan& plan, const DeviceConfig& device, double dt_s);

}  // namespace climbprint
