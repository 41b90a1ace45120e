#pragma once

#include <string>

#include "climbprint/trace.hpp"

namespace climbprint {

// Fixed CSV column set for control traces. Numbers are written with 9
// decimals, matching the 1e-9 quantization of ControlRecord, so a
// write/parse round trip reproduces every field bit-identically.
inline constexpr std::string_view kTraceCsvHeader =
    "t_s,mode,w_fl,w_fr,w_rl,w_rr,foot_deg,clamp_m,head_u_m,head_v_m,"
    "q_mm3s,extruding";

std::string trace_csv(const ControlTrace& trace);

// Parses a trace written by trace_csv. Throws ParseError (with a line
// number) on any malformed row. The plan digest is not part of the CSV;
// the returned trace carries digest 0 and consumers that need the binding
// recompute it from the plan they pair the trace with.
ControlTrace parse_trace_csv(const std::string& text);

}  // namespace climbprint
