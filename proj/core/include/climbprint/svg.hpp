#pragma once

#include <string>

#include "climbprint/simulator.hpp"

namespace climbprint {

// Plan-view SVG of one layer: each bead centerline as a polyline stroked at
// the bead width. Millimeter units, y flipped so +y in the plan points up on
// the page. Output is deterministic (fixed decimals, no timestamps).
std::string layer_svg(const PrintedStructure& structure, int layer);

}  // namespace climbprint
