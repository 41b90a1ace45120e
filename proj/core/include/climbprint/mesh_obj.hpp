#pragma once

#include <string>

#include "climbprint/simulator.hpp"

namespace climbprint {

// Wavefront OBJ mesh of the deposited structure: every bead becomes a
// rectangular tube (4 vertices per centerline sample, quad sides, end caps),
// triangulated with a consistent winding so the enclosed volume integrates
// cleanly. Coordinates in meters, z up. Throws EmptyStructure when nothing
// was deposited.
std::string export_obj(const PrintedStructure& structure);

}  // namespace climbprint
