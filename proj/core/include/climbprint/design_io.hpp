#pragma once

#include <optional>
#include <string>

#include "climbprint/planner.hpp"

namespace climbprint {

// Result of parsing a design document. Either a fully validated design, or
// the complete list of problems (unknown fields, wrong types, out-of-range
// values, cross-field conflicts), each with its field path.
struct ParseOutcome {
    std::optional<Design> design;
    std::vector<Issue> issues;
    bool ok() const { return design.has_value(); }
};

ParseOutcome parse_design(const std::string& json_text);

// Serializes a design back to the document format (used by tests and for
// generating example inputs; the output parses to an equivalent design).
std::string design_json(const Design& design);

}  // namespace climbprint
