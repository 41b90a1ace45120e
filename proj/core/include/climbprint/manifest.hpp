#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace climbprint {

struct FileRecord {
    std::string name;        // path relative to the run directory
    std::uint64_t bytes = 0;
    std::uint64_t digest = 0;  // fnv1a64 of the file content
};

// Provenance record written next to every run's outputs. Two runs of the
// same tool version on the same input and parameters must produce manifests
// identical except for runtime_s, which is informational only.
struct RunManifest {
    std::string tool_name;
    std::string tool_version;
    std::string input_path;
    std::uint64_t input_digest = 0;
    double resample_step_m = 0.0;
    double dt_s = 0.0;
    std::uint64_t params_digest = 0;
    std::uint64_t plan_digest = 0;
    std::vector<FileRecord> outputs;
    double runtime_s = 0.0;
};

// Digest of the effective numeric parameters, stable across platforms that
// share IEEE doubles (hashes the shortest round-trip decimal forms).
std::uint64_t params_digest(double resample_step_m, double dt_s);

std::string manifest_json(const RunManifest& manifest);

}  // namespace climbprint
