#include "climbprint/manifest.hpp"

#include <cstdio>

#include <nlohmann/json.hpp>

#include "climbprint/digest.hpp"

namespace climbprint {

std::uint64_t params_digest(double resample_step_m, double dt_s) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "step=%.17g;dt=%.17g", resample_step_m, dt_s);
    Fnv1a64 h;
    h.update_string(buf);
    return h.value();
}

std::string manifest_json(const RunManifest& manifest) {
    using ordered_json = nlohmann::ordered_json;
    ordered_json root;
    root["schema_version"] = 1;
    root["tool"] = {{"name", manifest.tool_name}, {"version", manifest.tool_version}};
    root["input"] = {{"path", manifest.input_path},
                     {"fnv1a64", hex64(manifest.input_digest)}};
    root["params"] = {{"resample_step_m", manifest.resample_step_m},
                      {"dt_s", manifest.dt_s},
                      {"fnv1a64", hex64(manifest.params_digest)}};
    root["plan"] = {{"digest", hex64(manifest.plan_digest)}};
    ordered_json outputs = ordered_json::array();
    for (const FileRecord& f : manifest.outputs) {
        outputs.push_back({{"name", f.name},
                           {"bytes", f.bytes},
                           {"fnv1a64", hex64(f.digest)}});
    }
    root["outputs"] = std::move(outputs);
    root["runtime_s"] = manifest.runtime_s;
    return root.dump(2) + "\n";
}

}  // namespace climbprint
