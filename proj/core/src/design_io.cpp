#include "climbprint/design_io.hpp"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

namespace climbprint {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

struct Collector {
    std::vector<Issue>& issues;
    void add(std::string path, std::string code, std::string message) {
        issues.push_back({std::move(path), std::move(code), std::move(message)});
    }
};

std::string brief(const json& j) {
    std::string s = j.dump();
    if (s.size() > 48) s = s.substr(0, 45) + "...";
    return s;
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> known, Collector& c) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool found = false;
        for (const char* k : known) {
            if (it.key() == k) {
                found = true;
                break;
            }
        }
        if (!found) {
            c.add(path + "." + it.key(), "parse/unknown_field", "unknown field");
        }
    }
}

const json* obj_at(const json& parent, const std::string& base, const char* key,
                   bool required, Collector& c) {
    auto it = parent.find(key);
    if (it == parent.end()) {
        if (required) c.add(base + "." + key, "parse/missing_field", "required field is missing");
        return nullptr;
    }
    if (!it->is_object()) {
        c.add(base + "." + key, "parse/wrong_type",
              std::string("expected an object, got ") + it->type_name());
        return nullptr;
    }
    return &*it;
}

const json* arr_at(const json& parent, const std::string& base, const char* key,
                   bool required, Collector& c) {
    auto it = parent.find(key);
    if (it == parent.end()) {
        if (required) c.add(base + "." + key, "parse/missing_field", "required field is missing");
        return nullptr;
    }
    if (!it->is_array()) {
        c.add(base + "." + key, "parse/wrong_type",
              std::string("expected an array, got ") + it->type_name());
        return nullptr;
    }
    return &*it;
}

std::optional<double> num_at(const json& parent, const std::string& base, const char* key,
                             bool required, Collector& c) {
    auto it = parent.find(key);
    if (it == parent.end()) {
        if (required) c.add(base + "." + key, "parse/missing_field", "required field is missing");
        return std::nullopt;
    }
    if (!it->is_number()) {
        c.add(base + "." + key, "parse/wrong_type",
              std::string("expected a number, got ") + it->type_name());
        return std::nullopt;
    }
    return it->get<double>();
}

std::optional<bool> bool_at(const json& parent, const std::string& base, const char* key,
                            bool required, Collector& c) {
    auto it = parent.find(key);
    if (it == parent.end()) {
        if (required) c.add(base + "." + key, "parse/missing_field", "required field is missing");
        return std::nullopt;
    }
    if (!it->is_boolean()) {
        c.add(base + "." + key, "parse/wrong_type",
              std::string("expected a boolean, got ") + it->type_name());
        return std::nullopt;
    }
    return it->get<bool>();
}

std::optional<double> positive_at(const json& parent, const std::string& base,
                                  const char* key, bool required, Collector& c) {
    auto v = num_at(parent, base, key, required, c);
    if (v && !(*v > 0.0)) {
        std::ostringstream os;
        os << "must be positive, got " << *v;
        c.add(base + "." + key, "validation/not_positive", os.str());
        return std::nullopt;
    }
    return v;
}

// [min, max] with 0 < min <= max.
std::optional<std::pair<double, double>> range_at(const json& parent,
                                                  const std::string& base,
                                                  const char* key, Collector& c) {
    const json* arr = arr_at(parent, base, key, true, c);
    if (!arr) return std::nullopt;
    std::string path = base + "." + key;
    if (arr->size() != 2 || !(*arr)[0].is_number() || !(*arr)[1].is_number()) {
        c.add(path, "parse/wrong_type", "expected [min, max] numbers, got " + brief(*arr));
        return std::nullopt;
    }
    double lo = (*arr)[0].get<double>();
    double hi = (*arr)[1].get<double>();
    if (!(lo > 0.0) || !(hi >= lo)) {
        std::ostringstream os;
        os << "range must satisfy 0 < min <= max, got [" << lo << ", " << hi << "]";
        c.add(path, "validation/bad_range", os.str());
        return std::nullopt;
    }
    return std::make_pair(lo, hi);
}

}  // namespace

ParseOutcome parse_design(const std::string& json_text) {
    ParseOutcome out;
    Collector c{out.issues};

    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        c.add("$", "ParseError", e.what());
        return out;
    }
    if (!root.is_object()) {
        c.add("$", "parse/wrong_type", "design document must be a JSON object");
        return out;
    }
    check_keys(root, "$", {"schema_version", "design", "overrides"}, c);

    auto schema = num_at(root, "$", "schema_version", true, c);
    if (schema && *schema != 1.0) {
        std::ostringstream os;
        os << "unsupported schema version " << *schema << ", expected 1";
        c.add("$.schema_version", "validation/unsupported_version", os.str());
    }

    Design design;
    std::optional<PlanMode> mode;
    std::optional<int> n_layers;
    std::optional<double> layer_h, bead_w;
    std::optional<std::pair<double, double>> bead_range;
    bool top_constant = true;

    const json* d = obj_at(root, "$", "design", true, c);
    if (d) {
        const std::string dp = "$.design";
        check_keys(*d,
                   dp,
                   {"mode", "n_layers", "target_height_m", "layer_height_m",
                    "target_bead_width_m", "inclination_deg", "footprint", "material",
                    "device"},
                   c);

        if (auto it = d->find("mode"); it == d->end()) {
            c.add(dp + ".mode", "parse/missing_field", "required field is missing");
        } else if (!it->is_string()) {
            c.add(dp + ".mode", "parse/wrong_type",
                  std::string("expected a string, got ") + it->type_name());
        } else {
            try {
                mode = plan_mode_from_name(it->get<std::string>());
                design.mode = *mode;
            } catch (const Error&) {
                c.add(dp + ".mode", "validation/unknown_mode",
                      "unknown mode " + brief(*it) +
                          "; expected closed_layered, spiral or open_boustrophedon");
            }
        }

        layer_h = positive_at(*d, dp, "layer_height_m", true, c);
        if (layer_h) design.layer_height_m = *layer_h;
        bead_w = positive_at(*d, dp, "target_bead_width_m", true, c);
        if (bead_w) design.target_bead_width_m = *bead_w;

        bool has_n = d->contains("n_layers");
        bool has_th = d->contains("target_height_m");
        if (has_n && has_th) {
            c.add(dp, "validation/conflicting_fields",
                  "give exactly one of n_layers and target_height_m");
        } else if (!has_n && !has_th) {
            c.add(dp, "parse/missing_field",
                  "one of n_layers or target_height_m is required");
        } else if (has_n) {
            const json& jn = (*d)["n_layers"];
            if (!jn.is_number_integer()) {
                c.add(dp + ".n_layers", "parse/wrong_type",
                      "expected an integer, got " + brief(jn));
            } else if (jn.get<long long>() < 1) {
                c.add(dp + ".n_layers", "validation/out_of_range",
                      "must be >= 1, got " + brief(jn));
            } else {
                n_layers = static_cast<int>(jn.get<long long>());
            }
        } else {
            auto th = positive_at(*d, dp, "target_height_m", true, c);
            if (th && layer_h) {
                auto n = static_cast<long long>(std::llround(*th / *layer_h));
                if (n < 1) {
                    std::ostringstream os;
                    os << "target height " << *th << " m rounds below one layer of "
                       << *layer_h << " m";
                    c.add(dp + ".target_height_m", "validation/out_of_range", os.str());
                } else {
                    n_layers = static_cast<int>(n);
                }
            }
        }
        if (n_layers) design.n_layers = *n_layers;

        if (auto it = d->find("inclination_deg"); it != d->end()) {
            auto check_deg = [&](double deg, const std::string& path) {
                if (!(std::abs(deg) < 90.0)) {
                    std::ostringstream os;
                    os << "inclination must lie in (-90, 90) deg, got " << deg;
                    c.add(path, "validation/out_of_range", os.str());
                    return false;
                }
                return true;
            };
            if (it->is_number()) {
                double deg = it->get<double>();
                if (check_deg(deg, dp + ".inclination_deg")) {
                    design.inclination = InclinationProfile::constant(deg);
                }
            } else if (it->is_array()) {
                std::vector<double> rows;
                bool ok = true;
                for (std::size_t i = 0; i < it->size(); ++i) {
                    std::ostringstream ip;
                    ip << dp << ".inclination_deg[" << i << "]";
                    if (!(*it)[i].is_number()) {
                        c.add(ip.str(), "parse/wrong_type",
                              "expected a number, got " + brief((*it)[i]));
                        ok = false;
                        continue;
                    }
                    double deg = (*it)[i].get<double>();
                    ok = check_deg(deg, ip.str()) && ok;
                    rows.push_back(deg);
                }
                if (n_layers && it->size() != static_cast<std::size_t>(*n_layers)) {
                    std::ostringstream os;
                    os << "per-layer inclination needs one entry per layer (" << *n_layers
                       << "), got " << it->size();
                    c.add(dp + ".inclination_deg", "validation/wrong_length", os.str());
                    ok = false;
                }
                if (ok) design.inclination = InclinationProfile::per_layer(std::move(rows));
            } else {
                c.add(dp + ".inclination_deg", "parse/wrong_type",
                      std::string("expected a number or array, got ") + it->type_name());
            }
        }

        if (const json* fp = obj_at(*d, dp, "footprint", true, c)) {
            const std::string fpp = dp + ".footprint";
            check_keys(*fp, fpp, {"points_m", "closed", "thickness_m", "top_height_m"}, c);
            if (const json* pts = arr_at(*fp, fpp, "points_m", true, c)) {
                if (pts->size() < 2) {
                    std::ostringstream os;
                    os << "need at least 2 points, got " << pts->size();
                    c.add(fpp + ".points_m", "validation/too_few_points", os.str());
                }
                for (std::size_t i = 0; i < pts->size(); ++i) {
                    const json& p = (*pts)[i];
                    if (!p.is_array() || p.size() != 2 || !p[0].is_number() ||
                        !p[1].is_number()) {
                        std::ostringstream ip;
                        ip << fpp << ".points_m[" << i << "]";
                        c.add(ip.str(), "parse/wrong_type",
                              "expected [x, y] numbers, got " + brief(p));
                        continue;
                    }
                    design.footprint.points.push_back(
                        {p[0].get<double>(), p[1].get<double>()});
                }
            }
            if (auto closed = bool_at(*fp, fpp, "closed", true, c)) {
                design.footprint.closed = *closed;
            }
            if (auto th = positive_at(*fp, fpp, "thickness_m", true, c)) {
                design.footprint.thickness_m = *th;
            }
            if (auto it = fp->find("top_height_m"); it == fp->end()) {
                c.add(fpp + ".top_height_m", "parse/missing_field",
                      "required field is missing");
            } else if (it->is_number()) {
                double v = it->get<double>();
                if (v < 0.0) {
                    c.add(fpp + ".top_height_m", "validation/out_of_range",
                          "must be >= 0, got " + brief(*it));
                } else {
                    design.footprint.top_height_m = PiecewiseLinear(v);
                }
            } else if (it->is_array()) {
                std::vector<std::pair<double, double>> knots;
                bool ok = true;
                for (std::size_t i = 0; i < it->size(); ++i) {
                    const json& k = (*it)[i];
                    std::ostringstream ip;
                    ip << fpp << ".top_height_m[" << i << "]";
                    if (!k.is_array() || k.size() != 2 || !k[0].is_number() ||
                        !k[1].is_number()) {
                        c.add(ip.str(), "parse/wrong_type",
                              "expected [s, height] numbers, got " + brief(k));
                        ok = false;
                        continue;
                    }
                    double s = k[0].get<double>();
                    double z = k[1].get<double>();
                    if (z < 0.0) {
                        c.add(ip.str(), "validation/out_of_range",
                              "height must be >= 0, got " + brief(k[1]));
                        ok = false;
                    }
                    if (!knots.empty() && !(s > knots.back().first)) {
                        c.add(ip.str(), "validation/not_increasing",
                              "knot arclengths must be strictly increasing");
                        ok = false;
                    }
                    knots.push_back({s, z});
                }
                if (knots.empty()) {
                    c.add(fpp + ".top_height_m", "validation/too_few_points",
                          "needs at least one [s, height] knot");
                    ok = false;
                }
                if (ok) {
                    design.footprint.top_height_m = PiecewiseLinear(std::move(knots));
                    top_constant = design.footprint.top_height_m.min_value() ==
                                   design.footprint.top_height_m.max_value();
                }
            } else {
                c.add(fpp + ".top_height_m", "parse/wrong_type",
                      std::string("expected a number or knot array, got ") +
                          it->type_name());
            }
        }

        if (const json* mat = obj_at(*d, dp, "material", true, c)) {
            const std::string mp = dp + ".material";
            check_keys(*mat, mp,
                       {"extrusion_range_mm3_per_s", "cure_time_s", "bead_width_range_m"},
                       c);
            if (auto r = range_at(*mat, mp, "extrusion_range_mm3_per_s", c)) {
                design.material.extrusion_min_mm3s = r->first;
                design.material.extrusion_max_mm3s = r->second;
            }
            if (auto v = positive_at(*mat, mp, "cure_time_s", true, c)) {
                design.material.cure_time_s = *v;
            }
            if (auto r = range_at(*mat, mp, "bead_width_range_m", c)) {
                design.material.bead_width_min_m = r->first;
                design.material.bead_width_max_m = r->second;
                bead_range = r;
            }
        }

        if (const json* dev = obj_at(*d, dp, "device", true, c)) {
            const std::string vp = dp + ".device";
            check_keys(*dev, vp,
                       {"wheelbase_m", "clamp_range_m", "head_side_travel_m",
                        "head_fb_travel_m", "foot_height_m", "wheel_radius_m",
                        "max_wheel_speed_m_per_s"},
                       c);
            if (auto v = positive_at(*dev, vp, "wheelbase_m", true, c)) {
                design.device.wheelbase_m = *v;
            }
            if (auto r = range_at(*dev, vp, "clamp_range_m", c)) {
                design.device.clamp_min_m = r->first;
                design.device.clamp_max_m = r->second;
            }
            if (auto v = positive_at(*dev, vp, "head_side_travel_m", true, c)) {
                design.device.head_side_travel_m = *v;
            }
            if (auto v = positive_at(*dev, vp, "head_fb_travel_m", true, c)) {
                design.device.head_fb_travel_m = *v;
            }
            if (auto v = positive_at(*dev, vp, "foot_height_m", true, c)) {
                design.device.foot_height_m = *v;
            }
            if (auto v = positive_at(*dev, vp, "wheel_radius_m", true, c)) {
                design.device.wheel_radius_m = *v;
            }
            if (auto v = positive_at(*dev, vp, "max_wheel_speed_m_per_s", true, c)) {
                design.device.max_wheel_speed_mps = *v;
            }
        }
    }

    if (auto it = root.find("overrides"); it != root.end()) {
        if (const json* ov = obj_at(root, "$", "overrides", false, c)) {
            check_keys(*ov, "$.overrides", {"resample_step_m", "dt_s"}, c);
            if (ov->contains("resample_step_m")) {
                if (auto v = positive_at(*ov, "$.overrides", "resample_step_m", false, c)) {
                    design.resample_step_m = *v;
                }
            }
            if (ov->contains("dt_s")) {
                if (auto v = positive_at(*ov, "$.overrides", "dt_s", false, c)) {
                    design.dt_s = *v;
                }
            }
        }
    }

    // Cross-field checks, only between values that parsed cleanly.
    if (bead_w && bead_range &&
        (*bead_w < bead_range->first || *bead_w > bead_range->second)) {
        std::ostringstream os;
        os << "target bead width " << *bead_w << " m is outside the printable range ["
           << bead_range->first << ", " << bead_range->second << "] m";
        c.add("$.design.target_bead_width_m", "validation/out_of_range", os.str());
    }
    if (mode && d && d->contains("footprint")) {
        bool closed = design.footprint.closed;
        if (*mode == PlanMode::OpenBoustrophedon && closed) {
            c.add("$.design.footprint.closed", "validation/mode_conflict",
                  "open_boustrophedon requires an open footprint");
        }
        if (*mode == PlanMode::ClosedLayered && !closed) {
            c.add("$.design.footprint.closed", "validation/mode_conflict",
                  "closed_layered requires a closed footprint");
        }
        if (*mode == PlanMode::Spiral && !closed) {
            c.add("$.design.footprint.closed", "validation/mode_conflict",
                  "spiral printing requires a closed footprint");
        }
        if (*mode == PlanMode::Spiral && !top_constant) {
            c.add("$.design.footprint.top_height_m", "validation/mode_conflict",
                  "spiral printing requires a constant footprint top height");
        }
    }

    if (out.issues.empty()) out.design = std::move(design);
    return out;
}

std::string design_json(const Design& design) {
    ordered_json root;
    root["schema_version"] = 1;
    ordered_json d;
    d["mode"] = std::string(plan_mode_name(design.mode));
    d["n_layers"] = design.n_layers;
    d["layer_height_m"] = design.layer_height_m;
    d["target_bead_width_m"] = design.target_bead_width_m;
    if (design.inclination.rows() == 1) {
        d["inclination_deg"] = design.inclination.deg(0, 0.0);
    } else if (design.inclination.rows() > 1) {
        ordered_json rows = ordered_json::array();
        for (int k = 0; k < design.inclination.rows(); ++k) {
            rows.push_back(design.inclination.deg(k, 0.0));
        }
        d["inclination_deg"] = std::move(rows);
    }

    ordered_json fp;
    ordered_json pts = ordered_json::array();
    for (Vec2 p : design.footprint.points) {
        pts.push_back(ordered_json::array({p.x, p.y}));
    }
    fp["points_m"] = std::move(pts);
    fp["closed"] = design.footprint.closed;
    fp["thickness_m"] = design.footprint.thickness_m;
    const PiecewiseLinear& top = design.footprint.top_height_m;
    if (top.is_constant()) {
        fp["top_height_m"] = top.knots().front().second;
    } else {
        ordered_json knots = ordered_json::array();
        for (auto [s, z] : top.knots()) knots.push_back(ordered_json::array({s, z}));
        fp["top_height_m"] = std::move(knots);
    }
    d["footprint"] = std::move(fp);

    ordered_json mat;
    mat["extrusion_range_mm3_per_s"] = ordered_json::array(
        {design.material.extrusion_min_mm3s, design.material.extrusion_max_mm3s});
    mat["cure_time_s"] = design.material.cure_time_s;
    mat["bead_width_range_m"] = ordered_json::array(
        {design.material.bead_width_min_m, design.material.bead_width_max_m});
    d["material"] = std::move(mat);

    ordered_json dev;
    dev["wheelbase_m"] = design.device.wheelbase_m;
    dev["clamp_range_m"] =
        ordered_json::array({design.device.clamp_min_m, design.device.clamp_max_m});
    dev["head_side_travel_m"] = design.device.head_side_travel_m;
    dev["head_fb_travel_m"] = design.device.head_fb_travel_m;
    dev["foot_height_m"] = design.device.foot_height_m;
    dev["wheel_radius_m"] = design.device.wheel_radius_m;
    dev["max_wheel_speed_m_per_s"] = design.device.max_wheel_speed_mps;
    d["device"] = std::move(dev);

    root["design"] = std::move(d);
    if (design.resample_step_m > 0.0 || design.dt_s != 0.1) {
        ordered_json ov;
        if (design.resample_step_m > 0.0) ov["resample_step_m"] = design.resample_step_m;
        if (design.dt_s != 0.1) ov["dt_s"] = design.dt_s;
        root["overrides"] = std::move(ov);
    }
    return root.dump(2) + "\n";
}

}  // namespace climbprint
