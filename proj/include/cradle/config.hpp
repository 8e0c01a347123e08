#pragma once
// Experiment configs: strict JSON schema, unknown keys rejected by name.
// Physics (geometry, law, defect, sweep plan) lives in the file; run
// mechanics (grids, seeds, output paths) stay on the command line.

#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cradle/chain.hpp"
#include "cradle/coupling_law.hpp"
#include "cradle/sweeps.hpp"

namespace cradle {

struct SweepPlan {
    std::string parameter;  // weak_pitch | strong_pitch | nnn_m | defect_distance
    std::vector<double> values;
};

struct ExperimentConfig {
    ChainSpec chain;
    CouplingLaw law = default_coupling_law();
    DefectSpec defect;  // carries the nnn block; island fields used when enabled
    bool defect_enabled = false;
    std::optional<SweepPlan> sweep;
    std::optional<std::pair<double, double>> search_window_mm;
};

namespace config_detail {

using nlohmann::json;

inline void require_known_keys(const json& obj, const char* where,
                               std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed)
            if (it.key() == key) {
                known = true;
                break;
            }
        if (!known)
            throw std::runtime_error("unknown key '" + it.key() + "' in " + where);
    }
}

inline const json& member(const json& obj, const char* key, const char* where) {
    auto it = obj.find(key);
    if (it == obj.end())
        throw std::runtime_error(std::string(where) + " missing required key '" + key +
                                 "'");
    return *it;
}

inline double number(const json& obj, const char* key, const char* where) {
    const json& v = member(obj, key, where);
    if (!v.is_number())
        throw std::runtime_error("key '" + std::string(key) + "' in " + where +
                                 " must be a number");
    return v.get<double>();
}

}  // namespace config_detail

inline ExperimentConfig parse_config(const config_detail::json& root) {
    using config_detail::json;
    using config_detail::member;
    using config_detail::number;
    using config_detail::require_known_keys;

    if (!root.is_object()) throw std::runtime_error("config root must be a JSON object");
    require_known_keys(root, "config",
                       {"n_sites", "strong_pitch_um", "strong_coupling_per_mm",
                        "weak_pitch_um", "weak_coupling_per_mm", "coupling_law", "nnn",
                        "defect", "sweep", "search_window_mm"});

    ExperimentConfig cfg;

    if (root.contains("coupling_law")) {
        const json& law = root.at("coupling_law");
        require_known_keys(law, "'coupling_law'", {"amplitude_per_mm", "decay_per_um"});
        cfg.law = CouplingLaw(number(law, "amplitude_per_mm", "'coupling_law'"),
                              number(law, "decay_per_um", "'coupling_law'"));
    }

    const json& n_sites_v = member(root, "n_sites", "config");
    if (!n_sites_v.is_number_integer())
        throw std::runtime_error("key 'n_sites' must be an integer");
    const int n_sites = n_sites_v.get<int>();

    // Per bond, pitch and coupling may both appear; the coupling wins and the
    // disagreement with the pitch law is recorded, not silently dropped.
    std::string conflict;
    const bool has_sp = root.contains("strong_pitch_um");
    const bool has_sc = root.contains("strong_coupling_per_mm");
    const bool has_wp = root.contains("weak_pitch_um");
    const bool has_wc = root.contains("weak_coupling_per_mm");
    if (!has_sp && !has_sc)
        throw std::runtime_error(
            "config needs 'strong_pitch_um' or 'strong_coupling_per_mm'");
    if (!has_wp && !has_wc)
        throw std::runtime_error("config needs 'weak_pitch_um' or 'weak_coupling_per_mm'");
    const auto resolve = [&](bool has_pitch, bool has_coupling, const char* pitch_key,
                             const char* coupling_key, const char* bond,
                             std::optional<double>& pitch_out) {
        double coupling = 0.0;
        if (has_pitch) {
            const double pitch = number(root, pitch_key, "config");
            pitch_out = pitch;
            coupling = coupling_from_pitch(pitch, cfg.law);
        }
        if (has_coupling) {
            const double given = number(root, coupling_key, "config");
            if (has_pitch && given != coupling) {
                char note[160];
                std::snprintf(note, sizeof note,
                              "%s coupling %.6g/mm overrides pitch %.6g um (law gives "
                              "%.6g/mm); ",
                              bond, given, *pitch_out, coupling);
                conflict += note;
            }
            coupling = given;
        }
        return coupling;
    };
    std::optional<double> strong_pitch, weak_pitch;
    const double strong = resolve(has_sp, has_sc, "strong_pitch_um",
                                  "strong_coupling_per_mm", "strong", strong_pitch);
    const double weak = resolve(has_wp, has_wc, "weak_pitch_um", "weak_coupling_per_mm",
                                "weak", weak_pitch);
    cfg.chain = ChainSpec::from_couplings(n_sites, strong, weak);
    cfg.chain.strong_pitch_um = strong_pitch;
    cfg.chain.weak_pitch_um = weak_pitch;
    cfg.chain.conflict_note = conflict;

    if (root.contains("nnn")) {
        const json& nnn = root.at("nnn");
        require_known_keys(nnn, "'nnn'", {"mode", "m"});
        const json& mode = member(nnn, "mode", "'nnn'");
        if (!mode.is_string()) throw std::runtime_error("key 'mode' in 'nnn' must be a string");
        cfg.defect.nnn_mode = nnn_mode_from_string(mode.get<std::string>());
        if (nnn.contains("m")) cfg.defect.nnn_attenuation = number(nnn, "m", "'nnn'");
    }

    if (root.contains("defect")) {
        const json& defect = root.at("defect");
        require_known_keys(defect, "'defect'", {"enabled", "attach_site", "distance_um"});
        cfg.defect_enabled = true;
        if (defect.contains("enabled")) {
            const json& enabled = defect.at("enabled");
            if (!enabled.is_boolean())
                throw std::runtime_error("key 'enabled' in 'defect' must be a boolean");
            cfg.defect_enabled = enabled.get<bool>();
        }
        if (defect.contains("attach_site")) {
            const json& site = defect.at("attach_site");
            if (!site.is_number_integer())
                throw std::runtime_error("key 'attach_site' in 'defect' must be an integer");
            cfg.defect.attach_site = site.get<int>();
        }
        if (cfg.defect_enabled) {
            cfg.defect.distance_um = number(defect, "distance_um", "'defect'");
            if (cfg.defect.distance_um <= 0.0)
                throw std::runtime_error("key 'distance_um' in 'defect' must be positive");
        } else if (defect.contains("distance_um")) {
            cfg.defect.distance_um = number(defect, "distance_um", "'defect'");
        }
    }
    cfg.defect.validate(n_sites);

    if (root.contains("sweep")) {
        const json& sweep = root.at("sweep");
        require_known_keys(sweep, "'sweep'", {"parameter", "values"});
        SweepPlan plan;
        const json& parameter = member(sweep, "parameter", "'sweep'");
        if (!parameter.is_string())
            throw std::runtime_error("key 'parameter' in 'sweep' must be a string");
        plan.parameter = parameter.get<std::string>();
        if (plan.parameter != "weak_pitch" && plan.parameter != "strong_pitch" &&
            plan.parameter != "nnn_m" && plan.parameter != "defect_distance")
            throw std::runtime_error(
                "sweep parameter must be one of weak_pitch, strong_pitch, nnn_m, "
                "defect_distance; got '" +
                plan.parameter + "'");
        const json& values = member(sweep, "values", "'sweep'");
        if (!values.is_array())
            throw std::runtime_error("key 'values' in 'sweep' must be an array");
        for (const json& v : values) {
            if (!v.is_number())
                throw std::runtime_error("sweep values must all be numbers");
            plan.values.push_back(v.get<double>());
        }
        detail::require_strictly_monotone(plan.values, "sweep value");
        cfg.sweep = std::move(plan);
    }

    if (root.contains("search_window_mm")) {
        const json& window = root.at("search_window_mm");
        if (!window.is_array() || window.size() != 2 || !window[0].is_number() ||
            !window[1].is_number())
            throw std::runtime_error("'search_window_mm' must be an array [lo, hi]");
        const double lo = window[0].get<double>();
        const double hi = window[1].get<double>();
        if (!(lo > 0.0) || !(hi > lo))
            throw std::runtime_error("'search_window_mm' must satisfy 0 < lo < hi");
        cfg.search_window_mm = {lo, hi};
    }

    return cfg;
}

inline ExperimentConfig parse_config_text(const std::string& text) {
    config_detail::json root;
    try {
        root = config_detail::json::parse(text);
    } catch (const config_detail::json::parse_error& e) {
        throw std::runtime_error(std::string("config parse error: ") + e.what());
    }
    return parse_config(root);
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config_text(buf.str());
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

}  // namespace cradle
