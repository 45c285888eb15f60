#include "qmm/cli/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qmm/errors.hpp"

namespace qmm::cli {

using nlohmann::json;

ArraySpec RunConfig::spec() const {
    return reduced_spec(n_cavities, j_over_g, omega_q_detuning_over_g);
}

Ports RunConfig::ports() const {
    return ports_from_kappas(kappa_l_over_g, kappa_r_over_g);
}

namespace {

double as_number(const json& v, const std::string& key) {
    if (!v.is_number())
        throw ValidationError("config key '" + key + "' must be a number");
    return v.get<double>();
}

int as_int(const json& v, const std::string& key) {
    if (!v.is_number_integer())
        throw ValidationError("config key '" + key + "' must be an integer");
    return v.get<int>();
}

void set_key(RunConfig& cfg, const std::string& key, const json& v) {
    if (key == "N") cfg.n_cavities = as_int(v, key);
    else if (key == "J_over_g") cfg.j_over_g = as_number(v, key);
    else if (key == "kappa_over_g") {
        cfg.kappa_l_over_g = as_number(v, key);
        cfg.kappa_r_over_g = cfg.kappa_l_over_g;
    } else if (key == "kappa_l_over_g") cfg.kappa_l_over_g = as_number(v, key);
    else if (key == "kappa_r_over_g") cfg.kappa_r_over_g = as_number(v, key);
    else if (key == "omega_q_detuning_over_g") cfg.omega_q_detuning_over_g = as_number(v, key);
    else if (key == "grid_min") cfg.grid_min = as_number(v, key);
    else if (key == "grid_max") cfg.grid_max = as_number(v, key);
    else if (key == "grid_points") cfg.grid_points = as_int(v, key);
    else if (key == "j_over_g_list") {
        if (!v.is_array())
            throw ValidationError("config key 'j_over_g_list' must be an array of numbers");
        cfg.j_over_g_list.clear();
        for (const auto& e : v) cfg.j_over_g_list.push_back(as_number(e, key));
    } else if (key == "branch") {
        if (!v.is_string())
            throw ValidationError("config key 'branch' must be a string");
        cfg.branch = v.get<std::string>();
    } else if (key == "unit_MHz") cfg.unit_MHz = as_number(v, key);
    else throw ValidationError("unknown config key '" + key + "'");
}

RunConfig from_json(const json& doc) {
    if (!doc.is_object()) throw ValidationError("config must be a flat JSON object");
    RunConfig cfg;
    for (const auto& [key, value] : doc.items()) set_key(cfg, key, value);
    validate_config(cfg);
    return cfg;
}

} // namespace

RunConfig config_from_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config parse error: ") + e.what());
    }
    return from_json(doc);
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return config_from_text(buf.str());
}

void apply_override(RunConfig& cfg, const std::string& key, const std::string& value) {
    json v;
    if (key == "branch") {
        v = value;
    } else if (key == "j_over_g_list") {
        v = json::array();
        std::istringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                v.push_back(std::stod(item));
            } catch (const std::exception&) {
                throw ValidationError("invalid number '" + item + "' in --j_over_g_list");
            }
        }
    } else {
        try {
            v = json::parse(value);
        } catch (const json::parse_error&) {
            throw ValidationError("invalid value '" + value + "' for key '" + key + "'");
        }
    }
    set_key(cfg, key, v);
}

void validate_config(const RunConfig& cfg) {
    validate_spec(cfg.spec());   // N odd, J >= 0, ...
    validate_ports(cfg.ports()); // kappas >= 0
    if (cfg.grid_points < 2)
        throw ValidationError("config key 'grid_points' must be >= 2");
    if (!(cfg.grid_min < cfg.grid_max))
        throw ValidationError("config keys 'grid_min'/'grid_max' must satisfy grid_min < grid_max");
    if (cfg.branch != "minus" && cfg.branch != "plus")
        throw ValidationError("config key 'branch' must be \"minus\" or \"plus\"");
    if (cfg.unit_MHz < 0.0)
        throw ValidationError("config key 'unit_MHz' must be >= 0");
    for (double j : cfg.j_over_g_list)
        if (!(j >= 0.0))
            throw ValidationError("config key 'j_over_g_list' entries must be >= 0");
}

std::string emit_config(const RunConfig& cfg) {
    json doc;
    doc["N"] = cfg.n_cavities;
    doc["J_over_g"] = cfg.j_over_g;
    doc["kappa_l_over_g"] = cfg.kappa_l_over_g;
    doc["kappa_r_over_g"] = cfg.kappa_r_over_g;
    doc["omega_q_detuning_over_g"] = cfg.omega_q_detuning_over_g;
    doc["grid_min"] = cfg.grid_min;
    doc["grid_max"] = cfg.grid_max;
    doc["grid_points"] = cfg.grid_points;
    doc["j_over_g_list"] = cfg.j_over_g_list;
    doc["branch"] = cfg.branch;
    doc["unit_MHz"] = cfg.unit_MHz;
    return doc.dump(2) + "\n";
}

} // namespace qmm::cli
