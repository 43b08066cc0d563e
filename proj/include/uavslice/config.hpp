#pragma once

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "uavslice/params.hpp"
#include "uavslice/scenario.hpp"

namespace uavslice {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Config {
    SystemParams params;
    ScenarioCounts counts{9, 9, 9, 5, 4, 0.75};
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline double parse_number(const std::string& key, const std::string& value) {
    const char* begin = value.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !std::isfinite(v))
        throw ConfigError("config: non-numeric value for '" + key + "': " + value);
    return v;
}

inline int parse_int(const std::string& key, const std::string& value) {
    double v = parse_number(key, value);
    double r = std::round(v);
    if (std::abs(v - r) > 1e-9)
        throw ConfigError("config: integer expected for '" + key + "': " + value);
    return static_cast<int>(r);
}

}  // namespace detail

// one-third per role; remainders go to content first, then sensing
inline void split_user_roles(int n_users, ScenarioCounts& counts) {
    int base = n_users / 3, rem = n_users % 3;
    counts.n_content = base + (rem >= 1 ? 1 : 0);
    counts.n_sensing = base + (rem >= 2 ? 1 : 0);
    counts.n_mec = base;
}

// Flat `key = value` document, '#' comments. Unset keys keep their defaults.
// Short aliases mirror the usual symbol names (beta, rho, z_min, ...).
inline Config load_config(const std::string& text) {
    Config cfg;
    SystemParams& p = cfg.params;
    ScenarioCounts& c = cfg.counts;

    std::map<std::string, double*> dbl = {
        {"pathloss_ref_db", &p.pathloss_ref_db},
        {"lambda0_db", &p.pathloss_ref_db},
        {"pathloss_exp", &p.pathloss_exp},
        {"beta", &p.pathloss_exp},
        {"rician_factor", &p.rician_factor},
        {"noise_power_w", &p.noise_power_w},
        {"sigma2", &p.noise_power_w},
        {"dl_bandwidth_hz", &p.dl_bandwidth_hz},
        {"ul_bandwidth_hz", &p.ul_bandwidth_hz},
        {"uav_max_tx_power_w", &p.uav_max_tx_power_w},
        {"user_tx_power_w", &p.user_tx_power_w},
        {"uav_compute_hz", &p.uav_compute_hz},
        {"switched_capacitance", &p.switched_capacitance},
        {"kappa", &p.switched_capacitance},
        {"task_bits", &p.task_bits},
        {"cycles_per_bit", &p.cycles_per_bit},
        {"raw_data_bits", &p.raw_data_bits},
        {"correlation_extent_m", &p.correlation_extent_m},
        {"rho", &p.correlation_extent_m},
        {"required_info_frac", &p.required_info_frac},
        {"required_info_bits", &p.required_info_bits},
        {"content_size_bits", &p.content_size_bits},
        {"uav_speed_mps", &p.uav_speed_mps},
        {"tip_speed_mps", &p.tip_speed_mps},
        {"induced_velocity_mps", &p.induced_velocity_mps},
        {"fuselage_drag_ratio", &p.fuselage_drag_ratio},
        {"rotor_solidity", &p.rotor_solidity},
        {"air_density_kgm3", &p.air_density_kgm3},
        {"rotor_disc_area_m2", &p.rotor_disc_area_m2},
        {"profile_power_w", &p.profile_power_w},
        {"induced_power_w", &p.induced_power_w},
        {"altitude_min_m", &p.altitude_min_m},
        {"z_min", &p.altitude_min_m},
        {"altitude_max_m", &p.altitude_max_m},
        {"z_max", &p.altitude_max_m},
        {"elevation_angle_deg", &p.elevation_angle_deg},
        {"area_side_m", &p.area_side_m},
        {"bisect_tol", &p.bisect_tol},
        {"epsilon", &p.bisect_tol},
        {"power_bisect_tol", &p.power_bisect_tol},
        {"compute_bisect_tol", &p.compute_bisect_tol},
        {"storage_fraction", &c.storage_fraction},
    };
    std::map<std::string, int*> ints = {
        {"antennas_per_uav", &p.antennas_per_uav},
        {"restarts", &p.restarts},
        {"n_content", &c.n_content},
        {"n_sensing", &c.n_sensing},
        {"n_mec", &c.n_mec},
        {"n_uavs", &c.n_uavs},
        {"n_contents", &c.n_contents},
    };

    int n_users = -1;
    std::map<std::string, int> explicit_roles;

    std::size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string line = text.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
        pos = eol == std::string::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;

        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        std::string key = detail::trim(line.substr(0, eq));
        std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config line " + std::to_string(line_no) + ": empty key or value");

        if (key == "n_users") {
            n_users = detail::parse_int(key, value);
        } else if (auto it = ints.find(key); it != ints.end()) {
            int v = detail::parse_int(key, value);
            *it->second = v;
            if (key == "n_content" || key == "n_sensing" || key == "n_mec")
                explicit_roles[key] = v;
        } else if (auto dit = dbl.find(key); dit != dbl.end()) {
            *dit->second = detail::parse_number(key, value);
        } else {
            throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key +
                              "'");
        }
    }

    if (n_users >= 0) {
        ScenarioCounts split{};
        split_user_roles(n_users, split);
        if (!explicit_roles.count("n_content")) c.n_content = split.n_content;
        if (!explicit_roles.count("n_sensing")) c.n_sensing = split.n_sensing;
        if (!explicit_roles.count("n_mec")) c.n_mec = split.n_mec;
    }

    auto violations = validate_params(p);
    if (!violations.empty())
        throw ConfigError("config: invalid " + violations.front().field + ": " +
                          violations.front().message);
    if (c.n_users() <= 0 || c.n_uavs <= 0 || c.n_contents <= 0)
        throw ConfigError("config: user, UAV and content counts must be positive");
    if (!(c.storage_fraction > 0.0 && c.storage_fraction <= 1.0))
        throw ConfigError("config: storage_fraction must lie in (0, 1]");
    return cfg;
}

}  // namespace uavslice
