#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace uavslice {

// System-wide physical and algorithmic parameters. Defaults reproduce the
// standard simulation setup; everything is overridable through the config
// file (see config.hpp).
struct SystemParams {
    // propagation
    double pathloss_ref_db = -30.0;     // path loss at 1 m, dB
    double pathloss_exp = 2.2;          // path loss exponent
    double rician_factor = 10.0;        // linear
    double noise_power_w = 1e-13;       // -100 dBm
    // radio resources
    double dl_bandwidth_hz = 1e6;
    double ul_bandwidth_hz = 1e6;
    double uav_max_tx_power_w = 1.0;    // per-UAV downlink budget
    double user_tx_power_w = 0.1;       // uplink transmit power
    int antennas_per_uav = 8;
    // computing
    double uav_compute_hz = 4e9;        // per-UAV CPU budget, cycles/s
    double switched_capacitance = 1e-28;
    double task_bits = 1e6;             // offloaded task size
    double cycles_per_bit = 700.0;      // see note below
    // sensing
    double raw_data_bits = 1e6;         // raw data per sensing user
    double correlation_extent_m = 100.0;
    double required_info_frac = 0.75;   // target information as a fraction of the attainable maximum
    double required_info_bits = std::numeric_limits<double>::quiet_NaN();  // absolute override; NaN = use fraction
    // content
    double content_size_bits = 5e8;     // per content item
    // propulsion (rotary wing)
    double uav_speed_mps = 12.0;
    double tip_speed_mps = 120.0;
    double induced_velocity_mps = 4.03;
    double fuselage_drag_ratio = 0.6;
    double rotor_solidity = 0.05;
    double air_density_kgm3 = 1.225;
    double rotor_disc_area_m2 = 0.503;
    double profile_power_w = 79.86;
    double induced_power_w = 88.63;
    // placement
    double altitude_min_m = 50.0;
    double altitude_max_m = 300.0;
    double elevation_angle_deg = 42.44;  // urban environment
    double area_side_m = 1200.0;
    // solver knobs
    double bisect_tol = 0.01;
    double power_bisect_tol = std::numeric_limits<double>::quiet_NaN();    // NaN = use bisect_tol
    double compute_bisect_tol = std::numeric_limits<double>::quiet_NaN();  // NaN = use bisect_tol
    int restarts = 20;

    double pathloss_ref_linear() const { return std::pow(10.0, pathloss_ref_db / 10.0); }
    double elevation_angle_rad() const { return elevation_angle_deg * 3.14159265358979323846 / 180.0; }
    double power_tol() const { return std::isnan(power_bisect_tol) ? bisect_tol : power_bisect_tol; }
    double compute_tol() const { return std::isnan(compute_bisect_tol) ? bisect_tol : compute_bisect_tol; }
};
// cycles_per_bit: published tables for this setup list 700e8 cycle/bit, which
// yields compute times in the 1e8-second range and swamps every other energy
// term; 700 keeps task compute times commensurate with upload times. The
// larger figure remains reachable through the config file.

struct ParamViolation {
    std::string field;
    std::string message;
};

inline std::vector<ParamViolation> validate_params(const SystemParams& p) {
    std::vector<ParamViolation> out;
    auto positive = [&](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) out.push_back({name, "must be strictly positive"});
    };
    positive(p.pathloss_exp, "pathloss_exp");
    positive(p.rician_factor, "rician_factor");
    positive(p.noise_power_w, "noise_power_w");
    positive(p.dl_bandwidth_hz, "dl_bandwidth_hz");
    positive(p.ul_bandwidth_hz, "ul_bandwidth_hz");
    positive(p.uav_max_tx_power_w, "uav_max_tx_power_w");
    positive(p.user_tx_power_w, "user_tx_power_w");
    positive(p.uav_compute_hz, "uav_compute_hz");
    positive(p.switched_capacitance, "switched_capacitance");
    positive(p.task_bits, "task_bits");
    positive(p.cycles_per_bit, "cycles_per_bit");
    positive(p.raw_data_bits, "raw_data_bits");
    positive(p.correlation_extent_m, "correlation_extent_m");
    positive(p.content_size_bits, "content_size_bits");
    positive(p.uav_speed_mps, "uav_speed_mps");
    positive(p.tip_speed_mps, "tip_speed_mps");
    positive(p.induced_velocity_mps, "induced_velocity_mps");
    positive(p.fuselage_drag_ratio, "fuselage_drag_ratio");
    positive(p.rotor_solidity, "rotor_solidity");
    positive(p.air_density_kgm3, "air_density_kgm3");
    positive(p.rotor_disc_area_m2, "rotor_disc_area_m2");
    positive(p.profile_power_w, "profile_power_w");
    positive(p.induced_power_w, "induced_power_w");
    positive(p.altitude_min_m, "altitude_min_m");
    positive(p.area_side_m, "area_side_m");
    positive(p.bisect_tol, "bisect_tol");
    if (p.antennas_per_uav < 1) out.push_back({"antennas_per_uav", "must be a positive integer"});
    if (p.restarts < 1) out.push_back({"restarts", "must be a positive integer"});
    if (!(p.altitude_min_m < p.altitude_max_m))
        out.push_back({"altitude_max_m", "must exceed altitude_min_m"});
    if (!(p.elevation_angle_deg > 0.0 && p.elevation_angle_deg < 90.0))
        out.push_back({"elevation_angle_deg", "must lie strictly between 0 and 90 degrees"});
    if (!(p.required_info_frac >= 0.0 && p.required_info_frac <= 1.0))
        out.push_back({"required_info_frac", "must lie in [0, 1]"});
    if (!std::isnan(p.required_info_bits) && !(p.required_info_bits >= 0.0))
        out.push_back({"required_info_bits", "must be non-negative"});
    return out;
}

}  // namespace uavslice
