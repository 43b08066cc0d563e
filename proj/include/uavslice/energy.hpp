#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "uavslice/channel.hpp"
#include "uavslice/scenario.hpp"
#include "uavslice/solution.hpp"

namespace uavslice {

struct UavEnergy {
    double movement_j = 0.0;
    double hover_j = 0.0;
    double compute_j = 0.0;
    double transmit_j = 0.0;

    double total() const { return movement_j + hover_j + compute_j + transmit_j; }
};

struct EnergyBreakdown {
    std::map<int, UavEnergy> per_uav;
    double total_j = 0.0;
};

// Rotary-wing propulsion power at forward speed V: blade profile, induced,
// and parasite terms.
inline double movement_power(double speed_mps, const SystemParams& p) {
    if (speed_mps < 0.0) throw std::invalid_argument("movement_power: negative speed");
    double v2 = speed_mps * speed_mps;
    double profile = p.profile_power_w * (1.0 + 3.0 * v2 / (p.tip_speed_mps * p.tip_speed_mps));
    double v0_2 = p.induced_velocity_mps * p.induced_velocity_mps;
    double induced = p.induced_power_w *
                     std::sqrt(std::sqrt(1.0 + v2 * v2 / (4.0 * v0_2 * v0_2)) - v2 / (2.0 * v0_2));
    double parasite = 0.5 * p.fuselage_drag_ratio * p.air_density_kgm3 * p.rotor_solidity *
                      p.rotor_disc_area_m2 * v2 * speed_mps;
    return profile + induced + parasite;
}

inline double hover_power(const SystemParams& p) {
    return p.profile_power_w + p.induced_power_w;
}

// Energy to fly from the docking location to the placement at cruise speed.
inline double movement_energy(const Point3& docking, const Point3& placement,
                              const SystemParams& p) {
    return movement_power(p.uav_speed_mps, p) / p.uav_speed_mps * distance(docking, placement);
}

// Achieved rates of every served user of one UAV under the given downlink
// power split.
struct UavRates {
    std::map<int, double> dl_bps;  // content users
    std::map<int, double> ul_bps;  // active sensing + mec users
};

inline UavRates service_rates(const UavService& svc, const std::map<int, double>& powers_w,
                              const SystemParams& p) {
    UavRates r;
    for (int i : svc.content_users) r.dl_bps[i] = downlink_rate(svc, powers_w, i, p).rate_bps;
    for (int i : svc.uplink_users) r.ul_bps[i] = uplink_rate(svc, i, p).rate_bps;
    return r;
}

// Offloading latency of one MEC user: upload plus remote compute.
inline double offload_latency(double task_bits, double cycles_per_bit, double ul_bps,
                              double cpu_hz) {
    if (cpu_hz <= 0.0) throw std::domain_error("offload_latency: zero compute allocation");
    if (ul_bps <= 0.0) throw std::domain_error("offload_latency: zero uplink rate");
    return task_bits / ul_bps + task_bits * cycles_per_bit / cpu_hz;
}

// Service duration of one UAV: the slowest of its users' download, upload,
// and offload times.
inline double hover_time(const Scenario& sc, const UavService& svc, const UavRates& rates,
                         const std::map<int, double>& cpu_hz) {
    double t = 0.0;
    for (int i : svc.content_users) {
        double rate = rates.dl_bps.at(i);
        double bits = sc.demanded_bits(i);
        if (rate <= 0.0 && bits > 0.0)
            throw std::domain_error("hover_time: zero downlink rate with pending demand");
        t = std::max(t, bits / rate);
    }
    for (int i : svc.uplink_users) {
        double rate = rates.ul_bps.at(i);
        if (sc.is_mec(i)) {
            auto it = cpu_hz.find(i);
            double f = it == cpu_hz.end() ? 0.0 : it->second;
            t = std::max(t, offload_latency(sc.params.task_bits, sc.params.cycles_per_bit, rate, f));
        } else {
            if (rate <= 0.0) throw std::domain_error("hover_time: zero uplink rate");
            t = std::max(t, sc.params.raw_data_bits / rate);
        }
    }
    return t;
}

inline double hover_energy(const Scenario& sc, const UavService& svc, const UavRates& rates,
                           const std::map<int, double>& cpu_hz) {
    return hover_power(sc.params) * hover_time(sc, svc, rates, cpu_hz);
}

// CPU energy of one UAV: switched-capacitance model, quadratic in the
// allocated speed per task.
inline double compute_energy(const Scenario& sc, const UavService& svc,
                             const std::map<int, double>& cpu_hz) {
    double e = 0.0;
    for (int i : svc.uplink_users) {
        if (!sc.is_mec(i)) continue;
        auto it = cpu_hz.find(i);
        double f = it == cpu_hz.end() ? 0.0 : it->second;
        e += sc.params.switched_capacitance * sc.params.task_bits * sc.params.cycles_per_bit * f * f;
    }
    return e;
}

// Transmitter-circuitry energy of one UAV over its content downloads;
// receiver circuitry is neglected.
inline double transmission_energy(const Scenario& sc, const UavService& svc,
                                  const std::map<int, double>& powers_w, const UavRates& rates) {
    double e = 0.0;
    for (int i : svc.content_users) {
        double bits = sc.demanded_bits(i);
        if (bits <= 0.0) continue;
        double rate = rates.dl_bps.at(i);
        if (rate <= 0.0)
            throw std::domain_error("transmission_energy: zero rate with pending demand");
        auto it = powers_w.find(i);
        double pw = it == powers_w.end() ? 0.0 : it->second;
        e += pw * bits / rate;
    }
    return e;
}

// Full objective evaluation: per-UAV movement + hover + compute + transmit
// over the deployed set.
inline EnergyBreakdown total_energy(const SliceSolution& sol, const Scenario& sc,
                                    const ChannelModel& ch) {
    EnergyBreakdown out;
    for (int k : sol.deployed) {
        UavService svc = make_service(sc, ch, sol, k);
        static const std::map<int, double> kEmpty;
        auto pit = sol.power.find(k);
        const std::map<int, double>& powers = pit == sol.power.end() ? kEmpty : pit->second.per_user_w;
        auto cit = sol.compute.find(k);
        const std::map<int, double>& cpu = cit == sol.compute.end() ? kEmpty : cit->second.per_user_hz;
        UavRates rates = service_rates(svc, powers, sc.params);

        UavEnergy e;
        e.movement_j = movement_energy(sc.uavs[k].dock, svc.placement, sc.params);
        e.hover_j = hover_energy(sc, svc, rates, cpu);
        e.compute_j = compute_energy(sc, svc, cpu);
        e.transmit_j = transmission_energy(sc, svc, powers, rates);
        out.per_uav[k] = e;
        out.total_j += e.total();
    }
    return out;
}

}  // namespace uavslice
