#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "uavslice/channel.hpp"
#include "uavslice/energy.hpp"
#include "uavslice/scenario.hpp"
#include "uavslice/solution.hpp"

namespace uavslice {

// Hover-energy floor set by the uplink side of a UAV (sensing uploads and
// task offloads); constant w.r.t. the downlink powers being optimized.
inline double compute_e2(const Scenario& sc, const UavService& svc,
                         const std::map<int, double>& cpu_hz) {
    double worst = 0.0;
    for (int i : svc.uplink_users) {
        double rate = uplink_rate(svc, i, sc.params).rate_bps;
        double t = 0.0;
        if (sc.is_mec(i)) {
            auto it = cpu_hz.find(i);
            double f = it == cpu_hz.end() ? 0.0 : it->second;
            t = offload_latency(sc.params.task_bits, sc.params.cycles_per_bit, rate, f);
        } else {
            t = sc.params.raw_data_bits / rate;
        }
        worst = std::max(worst, t);
    }
    return hover_power(sc.params) * worst;
}

// KKT closed form for one content user's downlink power at a given value of
// the auxiliary hover-energy variable rho. nullopt signals that rho is below
// this user's feasibility pole.
inline std::optional<double> power_closed_form(double rho, double interference_plus_noise_w,
                                               double gain, double demand_bits,
                                               const SystemParams& p) {
    double ph = hover_power(p);
    double denom = rho * p.dl_bandwidth_hz * gain - ph * demand_bits;
    if (denom <= 0.0) return std::nullopt;
    return ph * interference_plus_noise_w * demand_bits / denom;
}

namespace detail {

// interference-plus-noise seen by each content user under the given powers
inline std::vector<double> interference_terms(const UavService& svc,
                                              const std::map<int, double>& powers,
                                              const SystemParams& p) {
    std::vector<double> omega(svc.content_users.size(), p.noise_power_w);
    for (std::size_t a = 0; a < svc.content_users.size(); ++a) {
        const ChannelRealization& h = svc.channels.at(svc.content_users[a]);
        for (std::size_t b = 0; b < svc.content_users.size(); ++b) {
            if (a == b) continue;
            auto it = powers.find(svc.content_users[b]);
            double pw = it == powers.end() ? 0.0 : it->second;
            if (pw > 0.0) omega[a] += pw * cross_gain(h, svc.channels.at(svc.content_users[b]));
        }
    }
    return omega;
}

}  // namespace detail

// Downlink power allocation of one UAV: bisection on the auxiliary
// hover-energy variable, closed-form powers at each probe, last feasible
// probe wins. Falls back to the equal split when no probe is feasible.
inline PowerAllocation allocate_power(const Scenario& sc, const UavService& svc,
                                      const std::map<int, double>& cpu_hz) {
    const SystemParams& p = sc.params;
    const double ph = hover_power(p);
    const double e2 = compute_e2(sc, svc, cpu_hz);
    PowerAllocation out;

    const std::vector<int>& cu = svc.content_users;
    if (cu.empty()) {
        out.rho_star = e2;
        return out;
    }

    const double p_eq = p.uav_max_tx_power_w / static_cast<double>(cu.size());
    std::map<int, double> equal_split;
    for (int i : cu) equal_split[i] = p_eq;

    std::vector<double> gain(cu.size()), demand(cu.size());
    for (std::size_t a = 0; a < cu.size(); ++a) {
        gain[a] = svc.channels.at(cu[a]).norm_sq();
        demand[a] = sc.demanded_bits(cu[a]);
    }

    // upper end: hover energy under the equal split
    double rho_p = 0.0;
    for (std::size_t a = 0; a < cu.size(); ++a) {
        double rate = downlink_rate(svc, equal_split, cu[a], p).rate_bps;
        rho_p = std::max(rho_p, ph * demand[a] / rate);
    }
    double rho_max = std::max(rho_p, e2);

    // lower end: the uplink floor and every user's closed-form pole
    double rho_min = e2;
    for (std::size_t a = 0; a < cu.size(); ++a)
        rho_min = std::max(rho_min, ph * demand[a] / (p.dl_bandwidth_hz * gain[a]));

    std::map<int, double> current = equal_split;
    auto evaluate = [&](double rho) -> std::optional<std::map<int, double>> {
        std::vector<double> omega = detail::interference_terms(svc, current, p);
        std::map<int, double> powers;
        double total = 0.0;
        for (std::size_t a = 0; a < cu.size(); ++a) {
            auto pw = power_closed_form(rho, omega[a], gain[a], demand[a], p);
            if (!pw || *pw < 0.0) return std::nullopt;
            powers[cu[a]] = *pw;
            total += *pw;
        }
        if (total > p.uav_max_tx_power_w * (1.0 + 1e-12)) return std::nullopt;
        return powers;
    };

    auto fallback = [&]() {
        out.per_user_w = equal_split;
        out.rho_star = rho_max;
        out.bisection_feasible = false;
        return out;
    };

    if (rho_min > rho_max) return fallback();

    auto best = evaluate(rho_max);
    if (!best) return fallback();  // powers only grow as rho shrinks
    current = *best;

    double lo = rho_min, hi = rho_max;
    while (hi - lo > p.power_tol()) {
        double mid = 0.5 * (lo + hi);
        auto probe = evaluate(mid);
        if (probe) {
            hi = mid;
            best = probe;
            current = *probe;
        } else {
            lo = mid;
        }
    }

    out.per_user_w = *best;
    out.rho_star = hi;
    return out;
}

}  // namespace uavslice
