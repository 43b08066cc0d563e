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

// Hover-energy floor set by the downlink and sensing side of a UAV; constant
// w.r.t. the CPU speeds being optimized.
inline double compute_e1(const Scenario& sc, const UavService& svc,
                         const std::map<int, double>& powers_w) {
    double worst = 0.0;
    for (int i : svc.content_users) {
        double rate = downlink_rate(svc, powers_w, i, sc.params).rate_bps;
        double bits = sc.demanded_bits(i);
        if (bits > 0.0) {
            if (rate <= 0.0) throw std::domain_error("compute_e1: zero downlink rate");
            worst = std::max(worst, bits / rate);
        }
    }
    for (int i : svc.uplink_users) {
        if (sc.is_mec(i)) continue;
        double rate = uplink_rate(svc, i, sc.params).rate_bps;
        worst = std::max(worst, sc.params.raw_data_bits / rate);
    }
    return hover_power(sc.params) * worst;
}

// KKT closed form for one task's CPU speed at a given value of the auxiliary
// latency-energy variable lambda. At the returned speed the user's offload
// latency energy equals lambda exactly. nullopt below the feasibility pole.
inline std::optional<double> speed_closed_form(double lambda, double uplink_bps,
                                               const SystemParams& p) {
    double ph = hover_power(p);
    double denom = lambda - ph * p.task_bits / uplink_bps;
    if (denom <= 0.0) return std::nullopt;
    return p.task_bits * p.cycles_per_bit * ph / denom;
}

// CPU allocation of one UAV: bisection on the auxiliary latency-energy
// variable with closed-form speeds at each probe.
inline ComputeAllocation allocate_compute(const Scenario& sc, const UavService& svc,
                                          const std::map<int, double>& powers_w) {
    const SystemParams& p = sc.params;
    const double ph = hover_power(p);
    const double e1 = compute_e1(sc, svc, powers_w);
    ComputeAllocation out;

    std::vector<int> mec;
    for (int i : svc.uplink_users)
        if (sc.is_mec(i)) mec.push_back(i);
    if (mec.empty()) {
        out.lambda_star = e1;
        return out;
    }

    std::vector<double> ul(mec.size());
    for (std::size_t a = 0; a < mec.size(); ++a)
        ul[a] = uplink_rate(svc, mec[a], p).rate_bps;

    const double f_eq = p.uav_compute_hz / static_cast<double>(mec.size());

    double lambda_min = e1;
    double lambda_f = 0.0;
    for (std::size_t a = 0; a < mec.size(); ++a) {
        double upload = ph * p.task_bits / ul[a];
        lambda_min = std::max(lambda_min, upload);
        lambda_f = std::max(lambda_f, upload + ph * p.task_bits * p.cycles_per_bit / f_eq);
    }
    double lambda_max = std::max(lambda_f, e1);

    auto evaluate = [&](double lambda) -> std::optional<std::map<int, double>> {
        std::map<int, double> speeds;
        double total = 0.0;
        for (std::size_t a = 0; a < mec.size(); ++a) {
            auto f = speed_closed_form(lambda, ul[a], p);
            if (!f || *f < 0.0) return std::nullopt;
            speeds[mec[a]] = *f;
            total += *f;
        }
        if (total > p.uav_compute_hz * (1.0 + 1e-12)) return std::nullopt;
        return speeds;
    };

    auto fallback = [&]() {
        for (int i : mec) out.per_user_hz[i] = f_eq;
        out.lambda_star = lambda_max;
        out.bisection_feasible = false;
        return out;
    };

    if (lambda_min > lambda_max) return fallback();

    auto best = evaluate(lambda_max);
    if (!best) return fallback();

    double lo = lambda_min, hi = lambda_max;
    while (hi - lo > p.compute_tol()) {
        double mid = 0.5 * (lo + hi);
        auto probe = evaluate(mid);
        if (probe) {
            hi = mid;
            best = probe;
        } else {
            lo = mid;
        }
    }

    out.per_user_hz = *best;
    out.lambda_star = hi;
    return out;
}

}  // namespace uavslice
