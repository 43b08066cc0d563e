#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "uavslice/channel.hpp"
#include "uavslice/scenario.hpp"

namespace uavslice {

// Downlink power split of one UAV. `bisection_feasible` is false when the
// closed-form search never found a feasible point and the equal split was
// returned instead.
struct PowerAllocation {
    std::map<int, double> per_user_w;  // content user id -> watts
    double rho_star = 0.0;
    bool bisection_feasible = true;

    double total_w() const {
        double s = 0.0;
        for (const auto& [i, w] : per_user_w) s += w;
        return s;
    }
};

// CPU split of one UAV over its offloaded tasks.
struct ComputeAllocation {
    std::map<int, double> per_user_hz;  // mec user id -> cycles/s
    double lambda_star = 0.0;
    bool bisection_feasible = true;

    double total_hz() const {
        double s = 0.0;
        for (const auto& [i, f] : per_user_hz) s += f;
        return s;
    }
};

// Association matrix mu, N x U.
struct Association {
    int n_users = 0;
    int n_uavs = 0;
    std::vector<uint8_t> e;

    Association() = default;
    Association(int users, int uavs)
        : n_users(users), n_uavs(uavs), e(static_cast<std::size_t>(users) * uavs, 0) {}

    uint8_t& at(int i, int k) { return e[static_cast<std::size_t>(i) * n_uavs + k]; }
    uint8_t at(int i, int k) const { return e[static_cast<std::size_t>(i) * n_uavs + k]; }

    int user_degree(int i) const {
        int s = 0;
        for (int k = 0; k < n_uavs; ++k) s += at(i, k);
        return s;
    }
    std::vector<int> users_of(int k) const {
        std::vector<int> out;
        for (int i = 0; i < n_users; ++i)
            if (at(i, k)) out.push_back(i);
        return out;
    }
    // first (and in practice only) UAV serving user i, or -1
    int uav_of(int i) const {
        for (int k = 0; k < n_uavs; ++k)
            if (at(i, k)) return k;
        return -1;
    }
};

// Full decision for one instance.
struct SliceSolution {
    std::set<int> deployed;
    std::map<int, Point3> placements;  // uav id -> placement (deployed UAVs)
    Association association;
    ActivationVector activation;       // per sensing user
    std::map<int, PowerAllocation> power;
    std::map<int, ComputeAllocation> compute;
    double objective_j = 0.0;

    int deployed_count() const { return static_cast<int>(deployed.size()); }
    int active_sensing_count() const {
        int s = 0;
        for (auto v : activation) s += v ? 1 : 0;
        return s;
    }
};

struct ConstraintViolation {
    std::string constraint;  // coverage, storage-match, sensing-association,
                             // information, power-budget, mec-association,
                             // compute-budget, altitude, structure
    std::string description;
    double magnitude = 0.0;
};

struct ValidationReport {
    std::vector<ConstraintViolation> violations;
    bool feasible() const { return violations.empty(); }
};

// Builds the per-UAV service view (associated users + channels at the UAV's
// placement) that rate and energy evaluation work from.
inline UavService make_service(const Scenario& sc, const ChannelModel& ch,
                               const SliceSolution& sol, int uav) {
    UavService svc;
    svc.uav = uav;
    auto it = sol.placements.find(uav);
    if (it == sol.placements.end())
        throw std::invalid_argument("make_service: UAV has no placement");
    svc.placement = it->second;
    for (int i = 0; i < sc.n_users(); ++i) {
        if (!sol.association.at(i, uav)) continue;
        if (sc.is_content(i)) {
            svc.content_users.push_back(i);
        } else if (sc.is_mec(i)) {
            svc.uplink_users.push_back(i);
        } else if (sol.activation[sc.sensing_index(i)]) {
            svc.uplink_users.push_back(i);
        } else {
            continue;  // inactive sensing user associations carry no traffic
        }
        svc.channels.emplace(i, ch.realize(i, uav, svc.placement));
    }
    return svc;
}

}  // namespace uavslice
