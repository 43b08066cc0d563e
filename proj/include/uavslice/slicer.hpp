#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "uavslice/channel.hpp"
#include "uavslice/compute_alloc.hpp"
#include "uavslice/energy.hpp"
#include "uavslice/power_alloc.hpp"
#include "uavslice/rng.hpp"
#include "uavslice/scenario.hpp"
#include "uavslice/sensing.hpp"
#include "uavslice/solution.hpp"

namespace uavslice {

// Weighted user-UAV graph: four vertex classes (content, sensing, MEC users
// and UAVs), one row of weights per user. Weight reciprocal to the marginal
// energy of the association, so the heaviest edge is the cheapest choice.
struct AssociationGraph {
    int n_content = 0;
    int n_sensing = 0;
    int n_mec = 0;
    int n_uavs = 0;
    std::vector<double> weights;  // N x U

    double& at(int i, int k) { return weights[static_cast<std::size_t>(i) * n_uavs + k]; }
    double at(int i, int k) const { return weights[static_cast<std::size_t>(i) * n_uavs + k]; }
};

// Marginal-energy edge weight. `stored_demand_count` is the number of
// demanded contents the UAV stores (content users only), `service_rate_bps`
// the downlink rate for content users and the uplink rate otherwise.
inline double edge_weight(Role role, double info_gate, double dist_m, double service_rate_bps,
                          double tx_power_w, double cpu_hz, int stored_demand_count,
                          double stored_demand_bits, const SystemParams& p) {
    if (role == Role::Sensing && info_gate <= 0.0) return 0.0;
    if (role == Role::Content && stored_demand_count == 0) return 0.0;

    double travel = movement_power(p.uav_speed_mps, p) / p.uav_speed_mps * dist_m;
    double ph = hover_power(p);
    double denom = 0.0;
    switch (role) {
        case Role::Sensing:
            denom = travel + ph * p.raw_data_bits / service_rate_bps;
            break;
        case Role::Mec:
            denom = travel + ph * (p.task_bits / service_rate_bps +
                                   p.task_bits * p.cycles_per_bit / cpu_hz);
            break;
        case Role::Content:
            denom = travel + (ph + tx_power_w) * stored_demand_bits / service_rate_bps;
            break;
    }
    if (!(denom > 0.0)) throw std::domain_error("edge_weight: non-positive denominator");
    double numer = (role == Role::Sensing)   ? info_gate
                   : (role == Role::Content) ? static_cast<double>(stored_demand_count)
                                             : 1.0;
    return numer / denom;
}

// Coverage-driven altitude: far enough to see the farthest associated user
// under the optimum elevation angle, clamped to the allowed band.
inline double optimal_altitude(const Point2& uav_xy, const std::vector<Point2>& associated,
                               const SystemParams& p) {
    if (associated.empty())
        throw std::invalid_argument("optimal_altitude: no associated users");
    double worst = 0.0;
    for (const auto& q : associated) worst = std::max(worst, distance(uav_xy, q));
    double z = worst * std::tan(p.elevation_angle_rad());
    return std::clamp(z, p.altitude_min_m, p.altitude_max_m);
}

struct GreedyResult {
    SliceSolution solution;                     // association, activation, placements; no P/f yet
    std::vector<std::pair<int, int>> selections;  // (user, uav) in pick order
};

namespace detail {

struct GreedyState {
    const Scenario* sc;
    const ChannelModel* ch;
    std::vector<Point2> vpos;       // current UAV xy
    std::vector<double> alt;        // current UAV altitude
    std::vector<std::vector<int>> content_at, uplink_at;
    std::vector<std::vector<ChannelRealization>> chan;  // [k][i]
    std::vector<double> line7_power;  // per UAV, equal split over potential content users
    double line7_cpu = 0.0;           // equal split over all MEC users

    void refresh_column(int k) {
        for (int i = 0; i < sc->n_users(); ++i)
            chan[k][i] = ch->realize(i, k, lifted(vpos[k], alt[k]));
    }

    double cand_dl_rate(int i, int k) const {
        const ChannelRealization& h = chan[k][i];
        double interf = 0.0;
        for (int j : content_at[k]) interf += line7_power[k] * cross_gain(h, chan[k][j]);
        double sinr = line7_power[k] * h.norm_sq() / (interf + sc->params.noise_power_w);
        return sc->params.dl_bandwidth_hz * std::log2(1.0 + sinr);
    }

    double cand_ul_rate(int i, int k) const {
        const ChannelRealization& h = chan[k][i];
        double interf = 0.0;
        for (int j : uplink_at[k]) interf += sc->params.user_tx_power_w * cross_gain(h, chan[k][j]);
        double sinr = sc->params.user_tx_power_w * h.norm_sq() / (interf + sc->params.noise_power_w);
        return sc->params.ul_bandwidth_hz * std::log2(1.0 + sinr);
    }

    double weight(int i, int k, double info_gate) const {
        const SystemParams& p = sc->params;
        Role role = sc->role_of(i);
        double d = distance(vpos[k], sc->users[i].pos);
        if (role == Role::Content) {
            int stored = sc->stored_demand_count(i, k);
            if (stored == 0 || !sc->uav_covers_demand(i, k)) return 0.0;
            double bits = stored * p.content_size_bits;
            return edge_weight(role, 1.0, d, cand_dl_rate(i, k), line7_power[k], 0.0, stored,
                               bits, p);
        }
        if (role == Role::Sensing) {
            if (info_gate <= 0.0) return 0.0;
            return edge_weight(role, info_gate, d, cand_ul_rate(i, k), 0.0, 0.0, 0, 0.0, p);
        }
        return edge_weight(role, 1.0, d, cand_ul_rate(i, k), 0.0, line7_cpu, 0, 0.0, p);
    }
};

}  // namespace detail

// One greedy pass: repeatedly associate the heaviest edge, drag the chosen
// UAV to the centroid of its users, update altitude, activation and weights.
// With `restart_rng`, initial UAV positions are perturbed uniformly over the
// area and argmax ties break randomly; otherwise docking projections are used
// and the lowest index wins.
inline GreedyResult greedy_pass(const Scenario& sc, const ChannelModel& ch,
                                std::optional<uint64_t> restart_seed = std::nullopt) {
    const SystemParams& p = sc.params;
    const int n = sc.n_users(), u = sc.n_uavs();

    // every content user needs at least one UAV holding all its demand
    for (int i = 0; i < n; ++i) {
        if (!sc.is_content(i)) continue;
        bool servable = false;
        for (int k = 0; k < u; ++k) servable |= sc.uav_covers_demand(i, k);
        if (!servable)
            throw std::runtime_error("greedy_pass: content user " + std::to_string(i) +
                                     " has no UAV storing its demand");
    }

    std::optional<Rng> rng;
    if (restart_seed) rng.emplace(*restart_seed);

    detail::GreedyState st;
    st.sc = &sc;
    st.ch = &ch;
    st.vpos.resize(u);
    st.alt.assign(u, p.altitude_min_m);
    st.content_at.resize(u);
    st.uplink_at.resize(u);
    st.chan.assign(u, std::vector<ChannelRealization>(n));
    st.line7_power.resize(u);
    for (int k = 0; k < u; ++k) {
        if (rng) {
            st.vpos[k] = {rng->uniform(0.0, p.area_side_m), rng->uniform(0.0, p.area_side_m)};
        } else {
            st.vpos[k] = {sc.uavs[k].dock.x, sc.uavs[k].dock.y};
        }
        int potential = 0;
        for (int i = 0; i < sc.n_content(); ++i) potential += sc.stored_demand_count(i, k);
        st.line7_power[k] = potential > 0 ? p.uav_max_tx_power_w / potential : 0.0;
        st.refresh_column(k);
    }
    int n_mec = sc.n_mec();
    st.line7_cpu = n_mec > 0 ? p.uav_compute_hz / n_mec : 0.0;

    GreedyResult res;
    SliceSolution& sol = res.solution;
    sol.association = Association(n, u);
    sol.activation.assign(sc.n_sensing(), 0);

    auto sensing_pos = sc.sensing_positions();
    double gathered = 0.0;
    double info_gate = (gathered < sc.required_info_bits) ? 1.0 : 0.0;

    AssociationGraph g;
    g.n_content = sc.n_content();
    g.n_sensing = sc.n_sensing();
    g.n_mec = n_mec;
    g.n_uavs = u;
    g.weights.assign(static_cast<std::size_t>(n) * u, 0.0);
    std::vector<bool> served(n, false);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < u; ++k) g.at(i, k) = st.weight(i, k, info_gate);

    for (int step = 0; step < n; ++step) {
        // argmax edge
        double wmax = 0.0;
        int bi = -1, bk = -1;
        if (rng) {
            std::vector<std::pair<int, int>> ties;
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < u; ++k) {
                    double w = g.at(i, k);
                    if (w <= 0.0) continue;
                    if (w > wmax) {
                        wmax = w;
                        ties.clear();
                    }
                    if (w == wmax) ties.emplace_back(i, k);
                }
            if (!ties.empty()) {
                auto pick = ties[rng->uniform_int(ties.size())];
                bi = pick.first;
                bk = pick.second;
            }
        } else {
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < u; ++k)
                    if (g.at(i, k) > wmax) {
                        wmax = g.at(i, k);
                        bi = i;
                        bk = k;
                    }
        }
        if (bi < 0) break;  // no positive edge left

        sol.association.at(bi, bk) = 1;
        served[bi] = true;
        res.selections.emplace_back(bi, bk);
        if (sc.is_content(bi)) {
            st.content_at[bk].push_back(bi);
        } else {
            st.uplink_at[bk].push_back(bi);
        }

        // drag the UAV to the centroid of its users, re-derive altitude
        std::vector<Point2> assoc_pos;
        for (int i : st.content_at[bk]) assoc_pos.push_back(sc.users[i].pos);
        for (int i : st.uplink_at[bk]) assoc_pos.push_back(sc.users[i].pos);
        Point2 centroid{0.0, 0.0};
        for (const auto& q : assoc_pos) {
            centroid.x += q.x;
            centroid.y += q.y;
        }
        centroid.x /= assoc_pos.size();
        centroid.y /= assoc_pos.size();
        st.vpos[bk] = centroid;
        st.alt[bk] = optimal_altitude(centroid, assoc_pos, p);
        st.refresh_column(bk);

        if (sc.is_sensing(bi)) {
            int si = sc.sensing_index(bi);
            sol.activation[si] = 1;
            gathered = gathered_information(sol.activation, sensing_pos, p.raw_data_bits,
                                            p.correlation_extent_m);
            double prev_gate = info_gate;
            info_gate = (gathered < sc.required_info_bits) ? 1.0 : 0.0;
            if (prev_gate > 0.0 && info_gate == 0.0) {
                for (int i = sc.n_content(); i < sc.n_content() + sc.n_sensing(); ++i)
                    for (int k = 0; k < u; ++k) g.at(i, k) = 0.0;
            }
        }

        for (int k = 0; k < u; ++k) g.at(bi, k) = 0.0;
        for (int i = 0; i < n; ++i)
            if (!served[i] && g.at(i, bk) != 0.0) g.at(i, bk) = st.weight(i, bk, info_gate);
    }

    for (int k = 0; k < u; ++k) {
        if (st.content_at[k].empty() && st.uplink_at[k].empty()) continue;
        sol.deployed.insert(k);
        sol.placements[k] = lifted(st.vpos[k], st.alt[k]);
    }
    return res;
}

// Runs Algorithms 1-2 on a structural solution and evaluates the objective.
inline void refine_resources(SliceSolution& sol, const Scenario& sc, const ChannelModel& ch) {
    int n_mec = sc.n_mec();
    double line7_cpu = n_mec > 0 ? sc.params.uav_compute_hz / n_mec : 0.0;
    for (int k : sol.deployed) {
        UavService svc = make_service(sc, ch, sol, k);
        std::map<int, double> cpu0;
        for (int i : svc.uplink_users)
            if (sc.is_mec(i)) cpu0[i] = line7_cpu;
        PowerAllocation pa = allocate_power(sc, svc, cpu0);
        ComputeAllocation ca = allocate_compute(sc, svc, pa.per_user_w);
        sol.power[k] = std::move(pa);
        sol.compute[k] = std::move(ca);
    }
    sol.objective_j = total_energy(sol, sc, ch).total_j;
}

// Full heuristic: one deterministic pass plus randomized restarts, keeping
// the lowest-energy refined solution.
inline SliceSolution solve(const Scenario& sc, const ChannelModel& ch) {
    std::optional<SliceSolution> best;
    for (int q = 0; q < sc.params.restarts; ++q) {
        std::optional<uint64_t> restart_seed;
        if (q > 0) restart_seed = mix_seed(sc.seed, 0x9e57a97ULL, static_cast<uint64_t>(q));
        GreedyResult pass = greedy_pass(sc, ch, restart_seed);
        refine_resources(pass.solution, sc, ch);
        if (!best || pass.solution.objective_j < best->objective_j)
            best = std::move(pass.solution);
    }
    return *best;
}

// Checks the nine constraint families of the deployment problem; violations
// come back as data rather than errors.
inline ValidationReport validate_solution(const SliceSolution& sol, const Scenario& sc,
                                          const ChannelModel& ch) {
    (void)ch;
    ValidationReport rep;
    auto add = [&](const char* c, std::string d, double m) {
        rep.violations.push_back({c, std::move(d), m});
    };
    const SystemParams& p = sc.params;
    const int n = sc.n_users(), u = sc.n_uavs();

    if (sol.association.n_users != n || sol.association.n_uavs != u ||
        static_cast<int>(sol.activation.size()) != sc.n_sensing()) {
        add("structure", "association/activation dimensions do not match the scenario", 0.0);
        return rep;
    }

    for (int i = 0; i < n; ++i) {
        int deg = sol.association.user_degree(i);
        if (sc.is_content(i)) {
            if (deg < 1) add("coverage", "content user " + std::to_string(i) + " unserved", 1.0);
            int lhs = 0;
            for (int k = 0; k < u; ++k)
                if (sol.association.at(i, k)) lhs += sc.stored_demand_count(i, k);
            int rhs = sc.demand.row_sum(i);
            if (lhs != rhs)
                add("storage-match",
                    "content user " + std::to_string(i) + " stored-demand mismatch",
                    std::abs(lhs - rhs));
        } else if (sc.is_sensing(i)) {
            int eta = sol.activation[sc.sensing_index(i)] ? 1 : 0;
            if (deg != eta)
                add("sensing-association",
                    "sensing user " + std::to_string(i) + " association != activation",
                    std::abs(deg - eta));
        } else {
            if (deg != 1)
                add("mec-association",
                    "mec user " + std::to_string(i) + " must have exactly one UAV",
                    std::abs(deg - 1));
        }
        for (int k = 0; k < u; ++k)
            if (sol.association.at(i, k) && !sol.deployed.count(k))
                add("structure",
                    "user " + std::to_string(i) + " associated to undeployed UAV " +
                        std::to_string(k),
                    0.0);
    }

    double gathered = gathered_information(sol.activation, sc.sensing_positions(),
                                           p.raw_data_bits, p.correlation_extent_m);
    double info_tol = 1e-9 * std::max(p.raw_data_bits, sc.required_info_bits);
    if (gathered < sc.required_info_bits - info_tol)
        add("information", "gathered information below the requirement",
            sc.required_info_bits - gathered);

    for (int k : sol.deployed) {
        auto it = sol.placements.find(k);
        if (it == sol.placements.end()) {
            add("structure", "deployed UAV " + std::to_string(k) + " has no placement", 0.0);
            continue;
        }
        double z = it->second.z;
        if (z < p.altitude_min_m - 1e-9 || z > p.altitude_max_m + 1e-9)
            add("altitude", "UAV " + std::to_string(k) + " altitude out of band",
                std::max(p.altitude_min_m - z, z - p.altitude_max_m));

        auto pit = sol.power.find(k);
        if (pit != sol.power.end()) {
            double total = 0.0;
            for (const auto& [i, w] : pit->second.per_user_w) {
                if (w < 0.0)
                    add("power-budget", "negative power for user " + std::to_string(i), -w);
                total += w;
            }
            if (total > p.uav_max_tx_power_w * (1.0 + 1e-6))
                add("power-budget", "UAV " + std::to_string(k) + " power budget exceeded",
                    total - p.uav_max_tx_power_w);
        }
        auto cit = sol.compute.find(k);
        if (cit != sol.compute.end()) {
            double total = 0.0;
            for (const auto& [i, f] : cit->second.per_user_hz) {
                if (f < 0.0)
                    add("compute-budget", "negative CPU share for user " + std::to_string(i), -f);
                total += f;
            }
            if (total > p.uav_compute_hz * (1.0 + 1e-6))
                add("compute-budget", "UAV " + std::to_string(k) + " compute budget exceeded",
                    total - p.uav_compute_hz);
        }
    }

    if (sol.deployed_count() > u)
        add("structure", "more deployed UAVs than available", sol.deployed_count() - u);
    return rep;
}

}  // namespace uavslice
