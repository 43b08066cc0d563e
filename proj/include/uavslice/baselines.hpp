#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "uavslice/channel.hpp"
#include "uavslice/rng.hpp"
#include "uavslice/scenario.hpp"
#include "uavslice/sensing.hpp"
#include "uavslice/slicer.hpp"
#include "uavslice/solution.hpp"

namespace uavslice {

namespace detail {

inline double altitude_for(const Scenario& sc, const Point2& xy,
                           const std::vector<Point2>& assoc_pos) {
    if (assoc_pos.empty()) return sc.params.altitude_min_m;
    return optimal_altitude(xy, assoc_pos, sc.params);
}

// assign altitudes from the association and evaluate resources + objective
inline void finalize_placements(SliceSolution& sol, const Scenario& sc, const ChannelModel& ch,
                                const std::vector<Point2>& uav_xy) {
    for (int k : sol.deployed) {
        std::vector<Point2> assoc_pos;
        for (int i : sol.association.users_of(k)) {
            if (sc.is_sensing(i) && !sol.activation[sc.sensing_index(i)]) continue;
            assoc_pos.push_back(sc.users[i].pos);
        }
        sol.placements[k] = lifted(uav_xy[k], altitude_for(sc, uav_xy[k], assoc_pos));
    }
    refine_resources(sol, sc, ch);
}

}  // namespace detail

// Deploys every UAV above a randomly chosen user, associates each user to
// the nearest UAV able to serve it, activates all sensing users, and splits
// resources equally (the equal split is what Algorithms 1-2 degenerate to
// per-user here, applied directly).
inline SliceSolution random_solution(const Scenario& sc, const ChannelModel& ch, uint64_t seed) {
    const int n = sc.n_users(), u = sc.n_uavs();
    Rng rng(mix_seed(seed, 0xba5e11eULL));

    std::vector<Point2> uav_xy(u);
    for (int k = 0; k < u; ++k) uav_xy[k] = sc.users[rng.uniform_int(n)].pos;

    SliceSolution sol;
    sol.association = Association(n, u);
    sol.activation.assign(sc.n_sensing(), 1);
    for (int k = 0; k < u; ++k) sol.deployed.insert(k);

    for (int i = 0; i < n; ++i) {
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (int k = 0; k < u; ++k) {
            if (sc.is_content(i) && !sc.uav_covers_demand(i, k)) continue;
            double d = distance(sc.users[i].pos, uav_xy[k]);
            if (d < best_d) {
                best_d = d;
                best = k;
            }
        }
        if (best < 0)
            throw std::runtime_error("random_solution: content user " + std::to_string(i) +
                                     " has no UAV storing its demand");
        sol.association.at(i, best) = 1;
    }

    for (int k = 0; k < u; ++k) {
        std::vector<Point2> assoc_pos;
        for (int i : sol.association.users_of(k)) assoc_pos.push_back(sc.users[i].pos);
        sol.placements[k] = lifted(uav_xy[k], detail::altitude_for(sc, uav_xy[k], assoc_pos));
    }

    // equal splits over the users each UAV actually serves
    for (int k = 0; k < u; ++k) {
        std::vector<int> content, mec;
        for (int i : sol.association.users_of(k)) {
            if (sc.is_content(i)) content.push_back(i);
            if (sc.is_mec(i)) mec.push_back(i);
        }
        PowerAllocation pa;
        for (int i : content)
            pa.per_user_w[i] = sc.params.uav_max_tx_power_w / static_cast<double>(content.size());
        ComputeAllocation ca;
        for (int i : mec)
            ca.per_user_hz[i] = sc.params.uav_compute_hz / static_cast<double>(mec.size());
        sol.power[k] = pa;
        sol.compute[k] = ca;
    }
    sol.objective_j = total_energy(sol, sc, ch).total_j;
    return sol;
}

struct ExhaustiveLimits {
    int max_users = 7;
    int max_uavs = 3;
    int max_sensing = 3;
};

// Enumerates every sensing activation meeting the information requirement
// and every admissible user-UAV association, places UAVs at the centroids of
// their users, and keeps the cheapest refined solution. Exponential; refuses
// instances beyond the limits.
inline SliceSolution exhaustive_search(const Scenario& sc, const ChannelModel& ch,
                                       const ExhaustiveLimits& limits = {}) {
    const int n = sc.n_users(), u = sc.n_uavs(), ns = sc.n_sensing();
    if (n > limits.max_users || u > limits.max_uavs || ns > limits.max_sensing)
        throw std::runtime_error("exhaustive_search: instance exceeds limits (N<=" +
                                 std::to_string(limits.max_users) + ", U<=" +
                                 std::to_string(limits.max_uavs) + ", Ns<=" +
                                 std::to_string(limits.max_sensing) + ")");

    auto sensing_pos = sc.sensing_positions();
    double info_tol = 1e-9 * std::max(sc.params.raw_data_bits, sc.required_info_bits);

    std::optional<SliceSolution> best;
    for (uint32_t mask = 0; mask < (1u << ns); ++mask) {
        ActivationVector eta(ns, 0);
        for (int s = 0; s < ns; ++s) eta[s] = (mask >> s) & 1u;
        double gathered = gathered_information(eta, sensing_pos, sc.params.raw_data_bits,
                                               sc.params.correlation_extent_m);
        if (gathered < sc.required_info_bits - info_tol) continue;

        // users that need a UAV under this activation, with their options
        std::vector<int> movers;
        std::vector<std::vector<int>> options;
        bool impossible = false;
        for (int i = 0; i < n; ++i) {
            if (sc.is_sensing(i) && !eta[sc.sensing_index(i)]) continue;
            std::vector<int> opts;
            for (int k = 0; k < u; ++k)
                if (!sc.is_content(i) || sc.uav_covers_demand(i, k)) opts.push_back(k);
            if (opts.empty()) {
                impossible = true;
                break;
            }
            movers.push_back(i);
            options.push_back(std::move(opts));
        }
        if (impossible) continue;

        std::vector<std::size_t> idx(movers.size(), 0);
        for (;;) {
            SliceSolution sol;
            sol.association = Association(n, u);
            sol.activation = eta;
            std::vector<Point2> centroid(u, {0.0, 0.0});
            std::vector<int> count(u, 0);
            for (std::size_t m = 0; m < movers.size(); ++m) {
                int k = options[m][idx[m]];
                sol.association.at(movers[m], k) = 1;
                centroid[k].x += sc.users[movers[m]].pos.x;
                centroid[k].y += sc.users[movers[m]].pos.y;
                ++count[k];
            }
            std::vector<Point2> uav_xy(u, {0.0, 0.0});
            for (int k = 0; k < u; ++k) {
                if (count[k] == 0) continue;
                uav_xy[k] = {centroid[k].x / count[k], centroid[k].y / count[k]};
                sol.deployed.insert(k);
            }
            detail::finalize_placements(sol, sc, ch, uav_xy);
            if (!best || sol.objective_j < best->objective_j) best = std::move(sol);

            // odometer increment
            std::size_t pos = 0;
            while (pos < idx.size() && ++idx[pos] == options[pos].size()) idx[pos++] = 0;
            if (pos == idx.size()) break;
        }
    }
    if (!best)
        throw std::runtime_error("exhaustive_search: no feasible activation/association found");
    return *best;
}

// K-means placement baseline: Lloyd clustering of the user positions, one
// deployed UAV per cluster, every sensing user active, content users pulled
// to the nearest deployed UAV that stores their demand.
inline SliceSolution kmeans_solution(const Scenario& sc, const ChannelModel& ch, int clusters,
                                     uint64_t seed) {
    const int n = sc.n_users(), u = sc.n_uavs();
    if (clusters < 1 || clusters > u)
        throw std::invalid_argument("kmeans_solution: need 1 <= K <= number of UAVs");
    const int K = std::min(clusters, n);
    Rng rng(mix_seed(seed, 0x7e4a5ULL));

    // seed centers at K distinct users
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int i = 0; i < K; ++i) {
        int r = i + static_cast<int>(rng.uniform_int(n - i));
        std::swap(perm[i], perm[r]);
    }
    std::vector<Point2> center(K);
    for (int c = 0; c < K; ++c) center[c] = sc.users[perm[c]].pos;

    std::vector<int> cluster_of(n, 0);
    for (int iter = 0; iter < 100; ++iter) {
        for (int i = 0; i < n; ++i) {
            double best_d = std::numeric_limits<double>::infinity();
            for (int c = 0; c < K; ++c) {
                double d = distance(sc.users[i].pos, center[c]);
                if (d < best_d) {
                    best_d = d;
                    cluster_of[i] = c;
                }
            }
        }
        std::vector<Point2> sum(K, {0.0, 0.0});
        std::vector<int> count(K, 0);
        for (int i = 0; i < n; ++i) {
            sum[cluster_of[i]].x += sc.users[i].pos.x;
            sum[cluster_of[i]].y += sc.users[i].pos.y;
            ++count[cluster_of[i]];
        }
        // empty clusters grab the user farthest from its current center
        for (int c = 0; c < K; ++c) {
            if (count[c] > 0) continue;
            int far_user = -1;
            double far_d = -1.0;
            for (int i = 0; i < n; ++i) {
                if (count[cluster_of[i]] <= 1) continue;
                double d = distance(sc.users[i].pos, center[cluster_of[i]]);
                if (d > far_d) {
                    far_d = d;
                    far_user = i;
                }
            }
            if (far_user < 0) continue;
            --count[cluster_of[far_user]];
            sum[cluster_of[far_user]].x -= sc.users[far_user].pos.x;
            sum[cluster_of[far_user]].y -= sc.users[far_user].pos.y;
            cluster_of[far_user] = c;
            sum[c] = sc.users[far_user].pos;
            count[c] = 1;
        }
        double moved = 0.0;
        for (int c = 0; c < K; ++c) {
            Point2 next{sum[c].x / count[c], sum[c].y / count[c]};
            moved = std::max(moved, distance(center[c], next));
            center[c] = next;
        }
        if (moved < 1.0) break;
    }

    SliceSolution sol;
    sol.association = Association(n, u);
    sol.activation.assign(sc.n_sensing(), 1);
    for (int c = 0; c < K; ++c) sol.deployed.insert(c);

    std::vector<Point2> uav_xy(u, {0.0, 0.0});
    for (int c = 0; c < K; ++c) uav_xy[c] = center[c];

    for (int i = 0; i < n; ++i) {
        int k = cluster_of[i];  // cluster c is served by UAV id c
        if (sc.is_content(i) && !sc.uav_covers_demand(i, k)) {
            int best = -1;
            double best_d = std::numeric_limits<double>::infinity();
            for (int c = 0; c < K; ++c) {
                if (!sc.uav_covers_demand(i, c)) continue;
                double d = distance(sc.users[i].pos, uav_xy[c]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (best < 0)
                throw std::runtime_error("kmeans_solution: content user " + std::to_string(i) +
                                         " uncoverable by the deployed UAVs");
            k = best;
        }
        sol.association.at(i, k) = 1;
    }

    detail::finalize_placements(sol, sc, ch, uav_xy);
    return sol;
}

}  // namespace uavslice
