#pragma once

#include <cstdint>

#include "uavslice/rng.hpp"
#include "uavslice/scenario.hpp"

namespace uavslice {

// Small fixed instance: 3 UAVs, 5 content + 5 sensing + 4 MEC users, a
// 4-item catalog with hand-picked demand and storage patterns. Content user
// 4 demands item 1, which only UAV 1 stores, so any feasible association
// pins that pair. User positions are drawn from `seed`.
inline Scenario demo_scenario(const SystemParams& params, uint64_t seed) {
    Scenario sc;
    sc.params = params;
    sc.seed = seed;
    Rng rng(mix_seed(seed, 0xde10ULL));

    const int n_content = 5, n_sensing = 5, n_mec = 4, n = n_content + n_sensing + n_mec;
    for (int i = 0; i < n; ++i) {
        Role role = (i < n_content) ? Role::Content : (i < n_content + n_sensing) ? Role::Sensing
                                                                                  : Role::Mec;
        sc.users.push_back({i, role,
                            {rng.uniform(0.0, params.area_side_m),
                             rng.uniform(0.0, params.area_side_m)}});
    }
    for (int k = 0; k < 3; ++k) sc.uavs.push_back({k, {0.0, 0.0, 0.0}});

    sc.demand = DemandMatrix(n_content, 4);
    const int wanted[n_content] = {2, 3, 0, 3, 1};
    for (int i = 0; i < n_content; ++i) sc.demand.at(i, wanted[i]) = 1;

    sc.storage = StorageMatrix(4, 3);
    const int stored[4][3] = {
        {1, 1, 1},  // item 0
        {0, 1, 0},  // item 1
        {1, 1, 0},  // item 2
        {1, 0, 1},  // item 3
    };
    for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 3; ++k) sc.storage.at(j, k) = static_cast<uint8_t>(stored[j][k]);

    sc.required_info_bits = resolve_required_info(params, sc.max_attainable_information());
    check_scenario(sc);
    return sc;
}

}  // namespace uavslice
