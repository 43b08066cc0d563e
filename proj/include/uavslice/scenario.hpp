#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "uavslice/geometry.hpp"
#include "uavslice/params.hpp"
#include "uavslice/rng.hpp"
#include "uavslice/sensing.hpp"

namespace uavslice {

enum class Role { Content, Sensing, Mec };

inline const char* role_name(Role r) {
    switch (r) {
        case Role::Content: return "content";
        case Role::Sensing: return "sensing";
        case Role::Mec: return "mec";
    }
    return "?";
}

struct User {
    int id = 0;
    Role role = Role::Content;
    Point2 pos;
};

struct Uav {
    int id = 0;
    Point3 dock;  // ground docking location
};

// r[i][j] = 1 iff content user i requests content j. Rows are one-hot for
// generated instances; the data model allows multi-content demand.
struct DemandMatrix {
    int n_content = 0;
    int n_contents = 0;
    std::vector<uint8_t> e;

    DemandMatrix() = default;
    DemandMatrix(int users, int contents)
        : n_content(users), n_contents(contents), e(static_cast<std::size_t>(users) * contents, 0) {}

    uint8_t& at(int i, int j) { return e[static_cast<std::size_t>(i) * n_contents + j]; }
    uint8_t at(int i, int j) const { return e[static_cast<std::size_t>(i) * n_contents + j]; }

    int row_sum(int i) const {
        int s = 0;
        for (int j = 0; j < n_contents; ++j) s += at(i, j);
        return s;
    }
};

// s[j][k] = 1 iff content j is stored on UAV k. Every content must be stored
// on at least one UAV.
struct StorageMatrix {
    int n_contents = 0;
    int n_uavs = 0;
    std::vector<uint8_t> e;

    StorageMatrix() = default;
    StorageMatrix(int contents, int uavs)
        : n_contents(contents), n_uavs(uavs), e(static_cast<std::size_t>(contents) * uavs, 0) {}

    uint8_t& at(int j, int k) { return e[static_cast<std::size_t>(j) * n_uavs + k]; }
    uint8_t at(int j, int k) const { return e[static_cast<std::size_t>(j) * n_uavs + k]; }

    int row_sum(int j) const {
        int s = 0;
        for (int k = 0; k < n_uavs; ++k) s += at(j, k);
        return s;
    }
    int col_sum(int k) const {
        int s = 0;
        for (int j = 0; j < n_contents; ++j) s += at(j, k);
        return s;
    }
};

struct ScenarioCounts {
    int n_content = 0;
    int n_sensing = 0;
    int n_mec = 0;
    int n_uavs = 0;
    int n_contents = 0;
    double storage_fraction = 0.75;  // fraction of the catalog stored per UAV

    int n_users() const { return n_content + n_sensing + n_mec; }
};

// Immutable world state shared by every solver. Users are indexed globally:
// content users first, then sensing, then MEC.
struct Scenario {
    SystemParams params;
    std::vector<User> users;
    std::vector<Uav> uavs;
    DemandMatrix demand;
    StorageMatrix storage;
    uint64_t seed = 0;
    double required_info_bits = 0.0;  // resolved target (absolute bits)

    int n_users() const { return static_cast<int>(users.size()); }
    int n_uavs() const { return static_cast<int>(uavs.size()); }
    int n_content() const { return demand.n_content; }
    int n_contents() const { return demand.n_contents; }

    int n_sensing() const {
        int s = 0;
        for (const auto& u : users) s += (u.role == Role::Sensing) ? 1 : 0;
        return s;
    }
    int n_mec() const {
        int s = 0;
        for (const auto& u : users) s += (u.role == Role::Mec) ? 1 : 0;
        return s;
    }

    Role role_of(int user) const { return users[user].role; }
    bool is_content(int user) const { return users[user].role == Role::Content; }
    bool is_sensing(int user) const { return users[user].role == Role::Sensing; }
    bool is_mec(int user) const { return users[user].role == Role::Mec; }

    // tenant-local index of a sensing user (position in the activation vector)
    int sensing_index(int user) const { return user - n_content(); }
    int sensing_user_id(int sensing_idx) const { return n_content() + sensing_idx; }

    Point3 user_pos3(int user) const { return lifted(users[user].pos, 0.0); }

    std::vector<Point2> sensing_positions() const {
        std::vector<Point2> out;
        for (const auto& u : users)
            if (u.role == Role::Sensing) out.push_back(u.pos);
        return out;
    }

    // total demanded bits of a content user
    double demanded_bits(int user) const {
        double b = 0.0;
        for (int j = 0; j < n_contents(); ++j)
            if (demand.at(user, j)) b += params.content_size_bits;
        return b;
    }

    // number of demanded contents UAV k stores for content user i
    int stored_demand_count(int user, int uav) const {
        int s = 0;
        for (int j = 0; j < n_contents(); ++j) s += demand.at(user, j) * storage.at(j, uav);
        return s;
    }

    // UAV k can fully serve content user i (stores everything i demands)
    bool uav_covers_demand(int user, int uav) const {
        for (int j = 0; j < n_contents(); ++j)
            if (demand.at(user, j) && !storage.at(j, uav)) return false;
        return true;
    }

    double max_attainable_information() const {
        return max_information(sensing_positions(), params.raw_data_bits,
                               params.correlation_extent_m);
    }
};

inline double resolve_required_info(const SystemParams& p, double h_max) {
    if (!std::isnan(p.required_info_bits)) return p.required_info_bits;
    return p.required_info_frac * h_max;
}

// Random instance generator. Pure in (params, counts, seed).
inline Scenario generate_scenario(const SystemParams& params, const ScenarioCounts& counts,
                                  uint64_t seed) {
    if (counts.n_content < 0 || counts.n_sensing < 0 || counts.n_mec < 0)
        throw std::invalid_argument("generate_scenario: negative user count");
    if (counts.n_users() <= 0 || counts.n_uavs <= 0 || counts.n_contents <= 0)
        throw std::invalid_argument("generate_scenario: counts must be positive");
    if (!(counts.storage_fraction > 0.0 && counts.storage_fraction <= 1.0))
        throw std::invalid_argument("generate_scenario: storage_fraction must lie in (0, 1]");

    const int per_uav = static_cast<int>(
        std::ceil(counts.storage_fraction * counts.n_contents - 1e-9));
    if (per_uav * counts.n_uavs < counts.n_contents)
        throw std::runtime_error(
            "generate_scenario: storage capacity cannot cover the catalog (" +
            std::to_string(per_uav) + " contents/UAV x " + std::to_string(counts.n_uavs) +
            " UAVs < " + std::to_string(counts.n_contents) + " contents)");

    Scenario sc;
    sc.params = params;
    sc.seed = seed;
    Rng rng(mix_seed(seed, 0x5ce4a71'0ULL));

    const int n = counts.n_users();
    sc.users.reserve(n);
    for (int i = 0; i < n; ++i) {
        Role role = (i < counts.n_content)                      ? Role::Content
                    : (i < counts.n_content + counts.n_sensing) ? Role::Sensing
                                                                : Role::Mec;
        sc.users.push_back({i, role,
                            {rng.uniform(0.0, params.area_side_m),
                             rng.uniform(0.0, params.area_side_m)}});
    }

    sc.uavs.reserve(counts.n_uavs);
    for (int k = 0; k < counts.n_uavs; ++k) sc.uavs.push_back({k, {0.0, 0.0, 0.0}});

    // one-hot demand rows
    sc.demand = DemandMatrix(counts.n_content, counts.n_contents);
    for (int i = 0; i < counts.n_content; ++i)
        sc.demand.at(i, static_cast<int>(rng.uniform_int(counts.n_contents))) = 1;

    // per_uav ones per column, every content stored somewhere
    sc.storage = StorageMatrix(counts.n_contents, counts.n_uavs);
    std::vector<int> contents(counts.n_contents);
    std::iota(contents.begin(), contents.end(), 0);
    for (int attempt = 0; attempt < 256; ++attempt) {
        std::fill(sc.storage.e.begin(), sc.storage.e.end(), 0);
        for (int k = 0; k < counts.n_uavs; ++k) {
            // partial Fisher-Yates: first per_uav entries of a shuffle
            for (int t = 0; t < per_uav; ++t) {
                int r = t + static_cast<int>(rng.uniform_int(counts.n_contents - t));
                std::swap(contents[t], contents[r]);
                sc.storage.at(contents[t], k) = 1;
            }
        }
        bool covered = true;
        for (int j = 0; j < counts.n_contents; ++j)
            if (sc.storage.row_sum(j) == 0) covered = false;
        if (covered) break;
        if (attempt == 255) {
            // deterministic repair: move a one from an over-covered row
            for (int j = 0; j < counts.n_contents; ++j) {
                if (sc.storage.row_sum(j) > 0) continue;
                bool fixed = false;
                for (int k = 0; k < counts.n_uavs && !fixed; ++k)
                    for (int j2 = 0; j2 < counts.n_contents && !fixed; ++j2)
                        if (sc.storage.at(j2, k) && sc.storage.row_sum(j2) >= 2) {
                            sc.storage.at(j2, k) = 0;
                            sc.storage.at(j, k) = 1;
                            fixed = true;
                        }
                if (!fixed)
                    throw std::runtime_error("generate_scenario: storage repair failed");
            }
        }
    }

    sc.required_info_bits = resolve_required_info(params, sc.max_attainable_information());
    return sc;
}

// Structural invariant check for hand-built or imported scenarios.
inline void check_scenario(const Scenario& sc) {
    if (sc.users.empty() || sc.uavs.empty())
        throw std::runtime_error("scenario: needs at least one user and one UAV");
    int nc = 0;
    Role prev = Role::Content;
    for (std::size_t i = 0; i < sc.users.size(); ++i) {
        const auto& u = sc.users[i];
        if (u.id != static_cast<int>(i)) throw std::runtime_error("scenario: user ids must be 0..N-1");
        if (static_cast<int>(u.role) < static_cast<int>(prev))
            throw std::runtime_error("scenario: users must be ordered content, sensing, mec");
        prev = u.role;
        if (u.role == Role::Content) ++nc;
        if (u.pos.x < 0 || u.pos.x > sc.params.area_side_m || u.pos.y < 0 ||
            u.pos.y > sc.params.area_side_m)
            throw std::runtime_error("scenario: user outside the service area");
    }
    if (sc.demand.n_content != nc || sc.demand.n_contents != sc.storage.n_contents ||
        sc.storage.n_uavs != sc.n_uavs())
        throw std::runtime_error("scenario: matrix dimensions do not match counts");
    for (int i = 0; i < sc.demand.n_content; ++i)
        if (sc.demand.row_sum(i) < 1) throw std::runtime_error("scenario: demand row empty");
    for (int j = 0; j < sc.storage.n_contents; ++j)
        if (sc.storage.row_sum(j) < 1)
            throw std::runtime_error("scenario: content stored nowhere");
    for (const auto& u : sc.uavs)
        if (u.dock.z < 0) throw std::runtime_error("scenario: docking altitude below ground");
    if (sc.required_info_bits < 0 ||
        sc.required_info_bits > sc.max_attainable_information() * (1.0 + 1e-9))
        throw std::runtime_error("scenario: required information outside [0, H]");
}

}  // namespace uavslice
