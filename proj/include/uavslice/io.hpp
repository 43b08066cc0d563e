#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "uavslice/config.hpp"
#include "uavslice/energy.hpp"
#include "uavslice/scenario.hpp"
#include "uavslice/solution.hpp"

namespace uavslice {

namespace detail {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// section name -> lines (comments and blanks stripped)
inline std::map<std::string, std::vector<std::string>> split_sections(const std::string& text,
                                                                      const std::string& magic) {
    std::map<std::string, std::vector<std::string>> out;
    std::istringstream in(text);
    std::string line, section;
    bool saw_magic = false;
    while (std::getline(in, line)) {
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (!saw_magic) {
            if (line.rfind(magic, 0) != 0)
                throw std::runtime_error("expected '" + magic + "' header, got: " + line);
            saw_magic = true;
            continue;
        }
        if (line.front() == '[' && line.back() == ']') {
            section = line.substr(1, line.size() - 2);
            out[section];
            continue;
        }
        if (section.empty()) throw std::runtime_error("content before first section: " + line);
        out[section].push_back(line);
    }
    if (!saw_magic) throw std::runtime_error("missing '" + magic + "' header");
    return out;
}

inline const std::vector<std::string>& need_section(
    const std::map<std::string, std::vector<std::string>>& sections, const std::string& name) {
    auto it = sections.find(name);
    if (it == sections.end()) throw std::runtime_error("missing [" + name + "] section");
    return it->second;
}

}  // namespace detail

inline std::string scenario_to_text(const Scenario& sc) {
    using detail::fmt_double;
    const SystemParams& p = sc.params;
    std::ostringstream out;
    out << "uavslice-scenario v1\n";
    out << "[params]\n";
    const std::pair<const char*, double> fields[] = {
        {"pathloss_ref_db", p.pathloss_ref_db},
        {"pathloss_exp", p.pathloss_exp},
        {"rician_factor", p.rician_factor},
        {"noise_power_w", p.noise_power_w},
        {"dl_bandwidth_hz", p.dl_bandwidth_hz},
        {"ul_bandwidth_hz", p.ul_bandwidth_hz},
        {"uav_max_tx_power_w", p.uav_max_tx_power_w},
        {"user_tx_power_w", p.user_tx_power_w},
        {"uav_compute_hz", p.uav_compute_hz},
        {"switched_capacitance", p.switched_capacitance},
        {"task_bits", p.task_bits},
        {"cycles_per_bit", p.cycles_per_bit},
        {"raw_data_bits", p.raw_data_bits},
        {"correlation_extent_m", p.correlation_extent_m},
        {"required_info_frac", p.required_info_frac},
        {"required_info_bits", p.required_info_bits},
        {"content_size_bits", p.content_size_bits},
        {"uav_speed_mps", p.uav_speed_mps},
        {"tip_speed_mps", p.tip_speed_mps},
        {"induced_velocity_mps", p.induced_velocity_mps},
        {"fuselage_drag_ratio", p.fuselage_drag_ratio},
        {"rotor_solidity", p.rotor_solidity},
        {"air_density_kgm3", p.air_density_kgm3},
        {"rotor_disc_area_m2", p.rotor_disc_area_m2},
        {"profile_power_w", p.profile_power_w},
        {"induced_power_w", p.induced_power_w},
        {"altitude_min_m", p.altitude_min_m},
        {"altitude_max_m", p.altitude_max_m},
        {"elevation_angle_deg", p.elevation_angle_deg},
        {"area_side_m", p.area_side_m},
        {"bisect_tol", p.bisect_tol},
        {"power_bisect_tol", p.power_bisect_tol},
        {"compute_bisect_tol", p.compute_bisect_tol},
    };
    for (const auto& [name, value] : fields)
        if (!std::isnan(value)) out << name << " = " << fmt_double(value) << "\n";
    out << "antennas_per_uav = " << p.antennas_per_uav << "\n";
    out << "restarts = " << p.restarts << "\n";
    out << "[meta]\n";
    out << "seed = " << sc.seed << "\n";
    out << "required_info = " << fmt_double(sc.required_info_bits) << "\n";
    out << "[users]\n";
    for (const auto& u : sc.users)
        out << u.id << " " << role_name(u.role) << " " << fmt_double(u.pos.x) << " "
            << fmt_double(u.pos.y) << "\n";
    out << "[uavs]\n";
    for (const auto& v : sc.uavs)
        out << v.id << " " << fmt_double(v.dock.x) << " " << fmt_double(v.dock.y) << " "
            << fmt_double(v.dock.z) << "\n";
    out << "[demand]\n";
    out << sc.demand.n_content << " " << sc.demand.n_contents << "\n";
    for (int i = 0; i < sc.demand.n_content; ++i) {
        for (int j = 0; j < sc.demand.n_contents; ++j)
            out << (j ? " " : "") << int(sc.demand.at(i, j));
        out << "\n";
    }
    out << "[storage]\n";
    out << sc.storage.n_contents << " " << sc.storage.n_uavs << "\n";
    for (int j = 0; j < sc.storage.n_contents; ++j) {
        for (int k = 0; k < sc.storage.n_uavs; ++k)
            out << (k ? " " : "") << int(sc.storage.at(j, k));
        out << "\n";
    }
    return out.str();
}

inline Scenario scenario_from_text(const std::string& text) {
    auto sections = detail::split_sections(text, "uavslice-scenario");
    Scenario sc;

    std::string params_blob;
    for (const auto& line : detail::need_section(sections, "params")) params_blob += line + "\n";
    sc.params = load_config(params_blob).params;

    for (const auto& line : detail::need_section(sections, "meta")) {
        std::istringstream ls(line);
        std::string key, eq;
        ls >> key >> eq;
        if (eq != "=") throw std::runtime_error("scenario meta: expected key = value");
        if (key == "seed") {
            ls >> sc.seed;
        } else if (key == "required_info") {
            ls >> sc.required_info_bits;
        } else {
            throw std::runtime_error("scenario meta: unknown key " + key);
        }
        if (ls.fail()) throw std::runtime_error("scenario meta: bad value for " + key);
    }

    for (const auto& line : detail::need_section(sections, "users")) {
        std::istringstream ls(line);
        User u;
        std::string role;
        ls >> u.id >> role >> u.pos.x >> u.pos.y;
        if (ls.fail()) throw std::runtime_error("scenario users: bad line: " + line);
        if (role == "content") {
            u.role = Role::Content;
        } else if (role == "sensing") {
            u.role = Role::Sensing;
        } else if (role == "mec") {
            u.role = Role::Mec;
        } else {
            throw std::runtime_error("scenario users: unknown role " + role);
        }
        sc.users.push_back(u);
    }

    for (const auto& line : detail::need_section(sections, "uavs")) {
        std::istringstream ls(line);
        Uav v;
        ls >> v.id >> v.dock.x >> v.dock.y >> v.dock.z;
        if (ls.fail()) throw std::runtime_error("scenario uavs: bad line: " + line);
        sc.uavs.push_back(v);
    }

    auto parse_matrix = [&](const std::vector<std::string>& lines, auto& m, auto make) {
        if (lines.empty()) throw std::runtime_error("scenario: empty matrix section");
        std::istringstream hs(lines[0]);
        int rows = 0, cols = 0;
        hs >> rows >> cols;
        if (hs.fail() || rows < 0 || cols < 0)
            throw std::runtime_error("scenario: bad matrix header: " + lines[0]);
        m = make(rows, cols);
        if (static_cast<int>(lines.size()) != rows + 1)
            throw std::runtime_error("scenario: matrix row count mismatch");
        for (int r = 0; r < rows; ++r) {
            std::istringstream ls(lines[r + 1]);
            for (int c = 0; c < cols; ++c) {
                int v = 0;
                ls >> v;
                if (ls.fail() || (v != 0 && v != 1))
                    throw std::runtime_error("scenario: matrix entries must be 0/1");
                m.e[static_cast<std::size_t>(r) * cols + c] = static_cast<uint8_t>(v);
            }
        }
    };
    parse_matrix(detail::need_section(sections, "demand"), sc.demand,
                 [](int r, int c) { return DemandMatrix(r, c); });
    parse_matrix(detail::need_section(sections, "storage"), sc.storage,
                 [](int r, int c) { return StorageMatrix(r, c); });

    check_scenario(sc);
    return sc;
}

inline std::string solution_to_text(const SliceSolution& sol, const Scenario* sc = nullptr,
                                    const EnergyBreakdown* breakdown = nullptr) {
    using detail::fmt_double;
    std::ostringstream out;
    out << "uavslice-solution v1\n";
    out << "[dims]\n";
    out << "n_users = " << sol.association.n_users << "\n";
    out << "n_uavs = " << sol.association.n_uavs << "\n";
    out << "n_sensing = " << sol.activation.size() << "\n";
    out << "[deployed]\n";
    for (int k : sol.deployed) out << k << "\n";
    out << "[placements]\n";
    for (const auto& [k, pos] : sol.placements)
        out << k << " " << fmt_double(pos.x) << " " << fmt_double(pos.y) << " " << fmt_double(pos.z)
            << "\n";
    out << "[association]\n";
    for (int i = 0; i < sol.association.n_users; ++i)
        for (int k = 0; k < sol.association.n_uavs; ++k)
            if (sol.association.at(i, k)) out << i << " " << k << "\n";
    out << "[activation]\n";
    for (std::size_t s = 0; s < sol.activation.size(); ++s)
        if (sol.activation[s]) out << s << "\n";
    out << "[power]\n";
    for (const auto& [k, pa] : sol.power) {
        out << "rho " << k << " " << fmt_double(pa.rho_star) << " " << (pa.bisection_feasible ? 1 : 0)
            << "\n";
        for (const auto& [i, w] : pa.per_user_w) out << "p " << k << " " << i << " " << fmt_double(w) << "\n";
    }
    out << "[compute]\n";
    for (const auto& [k, ca] : sol.compute) {
        out << "lambda " << k << " " << fmt_double(ca.lambda_star) << " "
            << (ca.bisection_feasible ? 1 : 0) << "\n";
        for (const auto& [i, f] : ca.per_user_hz)
            out << "f " << k << " " << i << " " << fmt_double(f) << "\n";
    }
    out << "[objective]\n";
    out << "objective_j = " << fmt_double(sol.objective_j) << "\n";
    if (breakdown) {
        out << "# per-UAV energy (movement hover compute transmit), joules\n";
        for (const auto& [k, e] : breakdown->per_uav)
            out << "# uav " << k << ": " << fmt_double(e.movement_j) << " " << fmt_double(e.hover_j)
                << " " << fmt_double(e.compute_j) << " " << fmt_double(e.transmit_j) << "\n";
    }
    if (sc) {
        out << "# scenario seed " << sc->seed << "\n";
    }
    return out.str();
}

inline SliceSolution solution_from_text(const std::string& text) {
    auto sections = detail::split_sections(text, "uavslice-solution");
    SliceSolution sol;

    int n_users = -1, n_uavs = -1, n_sensing = -1;
    for (const auto& line : detail::need_section(sections, "dims")) {
        std::istringstream ls(line);
        std::string key, eq;
        int v = 0;
        ls >> key >> eq >> v;
        if (ls.fail() || eq != "=") throw std::runtime_error("solution dims: bad line: " + line);
        if (key == "n_users") {
            n_users = v;
        } else if (key == "n_uavs") {
            n_uavs = v;
        } else if (key == "n_sensing") {
            n_sensing = v;
        } else {
            throw std::runtime_error("solution dims: unknown key " + key);
        }
    }
    if (n_users <= 0 || n_uavs <= 0 || n_sensing < 0)
        throw std::runtime_error("solution dims: incomplete");
    sol.association = Association(n_users, n_uavs);
    sol.activation.assign(n_sensing, 0);

    for (const auto& line : detail::need_section(sections, "deployed")) {
        std::istringstream ls(line);
        int k = -1;
        ls >> k;
        if (ls.fail() || k < 0 || k >= n_uavs)
            throw std::runtime_error("solution deployed: bad UAV id: " + line);
        sol.deployed.insert(k);
    }
    for (const auto& line : detail::need_section(sections, "placements")) {
        std::istringstream ls(line);
        int k = -1;
        Point3 pos;
        ls >> k >> pos.x >> pos.y >> pos.z;
        if (ls.fail()) throw std::runtime_error("solution placements: bad line: " + line);
        sol.placements[k] = pos;
    }
    for (const auto& line : detail::need_section(sections, "association")) {
        std::istringstream ls(line);
        int i = -1, k = -1;
        ls >> i >> k;
        if (ls.fail() || i < 0 || i >= n_users || k < 0 || k >= n_uavs)
            throw std::runtime_error("solution association: bad pair: " + line);
        sol.association.at(i, k) = 1;
    }
    for (const auto& line : detail::need_section(sections, "activation")) {
        std::istringstream ls(line);
        int s = -1;
        ls >> s;
        if (ls.fail() || s < 0 || s >= n_sensing)
            throw std::runtime_error("solution activation: bad index: " + line);
        sol.activation[s] = 1;
    }
    for (const auto& line : detail::need_section(sections, "power")) {
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "rho") {
            int k;
            double rho;
            int feas;
            ls >> k >> rho >> feas;
            if (ls.fail()) throw std::runtime_error("solution power: bad rho line: " + line);
            sol.power[k].rho_star = rho;
            sol.power[k].bisection_feasible = feas != 0;
        } else if (tag == "p") {
            int k, i;
            double w;
            ls >> k >> i >> w;
            if (ls.fail()) throw std::runtime_error("solution power: bad p line: " + line);
            sol.power[k].per_user_w[i] = w;
        } else {
            throw std::runtime_error("solution power: unknown tag: " + line);
        }
    }
    for (const auto& line : detail::need_section(sections, "compute")) {
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "lambda") {
            int k;
            double lam;
            int feas;
            ls >> k >> lam >> feas;
            if (ls.fail()) throw std::runtime_error("solution compute: bad lambda line: " + line);
            sol.compute[k].lambda_star = lam;
            sol.compute[k].bisection_feasible = feas != 0;
        } else if (tag == "f") {
            int k, i;
            double f;
            ls >> k >> i >> f;
            if (ls.fail()) throw std::runtime_error("solution compute: bad f line: " + line);
            sol.compute[k].per_user_hz[i] = f;
        } else {
            throw std::runtime_error("solution compute: unknown tag: " + line);
        }
    }
    for (const auto& line : detail::need_section(sections, "objective")) {
        std::istringstream ls(line);
        std::string key, eq;
        ls >> key >> eq >> sol.objective_j;
        if (ls.fail() || key != "objective_j" || eq != "=")
            throw std::runtime_error("solution objective: bad line: " + line);
    }
    return sol;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace uavslice
