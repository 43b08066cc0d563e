#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uavslice/uavslice.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitConfigError = 2;

uavslice::Config load_config_file(const std::string& path) {
    if (path.empty()) return uavslice::load_config("");
    return uavslice::load_config(uavslice::read_file(path));
}

// "param=v1,v2,v3"
void parse_sweep_arg(const std::string& arg, uavslice::SweepSpec& spec) {
    auto eq = arg.find('=');
    if (eq == std::string::npos)
        throw uavslice::ConfigError("--sweep expects <param>=<v1,v2,...>");
    spec.parameter = uavslice::parse_sweep_parameter(arg.substr(0, eq));
    std::string rest = arg.substr(eq + 1);
    std::size_t pos = 0;
    while (pos <= rest.size()) {
        auto comma = rest.find(',', pos);
        std::string tok = rest.substr(pos, comma == std::string::npos ? std::string::npos
                                                                      : comma - pos);
        if (tok.empty()) throw uavslice::ConfigError("--sweep: empty value");
        spec.values.push_back(uavslice::detail::parse_number("sweep value", tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (spec.values.empty()) throw uavslice::ConfigError("--sweep: no values given");
}

// "N=7,U=3,Ns=3"
uavslice::ExhaustiveLimits parse_limits_arg(const std::string& arg) {
    uavslice::ExhaustiveLimits lim;
    if (arg.empty()) return lim;
    std::size_t pos = 0;
    while (pos <= arg.size()) {
        auto comma = arg.find(',', pos);
        std::string tok = arg.substr(pos, comma == std::string::npos ? std::string::npos
                                                                     : comma - pos);
        auto eq = tok.find('=');
        if (eq == std::string::npos)
            throw uavslice::ConfigError("--exhaustive-limits expects N=..,U=..,Ns=..");
        std::string key = tok.substr(0, eq);
        int value = uavslice::detail::parse_int(key, tok.substr(eq + 1));
        if (key == "N") {
            lim.max_users = value;
        } else if (key == "U") {
            lim.max_uavs = value;
        } else if (key == "Ns") {
            lim.max_sensing = value;
        } else {
            throw uavslice::ConfigError("--exhaustive-limits: unknown key " + key);
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return lim;
}

void print_solution_summary(const uavslice::SliceSolution& sol,
                            const uavslice::EnergyBreakdown& breakdown) {
    std::printf("deployed UAVs: %d, active sensing users: %d\n", sol.deployed_count(),
                sol.active_sensing_count());
    std::printf("%4s %10s %12s %12s %12s %12s %12s\n", "uav", "alt [m]", "move [J]", "hover [J]",
                "comp [J]", "tx [J]", "total [J]");
    for (const auto& [k, e] : breakdown.per_uav) {
        double alt = sol.placements.at(k).z;
        std::printf("%4d %10.1f %12.2f %12.2f %12.4f %12.2f %12.2f\n", k, alt, e.movement_j,
                    e.hover_j, e.compute_j, e.transmit_j, e.total());
    }
    std::printf("total energy: %.2f J\n", breakdown.total_j);
}

int cmd_run(const std::string& config_path, const std::string& sweep_arg,
            const std::string& solvers_arg, int trials, uint64_t seed, const std::string& out,
            const std::string& limits_arg, bool deterministic, int threads) {
    uavslice::Config base = load_config_file(config_path);
    uavslice::SweepSpec spec;
    parse_sweep_arg(sweep_arg, spec);
    spec.trials = trials;
    spec.seed = seed;
    spec.solvers.clear();
    std::size_t pos = 0;
    while (pos <= solvers_arg.size()) {
        auto comma = solvers_arg.find(',', pos);
        std::string tok = solvers_arg.substr(pos, comma == std::string::npos ? std::string::npos
                                                                             : comma - pos);
        if (!tok.empty()) spec.solvers.push_back(uavslice::parse_solver(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    spec.check();

    uavslice::ExhaustiveLimits limits = parse_limits_arg(limits_arg);
    auto results = uavslice::run_sweep(spec, base, limits, deterministic ? 1 : threads);
    uavslice::write_results(results, out, spec, deterministic);

    int feasible = 0;
    for (const auto& r : results) feasible += r.feasible ? 1 : 0;
    std::printf("%zu trials written to %s (aggregates: %s), %d feasible\n", results.size(),
                out.c_str(), uavslice::aggregate_path(out).c_str(), feasible);
    return feasible > 0 ? kExitOk : kExitInfeasible;
}

int cmd_validate(const std::string& solution_path, const std::string& scenario_path) {
    uavslice::Scenario sc = uavslice::scenario_from_text(uavslice::read_file(scenario_path));
    uavslice::SliceSolution sol =
        uavslice::solution_from_text(uavslice::read_file(solution_path));
    uavslice::ChannelModel ch(sc, uavslice::trial_channel_seed(sc.seed));
    uavslice::ValidationReport rep = uavslice::validate_solution(sol, sc, ch);
    if (rep.feasible()) {
        double recomputed = uavslice::total_energy(sol, sc, ch).total_j;
        std::printf("solution feasible; stored objective %.6g J, recomputed %.6g J\n",
                    sol.objective_j, recomputed);
        return kExitOk;
    }
    for (const auto& v : rep.violations)
        std::printf("violation [%s] %s (magnitude %.6g)\n", v.constraint.c_str(),
                    v.description.c_str(), v.magnitude);
    return kExitInfeasible;
}

int cmd_demo(uint64_t seed, const std::string& export_scenario,
             const std::string& export_solution) {
    uavslice::SystemParams params;
    uavslice::Scenario sc = uavslice::demo_scenario(params, seed);
    uavslice::ChannelModel ch(sc, uavslice::trial_channel_seed(sc.seed));
    uavslice::SliceSolution sol = uavslice::solve(sc, ch);
    uavslice::EnergyBreakdown breakdown = uavslice::total_energy(sol, sc, ch);

    std::printf("demo instance: %d users (%d content / %d sensing / %d mec), %d UAVs, %d contents\n",
                sc.n_users(), sc.n_content(), sc.n_sensing(), sc.n_mec(), sc.n_uavs(),
                sc.n_contents());
    std::printf("required information: %.3g of %.3g gatherable bits\n", sc.required_info_bits,
                sc.max_attainable_information());
    print_solution_summary(sol, breakdown);
    std::printf("content user 4 (item 1) served by UAV %d\n", sol.association.uav_of(4));

    if (!export_scenario.empty())
        uavslice::write_file(export_scenario, uavslice::scenario_to_text(sc));
    if (!export_solution.empty())
        uavslice::write_file(export_solution, uavslice::solution_to_text(sol, &sc, &breakdown));

    uavslice::ValidationReport rep = uavslice::validate_solution(sol, sc, ch);
    if (!rep.feasible()) {
        for (const auto& v : rep.violations)
            std::printf("violation [%s] %s\n", v.constraint.c_str(), v.description.c_str());
        return kExitInfeasible;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-UAV network slicing simulator and solvers"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run a Monte Carlo parameter sweep");
    std::string config_path, sweep_arg, out_path = "results.csv", limits_arg;
    std::string solvers_arg = "heuristic";
    int trials = 100, threads = 0;
    uint64_t seed = 1;
    bool deterministic = false;
    run->add_option("--config", config_path, "key = value config file");
    run->add_option("--sweep", sweep_arg, "<param>=<v1,v2,...>")->required();
    run->add_option("--solvers", solvers_arg, "comma-separated: heuristic,random,exhaustive,kmeans");
    run->add_option("--trials", trials, "Monte Carlo trials per sweep value");
    run->add_option("--seed", seed, "master seed");
    run->add_option("--out", out_path, "raw results CSV path");
    run->add_option("--exhaustive-limits", limits_arg, "N=7,U=3,Ns=3");
    run->add_flag("--deterministic", deterministic,
                  "single-threaded, wall times zeroed (byte-identical reruns)");
    run->add_option("--threads", threads, "worker threads (0 = hardware)");

    auto* validate = app.add_subcommand("validate", "check a solution file against a scenario");
    std::string solution_path, scenario_path;
    validate->add_option("--solution", solution_path, "solution file")->required();
    validate->add_option("--scenario", scenario_path, "scenario file")->required();

    auto* demo = app.add_subcommand("demo", "solve the built-in fixture instance");
    uint64_t demo_seed = 7;
    std::string export_scenario, export_solution;
    demo->add_option("--seed", demo_seed, "fixture position seed");
    demo->add_option("--export-scenario", export_scenario, "write the scenario file here");
    demo->add_option("--export-solution", export_solution, "write the solution file here");

    try {
        app.parse(argc, argv);
        if (run->parsed())
            return cmd_run(config_path, sweep_arg, solvers_arg, trials, seed, out_path, limits_arg,
                           deterministic, threads);
        if (validate->parsed()) return cmd_validate(solution_path, scenario_path);
        if (demo->parsed()) return cmd_demo(demo_seed, export_scenario, export_solution);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    } catch (const uavslice::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInfeasible;
    }
    return kExitOk;
}
