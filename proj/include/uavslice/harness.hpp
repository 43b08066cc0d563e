#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "uavslice/baselines.hpp"
#include "uavslice/channel.hpp"
#include "uavslice/config.hpp"
#include "uavslice/io.hpp"
#include "uavslice/scenario.hpp"
#include "uavslice/slicer.hpp"

namespace uavslice {

enum class SweepParameter {
    ContentSize,
    CorrelationExtent,
    UserCount,
    UavCount,
    ComputeSpeed,
    DeployedK,
    StorageFraction,
    RequiredInfo,
    PathlossExp,
};

inline const char* sweep_parameter_name(SweepParameter p) {
    switch (p) {
        case SweepParameter::ContentSize: return "content_size";
        case SweepParameter::CorrelationExtent: return "correlation_extent";
        case SweepParameter::UserCount: return "user_count";
        case SweepParameter::UavCount: return "uav_count";
        case SweepParameter::ComputeSpeed: return "compute_speed";
        case SweepParameter::DeployedK: return "deployed_k";
        case SweepParameter::StorageFraction: return "storage_fraction";
        case SweepParameter::RequiredInfo: return "required_info";
        case SweepParameter::PathlossExp: return "pathloss_exp";
    }
    return "?";
}

inline SweepParameter parse_sweep_parameter(const std::string& s) {
    for (auto p : {SweepParameter::ContentSize, SweepParameter::CorrelationExtent,
                   SweepParameter::UserCount, SweepParameter::UavCount,
                   SweepParameter::ComputeSpeed, SweepParameter::DeployedK,
                   SweepParameter::StorageFraction, SweepParameter::RequiredInfo,
                   SweepParameter::PathlossExp})
        if (s == sweep_parameter_name(p)) return p;
    throw ConfigError("unknown sweep parameter: " + s);
}

enum class SolverId { Heuristic, Random, Exhaustive, Kmeans };

inline const char* solver_name(SolverId s) {
    switch (s) {
        case SolverId::Heuristic: return "heuristic";
        case SolverId::Random: return "random";
        case SolverId::Exhaustive: return "exhaustive";
        case SolverId::Kmeans: return "kmeans";
    }
    return "?";
}

inline SolverId parse_solver(const std::string& s) {
    for (auto id : {SolverId::Heuristic, SolverId::Random, SolverId::Exhaustive, SolverId::Kmeans})
        if (s == solver_name(id)) return id;
    throw ConfigError("unknown solver: " + s);
}

struct SweepSpec {
    SweepParameter parameter = SweepParameter::ContentSize;
    std::vector<double> values;
    int trials = 100;
    std::vector<SolverId> solvers = {SolverId::Heuristic};
    uint64_t seed = 1;

    void check() const {
        if (values.empty()) throw ConfigError("sweep: needs at least one value");
        if (trials < 1) throw ConfigError("sweep: trials must be >= 1");
        if (solvers.empty()) throw ConfigError("sweep: needs at least one solver");
    }
};

struct TrialResult {
    double sweep_value = 0.0;
    SolverId solver = SolverId::Heuristic;
    int trial = 0;
    double objective_j = std::numeric_limits<double>::quiet_NaN();
    int deployed_k = 0;
    int active_sensing = 0;
    bool feasible = false;
    double wall_time_s = 0.0;
};

// Applies one sweep value to the base configuration.
inline Config apply_sweep_value(const Config& base, SweepParameter param, double value) {
    Config cfg = base;
    auto as_count = [&](const char* what) {
        int v = static_cast<int>(std::round(value));
        if (v < 1 || std::abs(value - v) > 1e-9)
            throw ConfigError(std::string("sweep: ") + what + " must be a positive integer");
        return v;
    };
    switch (param) {
        case SweepParameter::ContentSize: cfg.params.content_size_bits = value; break;
        case SweepParameter::CorrelationExtent: cfg.params.correlation_extent_m = value; break;
        case SweepParameter::UserCount: split_user_roles(as_count("user_count"), cfg.counts); break;
        case SweepParameter::UavCount: cfg.counts.n_uavs = as_count("uav_count"); break;
        case SweepParameter::ComputeSpeed: cfg.params.uav_compute_hz = value; break;
        case SweepParameter::DeployedK: cfg.counts.n_uavs = as_count("deployed_k"); break;
        case SweepParameter::StorageFraction: cfg.counts.storage_fraction = value; break;
        case SweepParameter::RequiredInfo:
            cfg.params.required_info_frac = value;
            cfg.params.required_info_bits = std::numeric_limits<double>::quiet_NaN();
            break;
        case SweepParameter::PathlossExp: cfg.params.pathloss_exp = value; break;
    }
    return cfg;
}

// Channel fading is redrawn per trial; every solver of the trial sees the
// same realization.
inline uint64_t trial_channel_seed(uint64_t scenario_seed) {
    return mix_seed(scenario_seed, 0xfadedULL);
}

inline TrialResult run_trial(const Scenario& sc, SolverId solver,
                             const ExhaustiveLimits& limits = {}) {
    TrialResult r;
    r.solver = solver;
    auto t0 = std::chrono::steady_clock::now();
    try {
        ChannelModel ch(sc, trial_channel_seed(sc.seed));
        SliceSolution sol;
        switch (solver) {
            case SolverId::Heuristic: sol = solve(sc, ch); break;
            case SolverId::Random: sol = random_solution(sc, ch, mix_seed(sc.seed, 0x3a2dULL)); break;
            case SolverId::Exhaustive: sol = exhaustive_search(sc, ch, limits); break;
            case SolverId::Kmeans:
                sol = kmeans_solution(sc, ch, sc.n_uavs(), mix_seed(sc.seed, 0x63a5ULL));
                break;
        }
        r.feasible = validate_solution(sol, sc, ch).feasible();
        r.objective_j = sol.objective_j;
        r.deployed_k = sol.deployed_count();
        r.active_sensing = sol.active_sensing_count();
    } catch (const std::exception&) {
        r.feasible = false;  // solver refusals and infeasibilities are data, not crashes
    }
    auto t1 = std::chrono::steady_clock::now();
    r.wall_time_s = std::chrono::duration<double>(t1 - t0).count();
    return r;
}

inline uint64_t trial_scenario_seed(uint64_t sweep_seed, std::size_t value_idx, int trial) {
    return mix_seed(sweep_seed, static_cast<uint64_t>(value_idx) + 1,
                    static_cast<uint64_t>(trial) + 1);
}

// Runs the full grid (values x trials x solvers). Trials execute on a thread
// pool; the returned order is deterministic: by value, then trial, then
// solver.
inline std::vector<TrialResult> run_sweep(const SweepSpec& spec, const Config& base,
                                          const ExhaustiveLimits& limits = {}, int threads = 0) {
    spec.check();
    const int per_trial = static_cast<int>(spec.solvers.size());
    const std::size_t jobs = spec.values.size() * static_cast<std::size_t>(spec.trials);
    std::vector<TrialResult> results(jobs * per_trial);

    auto run_job = [&](std::size_t job) {
        std::size_t value_idx = job / spec.trials;
        int trial = static_cast<int>(job % spec.trials);
        double value = spec.values[value_idx];
        TrialResult* slot = &results[job * per_trial];
        uint64_t seed = trial_scenario_seed(spec.seed, value_idx, trial);
        bool generated = false;
        Scenario sc;
        try {
            Config cfg = apply_sweep_value(base, spec.parameter, value);
            sc = generate_scenario(cfg.params, cfg.counts, seed);
            generated = true;
        } catch (const std::exception&) {
            // e.g. storage fraction too small for this UAV count
        }
        for (int s = 0; s < per_trial; ++s) {
            TrialResult r;
            if (generated) r = run_trial(sc, spec.solvers[s], limits);
            r.solver = spec.solvers[s];
            r.sweep_value = value;
            r.trial = trial;
            slot[s] = r;
        }
    };

    int nthreads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (nthreads <= 1 || jobs <= 1) {
        for (std::size_t j = 0; j < jobs; ++j) run_job(j);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back([&] {
                for (;;) {
                    std::size_t j = next.fetch_add(1);
                    if (j >= jobs) return;
                    run_job(j);
                }
            });
        for (auto& t : pool) t.join();
    }
    return results;
}

struct AggregateRow {
    double sweep_value = 0.0;
    SolverId solver = SolverId::Heuristic;
    int trials = 0;
    int feasible_trials = 0;
    double mean_objective_j = std::numeric_limits<double>::quiet_NaN();
    double stddev_objective_j = 0.0;
    double mean_deployed_k = 0.0;
    double mean_active_sensing = 0.0;

    // standard error of the mean objective over the feasible trials
    double stderr_objective_j() const {
        return feasible_trials > 0 ? stddev_objective_j / std::sqrt(double(feasible_trials)) : 0.0;
    }
};

// Mean/stddev objective per (sweep value, solver), feasible trials only.
inline std::vector<AggregateRow> aggregate_results(const std::vector<TrialResult>& results) {
    std::vector<AggregateRow> rows;
    auto find_row = [&](double value, SolverId solver) -> AggregateRow& {
        for (auto& r : rows)
            if (r.sweep_value == value && r.solver == solver) return r;
        rows.push_back({value, solver});
        return rows.back();
    };
    for (const auto& t : results) {
        AggregateRow& r = find_row(t.sweep_value, t.solver);
        ++r.trials;
        if (t.feasible) ++r.feasible_trials;
    }
    // two-pass mean/stddev
    for (auto& r : rows) {
        double sum = 0.0, sum_k = 0.0, sum_s = 0.0;
        for (const auto& t : results)
            if (t.sweep_value == r.sweep_value && t.solver == r.solver && t.feasible) {
                sum += t.objective_j;
                sum_k += t.deployed_k;
                sum_s += t.active_sensing;
            }
        if (r.feasible_trials == 0) continue;
        r.mean_objective_j = sum / r.feasible_trials;
        r.mean_deployed_k = sum_k / r.feasible_trials;
        r.mean_active_sensing = sum_s / r.feasible_trials;
        double ss = 0.0;
        for (const auto& t : results)
            if (t.sweep_value == r.sweep_value && t.solver == r.solver && t.feasible)
                ss += (t.objective_j - r.mean_objective_j) * (t.objective_j - r.mean_objective_j);
        r.stddev_objective_j = r.feasible_trials > 1 ? std::sqrt(ss / (r.feasible_trials - 1)) : 0.0;
    }
    return rows;
}

inline std::string aggregate_path(const std::string& raw_path) {
    std::size_t dot = raw_path.rfind('.');
    if (dot == std::string::npos || raw_path.find('/', dot) != std::string::npos)
        return raw_path + "_agg";
    return raw_path.substr(0, dot) + "_agg" + raw_path.substr(dot);
}

// Raw CSV plus the aggregate companion. With zero_wall_time the wall-time
// column is written as 0 so reruns are byte-identical.
inline void write_results(const std::vector<TrialResult>& results, const std::string& path,
                          const SweepSpec& spec, bool zero_wall_time = false) {
    using detail::fmt_double;
    const char* pname = sweep_parameter_name(spec.parameter);
    std::string raw = "sweep_param,sweep_value,solver,trial,objective_j,deployed_k,active_sensing,"
                      "feasible,wall_time_s\n";
    for (const auto& t : results) {
        raw += pname;
        raw += ',';
        raw += fmt_double(t.sweep_value);
        raw += ',';
        raw += solver_name(t.solver);
        raw += ',';
        raw += std::to_string(t.trial);
        raw += ',';
        raw += t.feasible ? fmt_double(t.objective_j) : "nan";
        raw += ',';
        raw += std::to_string(t.deployed_k);
        raw += ',';
        raw += std::to_string(t.active_sensing);
        raw += ',';
        raw += t.feasible ? '1' : '0';
        raw += ',';
        raw += fmt_double(zero_wall_time ? 0.0 : t.wall_time_s);
        raw += '\n';
    }
    write_file(path, raw);

    std::string agg = "sweep_param,sweep_value,solver,trials,feasible_trials,mean_objective_j,"
                      "stddev_objective_j,mean_deployed_k,mean_active_sensing\n";
    for (const auto& r : aggregate_results(results)) {
        agg += pname;
        agg += ',';
        agg += fmt_double(r.sweep_value);
        agg += ',';
        agg += solver_name(r.solver);
        agg += ',';
        agg += std::to_string(r.trials);
        agg += ',';
        agg += std::to_string(r.feasible_trials);
        agg += ',';
        agg += r.feasible_trials > 0 ? fmt_double(r.mean_objective_j) : "nan";
        agg += ',';
        agg += fmt_double(r.stddev_objective_j);
        agg += ',';
        agg += fmt_double(r.mean_deployed_k);
        agg += ',';
        agg += fmt_double(r.mean_active_sensing);
        agg += '\n';
    }
    write_file(aggregate_path(path), agg);
}

}  // namespace uavslice
