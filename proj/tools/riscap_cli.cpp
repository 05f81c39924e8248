// This file is part of riscap, an ergodic-capacity analysis toolkit for
// reconfigurable-surface MIMO links.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "riscap/asymptotics.hpp"
#include "riscap/capacity_bounds.hpp"
#include "riscap/channel_model.hpp"
#include "riscap/config_io.hpp"
#include "riscap/errors.hpp"
#include "riscap/matrix_analysis.hpp"
#include "riscap/phase_optimizer.hpp"
#include "riscap/validation.hpp"

namespace {

using riscap::Rng;
namespace cm = riscap::channel_model;
namespace cb = riscap::capacity_bounds;
namespace io = riscap::config_io;

struct CliArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<long> trials;
    std::optional<std::string> out;
    std::optional<int> threads;
    std::string mode = "a";
    bool inject_j_bug = false;
};

io::ExperimentConfig assemble_config(const CliArgs& args) {
    io::ExperimentConfig cfg;
    if (!args.config_path.empty()) cfg = io::load_experiment_config(args.config_path);
    if (args.seed) cfg.seed = *args.seed;
    if (args.trials) cfg.mc_trials = *args.trials;
    if (args.out) cfg.output_path = *args.out;
    if (args.threads) cfg.threads = *args.threads;
    cfg.validate();
    return cfg;
}

void echo_provenance(io::CsvWriter& csv, const io::ExperimentConfig& cfg,
                     const cm::PathSet& paths) {
    for (const auto& [key, value] : io::config_entries(cfg)) csv.comment(key + " = " + value);
    for (const auto& [key, value] : io::path_entries(paths)) csv.comment(key + " = " + value);
}

void echo_phases(io::CsvWriter& csv, const cm::PhaseShifts& phases) {
    for (std::size_t i = 0; i < phases.theta.size(); ++i)
        csv.comment("phase_" + std::to_string(i) + " = " +
                    io::format_number(phases.theta[i], 17));
}

void require_writable(const io::CsvWriter& csv, const std::string& path) {
    if (!csv.good()) throw riscap::Error("cannot write output file: " + path);
}

// Phase configuration for one system per the configured mode. The `optimized`
// mode runs the genetic search with a seed derived from the master seed.
cm::PhaseShifts select_phases(const io::ExperimentConfig& cfg, const cm::SystemConfig& system,
                              const cm::PathSet& paths, double rho, std::uint64_t salt) {
    const int m = system.ris_elements();
    switch (cfg.phase_mode) {
        case io::PhaseMode::zero:
            return cm::PhaseShifts::zero(m);
        case io::PhaseMode::random: {
            Rng rng(Rng::derive(cfg.seed, salt));
            return cm::PhaseShifts::random(m, rng);
        }
        case io::PhaseMode::optimized: {
            riscap::phase_optimizer::GaParams ga = cfg.ga;
            ga.seed = Rng::derive(cfg.seed, salt);
            ga.threads = cfg.threads;
            return riscap::phase_optimizer::ga_optimize(system, paths, rho, ga).best_phases;
        }
    }
    throw riscap::ConfigError("unknown phase mode");
}

int cmd_sweep_snr(const io::ExperimentConfig& cfg) {
    Rng setup(Rng::derive(cfg.seed, 1));
    cm::PathSet paths = cm::sample_path_set(cfg.system, setup);
    double rho_ref = std::pow(10.0, cfg.res_snr_db / 10.0);
    cm::PhaseShifts phases = select_phases(cfg, cfg.system, paths, rho_ref, 2);
    cm::EffectiveStats stats = cm::effective_stats(cfg.system, paths, phases);

    riscap::asymptotics::AsymptoticsParams ap;
    ap.offset_mc_trials = cfg.offset_mc_trials;
    ap.seed = Rng::derive(cfg.seed, 3);
    ap.threads = cfg.threads;
    riscap::asymptotics::HighSnrExpansion exp =
        riscap::asymptotics::high_snr_expansion(stats, cfg.system.n_tx, cfg.system.n_rx, ap);
    // Transmitter-dominant systems only bracket the power offset; the sweep
    // reports the affine line with the bracket's upper end.
    double offset = exp.offset_bounds ? exp.offset_bounds->second : exp.offset;

    io::CsvWriter csv(cfg.output_path);
    require_writable(csv, cfg.output_path);
    csv.comment("command = sweep-snr");
    echo_provenance(csv, cfg, paths);
    echo_phases(csv, phases);
    csv.header({"rho_db", "mc", "upper", "lower", "asymptote"});
    for (std::size_t i = 0; i < cfg.snr_grid_db.size(); ++i) {
        cb::CapacityQuery query;
        query.rho = std::pow(10.0, cfg.snr_grid_db[i] / 10.0);
        query.stats = stats;
        query.n_tx = cfg.system.n_tx;
        query.n_rx = cfg.system.n_rx;
        query.mc_trials = cfg.mc_trials;
        query.seed = Rng::derive(cfg.seed, 100 + i);
        cb::CapacityResult mc = cb::mc_ecc(query, cfg.threads);
        auto [upper, lower] = cb::bound_pair(query);
        double asymptote = exp.slope * (std::log2(query.rho) - offset);
        csv.row({io::CsvWriter::cell(cfg.snr_grid_db[i]), io::CsvWriter::cell(mc.value),
                 io::CsvWriter::cell(upper.value), io::CsvWriter::cell(lower.value),
                 io::CsvWriter::cell(asymptote)});
    }
    require_writable(csv, cfg.output_path);
    return 0;
}

int cmd_sweep_res(const io::ExperimentConfig& cfg, const std::string& mode) {
    for (long m : cfg.m_grid)
        if (m % cfg.system.m_h != 0)
            throw riscap::ConfigError("element grid entry " + std::to_string(m) +
                                      " is not divisible by the row width " +
                                      std::to_string(cfg.system.m_h));

    Rng setup(Rng::derive(cfg.seed, 1));
    cm::PathSet paths = cm::sample_path_set(cfg.system, setup);

    io::CsvWriter csv(cfg.output_path);
    require_writable(csv, cfg.output_path);
    csv.comment("command = sweep-res (mode " + mode + ")");
    echo_provenance(csv, cfg, paths);

    if (mode == "a") {
        const double rho = std::pow(10.0, cfg.res_snr_db / 10.0);
        csv.header({"m", "ecc_optimized", "ecc_random", "ecc_zero"});
        for (std::size_t i = 0; i < cfg.m_grid.size(); ++i) {
            cm::SystemConfig sys = cfg.system;
            sys.m_v = int(cfg.m_grid[i] / sys.m_h);

            riscap::phase_optimizer::GaParams ga = cfg.ga;
            ga.seed = Rng::derive(cfg.seed, 10 + i);
            ga.threads = cfg.threads;
            cm::PhaseShifts best =
                riscap::phase_optimizer::ga_optimize(sys, paths, rho, ga).best_phases;

            cb::CapacityQuery query;
            query.rho = rho;
            query.n_tx = sys.n_tx;
            query.n_rx = sys.n_rx;
            query.mc_trials = cfg.mc_trials;

            query.stats = cm::effective_stats(sys, paths, best);
            query.seed = Rng::derive(cfg.seed, 100 + i);
            double ecc_optimized = cb::mc_ecc(query, cfg.threads).value;

            double ecc_random =
                cb::mc_ecc_random_phases(sys, paths, rho, cfg.mc_trials,
                                         Rng::derive(cfg.seed, 200 + i), cfg.threads)
                    .value;

            query.stats = cm::effective_stats(sys, paths, cm::PhaseShifts::zero(sys.ris_elements()));
            query.seed = Rng::derive(cfg.seed, 300 + i);
            double ecc_zero = cb::mc_ecc(query, cfg.threads).value;

            csv.row({io::CsvWriter::cell(cfg.m_grid[i]), io::CsvWriter::cell(ecc_optimized),
                     io::CsvWriter::cell(ecc_random), io::CsvWriter::cell(ecc_zero)});
        }
    } else {
        // Total energy held fixed while per-element power shrinks as 1/m, so
        // the capacity approaches an element-count-independent limit.
        const double energy = std::pow(10.0, cfg.res_snr_db / 10.0);
        Eigen::MatrixXcd ups = cm::upsilon(cfg.system, paths);
        double limit_value = riscap::asymptotics::large_m_capacity(
                                 ups, cfg.system.n_rx, energy, 1, cfg.offset_mc_trials,
                                 Rng::derive(cfg.seed, 2), cfg.threads)
                                 .value;

        cb::CapacityQuery limit_query;
        limit_query.rho = energy;
        limit_query.stats.g_bar = Eigen::MatrixXcd::Zero(cfg.system.n_rx, cfg.system.n_tx);
        limit_query.stats.psi = ups;
        limit_query.n_tx = cfg.system.n_tx;
        limit_query.n_rx = cfg.system.n_rx;
        double limit_upper = cb::upper_bound(limit_query).value;

        csv.header({"m", "ecc", "asymptote", "asymptote_upper"});
        for (std::size_t i = 0; i < cfg.m_grid.size(); ++i) {
            cm::SystemConfig sys = cfg.system;
            sys.m_v = int(cfg.m_grid[i] / sys.m_h);
            double ecc = cb::mc_ecc_random_phases(sys, paths, energy / double(cfg.m_grid[i]),
                                                  cfg.mc_trials, Rng::derive(cfg.seed, 100 + i),
                                                  cfg.threads)
                             .value;
            csv.row({io::CsvWriter::cell(cfg.m_grid[i]), io::CsvWriter::cell(ecc),
                     io::CsvWriter::cell(limit_value), io::CsvWriter::cell(limit_upper)});
        }
    }
    require_writable(csv, cfg.output_path);
    return 0;
}

int cmd_validate(const io::ExperimentConfig& cfg, bool inject, std::optional<long> trials) {
    if (inject) riscap::matrix_analysis::detail::j_scale_hook = 1.01;

    riscap::validation::SuiteOptions opts;
    opts.seed = cfg.seed;
    opts.trial_scale = trials ? double(*trials) / 1e6 : 1.0;
    opts.threads = cfg.threads;

    using Suite = riscap::validation::SuiteResult (*)(const riscap::validation::SuiteOptions&);
    struct Entry {
        const char* name;
        Suite fn;
    };
    const Entry suites[] = {
        {"minor-expansion-identity", riscap::validation::minor_expansion_suite},
        {"det-moment-oracle", riscap::validation::det_moment_suite},
        {"logdet-moment-oracle", riscap::validation::logdet_moment_suite},
        {"eigenvalue-sandwich", riscap::validation::eigenvalue_sandwich_suite},
        {"bound-ordering", riscap::validation::bound_ordering_suite},
        {"upper-bound-tightness", riscap::validation::upper_tightness_suite},
        {"lower-bound-high-snr", riscap::validation::lower_high_snr_suite},
        {"affine-growth", riscap::validation::affine_growth_suite},
        {"offset-interval", riscap::validation::offset_interval_suite},
        {"large-surface-convergence", riscap::validation::large_surface_convergence_suite},
        {"power-scaling", riscap::validation::power_scaling_suite},
        {"surface-doubling-offset", riscap::validation::surface_scaling_offset_suite},
        {"optimizer-sanity", riscap::validation::optimizer_sanity_suite},
    };
    int passed = 0, total = 0;
    for (const Entry& entry : suites) {
        riscap::validation::SuiteResult result;
        try {
            result = entry.fn(opts);
        } catch (const riscap::Error& e) {
            result.name = entry.name;
            result.pass = false;
            result.detail = std::string("aborted: ") + e.what();
        }
        std::cout << riscap::validation::format_suite_result(result) << "\n";
        ++total;
        if (result.pass) ++passed;
    }
    std::cout << passed << "/" << total << " suites passed\n";
    return passed == total ? 0 : 1;
}

int cmd_optimize(const io::ExperimentConfig& cfg) {
    Rng setup(Rng::derive(cfg.seed, 1));
    cm::PathSet paths = cm::sample_path_set(cfg.system, setup);
    double rho = std::pow(10.0, cfg.res_snr_db / 10.0);

    riscap::phase_optimizer::GaParams ga = cfg.ga;
    ga.seed = Rng::derive(cfg.seed, 2);
    ga.threads = cfg.threads;
    riscap::phase_optimizer::OptimizationTrace trace =
        riscap::phase_optimizer::ga_optimize(cfg.system, paths, rho, ga);

    io::CsvWriter csv(cfg.output_path);
    require_writable(csv, cfg.output_path);
    csv.comment("command = optimize");
    echo_provenance(csv, cfg, paths);
    csv.header({"generation", "best", "mean"});
    for (std::size_t g = 0; g < trace.history.size(); ++g)
        csv.row({io::CsvWriter::cell(long(g)), io::CsvWriter::cell(trace.history[g].best),
                 io::CsvWriter::cell(trace.history[g].mean)});
    require_writable(csv, cfg.output_path);

    std::string phases_path = cfg.output_path + ".phases";
    std::ofstream phases_out(phases_path);
    for (double theta : trace.best_phases.theta)
        phases_out << io::format_number(theta, 17) << "\n";
    if (!phases_out.good()) throw riscap::Error("cannot write output file: " + phases_path);
    return 0;
}

void add_common_options(CLI::App* sub, CliArgs& args, bool with_out) {
    sub->add_option("--config", args.config_path, "experiment config file (key = value lines)");
    sub->add_option("--seed", args.seed, "master seed override");
    sub->add_option("--trials", args.trials, "Monte Carlo trials override");
    sub->add_option("--threads", args.threads, "worker thread count");
    if (with_out) sub->add_option("--out", args.out, "output CSV path");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"riscap: ergodic-capacity analysis for reconfigurable-surface MIMO links"};
    app.require_subcommand(1);
    CliArgs args;

    CLI::App* sweep_snr = app.add_subcommand(
        "sweep-snr", "capacity estimate, closed-form bounds, and high-SNR line over the SNR grid");
    add_common_options(sweep_snr, args, true);

    CLI::App* sweep_res = app.add_subcommand(
        "sweep-res", "capacity over the element-count grid; mode a compares phase choices at "
                     "fixed SNR, mode b tracks the fixed-energy limit");
    add_common_options(sweep_res, args, true);
    sweep_res->add_option("--mode", args.mode, "a: phase comparison, b: fixed-energy limit")
        ->check(CLI::IsMember({"a", "b"}));

    CLI::App* validate = app.add_subcommand(
        "validate", "run the oracle self-check suites; --trials sets the per-suite sampling "
                    "oracle size (default one million)");
    add_common_options(validate, args, false);
    validate->add_flag("--inject-j-bug", args.inject_j_bug)->group("");

    CLI::App* optimize = app.add_subcommand(
        "optimize", "genetic phase search; writes the trace CSV and a .phases vector");
    add_common_options(optimize, args, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        io::ExperimentConfig cfg = assemble_config(args);
        if (sweep_snr->parsed()) return cmd_sweep_snr(cfg);
        if (sweep_res->parsed()) return cmd_sweep_res(cfg, args.mode);
        if (validate->parsed()) return cmd_validate(cfg, args.inject_j_bug, args.trials);
        return cmd_optimize(cfg);
    } catch (const riscap::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const riscap::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
