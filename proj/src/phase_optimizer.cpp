// This file is part of riscap, an ergodic-capacity analysis toolkit for
// reconfigurable-surface MIMO links.
// SPDX-License-Identifier: Apache-2.0

#include "riscap/phase_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "detail_util.hpp"
#include "riscap/capacity_bounds.hpp"
#include "riscap/errors.hpp"

namespace riscap::phase_optimizer {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double wrap_angle(double t) {
    double u = std::fmod(t + kPi, 2.0 * kPi);
    if (u <= 0.0) u += 2.0 * kPi;
    return u - kPi;
}

int uniform_index(Rng& rng, int n) { return int(rng.uniform() * double(n)); }

// Fitness with the surface geometry folded in once. The covariance does not
// move with the phases, so only the mean is rebuilt per genome.
struct Evaluator {
    const channel_model::SystemConfig& config;
    channel_model::LosMatrices los;
    Eigen::MatrixXcd psi;
    double rho;

    Evaluator(const channel_model::SystemConfig& cfg, const channel_model::PathSet& paths,
              double rho_in)
        : config(cfg), los(channel_model::build_los_matrices(cfg, paths)), rho(rho_in) {
        psi = cfg.beta_t * cfg.beta_r * cfg.nlos_power_r() * los.t.adjoint() * los.t +
              cfg.beta_d * cfg.nlos_power_h() *
                  Eigen::MatrixXcd::Identity(cfg.n_tx, cfg.n_tx);
        psi = 0.5 * (psi + psi.adjoint()).eval();
    }

    double operator()(const std::vector<double>& genome) const {
        Eigen::VectorXcd phasors(Eigen::Index(genome.size()));
        for (std::size_t i = 0; i < genome.size(); ++i)
            phasors(Eigen::Index(i)) = std::complex<double>(std::cos(genome[i]), std::sin(genome[i]));

        capacity_bounds::CapacityQuery query;
        query.rho = rho;
        query.n_tx = config.n_tx;
        query.n_rx = config.n_rx;
        query.stats.g_bar =
            std::sqrt(config.beta_t * config.beta_r * config.los_power_r) * los.r_bar *
                phasors.asDiagonal() * los.t +
            std::sqrt(config.beta_d * config.los_power_h) * los.h_bar;
        query.stats.psi = psi;
        return capacity_bounds::upper_bound(query).value;
    }
};

}  // namespace

void GaParams::validate(int elements) const {
    if (elements < 1) throw DimensionError("phase search needs at least one surface element");
    if (population < 2) throw ConfigError("population must hold at least two genomes");
    if (generations < 1) throw ConfigError("need at least one generation");
    if (tournament < 1 || tournament > population)
        throw ConfigError("tournament size must lie in [1, population]");
    if (crossover_rate < 0.0 || crossover_rate > 1.0)
        throw ConfigError("crossover rate must lie in [0, 1]");
    if (mutation_rate > 1.0) throw ConfigError("mutation rate must not exceed 1");
    if (!(mutation_sigma > 0.0)) throw ConfigError("mutation step must be positive");
    if (elitism < 0 || elitism >= population)
        throw ConfigError("elitism must leave room for at least one child");
    if (threads < 1) throw ConfigError("thread count must be positive");
}

double objective(const channel_model::PhaseShifts& phases,
                 const channel_model::SystemConfig& config,
                 const channel_model::PathSet& paths, double rho) {
    channel_model::EffectiveStats stats = channel_model::effective_stats(config, paths, phases);
    capacity_bounds::CapacityQuery query;
    query.rho = rho;
    query.n_tx = config.n_tx;
    query.n_rx = config.n_rx;
    query.stats = std::move(stats);
    return capacity_bounds::upper_bound(query).value;
}

OptimizationTrace ga_optimize(const channel_model::SystemConfig& config,
                              const channel_model::PathSet& paths, double rho,
                              const GaParams& params) {
    config.validate();
    paths.validate(config);
    const int m = config.ris_elements();
    params.validate(m);
    if (!(rho >= 0.0)) throw DomainError("ga_optimize: SNR must be nonnegative");

    const double gene_rate =
        params.mutation_rate < 0.0 ? 1.0 / double(m) : params.mutation_rate;
    const Evaluator evaluate(config, paths, rho);

    Rng rng(params.seed);
    std::vector<std::vector<double>> population(params.population,
                                                std::vector<double>(std::size_t(m), 0.0));
    // genome 0 stays the all-zero vector as a known floor
    for (int i = 1; i < params.population; ++i)
        for (double& gene : population[i]) gene = rng.angle_signed();

    OptimizationTrace trace;
    trace.best_objective = kNegInf;
    trace.best_phases.theta = population[0];

    std::vector<double> fitness(params.population, kNegInf);
    const int workers = std::min(params.threads, params.population);

    for (int gen = 0; gen < params.generations; ++gen) {
        detail::run_workers(workers, [&](int w) {
            for (int i = w; i < params.population; i += workers) {
                try {
                    fitness[i] = evaluate(population[i]);
                } catch (const Error&) {
                    fitness[i] = kNegInf;
                }
            }
        });

        double gen_sum = 0.0;
        for (int i = 0; i < params.population; ++i) {
            gen_sum += fitness[i];
            if (fitness[i] > trace.best_objective) {
                trace.best_objective = fitness[i];
                trace.best_phases.theta = population[i];
            }
        }
        trace.history.push_back({trace.best_objective, gen_sum / double(params.population)});
        if (gen + 1 == params.generations) break;

        std::vector<int> order(params.population);
        for (int i = 0; i < params.population; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return fitness[a] > fitness[b]; });

        std::vector<std::vector<double>> next;
        next.reserve(params.population);
        for (int e = 0; e < params.elitism; ++e) next.push_back(population[order[e]]);

        auto tournament_pick = [&]() -> const std::vector<double>& {
            int best = uniform_index(rng, params.population);
            for (int t = 1; t < params.tournament; ++t) {
                int cand = uniform_index(rng, params.population);
                if (fitness[cand] > fitness[best]) best = cand;
            }
            return population[best];
        };

        while (int(next.size()) < params.population) {
            const std::vector<double>& pa = tournament_pick();
            const std::vector<double>& pb = tournament_pick();
            std::vector<double> child(pa);
            if (rng.uniform() < params.crossover_rate)
                for (int g = 0; g < m; ++g)
                    if (rng.uniform() < 0.5) child[std::size_t(g)] = pb[std::size_t(g)];
            for (int g = 0; g < m; ++g)
                if (rng.uniform() < gene_rate)
                    child[std::size_t(g)] =
                        wrap_angle(child[std::size_t(g)] + params.mutation_sigma * rng.normal());
            next.push_back(std::move(child));
        }
        population = std::move(next);
    }

    if (trace.best_objective == kNegInf)
        throw ConvergenceError("phase search: every genome failed to evaluate", 0.0);
    return trace;
}

channel_model::PhaseShifts baseline_phases(BaselineKind kind, int m, Rng& rng) {
    if (kind == BaselineKind::zero) return channel_model::PhaseShifts::zero(m);
    return channel_model::PhaseShifts::random(m, rng);
}

}  // namespace riscap::phase_optimizer
