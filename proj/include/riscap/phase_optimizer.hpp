// This file is part of riscap, an ergodic-capacity analysis toolkit for
// reconfigurable-surface MIMO links.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <numbers>
#include <vector>

#include "riscap/channel_model.hpp"

// Real-coded genetic search over the surface phase vector. The fitness is
// the closed-form capacity upper bound, which depends on the phases only
// through the channel mean (the row covariance is phase-independent), so
// each evaluation is cheap and noise-free.
namespace riscap::phase_optimizer {

struct GaParams {
    int population = 50;
    int generations = 200;
    int tournament = 3;          // candidates per parent selection
    double crossover_rate = 0.9;
    double mutation_rate = -1.0;  // per-gene probability; negative means 1/elements
    double mutation_sigma = 0.1 * std::numbers::pi;
    int elitism = 2;              // top genomes copied unchanged
    std::uint64_t seed = 1;
    int threads = 1;              // fitness evaluation only; never affects the result

    void validate(int elements) const;
};

struct GenerationStat {
    double best;  // best objective seen so far (monotone nondecreasing)
    double mean;  // population mean this generation
};

struct OptimizationTrace {
    channel_model::PhaseShifts best_phases;
    double best_objective = 0.0;
    std::vector<GenerationStat> history;  // one entry per generation
};

// Capacity upper bound at the given phases; recomputes the channel mean and
// reuses the phase-independent covariance structure internally.
double objective(const channel_model::PhaseShifts& phases,
                 const channel_model::SystemConfig& config,
                 const channel_model::PathSet& paths, double rho);

// Tournament selection, uniform crossover, per-gene Gaussian mutation with
// wrap onto (-pi, pi], elitism. All random decisions are drawn on the
// coordinator stream, so a fixed seed reproduces the trace exactly no matter
// how fitness evaluation is parallelized. A failing objective marks the
// genome -inf and the run continues.
OptimizationTrace ga_optimize(const channel_model::SystemConfig& config,
                              const channel_model::PathSet& paths, double rho,
                              const GaParams& params);

enum class BaselineKind { zero, random };

channel_model::PhaseShifts baseline_phases(BaselineKind kind, int m, Rng& rng);

}  // namespace riscap::phase_optimizer
