// This file is part of riscap, an ergodic-capacity analysis toolkit for
// reconfigurable-surface MIMO links.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "riscap/rng.hpp"

// Self-checks that pit every closed form against an independent route:
// direct determinant expansions, brute-force sampling oracles for the
// Wishart moments, and end-to-end capacity cross-checks. The `validate`
// command runs these; the acceptance harness runs them at full strength.
namespace riscap::validation {

struct SuiteResult {
    std::string name;
    bool pass = false;
    long trials = 0;      // Monte Carlo trials per estimate; 0 when not applicable
    double worst = 0.0;   // worst measured statistic across the suite
    double limit = 0.0;   // threshold `worst` must stay within
    std::string detail;   // human-readable summary of what was measured
};

struct SuiteOptions {
    std::uint64_t seed = 1;
    double trial_scale = 1.0;  // multiplies each suite's nominal trial count
    int threads = 1;
};

// Sampling oracles, independent of the closed forms: plain Gaussian draws
// and dense determinants, nothing shared with the moment formulas.
// Both return {mean, standard error}.
std::pair<double, double> oracle_det_moment(const Eigen::MatrixXcd& b_bar,
                                            const Eigen::MatrixXcd& omega, long trials,
                                            std::uint64_t seed, int threads = 1);
std::pair<double, double> oracle_logdet_moment(const Eigen::MatrixXcd& b_bar,
                                               const Eigen::MatrixXcd& omega, long trials,
                                               std::uint64_t seed, int threads = 1);

SuiteResult minor_expansion_suite(const SuiteOptions& options);        // det(I+lambda A) identity
SuiteResult det_moment_suite(const SuiteOptions& options);             // expected_det vs oracle
SuiteResult logdet_moment_suite(const SuiteOptions& options);          // expected_logdet vs oracle
SuiteResult eigenvalue_sandwich_suite(const SuiteOptions& options);    // det(XZX^H) bracketing
SuiteResult bound_ordering_suite(const SuiteOptions& options);         // lower <= MC <= upper
SuiteResult upper_tightness_suite(const SuiteOptions& options);        // Jensen gap on the reference setup
SuiteResult lower_high_snr_suite(const SuiteOptions& options);         // lower bound exact at high SNR
SuiteResult affine_growth_suite(const SuiteOptions& options);          // slope and affine tracking
SuiteResult offset_interval_suite(const SuiteOptions& options);        // MC offset inside closed-form bracket
SuiteResult large_surface_convergence_suite(const SuiteOptions& options);  // ECC -> limit as m grows
SuiteResult power_scaling_suite(const SuiteOptions& options);          // diverge/finite/vanish trichotomy
SuiteResult surface_scaling_offset_suite(const SuiteOptions& options); // -1 offset per doubling, path consistency
SuiteResult optimizer_sanity_suite(const SuiteOptions& options);       // GA beats random, matches 1-d grid

// The set behind `riscap validate`: every suite above, in order.
std::vector<SuiteResult> core_suites(const SuiteOptions& options);

// One formatted report line.
std::string format_suite_result(const SuiteResult& result);

}  // namespace riscap::validation
