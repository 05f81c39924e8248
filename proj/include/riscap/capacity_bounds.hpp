// This file is part of riscap, an ergodic-capacity analysis toolkit for
// reconfigurable-surface MIMO links.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "riscap/channel_model.hpp"
#include "riscap/matrix_analysis.hpp"

// Ergodic capacity of G under an equal-power transmitter: the Monte Carlo
// reference E log2 det(I + rho/n_tx G G^H) plus closed-form upper (Jensen on
// determinant moments) and lower (log-determinant moments) bounds.
namespace riscap::capacity_bounds {

enum class BoundKind {
    mc,                 // Monte Carlo estimate
    upper_rx_dominant,  // Jensen bound, receiver has at least as many antennas
    upper_tx_dominant,  // Jensen bound truncated by the receiver rank
    lower_rx_dominant,  // exponent bound through the transmit-side Gram matrix
    lower_tx_dominant,  // exponent bound through the receive-side Gram matrix
};

const char* kind_name(BoundKind kind);

struct CapacityQuery {
    double rho = 1.0;  // linear SNR; per-stream loading rho/n_tx is always derived, never stored
    channel_model::EffectiveStats stats;
    int n_tx = 0;
    int n_rx = 0;
    long mc_trials = 10000;
    std::uint64_t seed = 1;
};

struct CapacityResult {
    double value = 0.0;  // bits/s/Hz
    BoundKind kind = BoundKind::mc;
    std::optional<double> std_error;  // set for Monte Carlo results
    std::optional<long> trials;
};

// Sample-mean capacity over draws G = g_bar + X psi^{1/2}. Accepts any
// positive semidefinite psi (a zero psi makes the channel deterministic);
// indefinite psi raises a singular-covariance error. Trials are split across
// `threads` workers with independent seed-derived streams, so results are
// reproducible for a fixed (seed, threads) pair.
CapacityResult mc_ecc(const CapacityQuery& query, int threads = 1);

// Sample-mean capacity with the phase configuration itself randomized per
// trial: each draw picks fresh uniform phases, resamples the fading, and
// evaluates the assembled end-to-end channel. This is the ensemble quantity
// that the large-surface limit describes.
CapacityResult mc_ecc_random_phases(const channel_model::SystemConfig& config,
                                    const channel_model::PathSet& paths, double rho,
                                    long trials, std::uint64_t seed, int threads = 1);

// Jensen upper bound: log2 of the determinant-moment expansion over transmit
// index subsets, truncated at min(n_tx, n_rx). Inner terms are accumulated in
// the log domain.
CapacityResult upper_bound(const CapacityQuery& query,
                           const matrix_analysis::MomentParams& params = {});

// Exponent lower bound built from E ln det of the whitened Gram matrix;
// switches sides depending on which array has more antennas.
CapacityResult lower_bound(const CapacityQuery& query,
                           const matrix_analysis::MomentParams& params = {});

// {upper, lower} with kinds set for the regime of the query.
std::pair<CapacityResult, CapacityResult> bound_pair(
    const CapacityQuery& query, const matrix_analysis::MomentParams& params = {});

}  // namespace riscap::capacity_bounds
