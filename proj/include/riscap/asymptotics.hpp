// This file is part of riscap, an ergodic-capacity analysis toolkit for
// reconfigurable-surface MIMO links.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "riscap/capacity_bounds.hpp"

// High-SNR affine expansions C ~ slope * (log2(rho) - offset) and the
// large-surface limits that govern element-count scaling.
namespace riscap::asymptotics {

struct HighSnrExpansion {
    double slope = 0.0;   // bits/s/Hz per 3 dB; min(n_tx, n_rx)
    double offset = 0.0;  // power offset in log2 units
    std::optional<double> offset_std_error;  // set when the offset is Monte Carlo estimated
    std::optional<std::pair<double, double>> offset_bounds;  // closed-form {lower, upper}
};

struct AsymptoticsParams {
    long offset_mc_trials = 100000;  // trials behind the exact offset in the tx-dominant regime
    std::uint64_t seed = 1;
    int threads = 1;
    matrix_analysis::MomentParams moments;
};

// Slope and power offset of the capacity growth law. With n_rx >= n_tx the
// offset is closed form. With n_tx > n_rx the closed form only brackets the
// offset (eigenvalue sandwich); `offset` then carries a Monte Carlo estimate
// of the exact value with its standard error, and `offset_bounds` the bracket.
HighSnrExpansion high_snr_expansion(const channel_model::EffectiveStats& stats, int n_tx,
                                    int n_rx, const AsymptoticsParams& params = {});

// Finite-difference slope (C(rho_high) - C(rho_low)) / log2(rho_high/rho_low)
// from Monte Carlo capacity at the two SNRs. Test-side estimator.
double slope_empirical(const capacity_bounds::CapacityQuery& query, double rho_low,
                       double rho_high, int threads = 1);

// Capacity of the large-surface limiting channel: E log2 det of
// I + (m rho / n_tx) X upsilon X^H with X i.i.d. CN(0,1). A numerically zero
// upsilon short-circuits to 0.
capacity_bounds::CapacityResult large_m_capacity(const Eigen::MatrixXcd& upsilon, int n_rx,
                                                 double rho, long m, long trials,
                                                 std::uint64_t seed, int threads = 1);

enum class LimitKind { diverges, finite, vanishes };

const char* limit_kind_name(LimitKind kind);

struct PowerScalingVerdict {
    double alpha = 0.0;
    LimitKind limit_kind = LimitKind::finite;
    std::optional<double> finite_value;  // the limit, evaluated when alpha == 1
    std::vector<double> values;          // capacity along the element-count grid
};

// Classify the limit of capacity when transmit power is scaled as
// rho_base * m^{-alpha} along an increasing element-count grid:
// monotone growth with a >2x overall ratio diverges, monotone decay below
// 5% of the start vanishes, a <5% relative step between the last two points
// is finite. Anything else raises an inconclusive error with the trace.
PowerScalingVerdict power_scaling(const Eigen::MatrixXcd& upsilon, int n_rx, double rho_base,
                                  double alpha, const std::vector<long>& m_grid, long trials,
                                  std::uint64_t seed, int threads = 1);

// Closed-form high-SNR expansion of the large-surface channel with m
// elements; requires n_rx >= n_tx and a full-rank upsilon. Doubling m shifts
// the offset by exactly -1 (3 dB of effective array gain).
HighSnrExpansion large_m_high_snr(const Eigen::MatrixXcd& upsilon, int n_tx, int n_rx, long m);

}  // namespace riscap::asymptotics
