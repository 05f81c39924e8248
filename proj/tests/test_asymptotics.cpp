// This file is part of riscap, an ergodic-capacity analysis toolkit for
// reconfigurable-surface MIMO links.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "riscap/asymptotics.hpp"
#include "riscap/errors.hpp"
#include "riscap/matrix_analysis.hpp"
#include "riscap/rng.hpp"

using namespace riscap;
using namespace riscap::asymptotics;
using Eigen::MatrixXcd;

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

channel_model::EffectiveStats scalar_stats(std::complex<double> mean, double variance) {
    channel_model::EffectiveStats s;
    s.g_bar = MatrixXcd::Constant(1, 1, mean);
    s.psi = MatrixXcd::Constant(1, 1, variance);
    return s;
}

channel_model::EffectiveStats reference_stats(channel_model::SystemConfig& cfg, Rng& rng) {
    channel_model::PathSet paths = channel_model::sample_path_set(cfg, rng);
    channel_model::PhaseShifts phases =
        channel_model::PhaseShifts::random(cfg.ris_elements(), rng);
    return channel_model::effective_stats(cfg, paths, phases);
}

// E log2(1 + a X) for X ~ Exp(1).
double rayleigh_scalar_capacity(double a) {
    double x = 1.0 / a;
    return std::exp(x) * (-std::expint(-x)) / std::numbers::ln2;
}

}  // namespace

TEST_CASE("high-SNR expansion in the receiver-dominant regime") {
    SUBCASE("central scalar offset is the Euler-Mascheroni constant in log2 units") {
        HighSnrExpansion exp = high_snr_expansion(scalar_stats(0.0, 1.0), 1, 1);
        CHECK(exp.slope == 1.0);
        CHECK(std::abs(exp.offset - kEulerGamma / std::numbers::ln2) < 1e-12);
        CHECK(!exp.offset_bounds.has_value());
        CHECK(!exp.offset_std_error.has_value());
    }

    SUBCASE("scalar offset tracks the log-moment route") {
        std::complex<double> mean{0.8, -0.6};
        double var = 0.5;
        HighSnrExpansion exp = high_snr_expansion(scalar_stats(mean, var), 1, 1);
        matrix_analysis::EigenList eigs;
        eigs.values = {std::norm(mean) / var};
        double log_moment = std::log(var) + matrix_analysis::expected_logdet(eigs, 1, 1);
        CHECK(std::abs(exp.offset + log_moment / std::numbers::ln2) < 1e-12);
    }

    SUBCASE("affine law meets the exponent lower bound at extreme SNR") {
        channel_model::SystemConfig cfg;
        Rng rng(3);
        channel_model::EffectiveStats stats = reference_stats(cfg, rng);
        HighSnrExpansion exp = high_snr_expansion(stats, cfg.n_tx, cfg.n_rx);
        CHECK(exp.slope == double(cfg.n_tx));

        capacity_bounds::CapacityQuery q;
        q.rho = 1e8;
        q.n_tx = cfg.n_tx;
        q.n_rx = cfg.n_rx;
        q.stats = stats;
        double affine = exp.slope * (std::log2(q.rho) - exp.offset);
        CHECK(std::abs(affine - capacity_bounds::lower_bound(q).value) < 1e-4);
    }

    SUBCASE("empirical slope agrees with the analytic one") {
        channel_model::SystemConfig cfg;
        Rng rng(5);
        capacity_bounds::CapacityQuery q;
        q.n_tx = cfg.n_tx;
        q.n_rx = cfg.n_rx;
        q.stats = reference_stats(cfg, rng);
        q.mc_trials = 20000;
        q.seed = 17;
        double slope = slope_empirical(q, 1e3, 1e4);
        CHECK(std::abs(slope - double(cfg.n_tx)) < 0.05 * cfg.n_tx);
    }
}

TEST_CASE("high-SNR expansion in the transmitter-dominant regime") {
    channel_model::EffectiveStats stats;
    stats.g_bar = MatrixXcd::Zero(2, 3);
    stats.g_bar(0, 0) = 1.0;
    stats.g_bar(1, 2) = std::complex<double>(0.0, 0.5);
    stats.psi = MatrixXcd::Identity(3, 3);
    stats.psi(0, 0) = 2.0;
    stats.psi(2, 2) = 0.5;
    AsymptoticsParams params;
    params.offset_mc_trials = 40000;
    params.seed = 9;

    SUBCASE("slope is the receiver count and the offset sits inside its bracket") {
        HighSnrExpansion exp = high_snr_expansion(stats, 3, 2, params);
        CHECK(exp.slope == 2.0);
        REQUIRE(exp.offset_bounds.has_value());
        REQUIRE(exp.offset_std_error.has_value());
        auto [lo, hi] = *exp.offset_bounds;
        CHECK(lo <= hi);
        double slack = 3.5 * *exp.offset_std_error;
        CHECK(exp.offset >= lo - slack);
        CHECK(exp.offset <= hi + slack);
    }

    SUBCASE("identity covariance collapses the bracket") {
        channel_model::EffectiveStats iso;
        iso.g_bar = MatrixXcd::Zero(2, 3);
        iso.g_bar(0, 1) = 0.7;
        iso.psi = MatrixXcd::Identity(3, 3);
        HighSnrExpansion exp = high_snr_expansion(iso, 3, 2, params);
        REQUIRE(exp.offset_bounds.has_value());
        CHECK(std::abs(exp.offset_bounds->first - exp.offset_bounds->second) < 1e-12);
        CHECK(std::abs(exp.offset - exp.offset_bounds->first) < 3.5 * *exp.offset_std_error);
    }

    SUBCASE("offset estimate is reproducible") {
        HighSnrExpansion a = high_snr_expansion(stats, 3, 2, params);
        HighSnrExpansion b = high_snr_expansion(stats, 3, 2, params);
        CHECK(a.offset == b.offset);
    }
}

TEST_CASE("large-surface limiting capacity") {
    SUBCASE("zero limit covariance short-circuits") {
        CHECK(large_m_capacity(MatrixXcd::Zero(2, 2), 4, 1.0, 16, 100, 1).value == 0.0);
    }

    SUBCASE("scalar limit matches the exponential-integral closed form") {
        MatrixXcd ups = MatrixXcd::Constant(1, 1, 0.4);
        long m = 32;
        double rho = 0.25;
        capacity_bounds::CapacityResult res = large_m_capacity(ups, 1, rho, m, 100000, 7);
        REQUIRE(res.std_error.has_value());
        double want = rayleigh_scalar_capacity(double(m) * rho * 0.4);
        CHECK(std::abs(res.value - want) < 3.5 * *res.std_error);
    }

    SUBCASE("only the product of element count and SNR matters") {
        MatrixXcd ups = MatrixXcd::Constant(1, 1, 0.4);
        double energy = 10.0;
        capacity_bounds::CapacityResult small = large_m_capacity(ups, 2, energy / 1, 1, 4000, 5);
        capacity_bounds::CapacityResult big = large_m_capacity(ups, 2, energy / 64, 64, 4000, 5);
        CHECK(small.value == big.value);
    }

    SUBCASE("input contracts") {
        CHECK_THROWS_AS(large_m_capacity(MatrixXcd::Zero(2, 3), 2, 1.0, 4, 100, 1),
                        DimensionError);
        CHECK_THROWS_AS(large_m_capacity(MatrixXcd::Identity(2, 2), 2, 1.0, 0, 100, 1),
                        DomainError);
    }
}

TEST_CASE("power scaling along the element-count grid") {
    MatrixXcd ups = MatrixXcd::Constant(1, 1, 0.5);
    std::vector<long> grid = {16, 64, 256, 1024};
    long trials = 4000;

    SUBCASE("the three regimes classify as expected") {
        PowerScalingVerdict slow = power_scaling(ups, 2, 0.1, 0.5, grid, trials, 2);
        CHECK(slow.limit_kind == LimitKind::diverges);
        CHECK(!slow.finite_value.has_value());
        CHECK(slow.values.size() == grid.size());

        PowerScalingVerdict matched = power_scaling(ups, 2, 0.1, 1.0, grid, trials, 2);
        CHECK(matched.limit_kind == LimitKind::finite);
        REQUIRE(matched.finite_value.has_value());
        CHECK(*matched.finite_value > 0.0);

        PowerScalingVerdict fast = power_scaling(ups, 2, 0.1, 2.0, grid, trials, 2);
        CHECK(fast.limit_kind == LimitKind::vanishes);
        CHECK(fast.values.front() > fast.values.back());
    }

    SUBCASE("matched scaling plateaus at the fixed-energy limit") {
        PowerScalingVerdict matched = power_scaling(ups, 2, 0.1, 1.0, grid, 40000, 2);
        capacity_bounds::CapacityResult limit = large_m_capacity(ups, 2, 0.1, 1, 40000, 3);
        REQUIRE(matched.finite_value.has_value());
        REQUIRE(limit.std_error.has_value());
        CHECK(std::abs(*matched.finite_value - limit.value) < 5.0 * *limit.std_error);
    }

    SUBCASE("verdict names are distinct") {
        CHECK(std::string(limit_kind_name(LimitKind::diverges)) !=
              limit_kind_name(LimitKind::finite));
        CHECK(std::string(limit_kind_name(LimitKind::finite)) !=
              limit_kind_name(LimitKind::vanishes));
    }

    SUBCASE("input contracts") {
        CHECK_THROWS_AS(power_scaling(ups, 2, 0.0, 1.0, grid, trials, 2), DomainError);
        CHECK_THROWS_AS(power_scaling(ups, 2, 0.1, -1.0, grid, trials, 2), DomainError);
        CHECK_THROWS_AS(power_scaling(ups, 2, 0.1, 1.0, {16, 64}, trials, 2), DimensionError);
        CHECK_THROWS_AS(power_scaling(ups, 2, 0.1, 1.0, {16, 16, 64}, trials, 2), DomainError);
    }
}

TEST_CASE("closed-form expansion of the large-surface channel") {
    MatrixXcd ups(2, 2);
    ups << 1.0, std::complex<double>(0.2, 0.1), std::complex<double>(0.2, -0.1), 0.8;

    SUBCASE("doubling the surface buys exactly one offset unit") {
        for (long m : {4L, 16L, 64L}) {
            HighSnrExpansion a = large_m_high_snr(ups, 2, 3, m);
            HighSnrExpansion b = large_m_high_snr(ups, 2, 3, 2 * m);
            CHECK(a.slope == 2.0);
            CHECK(std::abs(b.offset - a.offset + 1.0) < 1e-12);
        }
    }

    SUBCASE("matches the general expansion evaluated at the limiting moments") {
        long m = 32;
        channel_model::EffectiveStats synth;
        synth.g_bar = MatrixXcd::Zero(3, 2);
        synth.psi = double(m) * ups;
        HighSnrExpansion direct = large_m_high_snr(ups, 2, 3, m);
        HighSnrExpansion general = high_snr_expansion(synth, 2, 3);
        CHECK(std::abs(direct.offset - general.offset) < 1e-9);
        CHECK(direct.slope == general.slope);
    }

    SUBCASE("input contracts") {
        CHECK_THROWS_AS(large_m_high_snr(ups, 2, 1, 16), AssumptionError);
        CHECK_THROWS_AS(large_m_high_snr(MatrixXcd::Zero(2, 2), 2, 3, 16),
                        SingularCovarianceError);
        CHECK_THROWS_AS(large_m_high_snr(ups, 2, 3, 0), DomainError);
    }
}
