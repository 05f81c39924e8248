// This file is part of riscap, an ergodic-capacity analysis toolkit for
// reconfigurable-surface MIMO links.
// SPDX-License-Identifier: Apache-2.0

#include "riscap/asymptotics.hpp"

#include <cmath>
#include <sstream>

#include "detail_util.hpp"
#include "riscap/errors.hpp"

namespace riscap::asymptotics {

namespace {

using Eigen::MatrixXcd;

constexpr double kLn2 = 0.6931471805599453;

double digamma_sum(int p, int q) {
    double s = 0.0;
    for (int k = 0; k < p; ++k) s += matrix_analysis::digamma(double(q - k));
    return s;
}

// ln det(c^H c) for a tall full-column-rank c, through QR.
double logdet_gram(const MatrixXcd& c) {
    Eigen::HouseholderQR<MatrixXcd> qr(c);
    double acc = 0.0;
    for (int i = 0; i < c.cols(); ++i) acc += std::log(std::abs(qr.matrixQR()(i, i)));
    return 2.0 * acc;
}

}  // namespace

HighSnrExpansion high_snr_expansion(const channel_model::EffectiveStats& stats, int n_tx,
                                    int n_rx, const AsymptoticsParams& params) {
    if (n_tx < 1 || n_rx < 1) throw DimensionError("high_snr_expansion: antenna counts must be positive");
    if (stats.g_bar.rows() != n_rx || stats.g_bar.cols() != n_tx)
        throw DimensionError("high_snr_expansion: mean matrix shape does not match");
    if (stats.psi.rows() != n_tx || stats.psi.cols() != n_tx)
        throw DimensionError("high_snr_expansion: covariance shape does not match");

    Eigen::SelfAdjointEigenSolver<MatrixXcd> psi_es(0.5 * (stats.psi + stats.psi.adjoint()),
                                                    Eigen::EigenvaluesOnly);
    if (!(psi_es.eigenvalues()(0) > 0.0))
        throw SingularCovarianceError("high_snr_expansion: covariance not positive definite",
                                      psi_es.eigenvalues()(0));
    const double logdet_psi = psi_es.eigenvalues().array().log().sum();

    HighSnrExpansion out;
    out.slope = double(std::min(n_tx, n_rx));

    if (n_rx >= n_tx) {
        MatrixXcd sigma = stats.g_bar.adjoint() * stats.g_bar;
        matrix_analysis::EigenList alpha =
            matrix_analysis::generalized_nonzero_eigs(sigma, stats.psi, params.moments);
        double mean_logdet =
            logdet_psi + matrix_analysis::expected_logdet(alpha, n_tx, n_rx, params.moments);
        out.offset = std::log2(double(n_tx)) - mean_logdet / (double(n_tx) * kLn2);
        return out;
    }

    // More transmit than receive antennas: the growth exponent involves the
    // log determinant of a covariance-weighted Gram matrix, which only
    // brackets in closed form. Monte Carlo supplies the point estimate.
    if (params.offset_mc_trials < 2)
        throw DomainError("high_snr_expansion: offset estimation needs at least two trials");
    if (params.threads < 1) throw DomainError("high_snr_expansion: thread count must be positive");

    Eigen::LLT<MatrixXcd> llt(0.5 * (stats.psi + stats.psi.adjoint()));
    if (llt.info() != Eigen::Success)
        throw SingularCovarianceError("high_snr_expansion: covariance factorization failed",
                                      psi_es.eigenvalues()(0));
    MatrixXcd whitened_mean = llt.matrixL().solve(stats.g_bar.adjoint());  // psi^{-1/2} g_bar^H
    MatrixXcd root = llt.matrixL();

    const int workers = int(std::min<long>(params.threads, params.offset_mc_trials));
    std::vector<detail::RunningStat> partials(workers);
    detail::run_workers(workers, [&](int w) {
        Rng rng = Rng::stream(params.seed, std::uint64_t(w));
        long trials = detail::worker_share(params.offset_mc_trials, workers, w);
        MatrixXcd noise(n_tx, n_rx);
        for (long trial = 0; trial < trials; ++trial) {
            for (int r = 0; r < n_tx; ++r)
                for (int c = 0; c < n_rx; ++c) noise(r, c) = rng.cnormal();
            // ln det(g_tilde^H psi g_tilde) with g_tilde = psi^{-1/2} g_bar^H + x
            partials[w].add(logdet_gram(root.adjoint() * (whitened_mean + noise)));
        }
    });
    detail::RunningStat total;
    for (const auto& p : partials) total.merge(p);

    out.offset = std::log2(double(n_tx)) - total.mean / (double(n_rx) * kLn2);
    out.offset_std_error = total.std_error() / (double(n_rx) * kLn2);

    // closed-form bracket from the eigenvalue sandwich
    std::vector<double> desc(n_tx);
    for (int i = 0; i < n_tx; ++i) desc[i] = psi_es.eigenvalues()(n_tx - 1 - i);
    auto [sand_lo, sand_hi] = matrix_analysis::logdet_sandwich(n_rx, desc);

    MatrixXcd z = llt.matrixL().solve(stats.g_bar.adjoint());
    MatrixXcd whitened_gram = z.adjoint() * z;
    matrix_analysis::EigenList alpha = matrix_analysis::generalized_nonzero_eigs(
        whitened_gram, MatrixXcd::Identity(n_rx, n_rx), params.moments);
    double white_logdet = matrix_analysis::expected_logdet(alpha, n_rx, n_tx, params.moments);

    double offset_lo = std::log2(double(n_tx)) - (sand_hi + white_logdet) / (double(n_rx) * kLn2);
    double offset_hi = std::log2(double(n_tx)) - (sand_lo + white_logdet) / (double(n_rx) * kLn2);
    out.offset_bounds = {offset_lo, offset_hi};
    return out;
}

double slope_empirical(const capacity_bounds::CapacityQuery& query, double rho_low,
                       double rho_high, int threads) {
    if (!(rho_low > 0.0) || !(rho_high > rho_low))
        throw DomainError("slope_empirical: needs 0 < rho_low < rho_high");
    capacity_bounds::CapacityQuery lo = query;
    lo.rho = rho_low;
    capacity_bounds::CapacityQuery hi = query;
    hi.rho = rho_high;
    double c_lo = capacity_bounds::mc_ecc(lo, threads).value;
    double c_hi = capacity_bounds::mc_ecc(hi, threads).value;
    return (c_hi - c_lo) / std::log2(rho_high / rho_low);
}

const char* limit_kind_name(LimitKind kind) {
    switch (kind) {
        case LimitKind::diverges: return "diverges";
        case LimitKind::finite: return "finite";
        case LimitKind::vanishes: return "vanishes";
    }
    return "unknown";
}

capacity_bounds::CapacityResult large_m_capacity(const MatrixXcd& upsilon, int n_rx, double rho,
                                                 long m, long trials, std::uint64_t seed,
                                                 int threads) {
    if (upsilon.rows() != upsilon.cols() || upsilon.rows() < 1)
        throw DimensionError("large_m_capacity: limit covariance must be square and nonempty");
    if (m < 1) throw DomainError("large_m_capacity: element count must be positive");

    capacity_bounds::CapacityResult out;
    if (upsilon.cwiseAbs().maxCoeff() == 0.0) {
        out.value = 0.0;
        out.kind = capacity_bounds::BoundKind::mc;
        out.std_error = 0.0;
        out.trials = trials;
        return out;
    }

    capacity_bounds::CapacityQuery query;
    query.rho = rho;
    query.n_tx = int(upsilon.rows());
    query.n_rx = n_rx;
    query.stats.g_bar = MatrixXcd::Zero(n_rx, upsilon.rows());
    query.stats.psi = double(m) * upsilon;
    query.mc_trials = trials;
    query.seed = seed;
    return capacity_bounds::mc_ecc(query, threads);
}

PowerScalingVerdict power_scaling(const MatrixXcd& upsilon, int n_rx, double rho_base,
                                  double alpha, const std::vector<long>& m_grid, long trials,
                                  std::uint64_t seed, int threads) {
    if (!(rho_base > 0.0)) throw DomainError("power_scaling: base SNR must be positive");
    if (alpha < 0.0) throw DomainError("power_scaling: scaling exponent must be nonnegative");
    if (m_grid.size() < 3)
        throw DimensionError("power_scaling: grid needs at least three element counts");
    for (std::size_t i = 0; i < m_grid.size(); ++i)
        if (m_grid[i] < 1 || (i > 0 && m_grid[i] <= m_grid[i - 1]))
            throw DomainError("power_scaling: grid must be positive and strictly increasing");

    PowerScalingVerdict verdict;
    verdict.alpha = alpha;
    for (std::size_t i = 0; i < m_grid.size(); ++i) {
        double rho = rho_base * std::pow(double(m_grid[i]), -alpha);
        verdict.values.push_back(large_m_capacity(upsilon, n_rx, rho, m_grid[i], trials,
                                                  Rng::derive(seed, std::uint64_t(i)), threads)
                                     .value);
    }

    const std::vector<double>& v = verdict.values;
    bool increasing = true, decreasing = true;
    for (std::size_t i = 1; i < v.size(); ++i) {
        increasing = increasing && v[i] > v[i - 1];
        decreasing = decreasing && v[i] < v[i - 1];
    }
    double last_step = std::abs(v.back() - v[v.size() - 2]);
    double plateau_scale = std::max(std::abs(v.back()), 1e-12);

    if (increasing && v.front() > 0.0 && v.back() > 2.0 * v.front()) {
        verdict.limit_kind = LimitKind::diverges;
    } else if (decreasing && v.back() < 0.05 * v.front()) {
        verdict.limit_kind = LimitKind::vanishes;
    } else if (last_step < 0.05 * plateau_scale) {
        verdict.limit_kind = LimitKind::finite;
        if (alpha == 1.0)
            verdict.finite_value =
                large_m_capacity(upsilon, n_rx, rho_base, 1, trials,
                                 Rng::derive(seed, std::uint64_t(m_grid.size())), threads)
                    .value;
    } else {
        std::ostringstream msg;
        msg << "power_scaling: capacity trace fits no limit pattern:";
        for (double x : v) msg << ' ' << x;
        throw InconclusiveError(msg.str());
    }
    return verdict;
}

HighSnrExpansion large_m_high_snr(const MatrixXcd& upsilon, int n_tx, int n_rx, long m) {
    if (upsilon.rows() != n_tx || upsilon.cols() != n_tx)
        throw DimensionError("large_m_high_snr: limit covariance must be n_tx x n_tx");
    if (n_rx < n_tx)
        throw AssumptionError(
            "large_m_high_snr: closed form needs at least as many receive as transmit antennas");
    if (m < 1) throw DomainError("large_m_high_snr: element count must be positive");

    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (upsilon + upsilon.adjoint()),
                                                Eigen::EigenvaluesOnly);
    if (!(es.eigenvalues()(0) > 0.0))
        throw SingularCovarianceError(
            "large_m_high_snr: limit covariance is rank deficient (too few deterministic paths)",
            es.eigenvalues()(0));
    double logdet_upsilon = es.eigenvalues().array().log().sum();

    HighSnrExpansion out;
    out.slope = double(n_tx);
    out.offset = std::log2(double(n_tx) / double(m)) -
                 (logdet_upsilon + digamma_sum(n_tx, n_rx)) / (double(n_tx) * kLn2);
    return out;
}

}  // namespace riscap::asymptotics
