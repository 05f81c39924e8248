// This file is part of riscap, an ergodic-capacity analysis toolkit for
// reconfigurable-surface MIMO links.
// SPDX-License-Identifier: Apache-2.0

#include "riscap/capacity_bounds.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "detail_util.hpp"
#include "riscap/errors.hpp"

namespace riscap::capacity_bounds {

namespace {

using Eigen::MatrixXcd;
using matrix_analysis::MomentParams;

constexpr double kLn2 = 0.6931471805599453;

void validate_query(const CapacityQuery& q) {
    if (q.n_tx < 1 || q.n_rx < 1) throw DimensionError("capacity query: antenna counts must be positive");
    if (!(q.rho >= 0.0)) throw DomainError("capacity query: SNR must be nonnegative");
    if (q.stats.g_bar.rows() != q.n_rx || q.stats.g_bar.cols() != q.n_tx)
        throw DimensionError("capacity query: mean matrix shape does not match the antenna counts");
    if (q.stats.psi.rows() != q.n_tx || q.stats.psi.cols() != q.n_tx)
        throw DimensionError("capacity query: covariance must be square in the transmit dimension");
}

// Hermitian square root with tiny negative eigenvalues clamped to zero;
// genuinely indefinite input is rejected.
MatrixXcd hermitian_sqrt(const MatrixXcd& a) {
    MatrixXcd h = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
    double lam_max = std::max(es.eigenvalues().maxCoeff(), 0.0);
    Eigen::VectorXd lam = es.eigenvalues();
    for (int i = 0; i < lam.size(); ++i) {
        if (lam(i) < -1e-10 * std::max(lam_max, 1.0))
            throw SingularCovarianceError("covariance has a significantly negative eigenvalue",
                                          lam(i));
        lam(i) = std::sqrt(std::max(lam(i), 0.0));
    }
    return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
}

// log2 det(I + s A A^H) through the smaller Gram side, Cholesky on the
// shifted matrix (always definite).
double log2det_capacity(const MatrixXcd& a, double s) {
    MatrixXcd gram;
    if (a.rows() <= a.cols())
        gram = MatrixXcd::Identity(a.rows(), a.rows()) + s * a * a.adjoint();
    else
        gram = MatrixXcd::Identity(a.cols(), a.cols()) + s * a.adjoint() * a;
    gram = 0.5 * (gram + gram.adjoint()).eval();
    Eigen::LLT<MatrixXcd> llt(gram);
    double acc = 0.0;
    for (int i = 0; i < gram.rows(); ++i) acc += std::log(llt.matrixLLT()(i, i).real());
    return 2.0 * acc / kLn2;
}

double logsumexp(const std::vector<double>& logs) {
    double top = -std::numeric_limits<double>::infinity();
    for (double x : logs) top = std::max(top, x);
    double acc = 0.0;
    for (double x : logs) acc += std::exp(x - top);
    return top + std::log(acc);
}

bool next_combination(std::vector<int>& idx, int n) {
    int k = int(idx.size());
    for (int i = k - 1; i >= 0; --i) {
        if (idx[i] < n - k + i) {
            ++idx[i];
            for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

Eigen::VectorXd psd_eigenvalues(const MatrixXcd& a, const char* what) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (a + a.adjoint()), Eigen::EigenvaluesOnly);
    if (!(es.eigenvalues()(0) > 0.0))
        throw SingularCovarianceError(what, es.eigenvalues()(0));
    return es.eigenvalues();
}

}  // namespace

const char* kind_name(BoundKind kind) {
    switch (kind) {
        case BoundKind::mc: return "mc";
        case BoundKind::upper_rx_dominant: return "upper_rx_dominant";
        case BoundKind::upper_tx_dominant: return "upper_tx_dominant";
        case BoundKind::lower_rx_dominant: return "lower_rx_dominant";
        case BoundKind::lower_tx_dominant: return "lower_tx_dominant";
    }
    return "unknown";
}

CapacityResult mc_ecc(const CapacityQuery& query, int threads) {
    validate_query(query);
    if (query.mc_trials < 1) throw DomainError("mc_ecc: needs at least one trial");
    if (threads < 1) throw DomainError("mc_ecc: thread count must be positive");

    const MatrixXcd root = hermitian_sqrt(query.stats.psi);
    const double s = query.rho / double(query.n_tx);
    const int workers = int(std::min<long>(threads, query.mc_trials));

    std::vector<detail::RunningStat> partials(workers);
    detail::run_workers(workers, [&](int w) {
        Rng rng = Rng::stream(query.seed, std::uint64_t(w));
        long trials = detail::worker_share(query.mc_trials, workers, w);
        MatrixXcd noise(query.n_rx, query.n_tx);
        for (long trial = 0; trial < trials; ++trial) {
            for (int r = 0; r < query.n_rx; ++r)
                for (int c = 0; c < query.n_tx; ++c) noise(r, c) = rng.cnormal();
            MatrixXcd g = query.stats.g_bar + noise * root;
            partials[w].add(log2det_capacity(g, s));
        }
    });

    detail::RunningStat total;
    for (const auto& p : partials) total.merge(p);

    CapacityResult out;
    out.value = total.mean;
    out.kind = BoundKind::mc;
    out.trials = query.mc_trials;
    out.std_error = total.std_error();
    return out;
}

CapacityResult mc_ecc_random_phases(const channel_model::SystemConfig& config,
                                    const channel_model::PathSet& paths, double rho,
                                    long trials, std::uint64_t seed, int threads) {
    config.validate();
    paths.validate(config);
    if (rho < 0.0 || !std::isfinite(rho)) throw DomainError("mc_ecc_random_phases: SNR must be finite and nonnegative");
    if (trials < 1) throw DomainError("mc_ecc_random_phases: needs at least one trial");
    if (threads < 1) throw DomainError("mc_ecc_random_phases: thread count must be positive");

    const double s = rho / double(config.n_tx);
    const int workers = int(std::min<long>(threads, trials));

    std::vector<detail::RunningStat> partials(workers);
    detail::run_workers(workers, [&](int w) {
        Rng rng = Rng::stream(seed, std::uint64_t(w));
        long share = detail::worker_share(trials, workers, w);
        for (long trial = 0; trial < share; ++trial) {
            channel_model::PhaseShifts phases =
                channel_model::PhaseShifts::random(config.ris_elements(), rng);
            channel_model::ChannelRealization draw =
                channel_model::sample_realization(config, paths, phases, rng);
            partials[w].add(log2det_capacity(draw.g, s));
        }
    });

    detail::RunningStat total;
    for (const auto& p : partials) total.merge(p);

    CapacityResult out;
    out.value = total.mean;
    out.kind = BoundKind::mc;
    out.trials = trials;
    out.std_error = total.std_error();
    return out;
}

CapacityResult upper_bound(const CapacityQuery& query, const MomentParams& params) {
    validate_query(query);
    if (query.n_tx > 20) throw CombinatorialLimitError("upper_bound: subset enumeration capped at 20 transmit antennas");
    const double rho_bar = query.rho / double(query.n_tx);
    const MatrixXcd sigma = query.stats.g_bar.adjoint() * query.stats.g_bar;
    const int t_max = std::min(query.n_tx, query.n_rx);

    std::vector<double> log_terms;
    log_terms.push_back(0.0);  // empty subset
    const double log_rho = rho_bar > 0.0 ? std::log(rho_bar) : 0.0;

    for (int t = 1; t <= t_max && rho_bar > 0.0; ++t) {
        std::vector<int> idx(t);
        std::iota(idx.begin(), idx.end(), 0);
        do {
            MatrixXcd psi_q(t, t), sigma_q(t, t);
            for (int r = 0; r < t; ++r)
                for (int c = 0; c < t; ++c) {
                    psi_q(r, c) = query.stats.psi(idx[r], idx[c]);
                    sigma_q(r, c) = sigma(idx[r], idx[c]);
                }

            matrix_analysis::EigenList eigs;
            try {
                eigs = matrix_analysis::generalized_nonzero_eigs(sigma_q, psi_q, params);
            } catch (const SingularCovarianceError&) {
                // A null direction of the covariance block with no mean power
                // along it pins the subset determinant at zero; anything else
                // is a genuinely unusable covariance.
                Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (psi_q + psi_q.adjoint()));
                double lam_max = std::max(es.eigenvalues().maxCoeff(), 0.0);
                double scale = std::max(lam_max, 1.0);
                bool mean_free = true;
                for (int i = 0; i < t && mean_free; ++i) {
                    if (es.eigenvalues()(i) > params.rank_tol * scale) continue;
                    Eigen::VectorXcd v = es.eigenvectors().col(i);
                    double along = (v.adjoint() * sigma_q * v)(0, 0).real();
                    if (along > params.rank_tol * std::max(sigma_q.trace().real(), 1.0))
                        mean_free = false;
                }
                if (!mean_free) throw;
                continue;
            }

            double logdet_psi_q = psd_eigenvalues(psi_q, "upper bound: covariance block not "
                                                          "positive definite")
                                      .array()
                                      .log()
                                      .sum();
            double j = matrix_analysis::wishart_j(eigs, query.n_rx, params);
            double lg = std::lgamma(double(query.n_rx - eigs.count() + 1)) -
                        std::lgamma(double(query.n_rx - t + 1));
            log_terms.push_back(double(t) * log_rho + lg + logdet_psi_q + std::log(j));
        } while (next_combination(idx, query.n_tx));
    }

    CapacityResult out;
    out.value = logsumexp(log_terms) / kLn2;
    out.kind = query.n_rx >= query.n_tx ? BoundKind::upper_rx_dominant
                                        : BoundKind::upper_tx_dominant;
    return out;
}

CapacityResult lower_bound(const CapacityQuery& query, const MomentParams& params) {
    validate_query(query);
    const double rho_bar = query.rho / double(query.n_tx);

    CapacityResult out;
    if (query.n_rx >= query.n_tx) {
        Eigen::VectorXd psi_eigs =
            psd_eigenvalues(query.stats.psi, "lower bound: covariance not positive definite");
        double logdet_psi = psi_eigs.array().log().sum();
        MatrixXcd sigma = query.stats.g_bar.adjoint() * query.stats.g_bar;
        matrix_analysis::EigenList alpha =
            matrix_analysis::generalized_nonzero_eigs(sigma, query.stats.psi, params);
        double exponent =
            (logdet_psi + matrix_analysis::expected_logdet(alpha, query.n_tx, query.n_rx, params)) /
            double(query.n_tx);
        out.value = double(query.n_tx) * std::log2(1.0 + rho_bar * std::exp(exponent));
        out.kind = BoundKind::lower_rx_dominant;
    } else {
        Eigen::VectorXd psi_eigs =
            psd_eigenvalues(query.stats.psi, "lower bound: covariance not positive definite");
        std::vector<double> desc(psi_eigs.size());
        for (int i = 0; i < psi_eigs.size(); ++i) desc[i] = psi_eigs(psi_eigs.size() - 1 - i);
        double small_product = matrix_analysis::logdet_sandwich(query.n_rx, desc).first;

        // whitened mean Gram: g_bar psi^{-1} g_bar^H through one Cholesky solve
        Eigen::LLT<MatrixXcd> llt(0.5 * (query.stats.psi + query.stats.psi.adjoint()));
        if (llt.info() != Eigen::Success)
            throw SingularCovarianceError("lower bound: covariance factorization failed",
                                          psi_eigs(0));
        MatrixXcd z = llt.matrixL().solve(query.stats.g_bar.adjoint());
        MatrixXcd whitened = z.adjoint() * z;
        matrix_analysis::EigenList alpha = matrix_analysis::generalized_nonzero_eigs(
            whitened, MatrixXcd::Identity(query.n_rx, query.n_rx), params);

        double exponent =
            (small_product +
             matrix_analysis::expected_logdet(alpha, query.n_rx, query.n_tx, params)) /
            double(query.n_rx);
        out.value = double(query.n_rx) * std::log2(1.0 + rho_bar * std::exp(exponent));
        out.kind = BoundKind::lower_tx_dominant;
    }
    return out;
}

std::pair<CapacityResult, CapacityResult> bound_pair(const CapacityQuery& query,
                                                     const MomentParams& params) {
    return {upper_bound(query, params), lower_bound(query, params)};
}

}  // namespace riscap::capacity_bounds
