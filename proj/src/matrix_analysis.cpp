// This file is part of riscap, an ergodic-capacity analysis toolkit for
// reconfigurable-surface MIMO links.
// SPDX-License-Identifier: Apache-2.0

#include "riscap/matrix_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "riscap/errors.hpp"

namespace riscap::matrix_analysis {

namespace detail {
double j_scale_hook = 1.0;
}

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;

void require_square_pair(const MatrixXcd& sigma, const MatrixXcd& psi) {
    if (sigma.rows() != sigma.cols() || psi.rows() != psi.cols())
        throw DimensionError("generalized_nonzero_eigs: inputs must be square");
    if (sigma.rows() != psi.rows())
        throw DimensionError("generalized_nonzero_eigs: inputs must have matching size");
    if (sigma.rows() < 1) throw DimensionError("generalized_nonzero_eigs: empty input");
}

// Advance a lexicographic size-k index combination over {0..n-1}.
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

// The spectral formulas divide by a Vandermonde determinant, so clustered
// eigenvalues are spread symmetrically before evaluation. Input in any
// order; output ascending with every gap at least eps * max.
std::vector<double> separate_clusters(std::vector<double> v, const MomentParams& params) {
    std::sort(v.begin(), v.end());
    double vmax = 0.0;
    for (double x : v) vmax = std::max(vmax, std::abs(x));
    if (vmax == 0.0) return v;
    const double eps = params.degeneracy_eps * vmax;
    const double spread = params.degeneracy_spread * vmax;
    std::size_t i = 0;
    while (i < v.size()) {
        std::size_t j = i + 1;
        while (j < v.size() && v[j] - v[j - 1] < eps) ++j;
        if (j - i >= 2) {
            double center = std::accumulate(v.begin() + i, v.begin() + j, 0.0) / double(j - i);
            for (std::size_t k = i; k < j; ++k)
                v[k] = center + spread * (double(k - i) - double(j - i - 1) / 2.0);
        }
        i = j;
    }
    std::sort(v.begin(), v.end());
    for (std::size_t k = 1; k < v.size(); ++k)
        if (v[k] - v[k - 1] < eps)
            throw DegenerateSpectrumError(
                "eigenvalue spacing below tolerance even after tie-breaking perturbation");
    return v;
}

double vandermonde(const std::vector<double>& th) {
    double v = 1.0;
    for (std::size_t i = 0; i < th.size(); ++i)
        for (std::size_t j = i + 1; j < th.size(); ++j) v *= th[j] - th[i];
    return v;
}

}  // namespace

std::complex<double> principal_minor_sum(const MatrixXcd& a, int order) {
    if (a.rows() != a.cols()) throw DimensionError("principal_minor_sum: matrix must be square");
    const int n = int(a.rows());
    if (n > 20)
        throw CombinatorialLimitError(
            "principal_minor_sum: refusing matrices larger than 20 (subset count explodes)");
    if (order < 0 || order > n)
        throw DomainError("principal_minor_sum: order must lie in [0, n]");
    if (order == 0) return {1.0, 0.0};

    std::vector<int> idx(order);
    std::iota(idx.begin(), idx.end(), 0);
    std::complex<double> total = 0.0;
    MatrixXcd sub(order, order);
    do {
        for (int r = 0; r < order; ++r)
            for (int c = 0; c < order; ++c) sub(r, c) = a(idx[r], idx[c]);
        total += sub.determinant();
    } while (next_combination(idx, n));
    return total;
}

EigenList generalized_nonzero_eigs(const MatrixXcd& sigma, const MatrixXcd& psi,
                                   const MomentParams& params) {
    require_square_pair(sigma, psi);
    const int n = int(sigma.rows());

    MatrixXcd psi_h = 0.5 * (psi + psi.adjoint());
    Eigen::SelfAdjointEigenSolver<MatrixXcd> psi_es(psi_h, Eigen::EigenvaluesOnly);
    double psi_min = psi_es.eigenvalues()(0);
    if (!(psi_min > 0.0))
        throw SingularCovarianceError("generalized_nonzero_eigs: covariance not positive definite",
                                      psi_min);

    Eigen::LLT<MatrixXcd> llt(psi_h);
    if (llt.info() != Eigen::Success)
        throw SingularCovarianceError("generalized_nonzero_eigs: Cholesky factorization failed",
                                      psi_min);

    // whiten through the pencil: eigenvalues of L^{-1} sigma L^{-H}
    MatrixXcd t = llt.matrixL().solve(0.5 * (sigma + sigma.adjoint()));
    MatrixXcd w = llt.matrixL().solve(t.adjoint());
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (w + w.adjoint()), Eigen::EigenvaluesOnly);

    EigenList out;
    double lam_max = es.eigenvalues()(n - 1);
    out.rank_tolerance_used = params.rank_tol * std::max(lam_max, 0.0);
    if (lam_max > 0.0)
        for (int i = n - 1; i >= 0; --i) {
            double lam = es.eigenvalues()(i);
            if (lam > out.rank_tolerance_used) out.values.push_back(lam);
        }
    return out;
}

double digamma(double x) {
    if (!(x > 0.0)) throw DomainError("digamma: argument must be positive");
    double acc = 0.0;
    while (x < 8.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    // asymptotic series with Bernoulli terms through x^-14; at x >= 8 the
    // first omitted term is below 2e-15
    double inv = 1.0 / x;
    double u = inv * inv;
    double tail =
        u * (1.0 / 12.0 -
             u * (1.0 / 120.0 -
                  u * (1.0 / 252.0 -
                       u * (1.0 / 240.0 -
                            u * (1.0 / 132.0 - u * (691.0 / 32760.0 - u * (1.0 / 12.0)))))));
    return acc + std::log(x) - 0.5 * inv - tail;
}

double wishart_j(const EigenList& eigs, int q, const MomentParams& params) {
    const int l = eigs.count();
    if (l == 0) return detail::j_scale_hook;
    if (q < l)
        throw DimensionError("wishart_j: column dimension below the number of nonzero eigenvalues");

    std::vector<double> th = separate_clusters(eigs.values, params);
    MatrixXd delta(l, l);
    for (int i = 0; i < l; ++i) {
        double xp = 1.0;  // th[i]^(j-1)
        for (int j = 1; j <= l; ++j) {
            delta(i, j - 1) = (double(q - l + j) + th[i]) * xp;
            xp *= th[i];
        }
    }
    double det = l == 1 ? delta(0, 0) : delta.partialPivLu().determinant();
    return det / vandermonde(th) * detail::j_scale_hook;
}

double wishart_f(const EigenList& eigs, int q, const MomentParams& params) {
    const int l = eigs.count();
    if (l == 0) return 0.0;
    if (q < l)
        throw DimensionError("wishart_f: column dimension below the number of nonzero eigenvalues");

    std::vector<double> th = separate_clusters(eigs.values, params);

    // h_m(x) = x^{m-1} sum_k P(Poisson(x) > k) / (q - l + m + k), m = 1..l.
    // The Poisson tail runs through a log-domain pmf recursion: for large x
    // the early pmf underflows while the tail is exactly 1, and both regimes
    // come out right.
    auto h_column = [&](double x) {
        std::vector<double> s(l, 0.0);
        double lpmf = -x;  // ln pmf(0)
        double cdf = std::exp(lpmf);
        double lx = std::log(x);
        long k = 0;
        while (true) {
            double tail = std::max(0.0, 1.0 - cdf);
            for (int m = 1; m <= l; ++m) s[m - 1] += tail / double(q - l + m + k);
            double lead = tail / double(q - l + 1 + k);
            if (lead < params.series_tol) break;
            if (++k >= params.series_max_terms)
                throw ConvergenceError("wishart_f: series exceeded its term budget",
                                       lead * std::max(x, 1.0));
            lpmf += lx - std::log(double(k));
            cdf += std::exp(lpmf);
        }
        std::vector<double> col(l);
        double xp = 1.0;
        for (int m = 1; m <= l; ++m) {
            col[m - 1] = xp * s[m - 1];
            xp *= x;
        }
        return col;
    };

    MatrixXd monomials(l, l);
    for (int j = 0; j < l; ++j) {
        double xp = 1.0;
        for (int r = 0; r < l; ++r) {
            monomials(r, j) = xp;
            xp *= th[j];
        }
    }
    const double v = vandermonde(th);

    double total = 0.0;
    for (int i = 0; i < l; ++i) {
        MatrixXd d = monomials;
        std::vector<double> col = h_column(th[i]);
        for (int r = 0; r < l; ++r) d(r, i) = col[r];
        double det = l == 1 ? d(0, 0) : d.partialPivLu().determinant();
        total += det / v;
    }
    return total;
}

double expected_det(const MatrixXcd& b_bar, const MatrixXcd& omega, const MomentParams& params) {
    const int p = int(b_bar.rows());
    const int q = int(b_bar.cols());
    if (p < 1 || q < 1) throw DimensionError("expected_det: empty mean matrix");
    if (p > q)
        throw DimensionError("expected_det: needs at least as many columns as rows (p <= q)");
    if (omega.rows() != p || omega.cols() != p)
        throw DimensionError("expected_det: covariance must match the row dimension");

    MatrixXcd sigma = b_bar * b_bar.adjoint();
    EigenList eigs = generalized_nonzero_eigs(sigma, omega, params);
    const int l = eigs.count();

    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (omega + omega.adjoint()),
                                                Eigen::EigenvaluesOnly);
    double logdet_omega = es.eigenvalues().array().log().sum();

    // (q - l)! / (q - p)! and det(omega) combined in the log domain
    double lg = std::lgamma(double(q - l + 1)) - std::lgamma(double(q - p + 1));
    return std::exp(lg + logdet_omega) * wishart_j(eigs, q, params);
}

double expected_logdet(const EigenList& eigs, int p, int q, const MomentParams& params) {
    if (p < 1) throw DimensionError("expected_logdet: row dimension must be positive");
    if (q < p) throw DimensionError("expected_logdet: needs p <= q");
    if (eigs.count() > p)
        throw DimensionError("expected_logdet: more nonzero eigenvalues than rows");
    double s = 0.0;
    for (int k = 0; k < p; ++k) s += digamma(double(q - k));
    return s + wishart_f(eigs, q, params);
}

std::pair<double, double> logdet_sandwich(int p, const std::vector<double>& z_eigs_desc) {
    const int q = int(z_eigs_desc.size());
    if (p < 0 || p > q)
        throw DimensionError("logdet_sandwich: need 0 <= p <= number of eigenvalues");
    for (std::size_t i = 0; i < z_eigs_desc.size(); ++i) {
        if (!(z_eigs_desc[i] > 0.0))
            throw DomainError("logdet_sandwich: eigenvalues must be positive");
        if (i > 0 && z_eigs_desc[i] > z_eigs_desc[i - 1])
            throw DomainError("logdet_sandwich: eigenvalues must be sorted descending");
    }
    double lo = 0.0, hi = 0.0;
    for (int i = 0; i < p; ++i) {
        hi += std::log(z_eigs_desc[i]);
        lo += std::log(z_eigs_desc[q - 1 - i]);
    }
    return {lo, hi};
}

}  // namespace riscap::matrix_analysis
