// This file is part of riscap, an ergodic-capacity analysis toolkit for
// reconfigurable-surface MIMO links.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

// Determinant and log-determinant moments of noncentral complex Wishart
// matrices, plus the spectral utilities they need. These are the closed
// forms behind the capacity bounds; each one has an independent sampling
// oracle in the validation module.
namespace riscap::matrix_analysis {

// Numerical policy shared by the moment formulas.
struct MomentParams {
    double series_tol = 1e-12;        // stop series once the leading term drops below this
    long series_max_terms = 100000;   // hard cap before a convergence error
    double degeneracy_eps = 1e-8;     // relative eigenvalue gap that counts as a tie
    double degeneracy_spread = 1e-6;  // relative spacing used to break ties
    double rank_tol = 1e-10;          // relative threshold separating zero from nonzero eigenvalues
};

// Nonzero generalized eigenvalues, sorted descending.
struct EigenList {
    std::vector<double> values;
    double rank_tolerance_used = 0.0;
    int count() const { return int(values.size()); }
};

// Sum of all order-by-order principal minors: the coefficient of lambda^order
// in det(I + lambda*A). order = 0 gives 1. Refuses matrices larger than 20
// (the subset count explodes combinatorially).
std::complex<double> principal_minor_sum(const Eigen::MatrixXcd& a, int order);

// Eigenvalues of psi^{-1} * sigma above the relative rank threshold, computed
// through the symmetric-definite pencil (sigma, psi), descending. psi must be
// Hermitian positive definite; sigma Hermitian positive semidefinite.
EigenList generalized_nonzero_eigs(const Eigen::MatrixXcd& sigma, const Eigen::MatrixXcd& psi,
                                   const MomentParams& params = {});

// psi(x) = d/dx ln Gamma(x) for x > 0, absolute error below 1e-12.
double digamma(double x);

// Spectral factor of the determinant moment: det(Delta)/Vandermonde with
// Delta(i,j) = (q - L + j + theta_i) * theta_i^{j-1}, 1-based j. Empty input
// gives 1 (central case).
double wishart_j(const EigenList& eigs, int q, const MomentParams& params = {});

// Spectral correction of the log-determinant moment; empty input gives 0.
// Each matrix column mixes monomials with the series
//   h_i(x) = x^{i-1} * sum_k P(Poisson(x) > k) / (q - L + i + k).
double wishart_f(const EigenList& eigs, int q, const MomentParams& params = {});

// E det(B B^H) for a p x q complex Gaussian matrix B (p <= q) with mean b_bar
// and column covariance omega (positive definite).
double expected_det(const Eigen::MatrixXcd& b_bar, const Eigen::MatrixXcd& omega,
                    const MomentParams& params = {});

// E ln det(B B^H) for a p x q complex Gaussian matrix with identity column
// covariance; `eigs` holds the nonzero eigenvalues of the squared whitened
// mean. Result in nats.
double expected_logdet(const EigenList& eigs, int p, int q, const MomentParams& params = {});

// Additive log-determinant corrections from the eigenvalue sandwich
//   det(X X^H) * prod(smallest p eigs of Z) <= det(X Z X^H)
//                                           <= det(X X^H) * prod(largest p eigs of Z).
// Input eigenvalues must be positive and sorted descending; returns
// {sum of p smallest logs, sum of p largest logs}.
std::pair<double, double> logdet_sandwich(int p, const std::vector<double>& z_eigs_desc);

namespace detail {
// Test hook used by `riscap validate --inject-j-bug`: scales wishart_j by a
// constant so the sampling oracles demonstrably catch a wrong closed form.
extern double j_scale_hook;
}

}  // namespace riscap::matrix_analysis
