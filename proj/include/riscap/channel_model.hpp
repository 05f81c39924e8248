// This file is part of riscap, an ergodic-capacity analysis toolkit for
// reconfigurable-surface MIMO links.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "riscap/rng.hpp"

// Rician channel through a reconfigurable surface: a transmit ULA couples to
// the surface (pure line of sight), the surface reflects with per-element
// phase shifts, and both the surface-to-receiver link and the direct link mix
// a deterministic multipath part with i.i.d. scattering.
namespace riscap::channel_model {

// Geometry and fading parameters for one transmitter / surface / receiver triple.
struct SystemConfig {
    int n_tx = 2;  // transmit antennas (ULA)
    int n_rx = 4;  // receive antennas (ULA)
    int m_h = 4;   // surface elements per row
    int m_v = 4;   // surface elements per column
    double d_t = 0.5;  // transmit array spacing, in wavelengths
    double d_r = 0.5;  // receive array spacing
    double d_h = 0.5;  // surface horizontal spacing
    double d_v = 0.5;  // surface vertical spacing
    double beta_t = 1.0;  // transmitter-to-surface power gain
    double beta_r = 1.0;  // surface-to-receiver power gain
    double beta_d = 1.0;  // direct-link power gain
    double los_power_r = 2.0 / 3.0;  // deterministic fraction of the surface-receiver link
    double los_power_h = 2.0 / 3.0;  // deterministic fraction of the direct link
    int n_paths_t = 1;  // paths of the transmitter-to-surface link
    int n_paths_r = 1;  // deterministic paths of the surface-to-receiver link
    int n_paths_h = 2;  // deterministic paths of the direct link

    int ris_elements() const { return m_h * m_v; }
    double nlos_power_r() const { return 1.0 - los_power_r; }
    double nlos_power_h() const { return 1.0 - los_power_h; }
    void validate() const;
};

// Angles (radians) and complex gains of the deterministic paths. Independent
// of the surface size, so one draw can be reused across element-count sweeps.
struct PathSet {
    // transmitter-to-surface link
    std::vector<double> t_azimuth_aoa;    // azimuth of arrival at the surface
    std::vector<double> t_elevation_aoa;  // elevation of arrival at the surface
    std::vector<double> t_aod;            // departure from the transmit ULA
    std::vector<std::complex<double>> t_gain;
    // surface-to-receiver link, deterministic part
    std::vector<double> r_aoa;            // arrival at the receive ULA
    std::vector<double> r_azimuth_aod;    // azimuth of departure from the surface
    std::vector<double> r_elevation_aod;  // elevation of departure from the surface
    std::vector<std::complex<double>> r_gain;
    // direct link, deterministic part
    std::vector<double> h_aoa;
    std::vector<double> h_aod;
    std::vector<std::complex<double>> h_gain;

    void validate(const SystemConfig& config) const;
};

// Per-element reflection phases, each in (-pi, pi].
struct PhaseShifts {
    std::vector<double> theta;

    static PhaseShifts zero(int m);
    static PhaseShifts random(int m, Rng& rng);
    Eigen::VectorXcd unit_phasors() const;  // e^{j theta}
    void validate(int m) const;
};

// Deterministic path-sum matrices of the three links.
struct LosMatrices {
    Eigen::MatrixXcd t;      // elements x n_tx, transmitter to surface
    Eigen::MatrixXcd r_bar;  // n_rx x elements, surface to receiver
    Eigen::MatrixXcd h_bar;  // n_rx x n_tx, direct
};

// One fading draw of the constituent links and the end-to-end matrix.
struct ChannelRealization {
    Eigen::MatrixXcd t;  // elements x n_tx
    Eigen::MatrixXcd r;  // n_rx x elements
    Eigen::MatrixXcd h;  // n_rx x n_tx
    Eigen::MatrixXcd g;  // n_rx x n_tx end-to-end
};

// First and second moments of the end-to-end matrix: G has mean g_bar and
// independent rows whose common covariance is psi.
struct EffectiveStats {
    Eigen::MatrixXcd g_bar;  // n_rx x n_tx
    Eigen::MatrixXcd psi;    // n_tx x n_tx, Hermitian positive definite
    std::optional<Eigen::MatrixXcd> upsilon;  // per-element covariance limit, when computed
};

// Uniform linear array response; entry k is exp(j 2 pi spacing k sin(angle)).
Eigen::VectorXcd ula_response(int n, double spacing, double angle);

// Uniform planar array response: the vertical factor (m_v entries, driven by
// sin(elevation)) Kronecker the horizontal factor (m_h entries, driven by
// cos(elevation) sin(azimuth)). Length m_v * m_h.
Eigen::VectorXcd upa_response(int m_h, int m_v, double d_h, double d_v, double azimuth,
                              double elevation);

// Draw all path angles uniformly on [0, 2 pi) and gains CN(0, 1).
PathSet sample_path_set(const SystemConfig& config, Rng& rng);

// Sum the steering outer products of each link, normalized by the square
// root of its path count.
LosMatrices build_los_matrices(const SystemConfig& config, const PathSet& paths);

// Draw the scattered parts and assemble
//   G = sqrt(beta_t beta_r) R diag(e^{j theta}) T + sqrt(beta_d) H.
ChannelRealization sample_realization(const SystemConfig& config, const PathSet& paths,
                                      const PhaseShifts& phases, Rng& rng);

// Mean and row covariance of G for fixed paths and phases. Throws a
// singular-covariance error when psi is not positive definite.
EffectiveStats effective_stats(const SystemConfig& config, const PathSet& paths,
                               const PhaseShifts& phases);

// Large-surface limit of psi / element count: a weighted sum of conjugate
// steering outer products of the transmit departure angles. Hermitian PSD.
Eigen::MatrixXcd upsilon(const SystemConfig& config, const PathSet& paths);

}  // namespace riscap::channel_model
