// This file is part of riscap, an ergodic-capacity analysis toolkit for
// reconfigurable-surface MIMO links.
// SPDX-License-Identifier: Apache-2.0

#include "riscap/channel_model.hpp"

#include <cmath>

#include "riscap/errors.hpp"

namespace riscap::channel_model {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Steering vector with the sine of the angle supplied directly, so planar
// factors can feed composite direction cosines.
Eigen::VectorXcd steering(int n, double spacing, double sine) {
    Eigen::VectorXcd v(n);
    for (int k = 0; k < n; ++k) {
        double phase = 2.0 * kPi * spacing * double(k) * sine;
        v(k) = std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return v;
}

void require_finite(const std::vector<double>& v, const char* what) {
    for (double x : v)
        if (!std::isfinite(x)) throw DomainError(std::string(what) + ": non-finite angle");
}

void require_finite(const std::vector<std::complex<double>>& v, const char* what) {
    for (const auto& x : v)
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
            throw DomainError(std::string(what) + ": non-finite gain");
}

void require_count(std::size_t got, int want, const char* what) {
    if (got != std::size_t(want))
        throw DimensionError(std::string(what) + ": path count does not match the configuration");
}

}  // namespace

void SystemConfig::validate() const {
    if (n_tx < 1 || n_rx < 1) throw ConfigError("antenna counts must be positive");
    if (m_h < 1 || m_v < 1) throw ConfigError("surface dimensions must be positive");
    if (!(d_t > 0.0) || !(d_r > 0.0) || !(d_h > 0.0) || !(d_v > 0.0))
        throw ConfigError("array spacings must be positive");
    if (beta_t < 0.0 || beta_r < 0.0 || beta_d < 0.0)
        throw ConfigError("link power gains must be nonnegative");
    if (beta_t * beta_r + beta_d <= 0.0)
        throw ConfigError("at least one of the surface path and the direct path must carry power");
    if (los_power_r < 0.0 || los_power_r > 1.0 || los_power_h < 0.0 || los_power_h > 1.0)
        throw ConfigError("deterministic power fractions must lie in [0, 1]");
    if (n_paths_t < 1 || n_paths_r < 1 || n_paths_h < 1)
        throw ConfigError("each link needs at least one deterministic path");
}

void PathSet::validate(const SystemConfig& config) const {
    require_count(t_azimuth_aoa.size(), config.n_paths_t, "transmitter-surface azimuth");
    require_count(t_elevation_aoa.size(), config.n_paths_t, "transmitter-surface elevation");
    require_count(t_aod.size(), config.n_paths_t, "transmitter-surface departure");
    require_count(t_gain.size(), config.n_paths_t, "transmitter-surface gain");
    require_count(r_aoa.size(), config.n_paths_r, "surface-receiver arrival");
    require_count(r_azimuth_aod.size(), config.n_paths_r, "surface-receiver azimuth");
    require_count(r_elevation_aod.size(), config.n_paths_r, "surface-receiver elevation");
    require_count(r_gain.size(), config.n_paths_r, "surface-receiver gain");
    require_count(h_aoa.size(), config.n_paths_h, "direct-link arrival");
    require_count(h_aod.size(), config.n_paths_h, "direct-link departure");
    require_count(h_gain.size(), config.n_paths_h, "direct-link gain");
    require_finite(t_azimuth_aoa, "transmitter-surface azimuth");
    require_finite(t_elevation_aoa, "transmitter-surface elevation");
    require_finite(t_aod, "transmitter-surface departure");
    require_finite(t_gain, "transmitter-surface gain");
    require_finite(r_aoa, "surface-receiver arrival");
    require_finite(r_azimuth_aod, "surface-receiver azimuth");
    require_finite(r_elevation_aod, "surface-receiver elevation");
    require_finite(r_gain, "surface-receiver gain");
    require_finite(h_aoa, "direct-link arrival");
    require_finite(h_aod, "direct-link departure");
    require_finite(h_gain, "direct-link gain");
}

PhaseShifts PhaseShifts::zero(int m) {
    if (m < 1) throw DimensionError("phase vector needs at least one element");
    PhaseShifts out;
    out.theta.assign(std::size_t(m), 0.0);
    return out;
}

PhaseShifts PhaseShifts::random(int m, Rng& rng) {
    if (m < 1) throw DimensionError("phase vector needs at least one element");
    PhaseShifts out;
    out.theta.resize(std::size_t(m));
    for (double& t : out.theta) t = rng.angle_signed();
    return out;
}

Eigen::VectorXcd PhaseShifts::unit_phasors() const {
    Eigen::VectorXcd v(Eigen::Index(theta.size()));
    for (std::size_t i = 0; i < theta.size(); ++i)
        v(Eigen::Index(i)) = std::complex<double>(std::cos(theta[i]), std::sin(theta[i]));
    return v;
}

void PhaseShifts::validate(int m) const {
    if (theta.size() != std::size_t(m))
        throw DimensionError("phase vector length does not match the surface size");
    for (double t : theta)
        if (!(t > -kPi) || !(t <= kPi))
            throw DomainError("phase shifts must lie in (-pi, pi]");
}

Eigen::VectorXcd ula_response(int n, double spacing, double angle) {
    if (n < 1) throw DimensionError("ula_response: need at least one antenna");
    if (!(spacing > 0.0)) throw DomainError("ula_response: spacing must be positive");
    return steering(n, spacing, std::sin(angle));
}

Eigen::VectorXcd upa_response(int m_h, int m_v, double d_h, double d_v, double azimuth,
                              double elevation) {
    if (m_h < 1 || m_v < 1) throw DimensionError("upa_response: need at least one element per axis");
    if (!(d_h > 0.0) || !(d_v > 0.0)) throw DomainError("upa_response: spacings must be positive");
    Eigen::VectorXcd vert = steering(m_v, d_v, std::sin(elevation));
    Eigen::VectorXcd horiz = steering(m_h, d_h, std::cos(elevation) * std::sin(azimuth));
    Eigen::VectorXcd out(m_h * m_v);
    for (int kv = 0; kv < m_v; ++kv)
        for (int kh = 0; kh < m_h; ++kh) out(kv * m_h + kh) = vert(kv) * horiz(kh);
    return out;
}

PathSet sample_path_set(const SystemConfig& config, Rng& rng) {
    config.validate();
    PathSet p;
    for (int i = 0; i < config.n_paths_t; ++i) {
        p.t_azimuth_aoa.push_back(rng.angle_positive());
        p.t_elevation_aoa.push_back(rng.angle_positive());
        p.t_aod.push_back(rng.angle_positive());
        p.t_gain.push_back(rng.cnormal());
    }
    for (int i = 0; i < config.n_paths_r; ++i) {
        p.r_aoa.push_back(rng.angle_positive());
        p.r_azimuth_aod.push_back(rng.angle_positive());
        p.r_elevation_aod.push_back(rng.angle_positive());
        p.r_gain.push_back(rng.cnormal());
    }
    for (int i = 0; i < config.n_paths_h; ++i) {
        p.h_aoa.push_back(rng.angle_positive());
        p.h_aod.push_back(rng.angle_positive());
        p.h_gain.push_back(rng.cnormal());
    }
    return p;
}

LosMatrices build_los_matrices(const SystemConfig& config, const PathSet& paths) {
    config.validate();
    paths.validate(config);
    const int m = config.ris_elements();

    LosMatrices los;
    los.t = Eigen::MatrixXcd::Zero(m, config.n_tx);
    for (int i = 0; i < config.n_paths_t; ++i) {
        Eigen::VectorXcd at = upa_response(config.m_h, config.m_v, config.d_h, config.d_v,
                                            paths.t_azimuth_aoa[i], paths.t_elevation_aoa[i]);
        Eigen::VectorXcd bt = ula_response(config.n_tx, config.d_t, paths.t_aod[i]);
        los.t += paths.t_gain[i] * at * bt.transpose();
    }
    los.t /= std::sqrt(double(config.n_paths_t));

    los.r_bar = Eigen::MatrixXcd::Zero(config.n_rx, m);
    for (int i = 0; i < config.n_paths_r; ++i) {
        Eigen::VectorXcd ar = ula_response(config.n_rx, config.d_r, paths.r_aoa[i]);
        Eigen::VectorXcd br = upa_response(config.m_h, config.m_v, config.d_h, config.d_v,
                                            paths.r_azimuth_aod[i], paths.r_elevation_aod[i]);
        los.r_bar += paths.r_gain[i] * ar * br.transpose();
    }
    los.r_bar /= std::sqrt(double(config.n_paths_r));

    los.h_bar = Eigen::MatrixXcd::Zero(config.n_rx, config.n_tx);
    for (int i = 0; i < config.n_paths_h; ++i) {
        Eigen::VectorXcd ah = ula_response(config.n_rx, config.d_r, paths.h_aoa[i]);
        Eigen::VectorXcd bh = ula_response(config.n_tx, config.d_t, paths.h_aod[i]);
        los.h_bar += paths.h_gain[i] * ah * bh.transpose();
    }
    los.h_bar /= std::sqrt(double(config.n_paths_h));
    return los;
}

ChannelRealization sample_realization(const SystemConfig& config, const PathSet& paths,
                                      const PhaseShifts& phases, Rng& rng) {
    const int m = config.ris_elements();
    phases.validate(m);
    LosMatrices los = build_los_matrices(config, paths);

    ChannelRealization out;
    out.t = los.t;

    Eigen::MatrixXcd r_scatter(config.n_rx, m);
    for (int row = 0; row < config.n_rx; ++row)
        for (int col = 0; col < m; ++col) r_scatter(row, col) = rng.cnormal();
    out.r = std::sqrt(config.los_power_r) * los.r_bar +
            std::sqrt(config.nlos_power_r()) * r_scatter;

    Eigen::MatrixXcd h_scatter(config.n_rx, config.n_tx);
    for (int row = 0; row < config.n_rx; ++row)
        for (int col = 0; col < config.n_tx; ++col) h_scatter(row, col) = rng.cnormal();
    out.h = std::sqrt(config.los_power_h) * los.h_bar +
            std::sqrt(config.nlos_power_h()) * h_scatter;

    out.g = std::sqrt(config.beta_t * config.beta_r) * out.r *
                phases.unit_phasors().asDiagonal() * out.t +
            std::sqrt(config.beta_d) * out.h;
    return out;
}

EffectiveStats effective_stats(const SystemConfig& config, const PathSet& paths,
                               const PhaseShifts& phases) {
    const int m = config.ris_elements();
    phases.validate(m);
    LosMatrices los = build_los_matrices(config, paths);

    EffectiveStats stats;
    stats.g_bar = std::sqrt(config.beta_t * config.beta_r * config.los_power_r) * los.r_bar *
                      phases.unit_phasors().asDiagonal() * los.t +
                  std::sqrt(config.beta_d * config.los_power_h) * los.h_bar;

    // the unit-modulus phases cancel inside t^H t, so psi does not depend on them
    stats.psi = config.beta_t * config.beta_r * config.nlos_power_r() * los.t.adjoint() * los.t +
                config.beta_d * config.nlos_power_h() *
                    Eigen::MatrixXcd::Identity(config.n_tx, config.n_tx);
    stats.psi = 0.5 * (stats.psi + stats.psi.adjoint()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(stats.psi, Eigen::EigenvaluesOnly);
    double lam_min = es.eigenvalues()(0);
    if (!(lam_min > 0.0))
        throw SingularCovarianceError(
            "effective row covariance is singular; the scattered links carry no power in some "
            "transmit direction",
            lam_min);
    return stats;
}

Eigen::MatrixXcd upsilon(const SystemConfig& config, const PathSet& paths) {
    config.validate();
    paths.validate(config);
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(config.n_tx, config.n_tx);
    const double scale =
        config.beta_t * config.beta_r * config.nlos_power_r() / double(config.n_paths_t);
    for (int i = 0; i < config.n_paths_t; ++i) {
        Eigen::VectorXcd b = ula_response(config.n_tx, config.d_t, paths.t_aod[i]).conjugate();
        u += (scale * std::norm(paths.t_gain[i])) * b * b.adjoint();
    }
    return 0.5 * (u + u.adjoint()).eval();
}

}  // namespace riscap::channel_model
