// This file is part of riscap, an ergodic-capacity analysis toolkit for
// reconfigurable-surface MIMO links.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "riscap/channel_model.hpp"
#include "riscap/errors.hpp"
#include "riscap/rng.hpp"

using namespace riscap;
using namespace riscap::channel_model;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

namespace {

constexpr std::complex<double> kJ{0.0, 1.0};
constexpr double kTwoPi = 2.0 * std::numbers::pi;

SystemConfig small_config() {
    SystemConfig cfg;
    cfg.n_tx = 2;
    cfg.n_rx = 3;
    cfg.m_h = 2;
    cfg.m_v = 2;
    return cfg;
}

double max_abs_diff(const MatrixXcd& a, const MatrixXcd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("linear array response") {
    SUBCASE("broadside angle gives a flat vector") {
        VectorXcd v = ula_response(4, 0.5, 0.0);
        REQUIRE(v.size() == 4);
        for (int k = 0; k < 4; ++k) CHECK(std::abs(v(k) - 1.0) < 1e-15);
    }

    SUBCASE("endfire at half-wavelength spacing alternates sign") {
        VectorXcd v = ula_response(4, 0.5, std::numbers::pi / 2.0);
        for (int k = 0; k < 4; ++k) {
            double want = (k % 2 == 0) ? 1.0 : -1.0;
            CHECK(std::abs(v(k) - want) < 1e-12);
        }
    }

    SUBCASE("entries follow the per-element phase progression") {
        double spacing = 0.37, angle = 1.1;
        VectorXcd v = ula_response(5, spacing, angle);
        for (int k = 0; k < 5; ++k) {
            std::complex<double> want = std::exp(kJ * (kTwoPi * spacing * k * std::sin(angle)));
            CHECK(std::abs(v(k) - want) < 1e-13);
        }
    }

    SUBCASE("unit modulus and leading one") {
        VectorXcd v = ula_response(6, 0.25, -2.0);
        CHECK(std::abs(v(0) - 1.0) < 1e-15);
        for (int k = 0; k < 6; ++k) CHECK(std::abs(std::abs(v(k)) - 1.0) < 1e-14);
    }

    SUBCASE("input contracts") {
        CHECK_THROWS_AS(ula_response(0, 0.5, 0.0), DimensionError);
        CHECK_THROWS_AS(ula_response(2, 0.0, 0.0), DomainError);
    }
}

TEST_CASE("planar array response") {
    SUBCASE("single element is the scalar one") {
        VectorXcd v = upa_response(1, 1, 0.5, 0.5, 0.3, 0.7);
        REQUIRE(v.size() == 1);
        CHECK(std::abs(v(0) - 1.0) < 1e-15);
    }

    SUBCASE("factors combine with the horizontal index running fastest") {
        int m_h = 3, m_v = 2;
        double d_h = 0.5, d_v = 0.4, az = 0.8, el = 0.3;
        VectorXcd v = upa_response(m_h, m_v, d_h, d_v, az, el);
        REQUIRE(v.size() == m_h * m_v);
        for (int kv = 0; kv < m_v; ++kv) {
            for (int kh = 0; kh < m_h; ++kh) {
                double phase = kTwoPi * (d_v * kv * std::sin(el) +
                                         d_h * kh * std::cos(el) * std::sin(az));
                CHECK(std::abs(v(kv * m_h + kh) - std::exp(kJ * phase)) < 1e-13);
            }
        }
    }

    SUBCASE("single row degenerates to a horizontal line array") {
        double az = 1.2, el = 0.4;
        VectorXcd planar = upa_response(4, 1, 0.5, 0.5, az, el);
        for (int k = 0; k < 4; ++k) {
            std::complex<double> want =
                std::exp(kJ * (kTwoPi * 0.5 * k * std::cos(el) * std::sin(az)));
            CHECK(std::abs(planar(k) - want) < 1e-13);
        }
    }

    SUBCASE("input contracts") {
        CHECK_THROWS_AS(upa_response(0, 2, 0.5, 0.5, 0.0, 0.0), DimensionError);
        CHECK_THROWS_AS(upa_response(2, 2, 0.5, -0.5, 0.0, 0.0), DomainError);
    }
}

TEST_CASE("phase shift vectors") {
    SUBCASE("zero phases are valid and give unit phasors") {
        PhaseShifts p = PhaseShifts::zero(5);
        REQUIRE(p.theta.size() == 5);
        p.validate(5);
        VectorXcd ph = p.unit_phasors();
        for (int k = 0; k < 5; ++k) CHECK(std::abs(ph(k) - 1.0) < 1e-15);
    }

    SUBCASE("random phases are reproducible and in range") {
        Rng a(9), b(9);
        PhaseShifts pa = PhaseShifts::random(64, a);
        PhaseShifts pb = PhaseShifts::random(64, b);
        REQUIRE(pa.theta.size() == 64);
        CHECK(pa.theta == pb.theta);
        for (double t : pa.theta) {
            CHECK(t > -std::numbers::pi);
            CHECK(t <= std::numbers::pi);
        }
        pa.validate(64);
    }

    SUBCASE("validation rejects bad lengths and out-of-range entries") {
        PhaseShifts p = PhaseShifts::zero(3);
        CHECK_THROWS_AS(p.validate(4), DimensionError);
        p.theta[1] = 4.0;
        CHECK_THROWS_AS(p.validate(3), DomainError);
        p.theta[1] = -std::numbers::pi;  // open endpoint
        CHECK_THROWS_AS(p.validate(3), DomainError);
        p.theta[1] = std::numbers::pi;  // closed endpoint
        p.validate(3);
    }
}

TEST_CASE("path set sampling") {
    SystemConfig cfg = small_config();
    cfg.n_paths_t = 2;
    cfg.n_paths_r = 3;
    cfg.n_paths_h = 4;

    SUBCASE("counts follow the configuration") {
        Rng rng(5);
        PathSet p = sample_path_set(cfg, rng);
        CHECK(p.t_azimuth_aoa.size() == 2);
        CHECK(p.t_elevation_aoa.size() == 2);
        CHECK(p.t_aod.size() == 2);
        CHECK(p.t_gain.size() == 2);
        CHECK(p.r_aoa.size() == 3);
        CHECK(p.r_gain.size() == 3);
        CHECK(p.h_aoa.size() == 4);
        CHECK(p.h_gain.size() == 4);
        p.validate(cfg);
    }

    SUBCASE("same seed reproduces the draw") {
        Rng a(123), b(123);
        PathSet pa = sample_path_set(cfg, a);
        PathSet pb = sample_path_set(cfg, b);
        CHECK(pa.t_aod == pb.t_aod);
        CHECK(pa.r_gain == pb.r_gain);
        CHECK(pa.h_aoa == pb.h_aoa);
    }

    SUBCASE("angles live on the geometry convention range") {
        Rng rng(77);
        for (int rep = 0; rep < 50; ++rep) {
            PathSet p = sample_path_set(cfg, rng);
            for (double a : p.t_azimuth_aoa) {
                CHECK(a >= 0.0);
                CHECK(a < kTwoPi);
            }
            for (double a : p.h_aod) {
                CHECK(a >= 0.0);
                CHECK(a < kTwoPi);
            }
        }
    }

    SUBCASE("gains are standard complex normal in the first two moments") {
        Rng rng(31);
        std::complex<double> mean = 0.0;
        double power = 0.0;
        int count = 0;
        for (int rep = 0; rep < 500; ++rep) {
            PathSet p = sample_path_set(cfg, rng);
            for (const auto& g : p.h_gain) {
                mean += g;
                power += std::norm(g);
                ++count;
            }
        }
        mean /= double(count);
        power /= double(count);
        CHECK(std::abs(mean) < 0.08);       // ~3.5 sigma for 2000 draws
        CHECK(std::abs(power - 1.0) < 0.1);
    }

    SUBCASE("mismatched path counts are rejected") {
        Rng rng(5);
        PathSet p = sample_path_set(cfg, rng);
        p.r_gain.pop_back();
        CHECK_THROWS_AS(p.validate(cfg), DimensionError);
    }
}

TEST_CASE("deterministic path-sum matrices") {
    SystemConfig cfg = small_config();
    Rng rng(17);
    PathSet paths = sample_path_set(cfg, rng);
    LosMatrices los = build_los_matrices(cfg, paths);

    SUBCASE("shapes") {
        CHECK(los.t.rows() == cfg.ris_elements());
        CHECK(los.t.cols() == cfg.n_tx);
        CHECK(los.r_bar.rows() == cfg.n_rx);
        CHECK(los.r_bar.cols() == cfg.ris_elements());
        CHECK(los.h_bar.rows() == cfg.n_rx);
        CHECK(los.h_bar.cols() == cfg.n_tx);
    }

    SUBCASE("single-path links are rank-one outer products without conjugation") {
        VectorXcd a = upa_response(cfg.m_h, cfg.m_v, cfg.d_h, cfg.d_v, paths.t_azimuth_aoa[0],
                                   paths.t_elevation_aoa[0]);
        VectorXcd b = ula_response(cfg.n_tx, cfg.d_t, paths.t_aod[0]);
        MatrixXcd want = paths.t_gain[0] * a * b.transpose();
        CHECK(max_abs_diff(los.t, want) < 1e-13);
        // the transposed convention is load-bearing: the conjugated variant differs
        MatrixXcd conjugated = paths.t_gain[0] * a * b.adjoint();
        CHECK(max_abs_diff(want, conjugated) > 1e-3);

        VectorXcd ar = ula_response(cfg.n_rx, cfg.d_r, paths.r_aoa[0]);
        VectorXcd br = upa_response(cfg.m_h, cfg.m_v, cfg.d_h, cfg.d_v, paths.r_azimuth_aod[0],
                                    paths.r_elevation_aod[0]);
        CHECK(max_abs_diff(los.r_bar, paths.r_gain[0] * ar * br.transpose()) < 1e-13);
    }

    SUBCASE("multipath sums carry the inverse square-root path normalization") {
        MatrixXcd want = MatrixXcd::Zero(cfg.n_rx, cfg.n_tx);
        for (int i = 0; i < cfg.n_paths_h; ++i) {
            VectorXcd ah = ula_response(cfg.n_rx, cfg.d_r, paths.h_aoa[i]);
            VectorXcd bh = ula_response(cfg.n_tx, cfg.d_t, paths.h_aod[i]);
            want += paths.h_gain[i] * ah * bh.transpose();
        }
        want /= std::sqrt(double(cfg.n_paths_h));
        CHECK(max_abs_diff(los.h_bar, want) < 1e-13);
    }

    SUBCASE("two coherent direct paths add up by the square root of two") {
        SystemConfig coh = small_config();
        coh.n_paths_h = 2;
        Rng r2(3);
        PathSet p = sample_path_set(coh, r2);
        p.h_aoa[1] = p.h_aoa[0];
        p.h_aod[1] = p.h_aod[0];
        p.h_gain[0] = 1.0;
        p.h_gain[1] = 1.0;
        LosMatrices l = build_los_matrices(coh, p);
        VectorXcd ah = ula_response(coh.n_rx, coh.d_r, p.h_aoa[0]);
        VectorXcd bh = ula_response(coh.n_tx, coh.d_t, p.h_aod[0]);
        MatrixXcd want = std::sqrt(2.0) * ah * bh.transpose();
        CHECK(max_abs_diff(l.h_bar, want) < 1e-13);
    }
}

TEST_CASE("channel realizations") {
    SystemConfig cfg = small_config();
    Rng rng(21);
    PathSet paths = sample_path_set(cfg, rng);

    SUBCASE("composition identity holds exactly") {
        Rng draw(4);
        PhaseShifts phases = PhaseShifts::random(cfg.ris_elements(), draw);
        ChannelRealization real = sample_realization(cfg, paths, phases, draw);
        MatrixXcd want = std::sqrt(cfg.beta_t * cfg.beta_r) * real.r *
                             phases.unit_phasors().asDiagonal() * real.t +
                         std::sqrt(cfg.beta_d) * real.h;
        CHECK(max_abs_diff(real.g, want) < 1e-14);
        CHECK(real.g.rows() == cfg.n_rx);
        CHECK(real.g.cols() == cfg.n_tx);
    }

    SUBCASE("transmit link is deterministic") {
        LosMatrices los = build_los_matrices(cfg, paths);
        Rng draw(8);
        PhaseShifts phases = PhaseShifts::zero(cfg.ris_elements());
        ChannelRealization real = sample_realization(cfg, paths, phases, draw);
        CHECK(max_abs_diff(real.t, los.t) == 0.0);
    }

    SUBCASE("fully deterministic links reproduce their path sums") {
        SystemConfig det = small_config();
        det.los_power_r = 1.0;
        det.los_power_h = 1.0;
        LosMatrices los = build_los_matrices(det, paths);
        Rng draw(15);
        PhaseShifts phases = PhaseShifts::zero(det.ris_elements());
        ChannelRealization real = sample_realization(det, paths, phases, draw);
        CHECK(max_abs_diff(real.r, los.r_bar) < 1e-14);
        CHECK(max_abs_diff(real.h, los.h_bar) < 1e-14);
    }

    SUBCASE("same seed reproduces the draw") {
        Rng a(100), b(100);
        PhaseShifts phases = PhaseShifts::zero(cfg.ris_elements());
        ChannelRealization ra = sample_realization(cfg, paths, phases, a);
        ChannelRealization rb = sample_realization(cfg, paths, phases, b);
        CHECK(max_abs_diff(ra.g, rb.g) == 0.0);
    }
}

TEST_CASE("effective first and second moments") {
    SystemConfig cfg = small_config();
    Rng rng(33);
    PathSet paths = sample_path_set(cfg, rng);
    Rng prng(2);
    PhaseShifts phases = PhaseShifts::random(cfg.ris_elements(), prng);
    EffectiveStats stats = effective_stats(cfg, paths, phases);

    SUBCASE("mean matches the weighted path sums") {
        LosMatrices los = build_los_matrices(cfg, paths);
        MatrixXcd want = std::sqrt(cfg.beta_t * cfg.beta_r * cfg.los_power_r) * los.r_bar *
                             phases.unit_phasors().asDiagonal() * los.t +
                         std::sqrt(cfg.beta_d * cfg.los_power_h) * los.h_bar;
        CHECK(max_abs_diff(stats.g_bar, want) < 1e-13);
    }

    SUBCASE("row covariance matches the transmit Gram structure") {
        LosMatrices los = build_los_matrices(cfg, paths);
        MatrixXcd want = cfg.beta_t * cfg.beta_r * cfg.nlos_power_r() * los.t.adjoint() * los.t +
                         cfg.beta_d * cfg.nlos_power_h() *
                             MatrixXcd::Identity(cfg.n_tx, cfg.n_tx);
        CHECK(max_abs_diff(stats.psi, want) < 1e-13);
    }

    SUBCASE("row covariance ignores the phase configuration") {
        Rng p1(41), p2(42);
        EffectiveStats s1 =
            effective_stats(cfg, paths, PhaseShifts::random(cfg.ris_elements(), p1));
        EffectiveStats s2 =
            effective_stats(cfg, paths, PhaseShifts::random(cfg.ris_elements(), p2));
        CHECK(max_abs_diff(s1.psi, s2.psi) < 1e-14);
        CHECK(max_abs_diff(s1.g_bar, s2.g_bar) > 1e-6);  // the mean does depend on them
    }

    SUBCASE("covariance is Hermitian positive definite") {
        CHECK(max_abs_diff(stats.psi, stats.psi.adjoint()) < 1e-14);
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(stats.psi, Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues()(0) > 0.0);
    }

    SUBCASE("sampled realizations agree with the declared moments") {
        const int trials = 3000;
        Rng draw(55);
        MatrixXcd mean_acc = MatrixXcd::Zero(cfg.n_rx, cfg.n_tx);
        MatrixXcd gram_acc = MatrixXcd::Zero(cfg.n_tx, cfg.n_tx);
        for (int i = 0; i < trials; ++i) {
            ChannelRealization real = sample_realization(cfg, paths, phases, draw);
            mean_acc += real.g;
            MatrixXcd centered = real.g - stats.g_bar;
            gram_acc += centered.adjoint() * centered;
        }
        mean_acc /= double(trials);
        gram_acc /= double(trials * cfg.n_rx);
        CHECK(max_abs_diff(mean_acc, stats.g_bar) < 0.1);
        CHECK(max_abs_diff(gram_acc, stats.psi) < 0.15 * stats.psi.norm());
    }

    SUBCASE("no scattered power in any transmit direction is singular") {
        SystemConfig bad = small_config();
        bad.beta_d = 0.0;
        bad.los_power_r = 1.0;
        CHECK_THROWS_AS(effective_stats(bad, paths, phases), SingularCovarianceError);
    }

    SUBCASE("removing the surface link leaves the direct-link moments") {
        SystemConfig direct = small_config();
        direct.beta_t = 0.0;
        EffectiveStats s = effective_stats(direct, paths, phases);
        LosMatrices los = build_los_matrices(direct, paths);
        MatrixXcd want_mean = std::sqrt(direct.beta_d * direct.los_power_h) * los.h_bar;
        MatrixXcd want_psi = direct.beta_d * direct.nlos_power_h() *
                             MatrixXcd::Identity(direct.n_tx, direct.n_tx);
        CHECK(max_abs_diff(s.g_bar, want_mean) < 1e-14);
        CHECK(max_abs_diff(s.psi, want_psi) < 1e-14);
    }
}

TEST_CASE("per-element covariance limit") {
    SUBCASE("single transmit path gives the weighted conjugate outer product") {
        SystemConfig cfg;  // defaults: one transmit path, 4x4 surface
        Rng rng(61);
        PathSet paths = sample_path_set(cfg, rng);
        MatrixXcd ups = upsilon(cfg, paths);
        VectorXcd b = ula_response(cfg.n_tx, cfg.d_t, paths.t_aod[0]).conjugate();
        MatrixXcd want = cfg.beta_t * cfg.beta_r * cfg.nlos_power_r() *
                         std::norm(paths.t_gain[0]) * b * b.adjoint();
        CHECK(max_abs_diff(ups, want) < 1e-13);
        CHECK(max_abs_diff(ups, ups.adjoint()) < 1e-14);
    }

    SUBCASE("scaled row covariance approaches the limit at the exact direct-link rate") {
        SystemConfig cfg;
        Rng rng(62);
        PathSet paths = sample_path_set(cfg, rng);
        MatrixXcd ups = upsilon(cfg, paths);
        PhaseShifts phases = PhaseShifts::zero(cfg.ris_elements());
        for (int side : {4, 8}) {
            SystemConfig grown = cfg;
            grown.m_h = side;
            grown.m_v = side;
            double m = double(grown.ris_elements());
            EffectiveStats stats = effective_stats(
                grown, paths, PhaseShifts::zero(grown.ris_elements()));
            double gap = (stats.psi / m - ups).norm();
            double want = cfg.beta_d * cfg.nlos_power_h() * std::sqrt(double(cfg.n_tx)) / m;
            CHECK(std::abs(gap - want) < 1e-12);
        }
        (void)phases;
    }

    SUBCASE("multipath limit averages the per-path outer products") {
        SystemConfig cfg;
        cfg.n_paths_t = 3;
        Rng rng(63);
        PathSet paths = sample_path_set(cfg, rng);
        MatrixXcd want = MatrixXcd::Zero(cfg.n_tx, cfg.n_tx);
        for (int i = 0; i < 3; ++i) {
            VectorXcd b = ula_response(cfg.n_tx, cfg.d_t, paths.t_aod[i]).conjugate();
            want += (cfg.beta_t * cfg.beta_r * cfg.nlos_power_r() *
                     std::norm(paths.t_gain[i]) / 3.0) *
                    b * b.adjoint();
        }
        CHECK(max_abs_diff(upsilon(cfg, paths), want) < 1e-13);
    }
}

TEST_CASE("configuration validation") {
    SUBCASE("defaults are valid") {
        SystemConfig cfg;
        cfg.validate();
    }

    SUBCASE("rejects nonpositive counts and spacings") {
        SystemConfig cfg;
        cfg.n_tx = 0;
        CHECK_THROWS_AS(cfg.validate(), ConfigError);
        cfg = SystemConfig{};
        cfg.m_v = 0;
        CHECK_THROWS_AS(cfg.validate(), ConfigError);
        cfg = SystemConfig{};
        cfg.d_r = 0.0;
        CHECK_THROWS_AS(cfg.validate(), ConfigError);
    }

    SUBCASE("rejects out-of-range power splits") {
        SystemConfig cfg;
        cfg.los_power_r = 1.2;
        CHECK_THROWS_AS(cfg.validate(), ConfigError);
        cfg = SystemConfig{};
        cfg.los_power_h = -0.1;
        CHECK_THROWS_AS(cfg.validate(), ConfigError);
    }

    SUBCASE("needs power on at least one route") {
        SystemConfig cfg;
        cfg.beta_t = 0.0;
        cfg.beta_d = 0.0;
        CHECK_THROWS_AS(cfg.validate(), ConfigError);
    }
}
