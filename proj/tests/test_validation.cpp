// This file is part of riscap, an ergodic-capacity analysis toolkit for
// reconfigurable-surface MIMO links.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <string>

#include <doctest.h>

#include "riscap/matrix_analysis.hpp"
#include "riscap/validation.hpp"

using namespace riscap;
using namespace riscap::validation;
using Eigen::MatrixXcd;

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

}  // namespace

TEST_CASE("sampling oracles on hand-checkable inputs") {
    MatrixXcd central = MatrixXcd::Zero(1, 1);
    MatrixXcd omega1 = MatrixXcd::Identity(1, 1);

    SUBCASE("scalar central determinant moment is one") {
        auto [mean, se] = oracle_det_moment(central, omega1, 20000, 3);
        CHECK(se > 0.0);
        CHECK(std::abs(mean - 1.0) < 3.5 * se);
    }

    SUBCASE("scalar central log moment is minus the Euler-Mascheroni constant") {
        auto [mean, se] = oracle_logdet_moment(central, omega1, 20000, 3);
        CHECK(std::abs(mean + kEulerGamma) < 3.5 * se);
    }

    SUBCASE("noncentral determinant moment hits the hand-worked value") {
        MatrixXcd b_bar = MatrixXcd::Zero(2, 3);
        b_bar(0, 0) = 1.0;
        b_bar(1, 1) = std::sqrt(2.0);
        auto [mean, se] = oracle_det_moment(b_bar, MatrixXcd::Identity(2, 2), 40000, 5);
        CHECK(std::abs(mean - 14.0) < 3.5 * se);
    }

    SUBCASE("fixed seed and worker count reproduce the estimate") {
        MatrixXcd b_bar = MatrixXcd::Zero(2, 2);
        b_bar(0, 1) = 0.5;
        auto a = oracle_det_moment(b_bar, MatrixXcd::Identity(2, 2), 5000, 11, 2);
        auto b = oracle_det_moment(b_bar, MatrixXcd::Identity(2, 2), 5000, 11, 2);
        CHECK(a.first == b.first);
        CHECK(a.second == b.second);
    }

    SUBCASE("covariance shows up in the moment") {
        MatrixXcd omega = MatrixXcd::Identity(1, 1) * 4.0;
        auto [mean, se] = oracle_det_moment(central, omega, 20000, 7);
        CHECK(std::abs(mean - 4.0) < 3.5 * se);
    }
}

TEST_CASE("deterministic suites pass at reduced scale") {
    SuiteOptions options;
    options.seed = 1;
    options.trial_scale = 0.2;

    SUBCASE("minor expansion identity") {
        SuiteResult r = minor_expansion_suite(options);
        CHECK(r.pass);
        CHECK(r.name == "minor-expansion-identity");
        CHECK(r.worst <= r.limit);
        CHECK(r.trials == 0);
    }

    SUBCASE("eigenvalue sandwich never violates the bracket") {
        SuiteResult r = eigenvalue_sandwich_suite(options);
        CHECK(r.pass);
        CHECK(r.name == "eigenvalue-sandwich");
        CHECK(r.trials == 200);
    }
}

TEST_CASE("moment suite plumbing") {
    SuiteOptions options;
    options.seed = 1;
    options.trial_scale = 0.002;  // floor kicks in; enough to exercise the full path

    SUBCASE("reports its gate and trial count") {
        SuiteResult r = det_moment_suite(options);
        CHECK(r.name == "det-moment-oracle");
        CHECK(r.trials == 2000);
        CHECK(r.limit == 3.0);
        CHECK(r.worst > 0.0);
        CHECK(!r.detail.empty());
    }

    SUBCASE("a corrupted spectral factor is caught at any scale") {
        matrix_analysis::detail::j_scale_hook = 1.01;
        SuiteResult r = det_moment_suite(options);
        matrix_analysis::detail::j_scale_hook = 1.0;
        CHECK(!r.pass);
        // the deterministic anchor case breaks, independent of sampling noise
        CHECK(r.worst > r.limit);
    }
}

TEST_CASE("suite report formatting") {
    SuiteResult r;
    r.name = "sample-suite";
    r.pass = true;
    r.trials = 42;
    r.worst = 0.5;
    r.limit = 1.0;
    r.detail = "everything in order";
    std::string line = format_suite_result(r);
    CHECK(line.find("[PASS]") != std::string::npos);
    CHECK(line.find("sample-suite") != std::string::npos);
    CHECK(line.find("everything in order") != std::string::npos);
    r.pass = false;
    CHECK(format_suite_result(r).find("[FAIL]") != std::string::npos);
}
