// This file is part of riscap, an ergodic-capacity analysis toolkit for
// reconfigurable-surface MIMO links.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace riscap {

// Deterministic random source. Every draw goes through explicit transforms
// (no std distributions), so a seed pins the exact stream regardless of the
// standard-library implementation.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(mix(seed)) {}

    // Decorrelated child seed for worker `stream_index`. Workers in a Monte
    // Carlo run each own one of these, which keeps results reproducible for
    // a fixed (seed, worker count) pair independent of scheduling.
    static std::uint64_t derive(std::uint64_t master_seed, std::uint64_t stream_index) {
        return mix(master_seed) ^ mix(stream_index * 0x9e3779b97f4a7c15ull + 0x6a09e667f3bcc909ull);
    }
    static Rng stream(std::uint64_t master_seed, std::uint64_t stream_index) {
        return Rng(derive(master_seed, stream_index));
    }

    std::uint64_t bits() { return gen_(); }

    // Uniform on [0, 1).
    double uniform() { return double(bits() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Phase-shift convention: uniform on (-pi, pi].
    double angle_signed() { return std::numbers::pi - 2.0 * std::numbers::pi * uniform(); }

    // Geometry convention: uniform on [0, 2*pi).
    double angle_positive() { return 2.0 * std::numbers::pi * uniform(); }

    // Standard normal via Box-Muller; the second variate of each pair is
    // cached so consecutive calls cost one transform per two draws.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double r = std::sqrt(-2.0 * std::log(uniform_pos()));
        double a = 2.0 * std::numbers::pi * uniform();
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    // Circularly symmetric complex normal with unit variance: real and
    // imaginary parts are independent N(0, 1/2).
    std::complex<double> cnormal() {
        double r = std::sqrt(-std::log(uniform_pos()));
        double a = 2.0 * std::numbers::pi * uniform();
        return {r * std::cos(a), r * std::sin(a)};
    }

  private:
    // Uniform on (0, 1]; keeps log() finite.
    double uniform_pos() { return (double(bits() >> 11) + 1.0) * 0x1.0p-53; }

    // splitmix64 finalizer
    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }

    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace riscap
