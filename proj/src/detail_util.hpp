// This file is part of riscap, an ergodic-capacity analysis toolkit for
// reconfigurable-surface MIMO links.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <thread>
#include <vector>

namespace riscap::detail {

// Runs fn(worker_index) on `workers` threads and joins. Worker 0 runs on the
// calling thread, so single-worker calls never spawn. fn must not throw.
template <typename Fn>
void run_workers(int workers, Fn&& fn) {
    if (workers <= 1) {
        fn(0);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int w = 1; w < workers; ++w) pool.emplace_back([&fn, w] { fn(w); });
    fn(0);
    for (auto& t : pool) t.join();
}

// Trials assigned to worker w out of `workers` for `total` trials.
inline long worker_share(long total, int workers, int w) {
    return total / workers + (w < total % workers ? 1 : 0);
}

// Welford accumulator with exact merge, so worker partials combine into the
// same mean/variance regardless of how trials were split.
struct RunningStat {
    long long n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        double d = x - mean;
        mean += d / double(n);
        m2 += d * (x - mean);
    }

    void merge(const RunningStat& o) {
        if (o.n == 0) return;
        if (n == 0) {
            *this = o;
            return;
        }
        double d = o.mean - mean;
        long long t = n + o.n;
        mean += d * double(o.n) / double(t);
        m2 += o.m2 + d * d * double(n) * double(o.n) / double(t);
        n = t;
    }

    double variance() const { return n > 1 ? m2 / double(n - 1) : 0.0; }
    double std_error() const { return n > 1 ? std::sqrt(variance() / double(n)) : 0.0; }
};

}  // namespace riscap::detail
