#pragma once

#include "steinchord/chord_diagram.hpp"
#include "steinchord/distances.hpp"
#include "steinchord/rng.hpp"

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace steinchord {

// Two-sided z at confidence 1 - 1e-4, i.e. the 1 - 5e-5 normal quantile.
// Frozen constant; normal_cdf(kConfidenceZ) == 1 - 5e-5 is checked in tests.
inline constexpr double kConfidenceZ = 3.890591886413094;

// Samples are partitioned by sample index into fixed blocks of this size;
// block b always draws from StreamRng(seed, b) and partial results merge in
// block order.  Worker count decides only which thread runs a block, so
// estimates are identical for any worker count.  The block size is part of
// the stream-reproducibility contract: changing it changes every estimate.
inline constexpr std::uint64_t kMcBlockSize = 4096;

inline unsigned workers_from_env() {
    if (const char* env = std::getenv("STEINLAB_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// Runs fn(b) for b in [0, blocks), distributing blocks over `workers`
// threads, and returns the results indexed by block.
template <typename T, typename Fn>
std::vector<T> map_blocks(std::uint64_t blocks, unsigned workers, Fn fn) {
    std::vector<T> out(blocks);
    if (workers <= 1 || blocks <= 1) {
        for (std::uint64_t b = 0; b < blocks; ++b) out[b] = fn(b);
        return out;
    }
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    const unsigned thread_count = static_cast<unsigned>(
        std::min<std::uint64_t>(workers, blocks));
    std::vector<std::thread> pool;
    pool.reserve(thread_count);
    for (unsigned t = 0; t < thread_count; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const std::uint64_t b = next.fetch_add(1);
                if (b >= blocks) return;
                try {
                    out[b] = fn(b);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
    return out;
}

struct McMean {
    double estimate = 0;
    double ci_low = 0;
    double ci_high = 0;
    double stddev = 0;
    std::uint64_t samples = 0;
};

// Mean of per_sample(rng) over `samples` draws with a normal-approximation
// CI at confidence 1 - 1e-4.  per_sample must consume randomness only from
// the StreamRng it is handed.
template <typename Fn>
McMean mc_mean(std::uint64_t samples, std::uint64_t seed, unsigned workers, Fn per_sample) {
    if (samples == 0) throw EmptySampleError("mc_mean: samples must be >= 1");
    const std::uint64_t blocks = (samples + kMcBlockSize - 1) / kMcBlockSize;
    struct Partial {
        long double sum = 0, sumsq = 0;
        std::uint64_t count = 0;
    };
    const auto partials = map_blocks<Partial>(blocks, workers, [&](std::uint64_t b) {
        StreamRng rng(seed, b);
        const std::uint64_t lo = b * kMcBlockSize;
        const std::uint64_t hi = std::min(samples, lo + kMcBlockSize);
        Partial p;
        for (std::uint64_t s = lo; s < hi; ++s) {
            const double x = per_sample(rng);
            p.sum += x;
            p.sumsq += static_cast<long double>(x) * x;
            ++p.count;
        }
        return p;
    });
    long double sum = 0, sumsq = 0;
    for (const auto& p : partials) {
        sum += p.sum;
        sumsq += p.sumsq;
    }
    McMean r;
    r.samples = samples;
    const long double m = static_cast<long double>(samples);
    r.estimate = static_cast<double>(sum / m);
    const long double var = samples > 1 ? (sumsq - sum * sum / m) / (m - 1) : 0.0l;
    r.stddev = var > 0 ? static_cast<double>(std::sqrt(static_cast<double>(var))) : 0.0;
    const double half_width = kConfidenceZ * r.stddev / std::sqrt(static_cast<double>(samples));
    r.ci_low = r.estimate - half_width;
    r.ci_high = r.estimate + half_width;
    return r;
}

// All per-sample values in sample-index order (for ECDF statistics); the
// ordering, like the values, is independent of the worker count.
template <typename Fn>
std::vector<double> mc_collect(std::uint64_t samples, std::uint64_t seed, unsigned workers,
                               Fn per_sample) {
    if (samples == 0) throw EmptySampleError("mc_collect: samples must be >= 1");
    const std::uint64_t blocks = (samples + kMcBlockSize - 1) / kMcBlockSize;
    auto chunks = map_blocks<std::vector<double>>(blocks, workers, [&](std::uint64_t b) {
        StreamRng rng(seed, b);
        const std::uint64_t lo = b * kMcBlockSize;
        const std::uint64_t hi = std::min(samples, lo + kMcBlockSize);
        std::vector<double> vals;
        vals.reserve(hi - lo);
        for (std::uint64_t s = lo; s < hi; ++s) vals.push_back(per_sample(rng));
        return vals;
    });
    std::vector<double> out;
    out.reserve(samples);
    for (auto& chunk : chunks) out.insert(out.end(), chunk.begin(), chunk.end());
    return out;
}

}  // namespace steinchord
