#pragma once

#include <atomic>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "blockfade/rng.hpp"

namespace blockfade {

// Result of a Monte Carlo mean estimate. variance is the per-sample sample
// variance, so std_error = sqrt(variance / n_samples) always holds.
struct McEstimate {
    double mean = 0.0;
    double variance = 0.0;
    double std_error = 0.0;
    std::int64_t n_samples = 0;
    std::uint64_t seed = 0;
};

// Streaming central moments up to fourth order. Single observations are
// folded in Welford-style; partial accumulators combine with the pairwise
// (Pebay) update, which is what makes chunked parallel reduction exact as
// long as chunks are merged in a fixed order.
class MomentAccumulator {
  public:
    void add(double x) {
        const std::int64_t n1 = n_;
        n_ += 1;
        const double delta = x - mean_;
        const double delta_n = delta / static_cast<double>(n_);
        const double delta2 = delta_n * delta_n;
        const double term1 = delta * delta_n * static_cast<double>(n1);
        m4_ += term1 * delta2 * static_cast<double>(n_ * n_ - 3 * n_ + 3) + 6.0 * delta2 * m2_ -
               4.0 * delta_n * m3_;
        m3_ += term1 * delta_n * static_cast<double>(n_ - 2) - 3.0 * delta_n * m2_;
        m2_ += term1;
        mean_ += delta_n;
    }

    void merge(const MomentAccumulator& o) {
        if (o.n_ == 0) return;
        if (n_ == 0) {
            *this = o;
            return;
        }
        const double na = static_cast<double>(n_);
        const double nb = static_cast<double>(o.n_);
        const double n = na + nb;
        const double delta = o.mean_ - mean_;
        const double d2 = delta * delta;

        const double m2 = m2_ + o.m2_ + d2 * na * nb / n;
        const double m3 = m3_ + o.m3_ + d2 * delta * na * nb * (na - nb) / (n * n) +
                          3.0 * delta * (na * o.m2_ - nb * m2_) / n;
        const double m4 = m4_ + o.m4_ +
                          d2 * d2 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n) +
                          6.0 * d2 * (na * na * o.m2_ + nb * nb * m2_) / (n * n) +
                          4.0 * delta * (na * o.m3_ - nb * m3_) / n;

        mean_ += delta * nb / n;
        m2_ = m2;
        m3_ = m3;
        m4_ = m4;
        n_ += o.n_;
    }

    std::int64_t count() const { return n_; }
    double mean() const { return mean_; }

    // Unbiased sample variance; requires at least two observations.
    double sample_variance() const {
        if (n_ < 2) throw std::domain_error("MomentAccumulator: variance needs n >= 2");
        return m2_ / static_cast<double>(n_ - 1);
    }

    double central_moment2() const { return n_ > 0 ? m2_ / static_cast<double>(n_) : 0.0; }
    double central_moment4() const { return n_ > 0 ? m4_ / static_cast<double>(n_) : 0.0; }

    McEstimate to_estimate(std::uint64_t seed) const {
        const double var = sample_variance();
        return {mean_, var, std::sqrt(var / static_cast<double>(n_)), n_, seed};
    }

  private:
    std::int64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
    double m3_ = 0.0;
    double m4_ = 0.0;
};

namespace detail {

inline int resolve_workers(int workers) {
    if (workers > 0) return workers;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs fn(chunk_index) for every chunk on a small worker pool. Work items
// are claimed through an atomic counter; outputs must be written to
// per-chunk slots so the result does not depend on the claiming order.
template <class Fn>
void for_each_chunk(std::int64_t n_chunks, int workers, Fn&& fn) {
    workers = std::min<std::int64_t>(resolve_workers(workers), n_chunks);
    if (workers <= 1) {
        for (std::int64_t c = 0; c < n_chunks; ++c) fn(c);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::int64_t c = next.fetch_add(1, std::memory_order_relaxed);
                if (c >= n_chunks) return;
                fn(c);
            }
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace detail

// Chunked accumulation of sampler(rng) draws. Chunk c always uses substream
// (seed, c) and chunk results merge in ascending chunk order, so the outcome
// is bit-identical for any worker count.
template <class Sampler>
MomentAccumulator accumulate(Sampler&& sampler, std::int64_t n_samples, std::uint64_t seed,
                             std::int64_t chunk, int workers = 0) {
    if (n_samples < 1) throw std::domain_error("accumulate: n_samples must be >= 1");
    if (chunk < 1) throw std::domain_error("accumulate: chunk must be >= 1");
    const std::int64_t n_chunks = (n_samples + chunk - 1) / chunk;
    std::vector<MomentAccumulator> parts(static_cast<std::size_t>(n_chunks));
    detail::for_each_chunk(n_chunks, workers, [&](std::int64_t c) {
        RngStream rng(seed, static_cast<std::uint64_t>(c));
        const std::int64_t lo = c * chunk;
        const std::int64_t hi = std::min(n_samples, lo + chunk);
        MomentAccumulator acc;
        for (std::int64_t i = lo; i < hi; ++i) acc.add(sampler(rng));
        parts[static_cast<std::size_t>(c)] = acc;
    });
    MomentAccumulator total;
    for (const auto& part : parts) total.merge(part);
    return total;
}

template <class Sampler>
McEstimate estimate(Sampler&& sampler, std::int64_t n_samples, std::uint64_t seed,
                    std::int64_t chunk, int workers = 0) {
    if (n_samples < 2) throw std::domain_error("estimate: n_samples must be >= 2");
    return accumulate(std::forward<Sampler>(sampler), n_samples, seed, chunk, workers)
        .to_estimate(seed);
}

// Fraction of values that do not exceed the threshold.
double empirical_tail(std::span<const double> values, double threshold);

}  // namespace blockfade
