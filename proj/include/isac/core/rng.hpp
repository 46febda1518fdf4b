#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "isac/core/types.hpp"

namespace isac {

/**
 * Reproducible random stream keyed by (master_seed, stream_id).
 *
 * The engine state is a pure function of the key, so draws from one stream
 * never depend on how many draws other streams made or in which order the
 * streams were created. Monte Carlo drivers give each trial its own stream.
 */
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
        : master_seed_(master_seed), stream_id_(stream_id), engine_(derive_key(master_seed, stream_id)) {}

    std::uint64_t master_seed() const { return master_seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    /// A sibling stream under the same master seed.
    RngStream substream(std::uint64_t id) const { return RngStream(master_seed_, id); }

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

    double normal() { return normal_(engine_); }

    /// Circularly symmetric complex Gaussian with E|z|^2 = variance.
    cplx complex_normal(double variance = 1.0) {
        const double s = std::sqrt(variance / 2.0);
        const double re = normal_(engine_);
        const double im = normal_(engine_);
        return {s * re, s * im};
    }

    /// Uniform integer in [0, n).
    std::size_t index(std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
    }

    std::uint64_t bits() { return engine_(); }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        // Fisher-Yates with our own index draws; std::shuffle is not portable across libraries.
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[index(i)]);
    }

    CMat complex_normal_matrix(Eigen::Index rows, Eigen::Index cols, double variance = 1.0) {
        CMat m(rows, cols);
        for (Eigen::Index c = 0; c < cols; ++c)
            for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = complex_normal(variance);
        return m;
    }

private:
    static std::uint64_t splitmix(std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    static std::seed_seq::result_type lo(std::uint64_t v) { return static_cast<std::uint32_t>(v); }
    static std::seed_seq::result_type hi(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

    static std::mt19937_64 derive_key(std::uint64_t seed, std::uint64_t stream) {
        const std::uint64_t a = splitmix(seed);
        const std::uint64_t b = splitmix(a ^ splitmix(stream + 0x632BE59BD9B4E019ULL));
        std::seed_seq seq{lo(a), hi(a), lo(b), hi(b), lo(stream), hi(stream)};
        return std::mt19937_64(seq);
    }

    std::uint64_t master_seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace isac
