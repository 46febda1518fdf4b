#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "isac/core/rng.hpp"
#include "isac/core/signal.hpp"
#include "isac/core/types.hpp"

namespace isac::joint {

namespace detail {

inline std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        // exact at every step: r * (n - k + i) is divisible by i
        require(r <= std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(n - k + i),
                "binomial: overflow");
        r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    }
    return r;
}

inline std::uint64_t factorial(int n) {
    std::uint64_t r = 1;
    for (int i = 2; i <= n; ++i) {
        require(r <= std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(i), "factorial: overflow");
        r *= static_cast<std::uint64_t>(i);
    }
    return r;
}

}  // namespace detail

/**
 * Carrier-agile index-modulation codebook: each PRI picks K of M carriers and
 * assigns them one-to-one to the K antennas, so message_count = C(M, K) K!.
 */
struct ImCodebook {
    int n_carriers = 4;   // M
    int n_selected = 2;   // K
    int n_antennas = 2;   // equals K: one carrier per antenna

    void validate() const {
        require(n_carriers >= 1, "ImCodebook: n_carriers must be positive");
        require(n_selected >= 1 && n_selected <= n_carriers, "ImCodebook: need 1 <= K <= M");
        require(n_antennas == n_selected, "ImCodebook: each antenna carries exactly one selected carrier");
        require(message_count() >= 2, "ImCodebook: need at least two messages");
    }

    std::uint64_t subset_count() const { return detail::binomial(n_carriers, n_selected); }
    std::uint64_t arrangement_count() const { return detail::factorial(n_selected); }
    std::uint64_t message_count() const { return subset_count() * arrangement_count(); }
};

struct ImCodeword {
    std::vector<int> subset;      // sorted carrier indices
    std::vector<int> assignment;  // carrier used by antenna i
};

/// Message -> (subset rank, permutation rank) -> lexicographic combination and Lehmer-code permutation.
inline ImCodeword im_encode(std::uint64_t msg, const ImCodebook& cb) {
    cb.validate();
    require(msg < cb.message_count(), "im_encode: message index out of range");
    const int m = cb.n_carriers;
    const int k = cb.n_selected;
    std::uint64_t subset_rank = msg / cb.arrangement_count();
    std::uint64_t perm_rank = msg % cb.arrangement_count();

    ImCodeword w;
    int next = 0;
    for (int i = 0; i < k; ++i) {
        for (int c = next; c < m; ++c) {
            const std::uint64_t cnt = detail::binomial(m - c - 1, k - i - 1);
            if (subset_rank < cnt) {
                w.subset.push_back(c);
                next = c + 1;
                break;
            }
            subset_rank -= cnt;
        }
    }

    std::vector<int> pool(static_cast<std::size_t>(k));
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < k; ++i) {
        const std::uint64_t f = detail::factorial(k - 1 - i);
        const auto idx = static_cast<std::size_t>(perm_rank / f);
        perm_rank %= f;
        w.assignment.push_back(w.subset[static_cast<std::size_t>(pool[idx])]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(idx));
    }
    return w;
}

/// Inverse of im_encode; the assignment must use K distinct carriers.
inline std::uint64_t im_index(const std::vector<int>& assignment, const ImCodebook& cb) {
    cb.validate();
    const int m = cb.n_carriers;
    const int k = cb.n_selected;
    require(static_cast<int>(assignment.size()) == k, "im_index: one carrier per antenna");
    std::vector<int> subset = assignment;
    std::sort(subset.begin(), subset.end());
    require(std::adjacent_find(subset.begin(), subset.end()) == subset.end(), "im_index: carriers must be distinct");
    require(subset.front() >= 0 && subset.back() < m, "im_index: carrier out of range");

    std::uint64_t subset_rank = 0;
    int next = 0;
    for (int i = 0; i < k; ++i) {
        for (int c = next; c < subset[static_cast<std::size_t>(i)]; ++c) subset_rank += detail::binomial(m - c - 1, k - i - 1);
        next = subset[static_cast<std::size_t>(i)] + 1;
    }

    std::vector<int> pool = subset;
    std::uint64_t perm_rank = 0;
    for (int i = 0; i < k; ++i) {
        const auto it = std::find(pool.begin(), pool.end(), assignment[static_cast<std::size_t>(i)]);
        perm_rank += static_cast<std::uint64_t>(it - pool.begin()) * detail::factorial(k - 1 - i);
        pool.erase(it);
    }
    return subset_rank * cb.arrangement_count() + perm_rank;
}

/// Tone for carrier c over one pulse of M samples: exp(j 2 pi c n / M).
inline CVec im_tone(int carrier, const ImCodebook& cb) {
    CVec t(cb.n_carriers);
    for (int n = 0; n < cb.n_carriers; ++n) t[n] = std::polar(1.0, 2.0 * kPi * carrier * n / cb.n_carriers);
    return t;
}

/// Per-antenna transmit pulses (rows), unit power per sample.
inline CMat im_waveforms(const ImCodeword& w, const ImCodebook& cb) {
    CMat out(cb.n_antennas, cb.n_carriers);
    for (int a = 0; a < cb.n_antennas; ++a) out.row(a) = im_tone(w.assignment[static_cast<std::size_t>(a)], cb).transpose();
    return out;
}

/// Distinct carriers per antenna, hence mutually orthogonal antenna waveforms.
inline bool carriers_orthogonal(const ImCodeword& w, const ImCodebook& cb, double tol = 1e-9) {
    const CMat s = im_waveforms(w, cb);
    const CMat gram = s * s.adjoint();
    for (Eigen::Index i = 0; i < gram.rows(); ++i)
        for (Eigen::Index k = 0; k < gram.cols(); ++k)
            if (i != k && std::abs(gram(i, k)) > tol * cb.n_carriers) return false;
    return true;
}

/// |<rx_a, tone_c>|^2 for each antenna stream a and carrier c.
inline RMat im_filter_bank(const CMat& rx, const ImCodebook& cb) {
    require(rx.rows() == cb.n_antennas && rx.cols() == cb.n_carriers, "im_filter_bank: rx must be antennas x M");
    RMat e(cb.n_antennas, cb.n_carriers);
    for (int c = 0; c < cb.n_carriers; ++c) {
        const CVec tone = im_tone(c, cb);
        for (int a = 0; a < cb.n_antennas; ++a) e(a, c) = std::norm(tone.dot(rx.row(a).transpose()));
    }
    return e;
}

struct ImDecodeResult {
    std::optional<std::uint64_t> message;
    std::vector<int> carriers;  // detected carrier per antenna
    bool erasure = false;
};

/**
 * Picks the strongest carrier per antenna. A tie between the two strongest
 * carriers on an antenna, or the same carrier detected on two antennas, is
 * an erasure.
 */
inline ImDecodeResult im_decode(const RMat& energies, const ImCodebook& cb, double tie_tol = 1e-12) {
    cb.validate();
    require(energies.rows() == cb.n_antennas && energies.cols() == cb.n_carriers,
            "im_decode: energies must be antennas x M");
    ImDecodeResult r;
    for (Eigen::Index a = 0; a < energies.rows(); ++a) {
        Eigen::Index best = 0;
        const double top = energies.row(a).maxCoeff(&best);
        double second = -1.0;
        for (Eigen::Index c = 0; c < energies.cols(); ++c)
            if (c != best) second = std::max(second, energies(a, c));
        if (second >= top - tie_tol * std::max(top, 1.0)) r.erasure = true;
        r.carriers.push_back(static_cast<int>(best));
    }
    std::vector<int> sorted = r.carriers;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) r.erasure = true;
    if (!r.erasure) r.message = im_index(r.carriers, cb);
    return r;
}

/// Per-antenna received pulses with per-sample SNR snr_linear (unit signal power, noise variance 1 / snr).
inline CMat im_channel(const ImCodeword& w, const ImCodebook& cb, double snr_linear, RngStream& rng) {
    const CMat s = im_waveforms(w, cb);
    if (!std::isfinite(snr_linear)) return s;
    return add_awgn(s, 1.0 / snr_linear, rng);
}

}  // namespace isac::joint
