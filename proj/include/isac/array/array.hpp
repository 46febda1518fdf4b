#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/SVD>

#include "isac/core/rng.hpp"
#include "isac/core/signal.hpp"
#include "isac/core/types.hpp"

namespace isac::array {

struct UlaGeometry {
    int n_elements = 1;
    double spacing = 0.5;     // meters
    double wavelength = 1.0;  // meters

    static UlaGeometry half_wavelength(int n, double wavelength = 1.0) { return {n, wavelength / 2.0, wavelength}; }

    void validate() const {
        require(n_elements >= 1, "UlaGeometry: n_elements must be >= 1");
        require(spacing > 0.0, "UlaGeometry: spacing must be positive");
        require(wavelength > 0.0, "UlaGeometry: wavelength must be positive");
    }
};

/**
 * ULA response a_n(theta) = exp(-j 2 pi n (d / lambda) sin(theta)), n = 0..N-1.
 *
 * The phase reference is element 0, so a_0 = 1. The last entry therefore
 * carries the full (N-1) * 2 pi progression.
 */
inline CVec steering(const UlaGeometry& geom, double theta) {
    geom.validate();
    require(std::abs(theta) <= kPi, "steering: |theta| must not exceed pi");
    const double k = -2.0 * kPi * (geom.spacing / geom.wavelength) * std::sin(theta);
    CVec a(geom.n_elements);
    for (int n = 0; n < geom.n_elements; ++n) a[n] = std::polar(1.0, k * n);
    return a;
}

/// d a / d theta.
inline CVec steering_derivative(const UlaGeometry& geom, double theta) {
    const double k = -2.0 * kPi * (geom.spacing / geom.wavelength) * std::cos(theta);
    CVec a = steering(geom, theta);
    for (int n = 0; n < geom.n_elements; ++n) a[n] *= kJ * (k * n);
    return a;
}

/// Steering vectors for every angle as columns.
inline CMat steering_matrix(const UlaGeometry& geom, std::span<const double> thetas) {
    CMat a(geom.n_elements, static_cast<Eigen::Index>(thetas.size()));
    for (std::size_t i = 0; i < thetas.size(); ++i) a.col(static_cast<Eigen::Index>(i)) = steering(geom, thetas[i]);
    return a;
}

// ---------------------------------------------------------------------------
// Geometric and statistical channels

struct PathSpec {
    cplx gain{1.0, 0.0};
    double dod = 0.0;  // phi
    double doa = 0.0;  // theta
};

struct GeoChannelSpec {
    std::vector<PathSpec> paths;
    UlaGeometry tx;
    UlaGeometry rx;
};

/// H = sum_l alpha_l b(theta_l) a(phi_l)^T, N_r x N_t.
inline ChannelMatrix geo_channel(const GeoChannelSpec& spec) {
    require(!spec.paths.empty(), "geo_channel: at least one path required");
    for (const auto& p : spec.paths)
        require(std::abs(p.dod) <= kPi / 2.0 && std::abs(p.doa) <= kPi / 2.0,
                "geo_channel: path angles must lie in [-pi/2, pi/2]");
    CMat h = CMat::Zero(spec.rx.n_elements, spec.tx.n_elements);
    for (const auto& p : spec.paths) h += p.gain * steering(spec.rx, p.doa) * steering(spec.tx, p.dod).transpose();
    return {std::move(h), ChannelKind::Geometric};
}

/// i.i.d. CN(0, 1) entries.
inline ChannelMatrix rayleigh_channel(int n_r, int n_t, RngStream& rng) {
    require(n_r >= 1 && n_t >= 1, "rayleigh_channel: dimensions must be positive");
    return {rng.complex_normal_matrix(n_r, n_t, 1.0), ChannelKind::Rayleigh};
}

inline int numerical_rank(const CMat& m, double tol = 1e-8) {
    Eigen::JacobiSVD<CMat> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s[0] == 0.0) return 0;
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s[i] > tol * s[0]) ++r;
    return r;
}

// ---------------------------------------------------------------------------
// Phased array

inline bool unit_modulus(const CVec& v, double tol = 1e-12) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (std::abs(std::abs(v[i]) - 1.0) > tol) return false;
    return true;
}

/// |w^H H f|.
inline double array_gain(const CMat& h, const CVec& f, const CVec& w) { return std::abs(w.dot(h * f)); }

/// y_n = w^H H f s_n + z_n for every symbol; f and w must be unit-modulus phase weights.
inline CVec apply_phased(const CMat& h, const CVec& f, const CVec& w, const CVec& s, double sigma2, RngStream& rng) {
    require(f.size() == h.cols() && w.size() == h.rows(), "apply_phased: weight dimensions do not match H");
    require(unit_modulus(f) && unit_modulus(w), "apply_phased: beamformer weights must be unit-modulus");
    const cplx g = w.dot(h * f);  // Eigen's dot conjugates the first argument
    return add_awgn(CVec(g * s), sigma2, rng);
}

// ---------------------------------------------------------------------------
// Multi-user precoding. Normalization is total power ||F||_F^2 = K_u.

namespace detail {
inline CMat normalize_total_power(CMat f) {
    const double norm2 = f.squaredNorm();
    if (norm2 > 0.0) f *= std::sqrt(static_cast<double>(f.cols()) / norm2);
    return f;
}
}  // namespace detail

struct PrecoderResult {
    CMat f;
    bool rank_deficient = false;
};

/// Zero-forcing F = H^H (H H^H)^-1 for a K_u x N_t channel.
inline PrecoderResult zf_precoder(const CMat& h) {
    require(h.rows() >= 1 && h.rows() <= h.cols(), "zf_precoder: need 1 <= K_u <= N_t");
    PrecoderResult r;
    if (numerical_rank(h, 1e-10) < h.rows()) {
        r.rank_deficient = true;
        r.f = CMat::Zero(h.cols(), h.rows());
        return r;
    }
    const CMat gram = h * h.adjoint();
    r.f = detail::normalize_total_power(h.adjoint() * gram.ldlt().solve(CMat::Identity(h.rows(), h.rows())));
    return r;
}

/// Matched-filter (conjugate) precoder F = H^H.
inline CMat mf_precoder(const CMat& h) { return detail::normalize_total_power(h.adjoint()); }

// ---------------------------------------------------------------------------
// Hybrid analog/digital

struct HybridConfig {
    CMat analog;   // F_RF, N_t x N_RF, unit-modulus
    CMat digital;  // F_BB, N_RF x K

    Eigen::Index n_rf() const { return analog.cols(); }
    Eigen::Index n_streams() const { return digital.cols(); }

    void validate() const {
        require(analog.cols() == digital.rows(), "HybridConfig: F_RF columns must equal F_BB rows");
        require(n_streams() <= n_rf(), "HybridConfig: number of streams cannot exceed RF chains");
        for (Eigen::Index c = 0; c < analog.cols(); ++c)
            require(unit_modulus(analog.col(c)), "HybridConfig: analog entries must be unit-modulus");
    }

    CMat equivalent_precoder() const { return analog * digital; }
};

inline CVec hybrid_apply(const CMat& h, const HybridConfig& cfg, const CVec& s, double sigma2, RngStream& rng) {
    cfg.validate();
    require(h.cols() == cfg.analog.rows(), "hybrid_apply: channel columns must equal N_t");
    require(s.size() == cfg.n_streams(), "hybrid_apply: symbol vector length must equal streams");
    return add_awgn(CVec(h * (cfg.analog * (cfg.digital * s))), sigma2, rng);
}

// ---------------------------------------------------------------------------
// Massive-MIMO statistics

/// var(||h||^2) / E(||h||^2)^2 over draws; falls as 1 / N for i.i.d. entries.
inline double hardening_ratio(std::span<const CVec> draws) {
    require(draws.size() >= 2, "hardening_ratio: need at least two draws");
    double mean = 0.0;
    for (const auto& h : draws) mean += h.squaredNorm();
    mean /= static_cast<double>(draws.size());
    double var = 0.0;
    for (const auto& h : draws) var += (h.squaredNorm() - mean) * (h.squaredNorm() - mean);
    var /= static_cast<double>(draws.size() - 1);
    return mean > 0.0 ? var / (mean * mean) : 0.0;
}

struct HardeningRow {
    int n_t = 0;
    int n_r = 0;
    int trials = 0;
    double hardening = 0.0;       // var(||h_k||^2) / E(||h_k||^2)^2
    double raw_ratio = 0.0;       // var(||h_k||^2) / E(||h_k||^2), ~1 for unit-variance entries
    double favorable = 0.0;       // mean ||H H^H / N_t - I||_F
};

inline HardeningRow hardening_point(int n_t, int n_r, int n_trials, RngStream& rng) {
    std::vector<CVec> rows;
    rows.reserve(static_cast<std::size_t>(n_trials) * n_r);
    double fav = 0.0;
    for (int t = 0; t < n_trials; ++t) {
        const CMat h = rayleigh_channel(n_r, n_t, rng).h;
        for (int k = 0; k < n_r; ++k) rows.emplace_back(h.row(k).transpose());
        fav += (h * h.adjoint() / static_cast<double>(n_t) - CMat::Identity(n_r, n_r)).norm();
    }
    HardeningRow r;
    r.n_t = n_t;
    r.n_r = n_r;
    r.trials = n_trials;
    r.hardening = hardening_ratio(rows);
    double mean = 0.0;
    for (const auto& h : rows) mean += h.squaredNorm();
    mean /= static_cast<double>(rows.size());
    r.raw_ratio = r.hardening * mean;
    r.favorable = fav / n_trials;
    return r;
}

/// One row per N_t; each N_t draws from its own substream so rows are independent of list order.
inline std::vector<HardeningRow> hardening_stats(std::span<const int> n_t_list, int n_r, int n_trials,
                                                 const RngStream& rng) {
    require(n_trials >= 100, "hardening_stats: n_trials must be >= 100");
    require(n_r >= 1, "hardening_stats: n_r must be >= 1");
    std::vector<HardeningRow> out;
    for (int n_t : n_t_list) {
        require(n_t >= 1, "hardening_stats: N_t must be positive");
        RngStream sub = rng.substream(static_cast<std::uint64_t>(n_t));
        out.push_back(hardening_point(n_t, n_r, n_trials, sub));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Distributed arrays

using Point2 = Eigen::Vector2d;

struct DistributedGeometry {
    std::vector<Point2> tx_positions;
    std::vector<Point2> rx_positions;

    void validate() const {
        require(!tx_positions.empty() && !rx_positions.empty(),
                "DistributedGeometry: need at least one element per side");
        for (const auto& p : tx_positions) require(p.allFinite(), "DistributedGeometry: positions must be finite");
        for (const auto& p : rx_positions) require(p.allFinite(), "DistributedGeometry: positions must be finite");
    }
};

enum class Amplitude { PhaseOnly, InverseRange };

struct DistributedResponse {
    CVec tx;  // a(q)
    CVec rx;  // b(q)
};

namespace detail {
inline CVec element_response(const std::vector<Point2>& pos, const Point2& q, double wavelength, Amplitude amp) {
    CVec v(static_cast<Eigen::Index>(pos.size()));
    for (std::size_t k = 0; k < pos.size(); ++k) {
        const double r = (pos[k] - q).norm();
        require(r > 0.0, "distributed_response: target colocated with an array element");
        const double mag = amp == Amplitude::InverseRange ? 1.0 / r : 1.0;
        v[static_cast<Eigen::Index>(k)] = std::polar(mag, -2.0 * kPi * r / wavelength);
    }
    return v;
}
}  // namespace detail

inline DistributedResponse distributed_response(const DistributedGeometry& geom, const Point2& q, double wavelength,
                                                Amplitude amp = Amplitude::PhaseOnly) {
    geom.validate();
    require(wavelength > 0.0, "distributed_response: wavelength must be positive");
    return {detail::element_response(geom.tx_positions, q, wavelength, amp),
            detail::element_response(geom.rx_positions, q, wavelength, amp)};
}

struct DistributedTarget {
    Point2 position;
    cplx reflectivity{1.0, 0.0};
};

/// sum_l alpha_l b(q_l) a(q_l)^T.
inline ChannelMatrix distributed_channel(const DistributedGeometry& geom, std::span<const DistributedTarget> targets,
                                         double wavelength, Amplitude amp = Amplitude::PhaseOnly) {
    CMat h = CMat::Zero(static_cast<Eigen::Index>(geom.rx_positions.size()),
                        static_cast<Eigen::Index>(geom.tx_positions.size()));
    for (const auto& t : targets) {
        const auto r = distributed_response(geom, t.position, wavelength, amp);
        h += t.reflectivity * r.rx * r.tx.transpose();
    }
    return {std::move(h), ChannelKind::Distributed};
}

// ---------------------------------------------------------------------------
// Colocated MIMO radar virtual array

/// vec(b a^T) = a (x) b, the virtual-array response seen after separating orthogonal Tx waveforms.
inline CVec virtual_steering(const UlaGeometry& tx, const UlaGeometry& rx, double theta) {
    const CVec a = steering(tx, theta);
    const CVec b = steering(rx, theta);
    CVec v(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) v.segment(i * b.size(), b.size()) = a[i] * b;
    return v;
}

/// Rank of the least-squares system that fits L reflectivities at known angles.
inline int virtual_array_rank(const UlaGeometry& tx, const UlaGeometry& rx, std::span<const double> thetas) {
    CMat a(static_cast<Eigen::Index>(tx.n_elements) * rx.n_elements, static_cast<Eigen::Index>(thetas.size()));
    for (std::size_t l = 0; l < thetas.size(); ++l)
        a.col(static_cast<Eigen::Index>(l)) = virtual_steering(tx, rx, thetas[l]);
    return numerical_rank(a, 1e-8);
}

}  // namespace isac::array
