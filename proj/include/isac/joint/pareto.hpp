#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "isac/array/array.hpp"
#include "isac/core/rng.hpp"
#include "isac/radar/estimation.hpp"

namespace isac::joint {

/// rho = |h^H a| / (||h|| ||a||).
inline double corr_coeff(const CVec& h_c, const CVec& a) {
    require(h_c.size() == a.size(), "corr_coeff: vectors must have equal length");
    const double nh = h_c.norm();
    const double na = a.norm();
    require(nh > 0.0 && na > 0.0, "corr_coeff: vectors must be nonzero");
    return std::min(1.0, std::abs(h_c.dot(a)) / (nh * na));
}

/**
 * Single-user, single-target joint design. The monostatic radar sees
 * mu = alpha b(theta) a(theta)^T w with unknown (theta, Re alpha, Im alpha);
 * the user sees rate log2(1 + |h_c^H w|^2 / sigma_c^2).
 *
 * The transmit direction that maximizes radar gain is conj(a(theta)), so the
 * subspace correlation that governs the tradeoff is corr_coeff(h_c, conj(a)).
 */
struct JdScenario {
    array::UlaGeometry tx;
    array::UlaGeometry rx;
    double theta = 0.0;
    cplx alpha{1.0, 0.0};
    CVec h_c;
    double energy = 1.0;  // E_T, ||w||^2 at full power
    double sigma2_radar = 1.0;
    double sigma2_comm = 1.0;

    void validate() const {
        tx.validate();
        rx.validate();
        require(h_c.size() == tx.n_elements, "JdScenario: h_c length must equal N_t");
        require(h_c.norm() > 0.0, "JdScenario: h_c must be nonzero");
        require(energy > 0.0 && sigma2_radar > 0.0 && sigma2_comm > 0.0,
                "JdScenario: energy and noise variances must be positive");
    }

    CVec radar_direction() const { return array::steering(tx, theta).conjugate(); }
    double rho() const { return corr_coeff(h_c, radar_direction()); }
};

inline double jd_rate(const JdScenario& s, const CVec& w) {
    return std::log2(1.0 + std::norm(s.h_c.dot(w)) / s.sigma2_comm);
}

/// CRB(theta) for beamformer w: the (theta, theta) entry of the 3x3 inverse FIM.
inline double jd_crb(const JdScenario& s, const CVec& w) {
    const CVec a = array::steering(s.tx, s.theta);
    const CVec da = array::steering_derivative(s.tx, s.theta);
    const CVec b = array::steering(s.rx, s.theta);
    const CVec db = array::steering_derivative(s.rx, s.theta);
    const cplx g = a.transpose() * w;
    const cplx dg = da.transpose() * w;
    const std::vector<CMat> d{CMat(s.alpha * (db * g + b * dg)), CMat(b * g), CMat(kJ * b * g)};
    const auto crb = radar::fisher_crb(s.sigma2_radar, d, {"theta", "alpha_re", "alpha_im"});
    return crb.bound(0);
}

/// Full-power maximum-ratio transmission rate, the largest feasible R_0.
inline double jd_max_rate(const JdScenario& s) {
    return std::log2(1.0 + s.energy * s.h_c.squaredNorm() / s.sigma2_comm);
}

struct JdGrid {
    int n_angles = 721;  // rotation from the sensing direction (0) to the user direction (pi/2)
    int n_phases = 180;  // relative phase over [0, 2 pi)
};

struct JdCandidate {
    double rate = 0.0;
    double crb = 0.0;
    int angle_index = 0;
    int phase_index = 0;
};

/**
 * w(psi, phi) = sqrt(E_T) normalize(cos(psi) u_r + sin(psi) e^{j phi} u_c),
 * where u_r = conj(a) / ||a|| and u_c is h_c / ||h_c|| phase-aligned so that
 * u_r^H u_c >= 0. psi = 0 is the radar optimum, psi = pi/2 the user's MRT
 * beam. Returns an empty vector for the degenerate combination that cancels.
 */
inline CVec jd_beamformer(const JdScenario& s, const JdGrid& grid, int angle_index, int phase_index) {
    const CVec ur = s.radar_direction().normalized();
    CVec uc = s.h_c.normalized();
    const cplx overlap = ur.dot(uc);
    if (std::abs(overlap) > 0.0) uc *= std::polar(1.0, -std::arg(overlap));
    const double psi = grid.n_angles > 1 ? (kPi / 2.0) * angle_index / (grid.n_angles - 1) : 0.0;
    const double phi = 2.0 * kPi * phase_index / grid.n_phases;
    CVec w = std::cos(psi) * ur + std::sin(psi) * std::polar(1.0, phi) * uc;
    const double n = w.norm();
    if (n < 1e-9) return CVec();
    return w * (std::sqrt(s.energy) / n);
}

inline std::vector<JdCandidate> jd_candidates(const JdScenario& s, const JdGrid& grid = {}) {
    s.validate();
    require(grid.n_angles >= 2 && grid.n_phases >= 1, "jd_candidates: grid too small");
    std::vector<JdCandidate> out;
    out.reserve(static_cast<std::size_t>(grid.n_angles) * grid.n_phases);
    for (int i = 0; i < grid.n_angles; ++i) {
        for (int p = 0; p < grid.n_phases; ++p) {
            const CVec w = jd_beamformer(s, grid, i, p);
            if (w.size() == 0) continue;
            out.push_back({jd_rate(s, w), jd_crb(s, w), i, p});
        }
    }
    return out;
}

struct ParetoPoint {
    double r0 = 0.0;
    bool feasible = false;
    double rate = 0.0;  // bits per use
    double crb = 0.0;   // rad^2
    CVec beamformer;
    double power = 0.0;
    int angle_index = -1;
    int phase_index = -1;
};

/**
 * For every R_0 the minimum-CRB candidate with rate >= R_0. Ties in CRB go to
 * the higher rate, then the lower grid index, so no returned point is
 * dominated by another candidate. Rates are compared with 1e-12 relative slack
 * so R_0 equal to the MRT rate stays feasible.
 */
inline std::vector<ParetoPoint> jd_pareto_sweep(const JdScenario& s, std::span<const double> r0_grid,
                                                const JdGrid& grid = {}) {
    const auto cands = jd_candidates(s, grid);
    std::vector<ParetoPoint> out;
    out.reserve(r0_grid.size());
    for (double r0 : r0_grid) {
        ParetoPoint pt;
        pt.r0 = r0;
        const double floor = r0 - 1e-12 * std::max(1.0, std::abs(r0));
        const JdCandidate* best = nullptr;
        for (const auto& c : cands) {
            if (c.rate < floor) continue;
            if (best == nullptr || c.crb < best->crb || (c.crb == best->crb && c.rate > best->rate)) best = &c;
        }
        if (best != nullptr) {
            pt.feasible = true;
            pt.rate = best->rate;
            pt.crb = best->crb;
            pt.angle_index = best->angle_index;
            pt.phase_index = best->phase_index;
            pt.beamformer = jd_beamformer(s, grid, best->angle_index, best->phase_index);
            pt.power = pt.beamformer.squaredNorm();
        }
        out.push_back(std::move(pt));
    }
    return out;
}

/// Evenly spaced R_0 values from 0 to the MRT rate.
inline std::vector<double> jd_rate_grid(const JdScenario& s, int n) {
    require(n >= 2, "jd_rate_grid: need at least two points");
    const double top = jd_max_rate(s);
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = top * i / (n - 1);
    return g;
}

/**
 * Staircase frontier over a candidate set: lowest CRB attainable at rate >= r.
 * Used to check arbitrary beamformers against the gridded sweep.
 */
class FrontierLookup {
public:
    explicit FrontierLookup(std::vector<JdCandidate> cands) {
        std::sort(cands.begin(), cands.end(), [](const JdCandidate& a, const JdCandidate& b) { return a.rate > b.rate; });
        double best = std::numeric_limits<double>::infinity();
        for (const auto& c : cands) {
            best = std::min(best, c.crb);
            rates_.push_back(c.rate);
            min_crb_.push_back(best);
        }
    }

    /// +inf when no candidate reaches the rate.
    double crb_at(double rate) const {
        // rates_ is descending; find the last index with rates_[i] >= rate
        const auto it = std::partition_point(rates_.begin(), rates_.end(), [&](double r) { return r >= rate; });
        if (it == rates_.begin()) return std::numeric_limits<double>::infinity();
        return min_crb_[static_cast<std::size_t>(it - rates_.begin()) - 1];
    }

private:
    std::vector<double> rates_;
    std::vector<double> min_crb_;
};

/**
 * User channel with prescribed correlation to the sensing direction:
 * h = sqrt(N_t) (rho u_r + sqrt(1 - rho^2) v), v a unit vector orthogonal to
 * u_r built from `seed_direction`. Sharing seed_direction across rho values
 * keeps the geometry common.
 */
inline CVec channel_with_correlation(const array::UlaGeometry& tx, double theta, double rho, const CVec& seed_direction) {
    require(rho >= 0.0 && rho <= 1.0, "channel_with_correlation: rho must lie in [0, 1]");
    const CVec ur = array::steering(tx, theta).conjugate().normalized();
    CVec v = seed_direction - ur * ur.dot(seed_direction);
    require(v.norm() > 1e-9, "channel_with_correlation: seed direction parallel to the sensing direction");
    v.normalize();
    return std::sqrt(static_cast<double>(tx.n_elements)) * (rho * ur + std::sqrt(std::max(0.0, 1.0 - rho * rho)) * v);
}

}  // namespace isac::joint
