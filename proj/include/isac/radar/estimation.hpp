#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "isac/array/array.hpp"
#include "isac/core/signal.hpp"
#include "isac/core/types.hpp"

namespace isac::radar {

// ---------------------------------------------------------------------------
// Fisher information / CRB

struct CrbResult {
    RMat fim;
    RMat crb;  // empty when the FIM is singular
    std::vector<std::string> labels;
    bool singular = false;

    double bound(std::size_t i) const { return singular ? std::numeric_limits<double>::infinity() : crb(i, i); }

    double bound(const std::string& label) const {
        const auto it = std::find(labels.begin(), labels.end(), label);
        require(it != labels.end(), "CrbResult: unknown parameter label '" + label + "'");
        return bound(static_cast<std::size_t>(it - labels.begin()));
    }
};

/// Real parameter vector with one label per entry.
struct LabeledParams {
    std::vector<std::string> labels;
    RVec values;
};

/**
 * J_ik = (2 / sigma^2) Re tr(D_i^H D_k) for D_i = d mu / d eta_i under
 * circular complex AWGN. Complex nuisance amplitudes enter as separate real
 * and imaginary parameters. The FIM counts as singular when its smallest
 * eigenvalue is below 1e-12 of the largest.
 */
inline CrbResult fisher_crb(double sigma2, std::span<const CMat> mean_derivatives, std::vector<std::string> labels = {}) {
    require(sigma2 > 0.0, "fisher_crb: noise variance must be positive");
    const auto p = static_cast<Eigen::Index>(mean_derivatives.size());
    require(p >= 1, "fisher_crb: at least one parameter required");
    for (const auto& d : mean_derivatives) {
        require(d.rows() == mean_derivatives[0].rows() && d.cols() == mean_derivatives[0].cols(),
                "fisher_crb: derivative shapes must agree");
        require(d.allFinite(), "fisher_crb: Jacobian must be finite");
    }
    if (labels.empty())
        for (Eigen::Index i = 0; i < p; ++i) labels.push_back("eta" + std::to_string(i));
    require(static_cast<Eigen::Index>(labels.size()) == p, "fisher_crb: one label per parameter");

    CrbResult r;
    r.labels = std::move(labels);
    r.fim.resize(p, p);
    for (Eigen::Index i = 0; i < p; ++i) {
        for (Eigen::Index k = i; k < p; ++k) {
            const cplx inner = (mean_derivatives[i].array().conjugate() * mean_derivatives[k].array()).sum();
            r.fim(i, k) = r.fim(k, i) = 2.0 / sigma2 * inner.real();
        }
    }
    Eigen::SelfAdjointEigenSolver<RMat> eig(r.fim, Eigen::EigenvaluesOnly);
    const double lmax = eig.eigenvalues().maxCoeff();
    const double lmin = eig.eigenvalues().minCoeff();
    if (!(lmax > 0.0) || lmin <= 1e-12 * lmax) {
        r.singular = true;
        return r;
    }
    r.crb = r.fim.ldlt().solve(RMat::Identity(p, p));
    r.crb = 0.5 * (r.crb + r.crb.transpose()).eval();
    return r;
}

/// d(H(eta) S) / d eta_i evaluated at eta.
using MeanJacobian = std::function<CMat(const RVec& eta, std::size_t i)>;

inline CrbResult fisher_crb(const LinearGaussianModel& model, const LabeledParams& params, const MeanJacobian& jacobian) {
    require(params.labels.size() == static_cast<std::size_t>(params.values.size()),
            "fisher_crb: one label per parameter value");
    std::vector<CMat> d;
    d.reserve(params.labels.size());
    for (std::size_t i = 0; i < params.labels.size(); ++i) {
        d.push_back(jacobian(params.values, i));
        require(d.back().rows() == model.channel.rows() && d.back().cols() == model.tx.cols(),
                "fisher_crb: Jacobian shape must match the model mean");
    }
    return fisher_crb(model.noise_variance, d, params.labels);
}

// ---------------------------------------------------------------------------
// Grid maximum likelihood

struct GridMleResult {
    std::size_t index = 0;
    RVec estimate;
    double cost = 0.0;  // ||y - mu(eta_hat)||^2
};

/// Lattice point minimizing ||y - mu(eta)||_F^2; ties resolve to the lowest index.
template <typename ModelFn>
GridMleResult grid_mle(const CMat& y, ModelFn&& model_fn, std::span<const RVec> grid) {
    require(!grid.empty(), "grid_mle: grid must be non-empty");
    GridMleResult best;
    best.cost = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const CMat mu = model_fn(grid[i]);
        const double c = (y - mu).squaredNorm();
        if (c < best.cost) {
            best.cost = c;
            best.index = i;
        }
    }
    best.estimate = grid[best.index];
    return best;
}

// ---------------------------------------------------------------------------
// MUSIC

struct MusicResult {
    RVec spectrum;
    std::vector<double> peak_angles;
    std::vector<Eigen::Index> peak_indices;
    bool rank_warning = false;  // sample covariance rank below n_sources
    bool diagonal_loading = false;
};

/**
 * Pseudo-spectrum P(theta) = 1 / ||E_n^H a(theta)||^2 from the 1/T sample
 * covariance. Returns the n_sources largest local maxima of P over the grid.
 */
inline MusicResult music_doa(const CMat& snapshots, int n_sources, std::span<const double> angle_grid,
                             const array::UlaGeometry& geom) {
    const Eigen::Index n = snapshots.rows();
    const Eigen::Index t = snapshots.cols();
    require(n == geom.n_elements, "music_doa: snapshot rows must equal array size");
    require(n_sources >= 0, "music_doa: n_sources must be non-negative");
    require(t >= n_sources, "music_doa: need at least n_sources snapshots");
    require(n > n_sources, "music_doa: need more elements than sources");
    require(!angle_grid.empty(), "music_doa: angle grid must be non-empty");

    MusicResult r;
    const auto g = static_cast<Eigen::Index>(angle_grid.size());
    if (n_sources == 0) {
        r.spectrum = RVec::Ones(g);
        return r;
    }

    CMat cov = snapshots * snapshots.adjoint() / static_cast<double>(t);
    Eigen::SelfAdjointEigenSolver<CMat> eig(cov);
    if (eig.info() != Eigen::Success) {
        r.diagonal_loading = true;
        cov += 1e-6 * cov.trace().real() * CMat::Identity(n, n);
        eig.compute(cov);
        if (eig.info() != Eigen::Success) throw NumericalError("music_doa: eigendecomposition failed");
    }
    const RVec& evals = eig.eigenvalues();  // ascending
    const double top = evals[n - 1];
    int rank = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        if (evals[i] > 1e-10 * std::max(top, std::numeric_limits<double>::min())) ++rank;
    r.rank_warning = rank < n_sources;

    const CMat noise_subspace = eig.eigenvectors().leftCols(n - n_sources);
    r.spectrum.resize(g);
    for (Eigen::Index i = 0; i < g; ++i) {
        const CVec a = array::steering(geom, angle_grid[static_cast<std::size_t>(i)]);
        const double den = (noise_subspace.adjoint() * a).squaredNorm();
        r.spectrum[i] = 1.0 / std::max(den, 1e-300);
    }

    std::vector<Eigen::Index> maxima;
    for (Eigen::Index i = 0; i < g; ++i) {
        const bool left = i == 0 || r.spectrum[i] >= r.spectrum[i - 1];
        const bool right = i == g - 1 || r.spectrum[i] > r.spectrum[i + 1];
        if (left && right) maxima.push_back(i);
    }
    std::stable_sort(maxima.begin(), maxima.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return r.spectrum[a] > r.spectrum[b]; });
    if (maxima.size() > static_cast<std::size_t>(n_sources)) maxima.resize(static_cast<std::size_t>(n_sources));
    std::sort(maxima.begin(), maxima.end());
    r.peak_indices = maxima;
    for (auto i : maxima) r.peak_angles.push_back(angle_grid[static_cast<std::size_t>(i)]);
    return r;
}

}  // namespace isac::radar
