#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/QR>

#include "isac/core/types.hpp"

namespace isac::radar {

struct OmpResult {
    CVec coefficients;               // dense length-n vector, zero off the support
    std::vector<Eigen::Index> support;  // in selection order
    int iterations = 0;
    double residual_norm = 0.0;
    bool converged = false;  // residual reached zeta
};

/// zeta such that zeta^2 = sigma^2 (m + 2 sqrt(2 m)): mean plus two standard deviations of the noise energy.
inline double omp_noise_threshold(double sigma2, Eigen::Index m) {
    const double md = static_cast<double>(m);
    return std::sqrt(sigma2 * (md + 2.0 * std::sqrt(2.0 * md)));
}

namespace detail {
inline CVec least_squares(const CMat& a, const CVec& y) { return a.colPivHouseholderQr().solve(y); }
}  // namespace detail

/**
 * Orthogonal matching pursuit for y = S h with sparse h.
 *
 * Each iteration picks the column most correlated with the residual
 * (normalized by column norm), refits all selected coefficients by least
 * squares and stops once ||r|| <= zeta or max_sparsity columns are in use.
 */
inline OmpResult omp_recover(const CVec& y, const CMat& dict, int max_sparsity, double zeta) {
    require(dict.rows() == y.size(), "omp_recover: dictionary rows must equal len(y)");
    require(max_sparsity >= 0, "omp_recover: max_sparsity must be non-negative");
    require(zeta >= 0.0, "omp_recover: zeta must be non-negative");

    OmpResult out;
    out.coefficients = CVec::Zero(dict.cols());
    CVec residual = y;
    out.residual_norm = residual.norm();
    const RVec col_norms = dict.colwise().norm().transpose();

    while (out.residual_norm > zeta && static_cast<int>(out.support.size()) < max_sparsity) {
        const CVec corr = dict.adjoint() * residual;
        Eigen::Index best = -1;
        double best_val = -1.0;
        for (Eigen::Index k = 0; k < dict.cols(); ++k) {
            if (std::find(out.support.begin(), out.support.end(), k) != out.support.end()) continue;
            if (col_norms[k] == 0.0) continue;
            const double v = std::abs(corr[k]) / col_norms[k];
            if (v > best_val) {
                best_val = v;
                best = k;
            }
        }
        if (best < 0) break;
        out.support.push_back(best);

        CMat sub(dict.rows(), static_cast<Eigen::Index>(out.support.size()));
        for (std::size_t i = 0; i < out.support.size(); ++i) sub.col(static_cast<Eigen::Index>(i)) = dict.col(out.support[i]);
        const CVec coef = detail::least_squares(sub, y);
        residual = y - sub * coef;
        out.residual_norm = residual.norm();
        out.coefficients.setZero();
        for (std::size_t i = 0; i < out.support.size(); ++i) out.coefficients[out.support[i]] = coef[static_cast<Eigen::Index>(i)];
        ++out.iterations;
    }
    out.converged = out.residual_norm <= zeta;
    return out;
}

}  // namespace isac::radar
