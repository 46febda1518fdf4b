#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "isac/core/types.hpp"

namespace isac::radar {

/**
 * Per-cell statistics and decisions. Detection counters are split by the
 * optional truth mask: cells without truth are all treated as H0 (noise only).
 * Cells a detector could not evaluate (CFAR edges) are excluded from counters.
 */
struct DetectionReport {
    RMat statistics;
    double threshold = 0.0;  // NP: gamma; CFAR: the scaling alpha
    RMat cell_thresholds;    // threshold actually applied per cell
    BMat evaluated;
    BMat decisions;
    long h0_cells = 0;
    long h1_cells = 0;
    long false_alarms = 0;
    long detections = 0;
    double empirical_pfa = 0.0;
    double empirical_pd = 0.0;
};

namespace detail {

inline void score(DetectionReport& r, const BMat* truth) {
    r.h0_cells = r.h1_cells = r.false_alarms = r.detections = 0;
    for (Eigen::Index i = 0; i < r.decisions.size(); ++i) {
        if (!r.evaluated(i)) continue;
        const bool target = truth != nullptr && (*truth)(i);
        if (target) {
            ++r.h1_cells;
            if (r.decisions(i)) ++r.detections;
        } else {
            ++r.h0_cells;
            if (r.decisions(i)) ++r.false_alarms;
        }
    }
    r.empirical_pfa = r.h0_cells ? static_cast<double>(r.false_alarms) / r.h0_cells : 0.0;
    r.empirical_pd = r.h1_cells ? static_cast<double>(r.detections) / r.h1_cells : 0.0;
}

inline RMat as_column(std::span<const double> v) {
    RMat m(static_cast<Eigen::Index>(v.size()), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m(static_cast<Eigen::Index>(i), 0) = v[i];
    return m;
}

}  // namespace detail

/// gamma = sigma^2 ||s||^2 ln(1 / pfa) for the exponential |s^H z|^2 statistic under H0.
inline double np_threshold(double sigma2, double design_pfa, double reference_energy = 1.0) {
    require(sigma2 > 0.0, "np_detect: noise variance must be positive");
    require(design_pfa > 0.0 && design_pfa < 1.0, "np_detect: design_pfa must lie in (0, 1)");
    require(reference_energy > 0.0, "np_detect: reference energy must be positive");
    return sigma2 * reference_energy * std::log(1.0 / design_pfa);
}

inline DetectionReport np_detect(const RMat& stats, double sigma2, double design_pfa, double reference_energy = 1.0,
                                 const BMat* truth = nullptr) {
    const double gamma = np_threshold(sigma2, design_pfa, reference_energy);
    if (truth != nullptr)
        require(truth->rows() == stats.rows() && truth->cols() == stats.cols(), "np_detect: truth mask shape mismatch");
    DetectionReport r;
    r.statistics = stats;
    r.threshold = gamma;
    r.cell_thresholds = RMat::Constant(stats.rows(), stats.cols(), gamma);
    r.evaluated = BMat::Constant(stats.rows(), stats.cols(), true);
    r.decisions = (stats.array() > gamma).matrix();
    detail::score(r, truth);
    return r;
}

inline DetectionReport np_detect(std::span<const double> stats, double sigma2, double design_pfa,
                                 double reference_energy = 1.0) {
    return np_detect(detail::as_column(stats), sigma2, design_pfa, reference_energy);
}

/// alpha = N (pfa^(-1/N) - 1) for N averaged exponential cells.
inline double cfar_scale(int n_train, double design_pfa) {
    return n_train * (std::pow(design_pfa, -1.0 / n_train) - 1.0);
}

/**
 * Cell-averaging CFAR over a 1-D statistic. n_train is the total number of
 * training cells, split evenly before and after the cell under test; n_guard
 * cells on each side are skipped. Cells without a complete window are not
 * evaluated.
 */
inline DetectionReport ca_cfar(std::span<const double> stats, int n_train, int n_guard, double design_pfa,
                               const BMat* truth = nullptr) {
    require(design_pfa > 0.0 && design_pfa < 1.0, "ca_cfar: design_pfa must lie in (0, 1)");
    require(n_train >= 2 && n_train % 2 == 0, "ca_cfar: n_train must be a positive even number");
    require(n_guard >= 0, "ca_cfar: n_guard must be non-negative");
    const int half = n_train / 2;
    const auto n = static_cast<Eigen::Index>(stats.size());
    require(n >= n_train + 2 * n_guard + 1, "ca_cfar: statistic shorter than the CFAR window");

    DetectionReport r;
    r.statistics = detail::as_column(stats);
    r.threshold = cfar_scale(n_train, design_pfa);
    r.cell_thresholds = RMat::Zero(n, 1);
    r.evaluated = BMat::Constant(n, 1, false);
    r.decisions = BMat::Constant(n, 1, false);

    const Eigen::Index reach = half + n_guard;
    for (Eigen::Index i = reach; i < n - reach; ++i) {
        double sum = 0.0;
        for (Eigen::Index k = i - reach; k < i - n_guard; ++k) sum += stats[static_cast<std::size_t>(k)];
        for (Eigen::Index k = i + n_guard + 1; k <= i + reach; ++k) sum += stats[static_cast<std::size_t>(k)];
        const double t = r.threshold * sum / n_train;
        r.cell_thresholds(i, 0) = t;
        r.evaluated(i, 0) = true;
        r.decisions(i, 0) = stats[static_cast<std::size_t>(i)] > t;
    }
    detail::score(r, truth);
    return r;
}

}  // namespace isac::radar
