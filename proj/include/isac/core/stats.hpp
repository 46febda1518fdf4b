#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "isac/core/types.hpp"

namespace isac::stats {

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Kolmogorov limiting tail Q(lambda) = 2 sum_k (-1)^(k-1) exp(-2 k^2 lambda^2).
inline double kolmogorov_tail(double lambda) {
    if (lambda < 0.2) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
        sum += term;
        if (std::abs(term) < 1e-16 * std::abs(sum)) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

/// One-sample Kolmogorov-Smirnov test against N(mean, sd^2), with Stephens' small-sample correction.
inline TestResult ks_test_normal(std::span<const double> samples, double mean = 0.0, double sd = 1.0) {
    require(samples.size() >= 2, "ks_test_normal: need at least two samples");
    require(sd > 0.0, "ks_test_normal: sd must be positive");
    std::vector<double> x(samples.begin(), samples.end());
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = normal_cdf((x[i] - mean) / sd);
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    const double sn = std::sqrt(n);
    return {d, kolmogorov_tail((sn + 0.12 + 0.11 / sn) * d)};
}

/// Bartlett's test for equal variances across groups; p-value from chi^2 with k - 1 dof.
inline TestResult bartlett_test(const std::vector<std::vector<double>>& groups) {
    require(groups.size() >= 2, "bartlett_test: need at least two groups");
    double n_total = 0.0;
    double pooled = 0.0;
    double sum_log = 0.0;
    double sum_inv = 0.0;
    const double k = static_cast<double>(groups.size());
    for (const auto& g : groups) {
        require(g.size() >= 2, "bartlett_test: every group needs at least two samples");
        const double n = static_cast<double>(g.size());
        double mean = 0.0;
        for (double v : g) mean += v;
        mean /= n;
        double var = 0.0;
        for (double v : g) var += (v - mean) * (v - mean);
        var /= n - 1.0;
        n_total += n;
        pooled += (n - 1.0) * var;
        sum_log += (n - 1.0) * std::log(var);
        sum_inv += 1.0 / (n - 1.0);
    }
    pooled /= n_total - k;
    const double num = (n_total - k) * std::log(pooled) - sum_log;
    const double den = 1.0 + (sum_inv - 1.0 / (n_total - k)) / (3.0 * (k - 1.0));
    const double t = num / den;
    boost::math::chi_squared dist(k - 1.0);
    return {t, boost::math::cdf(boost::math::complement(dist, std::max(t, 0.0)))};
}

/// sqrt(p (1 - p) / n).
inline double binomial_se(double p, double n) { return std::sqrt(p * (1.0 - p) / n); }

}  // namespace isac::stats
