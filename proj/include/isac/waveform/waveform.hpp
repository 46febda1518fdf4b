#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "isac/core/rng.hpp"
#include "isac/core/signal.hpp"
#include "isac/core/types.hpp"

namespace isac::waveform {

// ---------------------------------------------------------------------------
// Pulsed LFM

struct PulseTrainSpec {
    double pulse_width = 1e-6;  // tau, seconds
    double pri = 1e-5;          // T_PRI, seconds
    int num_pulses = 1;
    double bandwidth = 1e6;  // B_r, Hz
    double tx_power = 1.0;   // P_r, linear

    double duty_cycle() const { return pulse_width / pri; }

    void validate() const {
        require(pulse_width > 0.0 && pulse_width <= pri, "PulseTrainSpec: need 0 < pulse_width <= pri");
        require(bandwidth > 0.0, "PulseTrainSpec: bandwidth must be positive");
        require(num_pulses >= 1, "PulseTrainSpec: num_pulses must be >= 1");
        require(tx_power >= 0.0, "PulseTrainSpec: tx_power must be non-negative");
    }
};

/// Number of samples covering [0, pulse_width) at the given rate.
inline Eigen::Index pulse_samples(const PulseTrainSpec& spec, double sample_rate) {
    return std::max<Eigen::Index>(1, static_cast<Eigen::Index>(std::llround(spec.pulse_width * sample_rate)));
}

/**
 * Baseband LFM pulse sqrt(P) * exp(j*pi*B*t^2/tau), t = n / fs over the pulse
 * support. Only the in-pulse samples are returned; the echo synthesizer places
 * the pulse inside the PRI and the remainder is zero.
 */
inline ComplexSignal gen_lfm(const PulseTrainSpec& spec, double sample_rate) {
    spec.validate();
    require(sample_rate >= 2.0 * spec.bandwidth, "gen_lfm: sample_rate must be at least 2 * bandwidth");
    const Eigen::Index n = pulse_samples(spec, sample_rate);
    const double amp = std::sqrt(spec.tx_power);
    const double k = kPi * spec.bandwidth / spec.pulse_width;
    CVec x(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / sample_rate;
        x[i] = std::polar(amp, k * t * t);
    }
    return ComplexSignal(std::move(x), 1.0 / sample_rate);
}

// ---------------------------------------------------------------------------
// Stepped-frequency carrier plans

enum class SfwMode { Linear, Random };

struct SfwPlan {
    double base_freq = 0.0;  // f_c
    double step = 1.0;       // delta f
    int max_index = 0;       // D
    std::vector<int> indices;  // d_n
    double synthesized_span = 0.0;  // D * delta f
    // D * delta f > B; sub-pulse bandwidth is taken equal to the step.
    bool span_exceeds_bandwidth = false;

    std::vector<double> carrier_frequencies() const {
        std::vector<double> f(indices.size());
        for (std::size_t n = 0; n < indices.size(); ++n) f[n] = base_freq + indices[n] * step;
        return f;
    }
};

struct SfwParams {
    double base_freq = 0.0;
    double step = 1.0;
    double bandwidth = 0.0;  // B used for the span flag
};

inline SfwPlan gen_sfw_plan(SfwMode mode, int max_index, int n_pulses, double keep_fraction, RngStream& rng,
                            const SfwParams& p = {}) {
    require(n_pulses >= 1, "gen_sfw_plan: n_pulses must be >= 1");
    require(max_index >= 0, "gen_sfw_plan: D must be non-negative");
    require(keep_fraction > 0.0 && keep_fraction <= 1.0, "gen_sfw_plan: keep_fraction must lie in (0, 1]");
    require(p.step > 0.0, "gen_sfw_plan: step must be positive");

    SfwPlan plan;
    plan.base_freq = p.base_freq;
    plan.step = p.step;
    plan.max_index = max_index;
    plan.synthesized_span = max_index * p.step;
    plan.span_exceeds_bandwidth = plan.synthesized_span > p.bandwidth;

    const int available = max_index + 1;
    if (mode == SfwMode::Linear) {
        require(n_pulses <= available, "gen_sfw_plan: linear mode needs n_pulses <= D + 1");
        plan.indices.resize(n_pulses);
        std::iota(plan.indices.begin(), plan.indices.end(), 0);
        return plan;
    }

    const int kept = static_cast<int>(std::ceil(keep_fraction * available - 1e-12));
    require(n_pulses <= kept, "gen_sfw_plan: n_pulses exceeds the kept index set in random mode");
    std::vector<int> all(available);
    std::iota(all.begin(), all.end(), 0);
    rng.shuffle(all);
    std::vector<int> subset(all.begin(), all.begin() + kept);
    rng.shuffle(subset);
    plan.indices.assign(subset.begin(), subset.begin() + n_pulses);
    return plan;
}

// ---------------------------------------------------------------------------
// Pulse-shaping filters

enum class FilterKind { Rect, RaisedCosine, RootRaisedCosine, Gaussian };

struct ShapingFilter {
    FilterKind kind = FilterKind::RaisedCosine;
    double rolloff = 0.35;  // beta; for Gaussian this is the BT product
    int span = 8;           // symbols
    int samples_per_symbol = 4;
};

namespace detail {

inline double sinc(double x) {
    if (std::abs(x) < 1e-12) return 1.0;
    return std::sin(kPi * x) / (kPi * x);
}

// Unnormalized raised cosine, t in symbol periods; value 1 at t = 0.
inline double raised_cosine(double t, double beta) {
    if (beta > 0.0 && std::abs(std::abs(t) - 1.0 / (2.0 * beta)) < 1e-9) return (kPi / 4.0) * sinc(1.0 / (2.0 * beta));
    const double denom = 1.0 - 4.0 * beta * beta * t * t;
    return sinc(t) * std::cos(kPi * beta * t) / denom;
}

// Unnormalized root raised cosine, t in symbol periods.
inline double root_raised_cosine(double t, double beta) {
    if (std::abs(t) < 1e-12) return 1.0 - beta + 4.0 * beta / kPi;
    if (beta > 0.0 && std::abs(std::abs(t) - 1.0 / (4.0 * beta)) < 1e-9) {
        return (beta / std::sqrt(2.0)) *
               ((1.0 + 2.0 / kPi) * std::sin(kPi / (4.0 * beta)) + (1.0 - 2.0 / kPi) * std::cos(kPi / (4.0 * beta)));
    }
    const double num = std::sin(kPi * t * (1.0 - beta)) + 4.0 * beta * t * std::cos(kPi * t * (1.0 + beta));
    const double den = kPi * t * (1.0 - 16.0 * beta * beta * t * t);
    return num / den;
}

inline double gaussian(double t, double bt) {
    const double a = std::sqrt(std::log(2.0) / 2.0) / bt;
    return std::exp(-(kPi * kPi / (a * a)) * t * t);
}

}  // namespace detail

/// Real taps of length span * samples_per_symbol + 1 (odd, centered), scaled to unit energy.
inline std::vector<double> make_filter(const ShapingFilter& spec) {
    require(spec.rolloff >= 0.0 && spec.rolloff <= 1.0, "make_filter: rolloff must lie in [0, 1]");
    require(spec.span >= 2, "make_filter: span must be >= 2 symbols");
    require(spec.samples_per_symbol >= 1, "make_filter: samples_per_symbol must be positive");
    if (spec.kind == FilterKind::Gaussian) require(spec.rolloff > 0.0, "make_filter: gaussian BT must be > 0");

    const int sps = spec.samples_per_symbol;
    const int half = spec.span * sps / 2;
    std::vector<double> taps(2 * half + 1);
    for (int i = -half; i <= half; ++i) {
        const double t = static_cast<double>(i) / sps;
        double v = 0.0;
        switch (spec.kind) {
            case FilterKind::Rect: v = (i >= -sps / 2 && i < sps - sps / 2) ? 1.0 : 0.0; break;
            case FilterKind::RaisedCosine: v = detail::raised_cosine(t, spec.rolloff); break;
            case FilterKind::RootRaisedCosine: v = detail::root_raised_cosine(t, spec.rolloff); break;
            case FilterKind::Gaussian: v = detail::gaussian(t, spec.rolloff); break;
        }
        taps[i + half] = v;
    }
    double energy = 0.0;
    for (double v : taps) energy += v * v;
    const double scale = 1.0 / std::sqrt(energy);
    for (double& v : taps) v *= scale;
    return taps;
}

// ---------------------------------------------------------------------------
// Radar windows

enum class WindowKind { Rect, Hamming, Blackman, Chebyshev, Taylor };

inline WindowKind parse_window_kind(const std::string& s) {
    if (s == "rect") return WindowKind::Rect;
    if (s == "hamming") return WindowKind::Hamming;
    if (s == "blackman") return WindowKind::Blackman;
    if (s == "chebyshev") return WindowKind::Chebyshev;
    if (s == "taylor") return WindowKind::Taylor;
    throw InvalidArgument("unknown window kind '" + s + "'");
}

struct RadarWindow {
    WindowKind kind = WindowKind::Hamming;
    int length = 64;
    // Sidelobe level in dB (positive number) for Chebyshev and Taylor; ignored otherwise.
    double sidelobe_db = 0.0;
    int taylor_nbar = 4;
};

namespace detail {

// Dolph-Chebyshev window via the DFT of the Chebyshev polynomial samples.
inline std::vector<double> chebyshev_window(int m, double attenuation_db) {
    const int order = m - 1;
    const double beta = std::cosh(std::acosh(std::pow(10.0, std::abs(attenuation_db) / 20.0)) / order);
    std::vector<cplx> p(m);
    for (int k = 0; k < m; ++k) {
        const double x = beta * std::cos(kPi * k / m);
        double v;
        if (x > 1.0)
            v = std::cosh(order * std::acosh(x));
        else if (x < -1.0)
            v = (2.0 * (m % 2) - 1.0) * std::cosh(order * std::acosh(-x));
        else
            v = std::cos(order * std::acos(x));
        p[k] = v;
        if (m % 2 == 0) p[k] *= std::polar(1.0, kPi * k / m);
    }
    std::vector<double> spectrum(m);
    for (int n = 0; n < m; ++n) {
        cplx acc = 0.0;
        for (int k = 0; k < m; ++k) acc += p[k] * std::polar(1.0, -2.0 * kPi * static_cast<double>(n) * k / m);
        spectrum[n] = acc.real();
    }
    std::vector<double> w;
    w.reserve(m);
    if (m % 2 == 1) {
        const int n = (m + 1) / 2;
        for (int i = n - 1; i >= 1; --i) w.push_back(spectrum[i]);
        for (int i = 0; i < n; ++i) w.push_back(spectrum[i]);
    } else {
        const int n = m / 2 + 1;
        for (int i = n - 1; i >= 1; --i) w.push_back(spectrum[i]);
        for (int i = 1; i < n; ++i) w.push_back(spectrum[i]);
    }
    return w;
}

inline std::vector<double> taylor_window(int m, double sll_db, int nbar) {
    const double b = std::pow(10.0, std::abs(sll_db) / 20.0);
    const double a = std::acosh(b) / kPi;
    const double s2 = nbar * nbar / (a * a + (nbar - 0.5) * (nbar - 0.5));
    std::vector<double> fm(nbar - 1);
    for (int mi = 1; mi < nbar; ++mi) {
        const double m2 = static_cast<double>(mi) * mi;
        double numer = (mi % 2 == 1) ? 1.0 : -1.0;
        double denom = 2.0;
        for (int j = 1; j < nbar; ++j) {
            numer *= 1.0 - m2 / s2 / (a * a + (j - 0.5) * (j - 0.5));
            if (j != mi) denom *= 1.0 - m2 / (static_cast<double>(j) * j);
        }
        fm[mi - 1] = numer / denom;
    }
    auto eval = [&](double n) {
        double acc = 1.0;
        for (int mi = 1; mi < nbar; ++mi) acc += 2.0 * fm[mi - 1] * std::cos(2.0 * kPi * mi * (n - m / 2.0 + 0.5) / m);
        return acc;
    };
    std::vector<double> w(m);
    for (int n = 0; n < m; ++n) w[n] = eval(n);
    return w;
}

}  // namespace detail

/// Symmetric window taps with peak normalized to 1.
inline std::vector<double> make_window(const RadarWindow& spec) {
    require(spec.length >= 4, "make_window: length must be >= 4");
    const int m = spec.length;
    std::vector<double> w(m);
    const double denom = m - 1;
    switch (spec.kind) {
        case WindowKind::Rect: std::fill(w.begin(), w.end(), 1.0); break;
        case WindowKind::Hamming:
            for (int k = 0; k < m; ++k) w[k] = 0.54 - 0.46 * std::cos(2.0 * kPi * k / denom);
            break;
        case WindowKind::Blackman:
            for (int k = 0; k < m; ++k)
                w[k] = 0.42 - 0.5 * std::cos(2.0 * kPi * k / denom) + 0.08 * std::cos(4.0 * kPi * k / denom);
            break;
        case WindowKind::Chebyshev: {
            const double at = spec.sidelobe_db > 0.0 ? spec.sidelobe_db : 60.0;
            w = detail::chebyshev_window(m, at);
            break;
        }
        case WindowKind::Taylor: {
            require(spec.taylor_nbar >= 2, "make_window: taylor nbar must be >= 2");
            const double sll = spec.sidelobe_db > 0.0 ? spec.sidelobe_db : 35.0;
            w = detail::taylor_window(m, sll, spec.taylor_nbar);
            break;
        }
        default: throw InvalidArgument("make_window: unknown window kind");
    }
    // Blackman endpoints come out as tiny negative rounding residue.
    for (double& v : w) v = std::max(v, 0.0);
    const double peak = *std::max_element(w.begin(), w.end());
    for (double& v : w) v /= peak;
    // Exact mirror symmetry.
    for (int k = 0; k < m / 2; ++k) {
        const double avg = 0.5 * (w[k] + w[m - 1 - k]);
        w[k] = w[m - 1 - k] = avg;
    }
    return w;
}

}  // namespace isac::waveform
