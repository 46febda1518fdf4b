#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "isac/array/array.hpp"
#include "isac/core/signal.hpp"
#include "isac/waveform/waveform.hpp"

namespace isac::radar {

struct Scatterer {
    double delay = 0.0;    // seconds
    double doppler = 0.0;  // Hz
    std::optional<double> angle;                // rad
    std::optional<array::Point2> coords;        // meters
    cplx reflectivity{1.0, 0.0};
};

struct TargetScene {
    std::vector<Scatterer> scatterers;

    void validate() const {
        for (const auto& s : scatterers) {
            require(s.delay >= 0.0, "TargetScene: delays must be non-negative");
            require(!(s.angle && s.coords), "TargetScene: a scatterer carries either an angle or coordinates");
        }
    }
};

/**
 * Fast-time x slow-time echo matrix. Each column is one PRI of
 * round(pri / Ts) samples. Scatterer l adds alpha_l * tx delayed by
 * round(tau_l / Ts) samples with slow-time phase exp(j 2 pi nu_l n T_PRI).
 * Doppler within a pulse is neglected.
 */
inline CMat synth_echo(const ComplexSignal& tx, const TargetScene& scene, double pri, int n_pulses, double sigma2,
                       RngStream& rng) {
    scene.validate();
    require(n_pulses >= 1, "synth_echo: n_pulses must be >= 1");
    const double ts = tx.sample_interval();
    const auto n_fast = static_cast<Eigen::Index>(std::llround(pri / ts));
    require(n_fast >= tx.size(), "synth_echo: PRI shorter than the pulse");
    CMat echo = CMat::Zero(n_fast, n_pulses);
    for (const auto& s : scene.scatterers) {
        require(s.delay < pri, "synth_echo: delay exceeds the unambiguous range T_PRI");
        const auto d = static_cast<Eigen::Index>(std::llround(s.delay / ts));
        require(d + tx.size() <= n_fast, "synth_echo: delayed pulse does not fit inside one PRI");
        for (int n = 0; n < n_pulses; ++n) {
            const cplx phase = std::polar(1.0, 2.0 * kPi * s.doppler * n * pri);
            echo.col(n).segment(d, tx.size()) += (s.reflectivity * phase) * tx.samples();
        }
    }
    return add_awgn(echo, sigma2, rng);
}

/// out[k] = sum_m rx[k + m] conj(ref[m] w[m]), k = 0 .. len(rx) - len(ref).
inline CVec matched_filter(const CVec& rx, const CVec& ref, std::span<const double> window = {}) {
    require(ref.size() <= rx.size(), "matched_filter: reference longer than received signal");
    if (window.empty()) return correlate_valid(rx, ref);
    require(static_cast<Eigen::Index>(window.size()) == ref.size(), "matched_filter: window length must match reference");
    CVec weighted = ref;
    for (Eigen::Index m = 0; m < ref.size(); ++m) weighted[m] *= window[static_cast<std::size_t>(m)];
    return correlate_valid(rx, weighted);
}

inline ComplexSignal matched_filter(const ComplexSignal& rx, const ComplexSignal& ref,
                                    const std::optional<waveform::RadarWindow>& window = std::nullopt) {
    if (!window) return ComplexSignal(matched_filter(rx.samples(), ref.samples()), rx.sample_interval());
    require(window->length == ref.size(), "matched_filter: window length must match reference");
    const auto taps = waveform::make_window(*window);
    return ComplexSignal(matched_filter(rx.samples(), ref.samples(), taps), rx.sample_interval());
}

/**
 * |.|^2 range-Doppler map: matched filter down each pulse, DFT across pulses.
 * Row = range bin (delay in samples), column = Doppler bin, with bin k
 * meaning nu = k / (N T_PRI) (bins past N/2 are negative Doppler).
 */
inline RMat range_doppler_map(const CMat& echo, const CVec& ref) {
    require(echo.cols() >= 2, "range_doppler_map: need at least two pulses");
    const Eigen::Index n_range = echo.rows() - ref.size() + 1;
    require(n_range >= 1, "range_doppler_map: reference longer than fast-time window");
    CMat compressed(n_range, echo.cols());
    for (Eigen::Index p = 0; p < echo.cols(); ++p) compressed.col(p) = matched_filter(CVec(echo.col(p)), ref);
    RMat map(n_range, echo.cols());
    for (Eigen::Index r = 0; r < n_range; ++r) {
        const CVec spectrum = fft(CVec(compressed.row(r).transpose()));
        map.row(r) = spectrum.cwiseAbs2().transpose();
    }
    return map;
}

// ---------------------------------------------------------------------------
// Peak utilities

/// Indices of strict local maxima of |x| whose magnitude is at least floor_ratio of the global maximum.
inline std::vector<Eigen::Index> local_maxima(const RVec& mag, double floor_ratio = 0.5) {
    std::vector<Eigen::Index> out;
    if (mag.size() == 0) return out;
    const double floor = floor_ratio * mag.maxCoeff();
    for (Eigen::Index i = 0; i < mag.size(); ++i) {
        const bool left = i == 0 || mag[i] > mag[i - 1];
        const bool right = i == mag.size() - 1 || mag[i] > mag[i + 1];
        if (left && right && mag[i] >= floor && mag[i] > 0.0) out.push_back(i);
    }
    return out;
}

struct MapPeak {
    Eigen::Index row = 0;
    Eigen::Index col = 0;
    double value = 0.0;
};

/**
 * The M largest local maxima of a 2-D map. A cell is a local maximum when it is
 * no smaller than its 8 neighbours (Doppler axis wraps); maxima closer than
 * min_separation bins in both axes to a stronger accepted peak are dropped.
 */
inline std::vector<MapPeak> strongest_peaks(const RMat& map, std::size_t m, Eigen::Index min_separation = 1) {
    std::vector<MapPeak> cands;
    const Eigen::Index rows = map.rows();
    const Eigen::Index cols = map.cols();
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            const double v = map(r, c);
            bool is_max = v > 0.0;
            for (Eigen::Index dr = -1; dr <= 1 && is_max; ++dr) {
                for (Eigen::Index dc = -1; dc <= 1; ++dc) {
                    if (dr == 0 && dc == 0) continue;
                    const Eigen::Index rr = r + dr;
                    if (rr < 0 || rr >= rows) continue;
                    const Eigen::Index cc = (c + dc + cols) % cols;
                    if (map(rr, cc) > v) {
                        is_max = false;
                        break;
                    }
                }
            }
            if (is_max) cands.push_back({r, c, v});
        }
    }
    std::stable_sort(cands.begin(), cands.end(), [](const MapPeak& a, const MapPeak& b) { return a.value > b.value; });
    std::vector<MapPeak> out;
    for (const auto& p : cands) {
        if (out.size() >= m) break;
        bool ok = true;
        for (const auto& q : out) {
            const Eigen::Index dc = std::min((p.col - q.col + cols) % cols, (q.col - p.col + cols) % cols);
            if (std::abs(p.row - q.row) <= min_separation && dc <= min_separation) ok = false;
        }
        if (ok) out.push_back(p);
    }
    return out;
}

/// Peak sidelobe level in dB relative to the main peak; the main lobe extends to the first local minimum on each side.
inline double peak_sidelobe_db(const RVec& mag) {
    Eigen::Index peak = 0;
    mag.maxCoeff(&peak);
    Eigen::Index lo = peak;
    while (lo > 0 && mag[lo - 1] <= mag[lo]) --lo;
    Eigen::Index hi = peak;
    while (hi < mag.size() - 1 && mag[hi + 1] <= mag[hi]) ++hi;
    double side = 0.0;
    for (Eigen::Index i = 0; i < mag.size(); ++i)
        if (i < lo || i > hi) side = std::max(side, mag[i]);
    if (side <= 0.0) return -std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(side / mag[peak]);
}

}  // namespace isac::radar
