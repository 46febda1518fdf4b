#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "isac/core/rng.hpp"
#include "isac/core/signal.hpp"
#include "isac/core/types.hpp"

namespace isac::comms {

// ---------------------------------------------------------------------------
// Constellations

enum class Modulation { BPSK, QPSK, PSK8, QAM16, ASK4 };

inline std::string to_string(Modulation m) {
    switch (m) {
        case Modulation::BPSK: return "bpsk";
        case Modulation::QPSK: return "qpsk";
        case Modulation::PSK8: return "8psk";
        case Modulation::QAM16: return "16qam";
        case Modulation::ASK4: return "ask4";
    }
    return "bpsk";
}

inline Modulation parse_modulation(const std::string& s) {
    for (auto m : {Modulation::BPSK, Modulation::QPSK, Modulation::PSK8, Modulation::QAM16, Modulation::ASK4})
        if (to_string(m) == s) return m;
    throw InvalidArgument("unknown constellation '" + s + "'");
}

/**
 * Unit-average-energy alphabet. points[label] is the symbol carrying the
 * bit pattern `label`, first bit most significant. Labels:
 *
 *   BPSK   0 -> +1, 1 -> -1
 *   QPSK   (b0 b1) -> ((1 - 2 b0) + j (1 - 2 b1)) / sqrt(2)
 *   8PSK   label g sits at angle 2 pi k / 8 where g = k ^ (k >> 1)
 *   16QAM  (b0 b1) selects I, (b2 b3) selects Q; per axis 00 -3, 01 -1, 11 +1, 10 +3; / sqrt(10)
 *   ASK-4  per-axis Gray levels on the real line; / sqrt(5)
 */
class Constellation {
public:
    explicit Constellation(Modulation kind) : kind_(kind) {
        auto gray_level = [](int two_bits) {
            switch (two_bits) {
                case 0b00: return -3.0;
                case 0b01: return -1.0;
                case 0b11: return 1.0;
                default: return 3.0;
            }
        };
        switch (kind) {
            case Modulation::BPSK:
                bits_ = 1;
                points_ = {cplx(1, 0), cplx(-1, 0)};
                break;
            case Modulation::QPSK:
                bits_ = 2;
                for (int l = 0; l < 4; ++l)
                    points_.emplace_back((1.0 - 2.0 * ((l >> 1) & 1)) / std::sqrt(2.0), (1.0 - 2.0 * (l & 1)) / std::sqrt(2.0));
                break;
            case Modulation::PSK8:
                bits_ = 3;
                points_.resize(8);
                for (int k = 0; k < 8; ++k) points_[k ^ (k >> 1)] = std::polar(1.0, 2.0 * kPi * k / 8.0);
                break;
            case Modulation::QAM16:
                bits_ = 4;
                for (int l = 0; l < 16; ++l)
                    points_.emplace_back(gray_level(l >> 2) / std::sqrt(10.0), gray_level(l & 3) / std::sqrt(10.0));
                break;
            case Modulation::ASK4:
                bits_ = 2;
                for (int l = 0; l < 4; ++l) points_.emplace_back(gray_level(l) / std::sqrt(5.0), 0.0);
                break;
        }
    }

    Modulation kind() const { return kind_; }
    int bits_per_symbol() const { return bits_; }
    const std::vector<cplx>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }

    double min_distance() const {
        double d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < points_.size(); ++i)
            for (std::size_t k = i + 1; k < points_.size(); ++k) d = std::min(d, std::abs(points_[i] - points_[k]));
        return d;
    }

private:
    Modulation kind_;
    int bits_ = 1;
    std::vector<cplx> points_;
};

using Bits = std::vector<std::uint8_t>;

inline CVec modulate(const Bits& bits, const Constellation& c) {
    const int b = c.bits_per_symbol();
    require(bits.size() % static_cast<std::size_t>(b) == 0, "modulate: bit length must be a multiple of bits_per_symbol");
    CVec out(static_cast<Eigen::Index>(bits.size() / b));
    for (Eigen::Index s = 0; s < out.size(); ++s) {
        int label = 0;
        for (int k = 0; k < b; ++k) label = (label << 1) | (bits[static_cast<std::size_t>(s * b + k)] & 1);
        out[s] = c.points()[static_cast<std::size_t>(label)];
    }
    return out;
}

/**
 * Symbol decisions. Without priors this is the nearest-point (ML) rule.
 * With priors it is MAP for CN(0, noise_variance): minimize
 * |y - x|^2 / sigma^2 - ln p(x).
 */
inline std::vector<int> detect_labels(const CVec& symbols, const Constellation& c,
                                      std::optional<std::span<const double>> priors = std::nullopt,
                                      double noise_variance = 1.0) {
    if (priors) {
        require(priors->size() == c.size(), "detect: one prior per constellation point");
        require(noise_variance > 0.0, "detect: MAP rule needs a positive noise variance");
    }
    std::vector<int> out(static_cast<std::size_t>(symbols.size()));
    for (Eigen::Index s = 0; s < symbols.size(); ++s) {
        int best = 0;
        double best_cost = std::numeric_limits<double>::infinity();
        for (std::size_t l = 0; l < c.size(); ++l) {
            double cost = std::norm(symbols[s] - c.points()[l]);
            if (priors) cost = cost / noise_variance - std::log((*priors)[l]);
            if (cost < best_cost) {
                best_cost = cost;
                best = static_cast<int>(l);
            }
        }
        out[static_cast<std::size_t>(s)] = best;
    }
    return out;
}

inline Bits demap(const CVec& symbols, const Constellation& c,
                  std::optional<std::span<const double>> priors = std::nullopt, double noise_variance = 1.0) {
    const auto labels = detect_labels(symbols, c, priors, noise_variance);
    const int b = c.bits_per_symbol();
    Bits bits;
    bits.reserve(labels.size() * static_cast<std::size_t>(b));
    for (int l : labels)
        for (int k = b - 1; k >= 0; --k) bits.push_back(static_cast<std::uint8_t>((l >> k) & 1));
    return bits;
}

inline Bits random_bits(std::size_t n, RngStream& rng) {
    Bits b(n);
    for (std::size_t i = 0; i < n; i += 64) {
        const std::uint64_t word = rng.bits();
        for (std::size_t k = 0; k < 64 && i + k < n; ++k) b[i + k] = static_cast<std::uint8_t>((word >> k) & 1);
    }
    return b;
}

inline double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

// ---------------------------------------------------------------------------
// OFDM

struct OfdmConfig {
    int n_subcarriers = 64;
    int n_symbols = 14;
    double subcarrier_spacing = 15e3;  // Hz
    int cp_length = 16;                // samples
    double tx_power = 1.0;
    int channel_delay_spread = 0;      // samples; demod rejects cp_length below this

    /// OFDM symbol duration including the cyclic prefix.
    double symbol_time() const { return (1.0 + static_cast<double>(cp_length) / n_subcarriers) / subcarrier_spacing; }
    double sample_interval() const { return 1.0 / (n_subcarriers * subcarrier_spacing); }

    void validate() const {
        require(n_subcarriers >= 1, "OfdmConfig: n_subcarriers must be >= 1");
        require(n_symbols >= 1, "OfdmConfig: n_symbols must be >= 1");
        require(cp_length >= 0 && cp_length <= n_subcarriers, "OfdmConfig: cp_length must lie in [0, N_c]");
        require(subcarrier_spacing > 0.0, "OfdmConfig: subcarrier_spacing must be positive");
        require(channel_delay_spread >= 0, "OfdmConfig: channel_delay_spread must be non-negative");
    }
};

/// Per-symbol unitary IDFT (scale 1/sqrt(N_c)) followed by the cyclic prefix.
inline ComplexSignal ofdm_mod(const CMat& grid, const OfdmConfig& cfg) {
    cfg.validate();
    require(grid.rows() == cfg.n_subcarriers && grid.cols() == cfg.n_symbols, "ofdm_mod: grid must be N_c x N_s");
    const int nc = cfg.n_subcarriers;
    const int len = nc + cfg.cp_length;
    const double scale = std::sqrt(static_cast<double>(nc));
    CVec out(static_cast<Eigen::Index>(len) * cfg.n_symbols);
    for (int s = 0; s < cfg.n_symbols; ++s) {
        const CVec td = ifft(CVec(grid.col(s))) * scale;
        auto block = out.segment(static_cast<Eigen::Index>(s) * len, len);
        block.head(cfg.cp_length) = td.tail(cfg.cp_length);
        block.tail(nc) = td;
    }
    return ComplexSignal(std::move(out), cfg.sample_interval());
}

inline CMat ofdm_demod(const CVec& rx, const OfdmConfig& cfg) {
    cfg.validate();
    require(cfg.cp_length >= cfg.channel_delay_spread, "ofdm_demod: cyclic prefix shorter than channel delay spread");
    const int nc = cfg.n_subcarriers;
    const int len = nc + cfg.cp_length;
    require(rx.size() >= static_cast<Eigen::Index>(len) * cfg.n_symbols, "ofdm_demod: received signal too short");
    const double scale = 1.0 / std::sqrt(static_cast<double>(nc));
    CMat grid(nc, cfg.n_symbols);
    for (int s = 0; s < cfg.n_symbols; ++s)
        grid.col(s) = fft(CVec(rx.segment(static_cast<Eigen::Index>(s) * len + cfg.cp_length, nc))) * scale;
    return grid;
}

inline CMat ofdm_demod(const ComplexSignal& rx, const OfdmConfig& cfg) { return ofdm_demod(rx.samples(), cfg); }

/// Linear convolution with a multipath impulse response, truncated to the input length.
inline CVec apply_multipath(const CVec& x, const CVec& taps) { return convolve(x, taps).head(x.size()); }

/// H[m] = sum_l h_l exp(-j 2 pi m l / N_c).
inline CVec channel_frequency_response(const CVec& taps, int n_subcarriers) {
    CVec padded = CVec::Zero(n_subcarriers);
    padded.head(taps.size()) = taps;
    return fft(padded);
}

/// Element-wise LS estimate Y / X over the pilot positions.
inline CMat ls_channel_estimate(const CMat& y_pilot, const CMat& x_pilot) {
    require(y_pilot.rows() == x_pilot.rows() && y_pilot.cols() == x_pilot.cols(),
            "ls_channel_estimate: pilot matrices must have equal shape");
    for (Eigen::Index i = 0; i < x_pilot.size(); ++i)
        require(x_pilot(i) != cplx(0.0, 0.0), "ls_channel_estimate: zero pilot");
    return y_pilot.cwiseQuotient(x_pilot);
}

// ---------------------------------------------------------------------------
// Capacity and the I-MMSE identity

/// Complex AWGN capacity in bits per channel use.
inline double awgn_capacity(double snr) {
    require(snr >= 0.0, "awgn_capacity: snr must be non-negative");
    return std::log2(1.0 + snr);
}

struct ImmseRow {
    double snr = 0.0;
    double mutual_information = 0.0;  // nats
    double mmse = 0.0;
    double derivative = 0.0;  // numerical dI/dsnr
    double residual = 0.0;    // |dI/dsnr - mmse / 2| / (mmse / 2)
};

/**
 * Real Gaussian channel with unit-variance Gaussian input:
 * I = ln(1 + snr) / 2, MMSE = 1 / (1 + snr). The derivative is a
 * three-point Lagrange difference on the (possibly non-uniform) grid:
 * central at interior points, one-sided second order at the ends.
 */
inline std::vector<ImmseRow> immse_check(std::span<const double> snr_grid) {
    require(snr_grid.size() >= 3, "immse_check: need at least three grid points");
    for (std::size_t i = 0; i < snr_grid.size(); ++i) {
        require(snr_grid[i] >= 0.0, "immse_check: snr must be non-negative");
        if (i > 0) require(snr_grid[i] > snr_grid[i - 1], "immse_check: grid must be strictly increasing");
    }
    auto info = [](double s) { return 0.5 * std::log1p(s); };
    // derivative at x of the quadratic through (x0, x1, x2)
    auto lagrange_d = [&](double x, double x0, double x1, double x2) {
        const double f0 = info(x0), f1 = info(x1), f2 = info(x2);
        return f0 * ((x - x1) + (x - x2)) / ((x0 - x1) * (x0 - x2)) +
               f1 * ((x - x0) + (x - x2)) / ((x1 - x0) * (x1 - x2)) +
               f2 * ((x - x0) + (x - x1)) / ((x2 - x0) * (x2 - x1));
    };
    const std::size_t n = snr_grid.size();
    std::vector<ImmseRow> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = snr_grid[i];
        const std::size_t c = std::clamp<std::size_t>(i, 1, n - 2);
        ImmseRow& r = rows[i];
        r.snr = s;
        r.mutual_information = info(s);
        r.mmse = 1.0 / (1.0 + s);
        r.derivative = lagrange_d(s, snr_grid[c - 1], snr_grid[c], snr_grid[c + 1]);
        r.residual = std::abs(r.derivative - 0.5 * r.mmse) / (0.5 * r.mmse);
    }
    return rows;
}

/// Monte Carlo MMSE of BPSK input X in Y = sqrt(snr) X + N, using E[X|Y] = tanh(sqrt(snr) Y).
inline double bpsk_mmse_monte_carlo(double snr, std::size_t n_samples, RngStream& rng) {
    require(snr >= 0.0 && n_samples > 0, "bpsk_mmse_monte_carlo: invalid arguments");
    const double a = std::sqrt(snr);
    double acc = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double x = rng.uniform() < 0.5 ? 1.0 : -1.0;
        const double y = a * x + rng.normal();
        const double e = x - std::tanh(a * y);
        acc += e * e;
    }
    return acc / static_cast<double>(n_samples);
}

}  // namespace isac::comms
