#pragma once

#include <cmath>
#include <vector>

#include "isac/comms/comms.hpp"
#include "isac/core/rng.hpp"
#include "isac/core/signal.hpp"
#include "isac/radar/echo.hpp"

namespace isac::joint {

struct CcdTarget {
    double delay = 0.0;    // seconds
    double doppler = 0.0;  // Hz
    cplx reflectivity{1.0, 0.0};
};

/// Delay-Doppler magnitude map, rows = delay bins (N_c), columns = Doppler bins (N_s).
struct DdProfile {
    RMat magnitude;
    std::vector<radar::MapPeak> peaks;
};

struct CcdResult {
    DdProfile profile;
    Eigen::Index delay_bin = 0;
    Eigen::Index doppler_bin = 0;
    double delay_estimate = 0.0;
    double doppler_estimate = 0.0;
    bool edge = false;  // delay bin beyond the CP or Doppler bin at the +-1/(2 T_c) fold
    CMat divided;       // Y ./ X, kept for noise diagnostics
};

/**
 * Frequency-domain echo y(m, n) = alpha x(m, n) exp(-j 2 pi m df tau)
 * exp(j 2 pi nu n T_c) + z(m, n) over subcarrier m and OFDM symbol n.
 */
inline CMat ccd_echo(const CMat& x, const comms::OfdmConfig& cfg, const CcdTarget& target, double sigma2,
                     RngStream& rng) {
    cfg.validate();
    require(x.rows() == cfg.n_subcarriers && x.cols() == cfg.n_symbols, "ccd_pipeline: symbols must be N_c x N_s");
    const double tc = cfg.symbol_time();
    const double delay_samples = target.delay * cfg.n_subcarriers * cfg.subcarrier_spacing;
    require(target.delay >= 0.0 && delay_samples <= cfg.cp_length + 1e-9, "ccd_pipeline: delay must lie within the CP");
    require(std::abs(target.doppler) <= 1.0 / (2.0 * tc) + 1e-12, "ccd_pipeline: |doppler| must not exceed 1/(2 T_c)");

    CMat y(x.rows(), x.cols());
    for (Eigen::Index n = 0; n < x.cols(); ++n) {
        const cplx dop = std::polar(1.0, 2.0 * kPi * target.doppler * static_cast<double>(n) * tc);
        for (Eigen::Index m = 0; m < x.rows(); ++m) {
            const cplx del = std::polar(1.0, -2.0 * kPi * static_cast<double>(m) * cfg.subcarrier_spacing * target.delay);
            y(m, n) = target.reflectivity * x(m, n) * del * dop;
        }
    }
    return add_awgn(y, sigma2, rng);
}

/// Element-wise division, IDFT across subcarriers, DFT across symbols, and peak picking.
inline CcdResult ccd_process(const CMat& y, const CMat& x, const comms::OfdmConfig& cfg, std::size_t n_peaks = 1) {
    require(y.rows() == x.rows() && y.cols() == x.cols(), "ccd_process: shape mismatch");
    for (Eigen::Index i = 0; i < x.size(); ++i) require(x(i) != cplx(0.0, 0.0), "ccd_pipeline: zero data symbol");

    CcdResult r;
    r.divided = y.cwiseQuotient(x);
    CMat delay_domain(y.rows(), y.cols());
    const double nc = static_cast<double>(y.rows());
    for (Eigen::Index n = 0; n < y.cols(); ++n) delay_domain.col(n) = ifft(CVec(r.divided.col(n))) * nc;
    r.profile.magnitude.resize(y.rows(), y.cols());
    for (Eigen::Index m = 0; m < y.rows(); ++m)
        r.profile.magnitude.row(m) = fft(CVec(delay_domain.row(m).transpose())).cwiseAbs2().transpose();

    r.profile.magnitude.maxCoeff(&r.delay_bin, &r.doppler_bin);
    r.profile.peaks = radar::strongest_peaks(r.profile.magnitude, n_peaks);

    const Eigen::Index ns = y.cols();
    const Eigen::Index signed_bin = r.doppler_bin < (ns + 1) / 2 ? r.doppler_bin : r.doppler_bin - ns;
    r.delay_estimate = static_cast<double>(r.delay_bin) / (cfg.n_subcarriers * cfg.subcarrier_spacing);
    r.doppler_estimate = static_cast<double>(signed_bin) / (static_cast<double>(ns) * cfg.symbol_time());
    r.edge = r.delay_bin > cfg.cp_length || (ns % 2 == 0 && r.doppler_bin == ns / 2);
    return r;
}

inline CcdResult ccd_pipeline(const CMat& x, const comms::OfdmConfig& cfg, const CcdTarget& target, double sigma2,
                              RngStream& rng) {
    return ccd_process(ccd_echo(x, cfg, target, sigma2, rng), x, cfg);
}

/// Mean off-peak level relative to the peak, in dB.
inline double mean_sidelobe_db(const RMat& profile) {
    Eigen::Index r = 0, c = 0;
    const double peak = profile.maxCoeff(&r, &c);
    const double rest = (profile.sum() - peak) / static_cast<double>(profile.size() - 1);
    return 10.0 * std::log10(rest / peak);
}

/// Random data grid drawn from a constellation.
inline CMat random_symbols(const comms::Constellation& c, int rows, int cols, RngStream& rng) {
    CMat x(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) x(i, j) = c.points()[rng.index(c.size())];
    return x;
}

}  // namespace isac::joint
