#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "isac/core/rng.hpp"
#include "isac/core/types.hpp"

namespace isac {

/**
 * Finite complex baseband sequence with its sampling interval.
 *
 * Sample k corresponds to time k * sample_interval; indexing is 0-based
 * throughout, so a sequence written over [-N, N] elsewhere is stored here
 * shifted by N.
 */
class ComplexSignal {
public:
    ComplexSignal(CVec samples, double sample_interval = 1.0)
        : samples_(std::move(samples)), sample_interval_(sample_interval) {
        require(samples_.size() >= 1, "ComplexSignal: at least one sample required");
        require(sample_interval_ > 0.0 && std::isfinite(sample_interval_),
                "ComplexSignal: sample_interval must be positive and finite");
        require(samples_.allFinite(), "ComplexSignal: samples must be finite");
    }

    ComplexSignal(std::initializer_list<cplx> samples, double sample_interval = 1.0)
        : ComplexSignal(from_list(samples), sample_interval) {}

    const CVec& samples() const { return samples_; }
    double sample_interval() const { return sample_interval_; }
    double sample_rate() const { return 1.0 / sample_interval_; }
    Eigen::Index size() const { return samples_.size(); }
    cplx operator[](Eigen::Index i) const { return samples_[i]; }
    double energy() const { return samples_.squaredNorm(); }

private:
    static CVec from_list(std::initializer_list<cplx> l) {
        CVec v(static_cast<Eigen::Index>(l.size()));
        std::copy(l.begin(), l.end(), v.data());
        return v;
    }

    CVec samples_;
    double sample_interval_;
};

enum class ChannelKind { Generic, Geometric, Rayleigh, Distributed, Toeplitz };

inline std::string to_string(ChannelKind k) {
    switch (k) {
        case ChannelKind::Generic: return "generic";
        case ChannelKind::Geometric: return "geometric";
        case ChannelKind::Rayleigh: return "rayleigh";
        case ChannelKind::Distributed: return "distributed";
        case ChannelKind::Toeplitz: return "toeplitz";
    }
    return "generic";
}

/// Complex channel matrix tagged with the model that produced it.
struct ChannelMatrix {
    CMat h;
    ChannelKind kind = ChannelKind::Generic;

    Eigen::Index rows() const { return h.rows(); }
    Eigen::Index cols() const { return h.cols(); }
};

/// Y = H S + Z with Z circularly symmetric white Gaussian of per-entry variance noise_variance.
struct LinearGaussianModel {
    ChannelMatrix channel;
    CMat tx;
    double noise_variance = 0.0;

    LinearGaussianModel(ChannelMatrix h, CMat s, double sigma2)
        : channel(std::move(h)), tx(std::move(s)), noise_variance(sigma2) {
        require(channel.cols() == tx.rows(), "LinearGaussianModel: channel.cols must equal tx.rows");
        require(std::isfinite(noise_variance) && noise_variance >= 0.0,
                "LinearGaussianModel: noise_variance must be finite and non-negative");
    }

    CMat mean() const { return channel.h * tx; }
};

// ---------------------------------------------------------------------------
// FFT helpers. Forward transform is unnormalized; inverse carries 1/N.

inline CVec fft(const CVec& x) {
    Eigen::FFT<double> engine;
    CVec out(x.size());
    engine.fwd(out, x);
    return out;
}

inline CVec ifft(const CVec& x) {
    Eigen::FFT<double> engine;
    CVec out(x.size());
    engine.inv(out, x);
    return out;
}

inline Eigen::Index next_pow2(Eigen::Index n) {
    Eigen::Index p = 1;
    while (p < n) p <<= 1;
    return p;
}

// ---------------------------------------------------------------------------

/// Toep(h): the (input_len + len(h) - 1) x input_len convolution matrix; column n is h shifted down by n.
inline CMat build_toeplitz(const CVec& h, Eigen::Index input_len) {
    require(h.size() >= 1, "build_toeplitz: h must be non-empty");
    require(input_len >= 1, "build_toeplitz: input_len must be positive");
    CMat t = CMat::Zero(input_len + h.size() - 1, input_len);
    for (Eigen::Index n = 0; n < input_len; ++n) t.col(n).segment(n, h.size()) = h;
    return t;
}

inline CMat build_toeplitz(const ComplexSignal& h, Eigen::Index input_len) {
    return build_toeplitz(h.samples(), input_len);
}

/// Linear convolution through zero-padded FFTs; output length len(s) + len(h) - 1.
inline CVec convolve(const CVec& s, const CVec& h) {
    require(s.size() >= 1 && h.size() >= 1, "convolve: inputs must be non-empty");
    const Eigen::Index out_len = s.size() + h.size() - 1;
    const Eigen::Index n = next_pow2(out_len);
    CVec sp = CVec::Zero(n);
    CVec hp = CVec::Zero(n);
    sp.head(s.size()) = s;
    hp.head(h.size()) = h;
    CVec y = ifft(fft(sp).cwiseProduct(fft(hp)));
    return y.head(out_len);
}

inline ComplexSignal convolve(const ComplexSignal& s, const ComplexSignal& h) {
    require(std::abs(s.sample_interval() - h.sample_interval()) <= 1e-12 * s.sample_interval(),
            "convolve: signals must share a sample interval");
    return ComplexSignal(convolve(s.samples(), h.samples()), s.sample_interval());
}

/**
 * Valid-mode cross-correlation: out[k] = sum_m x[k + m] * conj(ref[m]),
 * k = 0 .. len(x) - len(ref).
 */
inline CVec correlate_valid(const CVec& x, const CVec& ref) {
    require(ref.size() >= 1 && ref.size() <= x.size(), "correlate_valid: need 1 <= len(ref) <= len(x)");
    const Eigen::Index out_len = x.size() - ref.size() + 1;
    const Eigen::Index n = next_pow2(x.size() + ref.size() - 1);
    CVec xp = CVec::Zero(n);
    CVec rp = CVec::Zero(n);
    xp.head(x.size()) = x;
    rp.head(ref.size()) = ref;
    CVec c = ifft(fft(xp).cwiseProduct(fft(rp).conjugate()));
    return c.head(out_len);
}

/// x + Z, Z i.i.d. CN(0, sigma2). Draws are column-major so results are reproducible per stream.
inline CMat add_awgn(const CMat& x, double sigma2, RngStream& rng) {
    require(sigma2 >= 0.0 && std::isfinite(sigma2), "add_awgn: noise variance must be non-negative");
    if (sigma2 == 0.0) return x;
    return x + rng.complex_normal_matrix(x.rows(), x.cols(), sigma2);
}

inline CVec add_awgn(const CVec& x, double sigma2, RngStream& rng) {
    CMat m = x;
    return add_awgn(m, sigma2, rng);
}

inline ComplexSignal add_awgn(const ComplexSignal& x, double sigma2, RngStream& rng) {
    return ComplexSignal(add_awgn(x.samples(), sigma2, rng), x.sample_interval());
}

}  // namespace isac
