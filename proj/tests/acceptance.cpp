/**
 * Acceptance suite. Prints one PASS/FAIL line per criterion and exits
 * nonzero if any criterion fails or exceeds its runtime budget.
 */
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>

#include "isac/harness/runner.hpp"
#include "isac/isac.hpp"
#include "oracles.hpp"

using namespace isac;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v, int precision = 4) {
    std::ostringstream os;
    os.precision(precision);
    os << v;
    return os.str();
}

// ---------------------------------------------------------------------------

/// Two equal LFM echoes 1/B apart resolve into two matched-filter maxima; 0.4/B apart they merge.
Outcome range_resolution() {
    waveform::PulseTrainSpec spec;
    spec.bandwidth = 1.0;
    spec.pulse_width = 20.0;
    spec.pri = 80.0;
    const double fs = 10.0;  // 1 / B = 10 samples
    const auto tx = waveform::gen_lfm(spec, fs);
    auto count = [&](int separation) {
        CVec rx = CVec::Zero(tx.size() + 40 + separation);
        rx.segment(20, tx.size()) += tx.samples();
        rx.segment(20 + separation, tx.size()) += tx.samples();
        CVec padded = CVec::Zero(rx.size() + 2 * tx.size());
        padded.segment(tx.size(), rx.size()) = rx;
        return radar::local_maxima(radar::matched_filter(padded, tx.samples()).cwiseAbs()).size();
    };
    const auto at_one = count(10);
    const auto at_fraction = count(4);
    return {at_one == 2 && at_fraction == 1,
            "maxima at 1/B: " + std::to_string(at_one) + ", at 0.4/B: " + std::to_string(at_fraction)};
}

/// Matched-filter statistics |s^H z|^2 for independent noise-only cells.
std::vector<double> noise_only_mf_stats(const CVec& ref, double sigma2, int cells, RngStream& rng) {
    std::vector<double> out(static_cast<std::size_t>(cells));
    for (auto& v : out) v = std::norm(ref.dot(add_awgn(CVec(CVec::Zero(ref.size())), sigma2, rng)));
    return out;
}

Outcome np_calibration() {
    RngStream rng(2002, 0);
    waveform::PulseTrainSpec spec;
    spec.bandwidth = 1e6;
    spec.pulse_width = 16e-6;
    spec.pri = 100e-6;
    const CVec ref = waveform::gen_lfm(spec, 4e6).samples();
    const double sigma2 = 0.5;
    const int cells = 100000;
    const auto stats = noise_only_mf_stats(ref, sigma2, cells, rng);
    bool ok = true;
    std::string detail;
    for (double pfa : {1e-1, 1e-2, 1e-3}) {
        const auto r = radar::np_detect(stats, sigma2, pfa, ref.squaredNorm());
        const double z = (r.empirical_pfa - pfa) / stats::binomial_se(pfa, cells);
        ok = ok && std::abs(z) <= 3.0;
        detail += "pfa " + fmt(pfa) + " -> " + fmt(r.empirical_pfa) + " (" + fmt(z, 2) + " se); ";
    }
    return {ok, detail};
}

Outcome cfar_calibration() {
    RngStream rng(2003, 0);
    std::vector<double> stats(100000);
    for (auto& s : stats) s = std::norm(rng.complex_normal(1.7));
    const double pfa = 1e-2;
    const auto r = radar::ca_cfar(stats, 16, 2, pfa);
    const double z = (r.empirical_pfa - pfa) / stats::binomial_se(pfa, static_cast<double>(r.h0_cells));
    return {std::abs(z) <= 3.0, "n_train 16, guard 2: pfa " + fmt(r.empirical_pfa) + " over " +
                                    std::to_string(r.h0_cells) + " cells (" + fmt(z, 2) + " se)"};
}

Outcome omp_vs_l0() {
    RngStream rng(2004, 0);
    const int instances = 500;
    int agree = 0;
    for (int t = 0; t < instances; ++t) {
        const CMat s = rng.complex_normal_matrix(32, 16, 1.0);
        const int k = 1 + static_cast<int>(rng.index(3));
        std::vector<int> idx(16);
        std::iota(idx.begin(), idx.end(), 0);
        rng.shuffle(idx);
        CVec h = CVec::Zero(16);
        for (int i = 0; i < k; ++i) h[idx[static_cast<std::size_t>(i)]] = rng.complex_normal(1.0);
        const CVec y = s * h;
        const auto omp = radar::omp_recover(y, s, 3, 1e-10 * y.norm());
        const auto l0 = oracle::exhaustive_l0(y, s, 3);
        auto sup = omp.support;
        std::sort(sup.begin(), sup.end());
        if (l0 && sup == l0->support) ++agree;
    }
    const double frac = static_cast<double>(agree) / instances;
    return {frac >= 0.95, std::to_string(agree) + "/" + std::to_string(instances) + " supports agree"};
}

/**
 * Known-amplitude Gaussian pulse exp(-(n - tau)^2 / (2 w^2)) sampled at n = 0..63,
 * tau = 32 + U(-1/2, 1/2). The MLE searches tau on [27, 37] in steps of 0.01.
 */
Outcome mle_vs_crb() {
    const int n = 64;
    const double w = 2.0, sigma2 = 1.0;
    const int trials = 1000;
    const double lo = 27.0, step = 0.01;
    const int grid_n = 1001;

    auto pulse = [&](double tau) {
        CVec p(n);
        for (int i = 0; i < n; ++i) p[i] = std::exp(-(i - tau) * (i - tau) / (2.0 * w * w));
        return p;
    };
    auto pulse_derivative = [&](double tau) {
        CVec d(n);
        for (int i = 0; i < n; ++i) d[i] = (i - tau) / (w * w) * std::exp(-(i - tau) * (i - tau) / (2.0 * w * w));
        return d;
    };
    CMat bank(n, grid_n);
    std::vector<RVec> grid(grid_n, RVec(1));
    for (int g = 0; g < grid_n; ++g) {
        grid[static_cast<std::size_t>(g)][0] = lo + step * g;
        bank.col(g) = pulse(lo + step * g);
    }

    bool ok = true;
    std::string detail;
    double gap_at_20 = std::numeric_limits<double>::infinity();
    const double slack = 1.0 - 3.0 * std::sqrt(2.0 / trials);
    for (double snr_db : {10.0, 15.0, 20.0, 25.0, 30.0}) {
        RngStream rng(2005, static_cast<std::uint64_t>(snr_db));
        const cplx alpha = std::sqrt(db_to_linear(snr_db) * sigma2);
        auto model = [&](const RVec& eta) -> CMat {
            return alpha * bank.col(std::lround((eta[0] - lo) / step));
        };
        double se = 0.0, crb = 0.0;
        for (int t = 0; t < trials; ++t) {
            const double tau = 32.0 + rng.uniform() - 0.5;
            const CVec y = add_awgn(CVec(alpha * pulse(tau)), sigma2, rng);
            const auto est = radar::grid_mle(y, model, std::span<const RVec>(grid));
            se += (est.estimate[0] - tau) * (est.estimate[0] - tau);
            const std::vector<CMat> d{CMat(alpha * pulse_derivative(tau))};
            crb += radar::fisher_crb(sigma2, d).bound(0);
        }
        const double mse = se / trials;
        crb /= trials;
        const double gap = linear_to_db(mse / crb);
        if (snr_db == 20.0) gap_at_20 = gap;
        ok = ok && mse >= crb * slack;
        detail += fmt(snr_db, 3) + " dB: MSE/CRB " + fmt(gap, 3) + " dB; ";
    }
    ok = ok && std::abs(gap_at_20) <= 1.0;
    return {ok, detail};
}

Outcome fim_vs_finite_difference() {
    RngStream rng(2006, 0);
    double worst = 0.0;
    for (int model_id = 0; model_id < 20; ++model_id) {
        const int nt = 2 + static_cast<int>(rng.index(4));
        const int nr = 2 + static_cast<int>(rng.index(4));
        const int snapshots = 1 + static_cast<int>(rng.index(6));
        const auto tx = array::UlaGeometry::half_wavelength(nt);
        const auto rx = array::UlaGeometry::half_wavelength(nr);
        const CMat s = rng.complex_normal_matrix(nt, snapshots, 1.0);
        const double sigma2 = 0.1 + rng.uniform();
        auto mean = [&](const RVec& eta) -> CMat {
            return cplx(eta[1], eta[2]) * array::steering(rx, eta[0]) * array::steering(tx, eta[0]).transpose() * s;
        };
        RVec eta0(3);
        eta0 << rng.uniform() - 0.5, rng.normal(), rng.normal();
        const cplx alpha(eta0[1], eta0[2]);
        const CVec a = array::steering(tx, eta0[0]);
        const CVec b = array::steering(rx, eta0[0]);
        const std::vector<CMat> d{
            CMat(alpha * (array::steering_derivative(rx, eta0[0]) * a.transpose() +
                          b * array::steering_derivative(tx, eta0[0]).transpose()) *
                 s),
            CMat(b * a.transpose() * s), CMat(kJ * b * a.transpose() * s)};
        const auto analytic = radar::fisher_crb(sigma2, d);
        const RMat fd = oracle::finite_difference_fim(mean, eta0, sigma2, 1e-4);
        worst = std::max(worst, (analytic.fim - fd).cwiseAbs().maxCoeff() / analytic.fim.cwiseAbs().maxCoeff());
    }
    return {worst < 1e-4, "worst relative error over 20 models " + fmt(worst, 3)};
}

Outcome immse_identity() {
    std::vector<double> grid;
    for (int i = 0; i <= 400; ++i) grid.push_back(0.01 * i);
    double worst = 0.0;
    for (const auto& r : comms::immse_check(grid)) worst = std::max(worst, r.residual);
    return {worst < 1e-3, "max relative residual " + fmt(worst, 3)};
}

Outcome ofdm_diagonalization() {
    comms::OfdmConfig cfg;
    cfg.n_subcarriers = 64;
    cfg.n_symbols = 1;
    cfg.cp_length = 8;
    cfg.channel_delay_spread = 7;
    RngStream rng(2008, 0);
    const CVec taps = rng.complex_normal_matrix(8, 1, 1.0).col(0);
    double leakage = 0.0;
    for (int k = 0; k < cfg.n_subcarriers; ++k) {
        CMat e = CMat::Zero(cfg.n_subcarriers, 1);
        e(k, 0) = 1.0;
        const CVec rx = comms::apply_multipath(comms::ofdm_mod(e, cfg).samples(), taps);
        CVec col = comms::ofdm_demod(rx, cfg).col(0);
        col[k] = 0.0;
        leakage = std::max(leakage, col.cwiseAbs().maxCoeff());
    }
    comms::OfdmConfig plain;
    plain.n_subcarriers = 64;
    plain.n_symbols = 8;
    const CMat x = joint::random_symbols(comms::Constellation(comms::Modulation::QAM16), 64, 8, rng);
    const double round_trip = (comms::ofdm_demod(comms::ofdm_mod(x, plain), plain) - x).cwiseAbs().maxCoeff();
    return {leakage < 1e-10 && round_trip < 1e-12,
            "off-diagonal leakage " + fmt(leakage, 3) + ", round trip error " + fmt(round_trip, 3)};
}

Outcome bpsk_ber() {
    const comms::Constellation c(comms::Modulation::BPSK);
    const std::size_t n = 1000000;
    bool ok = true;
    std::string detail;
    for (double snr_db : {0.0, 2.0, 4.0, 6.0}) {
        RngStream rng(2009, static_cast<std::uint64_t>(snr_db));
        const double snr = db_to_linear(snr_db);
        const comms::Bits bits = comms::random_bits(n, rng);
        const comms::Bits out = comms::demap(add_awgn(comms::modulate(bits, c), 1.0 / snr, rng), c);
        std::size_t errors = 0;
        for (std::size_t i = 0; i < n; ++i) errors += bits[i] != out[i];
        const double ber = static_cast<double>(errors) / static_cast<double>(n);
        const double theory = oracle::q_function_numeric(std::sqrt(2.0 * snr));
        const double rel = std::abs(ber / theory - 1.0);
        ok = ok && rel <= 0.05;
        detail += fmt(snr_db, 2) + " dB: " + fmt(ber) + " vs " + fmt(theory) + "; ";
    }
    return {ok, detail};
}

Outcome ccd_sensing() {
    comms::OfdmConfig cfg;
    cfg.n_subcarriers = 64;
    cfg.n_symbols = 32;
    cfg.cp_length = 16;
    cfg.subcarrier_spacing = 120e3;
    const comms::Constellation qpsk(comms::Modulation::QPSK);
    const comms::Constellation qam(comms::Modulation::QAM16);
    auto target = [&](int delay_bin, int doppler_bin) {
        joint::CcdTarget t;
        t.delay = delay_bin / (cfg.n_subcarriers * cfg.subcarrier_spacing);
        t.doppler = doppler_bin / (cfg.n_symbols * cfg.symbol_time());
        return t;
    };
    auto hits = [&](double sigma2, std::uint64_t stream) {
        RngStream rng(2010, stream);
        int correct = 0;
        for (int t = 0; t < 200; ++t) {
            const int db = static_cast<int>(rng.index(static_cast<std::size_t>(cfg.cp_length) + 1));
            // signed Doppler bin strictly inside the +-1/(2 T_c) fold
            const int vb = static_cast<int>(rng.index(static_cast<std::size_t>(cfg.n_symbols - 1))) - (cfg.n_symbols / 2 - 1);
            const CMat x = joint::random_symbols(qpsk, cfg.n_subcarriers, cfg.n_symbols, rng);
            const auto r = joint::ccd_pipeline(x, cfg, target(db, vb), sigma2, rng);
            correct += r.delay_bin == db && r.doppler_bin == (vb + cfg.n_symbols) % cfg.n_symbols;
        }
        return correct;
    };
    const int noiseless = hits(0.0, 0);
    const int at_20db = hits(db_to_linear(-20.0), 1);

    RngStream rng(2010, 2);
    const double sigma2 = 0.1;
    auto post_division_noise = [&](const comms::Constellation& c, CMat& x) {
        x = joint::random_symbols(c, cfg.n_subcarriers, cfg.n_symbols, rng);
        const auto t = target(5, 3);
        const auto noisy = joint::ccd_pipeline(x, cfg, t, sigma2, rng);
        const auto clean = joint::ccd_process(joint::ccd_echo(x, cfg, t, 0.0, rng), x, cfg);
        return CMat(noisy.divided - clean.divided);
    };
    CMat x;
    const CMat zq = post_division_noise(qpsk, x);
    std::vector<double> parts;
    for (Eigen::Index i = 0; i < zq.size(); ++i) {
        parts.push_back(zq(i).real() / std::sqrt(sigma2 / 2.0));
        parts.push_back(zq(i).imag() / std::sqrt(sigma2 / 2.0));
    }
    const double ks_p = stats::ks_test_normal(parts).p_value;

    const CMat z16 = post_division_noise(qam, x);
    std::map<long, std::vector<double>> groups;
    for (Eigen::Index i = 0; i < z16.size(); ++i) groups[std::lround(10.0 * std::norm(x(i)))].push_back(z16(i).real());
    std::vector<std::vector<double>> g;
    for (auto& [energy, v] : groups) g.push_back(v);
    const double bartlett_p = stats::bartlett_test(g).p_value;

    return {noiseless == 200 && at_20db >= 198 && ks_p > 0.01 && bartlett_p < 0.01,
            "noiseless " + std::to_string(noiseless) + "/200, 20 dB " + std::to_string(at_20db) +
                "/200, QPSK KS p " + fmt(ks_p, 3) + ", 16QAM Bartlett p " + fmt(bartlett_p, 3)};
}

Outcome im_round_trip() {
    RngStream rng(2011, 0);
    bool ok = true;
    std::string detail;
    for (auto [m, k] : {std::pair{4, 2}, std::pair{9, 2}, std::pair{6, 4}}) {
        const joint::ImCodebook cb{m, k, k};
        const std::uint64_t size = cb.message_count();
        std::uint64_t good = 0;
        bool orthogonal = true;
        for (std::uint64_t msg = 0; msg < size; ++msg) {
            const auto w = joint::im_encode(msg, cb);
            orthogonal = orthogonal && joint::carriers_orthogonal(w, cb);
            const auto rx = joint::im_channel(w, cb, std::numeric_limits<double>::infinity(), rng);
            const auto dec = joint::im_decode(joint::im_filter_bank(rx, cb), cb);
            good += dec.message && *dec.message == msg;
        }
        ok = ok && good == size && orthogonal;
        detail += "(M " + std::to_string(m) + ", K " + std::to_string(k) + ") " + std::to_string(good) + "/" +
                  std::to_string(size) + (orthogonal ? " orthogonal; " : " NOT orthogonal; ");
    }
    return {ok, detail};
}

Outcome pareto_sweep() {
    const int n = 16;
    const auto g = array::UlaGeometry::half_wavelength(n);
    const double theta = 20.0 * kPi / 180.0;
    RngStream seed_rng(2012, 0);
    const CVec seed = seed_rng.complex_normal_matrix(n, 1, 1.0).col(0);
    auto scenario = [&](double rho) {
        joint::JdScenario s;
        s.tx = g;
        s.rx = g;
        s.theta = theta;
        s.h_c = joint::channel_with_correlation(g, theta, rho, seed);
        s.energy = 1.0;
        s.sigma2_radar = 0.01;
        s.sigma2_comm = 0.1;
        return s;
    };
    const joint::JdGrid grid{721, 180};
    const auto r0 = joint::jd_rate_grid(scenario(0.2), 21);

    bool monotone = true;
    std::vector<std::vector<joint::ParetoPoint>> fronts;
    for (double rho : {0.2, 0.5, 0.9}) {
        fronts.push_back(joint::jd_pareto_sweep(scenario(rho), r0, grid));
        const auto& f = fronts.back();
        for (std::size_t i = 0; i < f.size(); ++i) {
            monotone = monotone && f[i].feasible;
            for (std::size_t j = 0; j < f.size(); ++j) {
                const bool dominates = f[j].crb <= f[i].crb && f[j].rate >= f[i].rate &&
                                       (f[j].crb < f[i].crb * (1.0 - 1e-12) || f[j].rate > f[i].rate * (1.0 + 1e-12));
                monotone = monotone && !dominates;
            }
            if (i > 0) monotone = monotone && f[i].crb >= f[i - 1].crb * (1.0 - 1e-12);
        }
    }
    bool ordered = true;
    for (std::size_t i = 0; i < r0.size(); ++i)
        ordered = ordered && fronts[2][i].crb <= fronts[1][i].crb * (1.0 + 1e-9) &&
                  fronts[1][i].crb <= fronts[0][i].crb * (1.0 + 1e-9);

    const auto s1 = scenario(1.0);
    const std::vector<double> top{joint::jd_max_rate(s1)};
    const auto at_top = joint::jd_pareto_sweep(s1, top, grid).front();
    const double radar_opt = joint::jd_crb(s1, s1.radar_direction().normalized() * std::sqrt(s1.energy));
    const double rho1_err = at_top.feasible ? std::abs(at_top.crb / radar_opt - 1.0) : 1.0;

    const auto s = scenario(0.5);
    const joint::FrontierLookup frontier(joint::jd_candidates(s, grid));
    RngStream rng(2012, 1);
    int beaten = 0;
    double worst = 0.0;
    for (int t = 0; t < 100000; ++t) {
        CVec w = rng.complex_normal_matrix(n, 1, 1.0).col(0);
        w *= std::sqrt(s.energy) / w.norm();
        const double bound = frontier.crb_at(joint::jd_rate(s, w));
        const double gain = 1.0 - joint::jd_crb(s, w) / bound;
        worst = std::max(worst, gain);
        if (gain > 1e-3) ++beaten;
    }
    return {monotone && ordered && rho1_err <= 1e-9 && beaten == 0,
            std::string("monotone ") + (monotone ? "yes" : "no") + ", ordered in rho " + (ordered ? "yes" : "no") +
                ", rho=1 CRB rel error " + fmt(rho1_err, 3) + ", random beamformers beating frontier " +
                std::to_string(beaten) + " (largest improvement " + fmt(worst, 3) + ")"};
}

Outcome channel_hardening() {
    const std::vector<int> nts{4, 16, 64, 256};
    const auto rows = array::hardening_stats(nts, 4, 1000, RngStream(2013, 0));
    bool ok = true;
    std::string detail = "var/E^2:";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        detail += " " + fmt(rows[i].hardening, 3);
        if (i > 0) ok = ok && rows[i].hardening < rows[i - 1].hardening && rows[i].favorable < rows[i - 1].favorable;
    }
    detail += "; ||HH^H/N_t - I||_F:";
    for (const auto& r : rows) detail += " " + fmt(r.favorable, 3);
    detail += "; var/E baseline:";
    for (const auto& r : rows) detail += " " + fmt(r.raw_ratio, 3);
    return {ok, detail};
}

Outcome zf_and_array_gain() {
    RngStream rng(2014, 0);
    double off = 0.0;
    for (int t = 0; t < 50; ++t) {
        const CMat h = rng.complex_normal_matrix(4, 8, 1.0);
        const CMat g = h * array::zf_precoder(h).f;
        for (Eigen::Index i = 0; i < 4; ++i)
            for (Eigen::Index k = 0; k < 4; ++k)
                if (i != k) off = std::max(off, std::abs(g(i, k)));
    }
    double gain_err = 0.0;
    for (int t = 0; t < 50; ++t) {
        const int nt = 2 + static_cast<int>(rng.index(31));
        const int nr = 2 + static_cast<int>(rng.index(31));
        const double phi = (rng.uniform() - 0.5) * kPi * 0.98;
        const double theta = (rng.uniform() - 0.5) * kPi * 0.98;
        const cplx alpha = rng.complex_normal(1.0);
        array::GeoChannelSpec spec;
        spec.tx = array::UlaGeometry::half_wavelength(nt);
        spec.rx = array::UlaGeometry::half_wavelength(nr);
        spec.paths.push_back({alpha, phi, theta});
        const CMat h = array::geo_channel(spec).h;
        const CVec f = array::steering(spec.tx, phi).conjugate();
        const CVec w = array::steering(spec.rx, theta);
        gain_err = std::max(gain_err, std::abs(array::array_gain(h, f, w) / (nt * nr * std::abs(alpha)) - 1.0));
    }
    return {off < 1e-10 && gain_err < 1e-12,
            "max off-diagonal |HF| " + fmt(off, 3) + ", array gain relative error " + fmt(gain_err, 3)};
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(ISAC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::map<std::string, std::string> csv_files(const fs::path& dir) {
    std::map<std::string, std::string> out;
    if (!fs::exists(dir)) return out;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".csv") out[e.path().filename().string()] = io::read_file(e.path().string());
    return out;
}

Outcome reproducibility() {
    const fs::path root = fs::temp_directory_path() / "isac_acceptance_repro";
    fs::remove_all(root);
    fs::create_directories(root);
    bool ok = true;
    std::string detail;
    for (const auto& kind : harness::kind_names()) {
        const fs::path cfg = root / (kind + ".json");
        io::write_file(cfg.string(), harness::json{{"kind", kind}, {"seed", 20240607}}.dump());
        const std::string base = "run --config " + cfg.string() + " --out ";
        const int a = run_cli(base + (root / kind / "a").string() + " --workers 1");
        const int b = run_cli(base + (root / kind / "b").string() + " --workers 1");
        const int c = run_cli(base + (root / kind / "c").string() + " --workers 4");
        const auto fa = csv_files(root / kind / "a");
        const bool same = a == 0 && b == 0 && c == 0 && !fa.empty() && fa == csv_files(root / kind / "b") &&
                          fa == csv_files(root / kind / "c");
        ok = ok && same;
        detail += kind + (same ? " ok; " : " DIFFERS; ");
    }
    return {ok, detail};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        std::string name;
        double budget_s;  // <= 0: no runtime requirement
        std::function<Outcome()> fn;
    };
    const std::vector<Criterion> criteria = {
        {1, "range resolution law", 1.0, range_resolution},
        {2, "Neyman-Pearson calibration", 10.0, np_calibration},
        {3, "CA-CFAR calibration", 10.0, cfar_calibration},
        {4, "OMP agrees with exhaustive l0 search", 30.0, omp_vs_l0},
        {5, "delay MLE attains the CRB", 60.0, mle_vs_crb},
        {6, "Fisher matrix vs finite differences", 0.0, fim_vs_finite_difference},
        {7, "I-MMSE identity", 1.0, immse_identity},
        {8, "OFDM diagonalization and round trip", 0.0, ofdm_diagonalization},
        {9, "BPSK BER vs Q function", 60.0, bpsk_ber},
        {10, "communication-centric OFDM sensing", 0.0, ccd_sensing},
        {11, "index modulation codebooks", 0.0, im_round_trip},
        {12, "joint design Pareto sweep", 300.0, pareto_sweep},
        {13, "channel hardening and favorable propagation", 60.0, channel_hardening},
        {14, "ZF nulling and array gain", 0.0, zf_and_array_gain},
        {15, "CLI reproducibility", 0.0, reproducibility},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::string timing = fmt(elapsed, 3) + " s";
        if (c.budget_s > 0.0) {
            timing += " of " + fmt(c.budget_s, 3) + " s";
            if (elapsed > c.budget_s) {
                o.pass = false;
                o.detail += " [runtime budget exceeded]";
            }
        }
        failures += !o.pass;
        std::printf("%s criterion %2d: %s (%s) %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), timing.c_str(),
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
