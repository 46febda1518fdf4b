#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "isac/harness/scenario.hpp"
#include "isac/io/csv.hpp"
#include "isac/isac.hpp"

namespace isac::harness {

/// Output file name -> content. std::map keeps the manifest order stable.
using Artifacts = std::map<std::string, std::string>;

struct RunOptions {
    std::size_t workers = 1;
};

namespace detail {

// Stream ids are (experiment point, trial) packed so no two trials share a stream.
inline std::uint64_t stream_id(std::uint64_t point, std::uint64_t trial) { return (point << 32) | trial; }

inline std::size_t as_size(long long v) { return static_cast<std::size_t>(v); }

}  // namespace detail

// ---------------------------------------------------------------------------

inline Artifacts run_radar_detect(const Scenario& s, const RunOptions& opt) {
    const int len = static_cast<int>(s.integer("pulse_len"));
    const double sigma2 = s.real("sigma2");
    const std::size_t n_cells = detail::as_size(s.integer("n_cells"));
    constexpr std::size_t chunk = 1000;
    const std::size_t n_chunks = (n_cells + chunk - 1) / chunk;

    waveform::PulseTrainSpec spec;
    spec.pulse_width = len;
    spec.pri = len;
    spec.bandwidth = 0.25;
    const CVec ref = waveform::gen_lfm(spec, 1.0).samples();
    const double energy = ref.squaredNorm();

    // |ref^H (a ref + z)|^2 for every cell of a chunk
    auto cell_stats = [&](std::uint64_t point, double amplitude, std::size_t c) {
        RngStream rng(s.seed, detail::stream_id(point, c));
        const std::size_t count = std::min(chunk, n_cells - c * chunk);
        std::vector<double> out(count);
        for (std::size_t i = 0; i < count; ++i) {
            CVec x = amplitude * ref;
            x = add_awgn(x, sigma2, rng);
            out[i] = std::norm(ref.dot(x));
        }
        return out;
    };
    auto gather = [&](std::uint64_t point, double amplitude) {
        auto parts = parallel_map(n_chunks, opt.workers, [&](std::size_t c) { return cell_stats(point, amplitude, c); });
        std::vector<double> all;
        all.reserve(n_cells);
        for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
        return all;
    };

    io::CsvTable t({"detector", "design_pfa", "snr_db", "cells", "threshold", "false_alarms", "pfa", "detections", "pd"});
    const auto noise = gather(1, 0.0);
    std::uint64_t point = 2;
    for (double pfa : s.reals("design_pfa_list")) {
        const auto h0 = radar::np_detect(noise, sigma2, pfa, energy);
        t.add_row({std::string("np"), pfa, std::nan(""), static_cast<long long>(n_cells), h0.threshold,
                   static_cast<long long>(h0.false_alarms), h0.empirical_pfa, 0LL, std::nan("")});
        for (double snr_db : s.reals("snr_db_list")) {
            const double amp = std::sqrt(db_to_linear(snr_db) * sigma2 / energy);
            const auto target = gather(point++, amp);
            const RMat stats = radar::detail::as_column(target);
            const BMat truth = BMat::Constant(stats.rows(), 1, true);
            const auto h1 = radar::np_detect(stats, sigma2, pfa, energy, &truth);
            t.add_row({std::string("np"), pfa, snr_db, static_cast<long long>(n_cells), h1.threshold, 0LL, std::nan(""),
                       static_cast<long long>(h1.detections), h1.empirical_pd});
        }
    }

    const std::size_t cfar_cells = detail::as_size(s.integer("cfar_cells"));
    const int train = static_cast<int>(s.integer("cfar_train"));
    const int guard = static_cast<int>(s.integer("cfar_guard"));
    RngStream rng(s.seed, detail::stream_id(point++, 0));
    std::vector<double> homogeneous(cfar_cells);
    for (auto& v : homogeneous) v = std::norm(rng.complex_normal(sigma2));
    for (double pfa : s.reals("design_pfa_list")) {
        const auto r = radar::ca_cfar(homogeneous, train, guard, pfa);
        t.add_row({std::string("ca-cfar"), pfa, std::nan(""), static_cast<long long>(r.h0_cells), r.threshold,
                   static_cast<long long>(r.false_alarms), r.empirical_pfa, 0LL, std::nan("")});
    }
    return {{"detection.csv", t.render()}};
}

// ---------------------------------------------------------------------------

inline Artifacts run_range_doppler(const Scenario& s, const RunOptions&) {
    waveform::PulseTrainSpec spec;
    spec.bandwidth = s.real("bandwidth");
    spec.pulse_width = s.real("pulse_width");
    spec.pri = s.real("pri");
    spec.num_pulses = static_cast<int>(s.integer("n_pulses"));
    const double fs = s.real("sample_rate");
    const auto tx = waveform::gen_lfm(spec, fs);

    const auto ranges = s.integers("target_range_bins");
    const auto dopplers = s.integers("target_doppler_bins");
    const auto amps = s.reals("target_amplitudes");
    if (ranges.size() != dopplers.size() || ranges.size() != amps.size())
        throw ConfigError("target_range_bins", "target_range_bins, target_doppler_bins and target_amplitudes must have equal length");

    RngStream rng(s.seed, 0);
    radar::TargetScene scene;
    for (std::size_t i = 0; i < ranges.size(); ++i) {
        radar::Scatterer sc;
        sc.delay = ranges[i] / fs;
        sc.doppler = dopplers[i] / (spec.num_pulses * spec.pri);
        sc.reflectivity = std::polar(amps[i], 2.0 * kPi * rng.uniform());
        scene.scatterers.push_back(sc);
    }
    const CMat echo = radar::synth_echo(tx, scene, spec.pri, spec.num_pulses, s.real("sigma2"), rng);
    const RMat map = radar::range_doppler_map(echo, tx.samples());
    const auto peaks = radar::strongest_peaks(map, detail::as_size(s.integer("n_peaks")));

    io::CsvTable det({"rank", "range_bin", "doppler_bin", "power"});
    for (std::size_t i = 0; i < peaks.size(); ++i)
        det.add_row({static_cast<long long>(i), static_cast<long long>(peaks[i].row), static_cast<long long>(peaks[i].col),
                     peaks[i].value});
    return {{"rd_map.csv", io::render_matrix(map)}, {"detections.csv", det.render()},
            {"waveform.csv", io::render_waveform(tx)}};
}

// ---------------------------------------------------------------------------

/// Stepped-frequency measurement matrix: row n is the response of carrier d_n to range bins 0..D.
inline CMat sfw_dictionary(const waveform::SfwPlan& plan) {
    const int bins = plan.max_index + 1;
    CMat s(static_cast<Eigen::Index>(plan.indices.size()), bins);
    for (std::size_t n = 0; n < plan.indices.size(); ++n)
        for (int k = 0; k < bins; ++k)
            s(static_cast<Eigen::Index>(n), k) = std::polar(1.0, -2.0 * kPi * plan.indices[n] * k / bins);
    return s;
}

inline Artifacts run_sfw_omp(const Scenario& s, const RunOptions& opt) {
    const int d = static_cast<int>(s.integer("max_index"));
    const int n_pulses = static_cast<int>(s.integer("n_pulses"));
    const int k = static_cast<int>(s.integer("sparsity"));
    const int cap = static_cast<int>(s.integer("max_sparsity"));
    const double sigma2 = s.real("sigma2");
    const double keep = s.real("keep_fraction");
    const auto mode = s.text("mode") == "linear" ? waveform::SfwMode::Linear : waveform::SfwMode::Random;
    if (k > d + 1) throw ConfigError("sparsity", "parameter 'sparsity' exceeds the number of range bins");

    struct Row {
        int recovered = 0;
        bool support_match = false;
        double residual = 0.0;
        bool converged = false;
        double coef_error = 0.0;
        bool span_flag = false;
    };
    auto trial = [&](std::size_t t) {
        RngStream rng(s.seed, detail::stream_id(0, t));
        const auto plan = waveform::gen_sfw_plan(mode, d, n_pulses, keep, rng);
        const CMat dict = sfw_dictionary(plan);
        std::vector<int> bins(static_cast<std::size_t>(d + 1));
        std::iota(bins.begin(), bins.end(), 0);
        rng.shuffle(bins);
        CVec h = CVec::Zero(d + 1);
        for (int i = 0; i < k; ++i) h[bins[static_cast<std::size_t>(i)]] = std::polar(1.0, 2.0 * kPi * rng.uniform());
        const CVec y = add_awgn(CVec(dict * h), sigma2, rng);
        const double zeta = sigma2 > 0.0 ? radar::omp_noise_threshold(sigma2, y.size()) : 1e-9 * y.norm();
        const auto res = radar::omp_recover(y, dict, cap, zeta);
        Row r;
        r.recovered = static_cast<int>(res.support.size());
        std::vector<Eigen::Index> truth(bins.begin(), bins.begin() + k);
        std::vector<Eigen::Index> found = res.support;
        std::sort(truth.begin(), truth.end());
        std::sort(found.begin(), found.end());
        r.support_match = truth == found;
        r.residual = res.residual_norm;
        r.converged = res.converged;
        r.coef_error = (res.coefficients - h).norm();
        r.span_flag = plan.span_exceeds_bandwidth;
        return r;
    };
    const auto rows = parallel_map(detail::as_size(s.integer("n_trials")), opt.workers, trial);
    io::CsvTable t({"trial", "n_true", "n_recovered", "support_match", "residual_norm", "converged", "coefficient_error"});
    for (std::size_t i = 0; i < rows.size(); ++i)
        t.add_row({static_cast<long long>(i), static_cast<long long>(k), static_cast<long long>(rows[i].recovered),
                   static_cast<long long>(rows[i].support_match), rows[i].residual,
                   static_cast<long long>(rows[i].converged), rows[i].coef_error});
    return {{"sfw_omp.csv", t.render()}};
}

// ---------------------------------------------------------------------------

inline Artifacts run_ofdm_ber(const Scenario& s, const RunOptions& opt) {
    comms::OfdmConfig cfg;
    cfg.n_subcarriers = static_cast<int>(s.integer("n_subcarriers"));
    cfg.cp_length = static_cast<int>(s.integer("cp_length"));
    cfg.n_symbols = 8;
    const bool multipath = s.flag("multipath");
    const CVec taps = multipath ? CVec{{cplx(1.0, 0.0), cplx(0.5, 0.0)}} : CVec{{cplx(1.0, 0.0)}};
    cfg.channel_delay_spread = static_cast<int>(taps.size()) - 1;
    if (cfg.cp_length > cfg.n_subcarriers) throw ConfigError("cp_length", "parameter 'cp_length' must not exceed n_subcarriers");
    if (cfg.cp_length < cfg.channel_delay_spread)
        throw ConfigError("cp_length", "parameter 'cp_length' is shorter than the channel delay spread");
    // first OFDM symbol carries all-ones pilots when equalizing
    const int data_symbols = multipath ? cfg.n_symbols - 1 : cfg.n_symbols;

    struct Count {
        long long bits = 0;
        long long errors = 0;
    };
    io::CsvTable t({"snr_db", "constellation", "bits", "errors", "ber"});
    std::uint64_t point = 0;
    for (const auto& name : s.texts("constellations")) {
        const comms::Constellation c(comms::parse_modulation(name));
        const long long bits_per_frame = static_cast<long long>(c.bits_per_symbol()) * cfg.n_subcarriers * data_symbols;
        const auto frames = static_cast<std::size_t>((s.integer("bits_per_point") + bits_per_frame - 1) / bits_per_frame);
        for (double snr_db : s.reals("snr_db_list")) {
            const double sigma2 = 1.0 / db_to_linear(snr_db);
            const std::uint64_t pt = point++;
            auto frame = [&](std::size_t f) {
                RngStream rng(s.seed, detail::stream_id(pt, f));
                const auto bits = comms::random_bits(static_cast<std::size_t>(bits_per_frame), rng);
                const CVec syms = comms::modulate(bits, c);
                CMat grid(cfg.n_subcarriers, cfg.n_symbols);
                int col = 0;
                if (multipath) grid.col(col++).setOnes();
                for (int j = 0; j < data_symbols; ++j, ++col)
                    grid.col(col) = syms.segment(static_cast<Eigen::Index>(j) * cfg.n_subcarriers, cfg.n_subcarriers);
                const CVec tx = comms::ofdm_mod(grid, cfg).samples();
                const CVec rx = add_awgn(comms::apply_multipath(tx, taps), sigma2, rng);
                CMat y = comms::ofdm_demod(rx, cfg);
                CVec data(syms.size());
                if (multipath) {
                    const CVec h_est = comms::ls_channel_estimate(y.col(0), CVec::Ones(cfg.n_subcarriers));
                    for (int j = 0; j < data_symbols; ++j)
                        data.segment(static_cast<Eigen::Index>(j) * cfg.n_subcarriers, cfg.n_subcarriers) =
                            y.col(j + 1).cwiseQuotient(h_est);
                } else {
                    for (int j = 0; j < data_symbols; ++j)
                        data.segment(static_cast<Eigen::Index>(j) * cfg.n_subcarriers, cfg.n_subcarriers) = y.col(j);
                }
                const auto decided = comms::demap(data, c);
                Count cnt;
                cnt.bits = bits_per_frame;
                for (std::size_t i = 0; i < bits.size(); ++i) cnt.errors += bits[i] != decided[i];
                return cnt;
            };
            const auto counts = parallel_map(frames, opt.workers, frame);
            Count total;
            for (const auto& cnt : counts) {
                total.bits += cnt.bits;
                total.errors += cnt.errors;
            }
            t.add_row({snr_db, name, total.bits, total.errors, static_cast<double>(total.errors) / total.bits});
        }
    }
    return {{"ber.csv", t.render()}};
}

// ---------------------------------------------------------------------------

inline Artifacts run_ofdm_isac(const Scenario& s, const RunOptions& opt) {
    comms::OfdmConfig cfg;
    cfg.n_subcarriers = static_cast<int>(s.integer("n_subcarriers"));
    cfg.n_symbols = static_cast<int>(s.integer("n_symbols"));
    cfg.cp_length = static_cast<int>(s.integer("cp_length"));
    cfg.subcarrier_spacing = s.real("subcarrier_spacing");
    if (cfg.cp_length > cfg.n_subcarriers) throw ConfigError("cp_length", "parameter 'cp_length' must not exceed n_subcarriers");
    const int max_delay = static_cast<int>(s.integer("max_delay_bin"));
    if (max_delay > cfg.cp_length) throw ConfigError("max_delay_bin", "parameter 'max_delay_bin' must lie within the CP");
    const comms::Constellation c(comms::parse_modulation(s.text("constellation")));
    const double sigma2 = 1.0 / db_to_linear(s.real("snr_db"));
    const double tc = cfg.symbol_time();

    struct Row {
        int delay_bin = 0, doppler_bin = 0;
        Eigen::Index est_delay = 0, est_doppler = 0;
        double sidelobe = 0.0;
        RMat profile;
    };
    auto trial = [&](std::size_t t) {
        RngStream rng(s.seed, detail::stream_id(0, t));
        Row r;
        r.delay_bin = static_cast<int>(rng.index(static_cast<std::size_t>(max_delay) + 1));
        const int half = cfg.n_symbols / 2;
        r.doppler_bin = static_cast<int>(rng.index(static_cast<std::size_t>(cfg.n_symbols - 1))) - (half - 1);
        const CMat x = joint::random_symbols(c, cfg.n_subcarriers, cfg.n_symbols, rng);
        joint::CcdTarget target;
        target.delay = r.delay_bin / (cfg.n_subcarriers * cfg.subcarrier_spacing);
        target.doppler = r.doppler_bin / (cfg.n_symbols * tc);
        target.reflectivity = std::polar(1.0, 2.0 * kPi * rng.uniform());
        const auto res = joint::ccd_pipeline(x, cfg, target, sigma2, rng);
        r.est_delay = res.delay_bin;
        r.est_doppler = res.doppler_bin;
        r.sidelobe = joint::mean_sidelobe_db(res.profile.magnitude);
        if (t == 0) r.profile = res.profile.magnitude;
        return r;
    };
    const auto rows = parallel_map(detail::as_size(s.integer("n_trials")), opt.workers, trial);
    io::CsvTable t({"trial", "true_delay_bin", "true_doppler_bin", "est_delay_bin", "est_doppler_bin", "correct",
                    "mean_sidelobe_db"});
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const long long true_dop_bin = (r.doppler_bin + cfg.n_symbols) % cfg.n_symbols;
        const bool ok = r.est_delay == r.delay_bin && r.est_doppler == true_dop_bin;
        t.add_row({static_cast<long long>(i), static_cast<long long>(r.delay_bin), true_dop_bin,
                   static_cast<long long>(r.est_delay), static_cast<long long>(r.est_doppler), static_cast<long long>(ok),
                   r.sidelobe});
    }
    return {{"ccd_estimates.csv", t.render()}, {"dd_profile.csv", io::render_matrix(rows.front().profile)}};
}

// ---------------------------------------------------------------------------

inline Artifacts run_im_isac(const Scenario& s, const RunOptions& opt) {
    joint::ImCodebook cb;
    cb.n_carriers = static_cast<int>(s.integer("n_carriers"));
    cb.n_selected = static_cast<int>(s.integer("n_selected"));
    cb.n_antennas = cb.n_selected;
    if (cb.n_selected > cb.n_carriers) throw ConfigError("n_selected", "parameter 'n_selected' exceeds n_carriers");
    cb.validate();
    const std::uint64_t count = cb.message_count();

    struct Outcome {
        bool error = false;
        bool erasure = false;
    };
    io::CsvTable t({"snr_db", "message_count", "trials", "errors", "erasures", "ser"});
    std::uint64_t point = 0;
    const auto trials = detail::as_size(s.integer("n_trials"));
    for (double snr_db : s.reals("snr_db_list")) {
        const std::uint64_t pt = point++;
        auto trial = [&](std::size_t i) {
            RngStream rng(s.seed, detail::stream_id(pt, i));
            const std::uint64_t msg = rng.bits() % count;
            const auto word = joint::im_encode(msg, cb);
            const CMat rx = joint::im_channel(word, cb, db_to_linear(snr_db), rng);
            const auto dec = joint::im_decode(joint::im_filter_bank(rx, cb), cb);
            return Outcome{!dec.message || *dec.message != msg, dec.erasure};
        };
        const auto out = parallel_map(trials, opt.workers, trial);
        long long errors = 0, erasures = 0;
        for (const auto& o : out) {
            errors += o.error;
            erasures += o.erasure;
        }
        t.add_row({snr_db, static_cast<long long>(count), static_cast<long long>(trials), errors, erasures,
                   static_cast<double>(errors) / static_cast<double>(trials)});
    }
    return {{"im_ser.csv", t.render()}};
}

// ---------------------------------------------------------------------------

inline Artifacts run_pareto(const Scenario& s, const RunOptions& opt) {
    const int n_tx = static_cast<int>(s.integer("n_tx"));
    const auto geom = array::UlaGeometry::half_wavelength(n_tx);
    const double theta = s.real("theta_deg") * kPi / 180.0;
    RngStream rng(s.seed, 0);
    const CVec seed_dir = rng.complex_normal_matrix(n_tx, 1).col(0);
    const joint::JdGrid grid{static_cast<int>(s.integer("n_angles")), static_cast<int>(s.integer("n_phases"))};

    auto scenario_for = [&](double rho) {
        joint::JdScenario sc;
        sc.tx = geom;
        sc.rx = geom;
        sc.theta = theta;
        sc.h_c = joint::channel_with_correlation(geom, theta, rho, seed_dir);
        sc.energy = s.real("energy");
        sc.sigma2_radar = s.real("sigma2_radar");
        sc.sigma2_comm = s.real("sigma2_comm");
        return sc;
    };
    const auto rhos = s.reals("rho_list");
    std::vector<double> r0 = s.reals("r0_list");
    // ||h_c|| is the same for every rho, so one R_0 grid serves all curves
    if (r0.empty()) r0 = joint::jd_rate_grid(scenario_for(rhos.front()), static_cast<int>(s.integer("n_r0")));

    const auto sweeps = parallel_map(rhos.size(), opt.workers,
                                     [&](std::size_t i) { return joint::jd_pareto_sweep(scenario_for(rhos[i]), r0, grid); });
    io::CsvTable t({"rho", "r0", "rate_bits", "crb_rad2", "beamformer_angle_index", "phase_index"});
    for (std::size_t i = 0; i < rhos.size(); ++i) {
        for (const auto& p : sweeps[i]) {
            if (p.feasible)
                t.add_row({rhos[i], p.r0, p.rate, p.crb, static_cast<long long>(p.angle_index),
                           static_cast<long long>(p.phase_index)});
            else
                t.add_row({rhos[i], p.r0, std::string("infeasible"), std::string("infeasible"), -1LL, -1LL});
        }
    }
    return {{"pareto.csv", t.render()}};
}

// ---------------------------------------------------------------------------

inline Artifacts run_hardening(const Scenario& s, const RunOptions& opt) {
    const auto nts = s.integers("n_t_list");
    const int n_r = static_cast<int>(s.integer("n_r"));
    const int trials = static_cast<int>(s.integer("n_trials"));
    const RngStream base(s.seed, 0);
    const auto rows = parallel_map(nts.size(), opt.workers, [&](std::size_t i) {
        RngStream sub = base.substream(detail::stream_id(1, i));
        return array::hardening_point(nts[i], n_r, trials, sub);
    });
    io::CsvTable t({"n_t", "n_r", "trials", "hardening_ratio", "raw_ratio", "favorable_propagation"});
    for (const auto& r : rows)
        t.add_row({static_cast<long long>(r.n_t), static_cast<long long>(r.n_r), static_cast<long long>(r.trials),
                   r.hardening, r.raw_ratio, r.favorable});
    return {{"hardening.csv", t.render()}};
}

// ---------------------------------------------------------------------------

inline Artifacts run_immse(const Scenario& s, const RunOptions& opt) {
    const double lo = s.real("snr_min");
    const double hi = s.real("snr_max");
    const double step = s.real("snr_step");
    if (!(hi > lo)) throw ConfigError("snr_max", "parameter 'snr_max' must exceed snr_min");
    std::vector<double> grid;
    const auto n = static_cast<long long>(std::llround((hi - lo) / step));
    for (long long i = 0; i <= n; ++i) grid.push_back(lo + static_cast<double>(i) * step);
    if (grid.size() < 3) throw ConfigError("snr_step", "parameter 'snr_step' leaves fewer than three grid points");

    io::CsvTable t({"snr", "I", "MMSE", "dI_dsnr", "residual"});
    for (const auto& r : comms::immse_check(grid))
        t.add_row({r.snr, r.mutual_information, r.mmse, r.derivative, r.residual});
    Artifacts out{{"immse.csv", t.render()}};

    const auto samples = detail::as_size(s.integer("bpsk_samples"));
    const auto snrs = s.reals("bpsk_snr_list");
    if (samples > 0 && !snrs.empty()) {
        const auto mmse = parallel_map(snrs.size(), opt.workers, [&](std::size_t i) {
            RngStream rng(s.seed, detail::stream_id(0, i));
            return comms::bpsk_mmse_monte_carlo(snrs[i], samples, rng);
        });
        io::CsvTable b({"snr", "mmse_gaussian", "mmse_bpsk", "samples"});
        for (std::size_t i = 0; i < snrs.size(); ++i)
            b.add_row({snrs[i], 1.0 / (1.0 + snrs[i]), mmse[i], static_cast<long long>(samples)});
        out["bpsk_mmse.csv"] = b.render();
    }
    return out;
}

// ---------------------------------------------------------------------------

inline Artifacts run_experiment(const Scenario& s, const RunOptions& opt = {}) {
    if (s.kind == "radar-detect") return run_radar_detect(s, opt);
    if (s.kind == "range-doppler") return run_range_doppler(s, opt);
    if (s.kind == "sfw-omp") return run_sfw_omp(s, opt);
    if (s.kind == "ofdm-ber") return run_ofdm_ber(s, opt);
    if (s.kind == "ofdm-isac") return run_ofdm_isac(s, opt);
    if (s.kind == "im-isac") return run_im_isac(s, opt);
    if (s.kind == "pareto") return run_pareto(s, opt);
    if (s.kind == "hardening") return run_hardening(s, opt);
    if (s.kind == "immse") return run_immse(s, opt);
    throw ConfigError("kind", "unknown experiment kind '" + s.kind + "'");
}

}  // namespace isac::harness
