#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "isac/core/types.hpp"
#include "isac/io/csv.hpp"

namespace isac::harness {

using json = nlohmann::json;

/// Raised for malformed or out-of-range scenario files; the message names the offending key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& what)
        : std::runtime_error(what), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

enum class ParamType { Int, Real, Bool, String, IntList, RealList, StringList };

inline std::string to_string(ParamType t) {
    switch (t) {
        case ParamType::Int: return "int";
        case ParamType::Real: return "real";
        case ParamType::Bool: return "bool";
        case ParamType::String: return "string";
        case ParamType::IntList: return "int[]";
        case ParamType::RealList: return "real[]";
        case ParamType::StringList: return "string[]";
    }
    return "?";
}

struct ParamSpec {
    std::string name;
    ParamType type;
    json default_value;
    std::optional<double> min;  // applies to every element of numeric lists
    std::optional<double> max;
    std::vector<std::string> choices;  // for String / StringList
    std::string description;
    bool exclusive_min = false;
    bool non_empty = false;  // lists only
};

struct KindSchema {
    std::string kind;
    std::string summary;
    std::vector<ParamSpec> params;

    const ParamSpec* find(const std::string& name) const {
        for (const auto& p : params)
            if (p.name == name) return &p;
        return nullptr;
    }
};

// clang-format off
inline const std::vector<KindSchema>& schemas() {
    static const std::vector<KindSchema> all = {
        {"radar-detect", "Neyman-Pearson and CA-CFAR detection Monte Carlo on matched-filter outputs",
         {
             {"pulse_len", ParamType::Int, 64, 1, 4096, {}, "reference pulse length in samples"},
             {"sigma2", ParamType::Real, 1.0, 0.0, {}, {}, "complex noise variance per sample", true},
             {"design_pfa_list", ParamType::RealList, json::array({0.1, 0.01, 0.001}), 0.0, 1.0, {}, "design false-alarm probabilities", true, true},
             {"snr_db_list", ParamType::RealList, json::array({0.0, 5.0, 10.0, 13.0, 15.0}), -50.0, 60.0, {}, "integrated SNR |a|^2 ||s||^2 / sigma2 for H1 cells, dB"},
             {"n_cells", ParamType::Int, 100000, 100, 100000000, {}, "noise-only and target cells per design point"},
             {"cfar_train", ParamType::Int, 16, 2, 1024, {}, "CA-CFAR training cells (total, even)"},
             {"cfar_guard", ParamType::Int, 2, 0, 256, {}, "CA-CFAR guard cells per side"},
             {"cfar_cells", ParamType::Int, 100000, 100, 100000000, {}, "homogeneous cells for CFAR calibration"},
         }},
        {"range-doppler", "LFM pulse train echo, matched filter and slow-time FFT",
         {
             {"bandwidth", ParamType::Real, 1e6, 0.0, {}, {}, "chirp bandwidth B_r, Hz", true},
             {"pulse_width", ParamType::Real, 20e-6, 0.0, {}, {}, "pulse width tau, s", true},
             {"sample_rate", ParamType::Real, 4e6, 0.0, {}, {}, "complex sample rate, Hz", true},
             {"pri", ParamType::Real, 100e-6, 0.0, {}, {}, "pulse repetition interval, s", true},
             {"n_pulses", ParamType::Int, 32, 2, 4096, {}, "pulses per CPI"},
             {"sigma2", ParamType::Real, 0.1, 0.0, {}, {}, "complex noise variance per sample"},
             {"target_range_bins", ParamType::IntList, json::array({40, 120}), 0, {}, {}, "target delays in samples"},
             {"target_doppler_bins", ParamType::IntList, json::array({3, 27}), 0, {}, {}, "target Doppler bins (nu = k / (N T_PRI))"},
             {"target_amplitudes", ParamType::RealList, json::array({1.0, 0.5}), 0.0, {}, {}, "target reflectivity magnitudes"},
             {"n_peaks", ParamType::Int, 2, 1, 1000, {}, "strongest local maxima reported"},
         }},
        {"sfw-omp", "Random stepped-frequency pulses and OMP range-profile recovery",
         {
             {"max_index", ParamType::Int, 63, 1, 4095, {}, "largest carrier index D"},
             {"n_pulses", ParamType::Int, 32, 1, 4096, {}, "pulses per burst"},
             {"keep_fraction", ParamType::Real, 0.75, 0.0, 1.0, {}, "fraction of [0, D] eligible for selection", true},
             {"sparsity", ParamType::Int, 3, 1, 64, {}, "number of point scatterers"},
             {"max_sparsity", ParamType::Int, 6, 1, 256, {}, "OMP support cap"},
             {"sigma2", ParamType::Real, 1e-3, 0.0, {}, {}, "complex noise variance per pulse"},
             {"n_trials", ParamType::Int, 100, 1, 1000000, {}, "Monte Carlo bursts"},
             {"mode", ParamType::String, "random", {}, {}, {"random", "linear"}, "carrier plan"},
         }},
        {"ofdm-ber", "Bit error rate of OFDM over AWGN, optionally through a 2-tap channel with LS estimation",
         {
             {"constellations", ParamType::StringList, json::array({"bpsk", "qpsk", "8psk", "16qam", "ask4"}), {}, {}, {"bpsk", "qpsk", "8psk", "16qam", "ask4"}, "constellations to sweep", false, true},
             {"snr_db_list", ParamType::RealList, json::array({0.0, 2.0, 4.0, 6.0, 8.0}), -50.0, 60.0, {}, "Es/N0 per subcarrier, dB", false, true},
             {"n_subcarriers", ParamType::Int, 64, 1, 65536, {}, "N_c"},
             {"cp_length", ParamType::Int, 16, 0, 65536, {}, "cyclic prefix, samples"},
             {"bits_per_point", ParamType::Int, 100000, 1, 100000000, {}, "minimum payload bits per (constellation, SNR)"},
             {"multipath", ParamType::Bool, false, {}, {}, {}, "2-tap channel [1, 0.5] with pilot-based LS equalization"},
         }},
        {"ofdm-isac", "Communication-centric OFDM sensing via element-wise division and 2-D FFT",
         {
             {"n_subcarriers", ParamType::Int, 64, 2, 65536, {}, "N_c"},
             {"n_symbols", ParamType::Int, 32, 2, 65536, {}, "N_s"},
             {"cp_length", ParamType::Int, 16, 0, 65536, {}, "cyclic prefix, samples"},
             {"subcarrier_spacing", ParamType::Real, 120e3, 0.0, {}, {}, "delta f, Hz", true},
             {"constellation", ParamType::String, "qpsk", {}, {}, {"bpsk", "qpsk", "8psk", "16qam", "ask4"}, "data constellation"},
             {"snr_db", ParamType::Real, 20.0, -50.0, 100.0, {}, "per resource element SNR |alpha|^2 / sigma2, dB"},
             {"n_trials", ParamType::Int, 200, 1, 1000000, {}, "random bin-centered targets"},
             {"max_delay_bin", ParamType::Int, 15, 0, 65536, {}, "targets drawn with delay bin in [0, max]"},
         }},
        {"im-isac", "Carrier-agile index modulation symbol error rate",
         {
             {"n_carriers", ParamType::Int, 4, 2, 30, {}, "carrier set size M"},
             {"n_selected", ParamType::Int, 2, 1, 20, {}, "carriers per PRI K (= antennas)"},
             {"snr_db_list", ParamType::RealList, json::array({-5.0, 0.0, 5.0, 10.0}), -50.0, 60.0, {}, "per-sample SNR, dB", false, true},
             {"n_trials", ParamType::Int, 10000, 1, 100000000, {}, "messages per SNR"},
         }},
        {"pareto", "Joint-design CRB-rate frontier for one user and one target",
         {
             {"n_tx", ParamType::Int, 16, 2, 1024, {}, "transmit ULA size (monostatic receive array is identical)"},
             {"theta_deg", ParamType::Real, 20.0, -90.0, 90.0, {}, "target angle, degrees"},
             {"rho_list", ParamType::RealList, json::array({0.2, 0.5, 0.9}), 0.0, 1.0, {}, "subspace correlations", false, true},
             {"energy", ParamType::Real, 1.0, 0.0, {}, {}, "transmit energy E_T", true},
             {"sigma2_radar", ParamType::Real, 0.01, 0.0, {}, {}, "radar noise variance", true},
             {"sigma2_comm", ParamType::Real, 0.1, 0.0, {}, {}, "user noise variance", true},
             {"n_r0", ParamType::Int, 21, 2, 100000, {}, "evenly spaced R_0 values up to the MRT rate (ignored when r0_list given)"},
             {"r0_list", ParamType::RealList, json::array(), 0.0, {}, {}, "explicit rate thresholds, bits per use"},
             {"n_angles", ParamType::Int, 721, 2, 100000, {}, "rotation grid size"},
             {"n_phases", ParamType::Int, 180, 1, 100000, {}, "relative phase grid size"},
         }},
        {"hardening", "Channel hardening and favorable propagation of i.i.d. Rayleigh channels",
         {
             {"n_t_list", ParamType::IntList, json::array({4, 16, 64, 256}), 1, 65536, {}, "transmit array sizes", false, true},
             {"n_r", ParamType::Int, 4, 1, 1024, {}, "users / receive antennas"},
             {"n_trials", ParamType::Int, 500, 100, 10000000, {}, "channel draws per N_t"},
         }},
        {"immse", "I-MMSE identity for the real Gaussian channel",
         {
             {"snr_min", ParamType::Real, 0.0, 0.0, {}, {}, "first grid point"},
             {"snr_max", ParamType::Real, 4.0, 0.0, {}, {}, "last grid point"},
             {"snr_step", ParamType::Real, 0.01, 0.0, {}, {}, "grid step", true},
             {"bpsk_snr_list", ParamType::RealList, json::array({0.0, 0.5, 1.0, 2.0, 4.0}), 0.0, {}, {}, "SNRs for the BPSK-input MMSE comparison"},
             {"bpsk_samples", ParamType::Int, 100000, 0, 100000000, {}, "Monte Carlo samples per BPSK point (0 disables)"},
         }},
    };
    return all;
}
// clang-format on

inline const KindSchema& schema_for(const std::string& kind) {
    for (const auto& s : schemas())
        if (s.kind == kind) return s;
    throw ConfigError("kind", "unknown experiment kind '" + kind + "'");
}

inline std::vector<std::string> kind_names() {
    std::vector<std::string> out;
    for (const auto& s : schemas()) out.push_back(s.kind);
    return out;
}

struct Scenario {
    std::string kind;
    json params;  // complete after validation, keys sorted
    std::uint64_t seed = 1;
    std::string output;

    double real(const std::string& k) const { return params.at(k).get<double>(); }
    long long integer(const std::string& k) const { return params.at(k).get<long long>(); }
    bool flag(const std::string& k) const { return params.at(k).get<bool>(); }
    std::string text(const std::string& k) const { return params.at(k).get<std::string>(); }
    std::vector<double> reals(const std::string& k) const { return params.at(k).get<std::vector<double>>(); }
    std::vector<int> integers(const std::string& k) const { return params.at(k).get<std::vector<int>>(); }
    std::vector<std::string> texts(const std::string& k) const { return params.at(k).get<std::vector<std::string>>(); }

    bool operator==(const Scenario& o) const {
        return kind == o.kind && params == o.params && seed == o.seed && output == o.output;
    }
};

namespace detail {

inline void check_range(const ParamSpec& p, double v, const std::string& key) {
    if (p.min) {
        const bool bad = p.exclusive_min ? !(v > *p.min) : !(v >= *p.min);
        if (bad)
            throw ConfigError(key, "parameter '" + key + "' = " + io::format_number(v) + " must be " +
                                       (p.exclusive_min ? "> " : ">= ") + io::format_number(*p.min));
    }
    if (p.max && !(v <= *p.max))
        throw ConfigError(key, "parameter '" + key + "' = " + io::format_number(v) + " must be <= " +
                                   io::format_number(*p.max));
}

inline void check_choice(const ParamSpec& p, const std::string& v, const std::string& key) {
    if (p.choices.empty()) return;
    if (std::find(p.choices.begin(), p.choices.end(), v) == p.choices.end())
        throw ConfigError(key, "parameter '" + key + "' has unsupported value '" + v + "'");
}

inline bool is_integral(const json& v) {
    if (v.is_number_integer()) return true;
    if (v.is_number_float()) {
        const double d = v.get<double>();
        return std::isfinite(d) && d == std::floor(d);
    }
    return false;
}

inline json coerce(const ParamSpec& p, const json& v) {
    const std::string& key = p.name;
    auto type_error = [&] {
        throw ConfigError(key, "parameter '" + key + "' must be of type " + to_string(p.type));
    };
    switch (p.type) {
        case ParamType::Int: {
            if (!is_integral(v)) type_error();
            const auto i = static_cast<long long>(v.get<double>());
            check_range(p, static_cast<double>(i), key);
            return i;
        }
        case ParamType::Real: {
            if (!v.is_number()) type_error();
            const double d = v.get<double>();
            if (!std::isfinite(d)) type_error();
            check_range(p, d, key);
            return d;
        }
        case ParamType::Bool:
            if (!v.is_boolean()) type_error();
            return v;
        case ParamType::String:
            if (!v.is_string()) type_error();
            check_choice(p, v.get<std::string>(), key);
            return v;
        case ParamType::IntList:
        case ParamType::RealList:
        case ParamType::StringList: {
            if (!v.is_array()) type_error();
            if (p.non_empty && v.empty()) throw ConfigError(key, "parameter '" + key + "' must not be empty");
            json out = json::array();
            for (const auto& e : v) {
                if (p.type == ParamType::IntList) {
                    if (!is_integral(e)) type_error();
                    const auto i = static_cast<long long>(e.get<double>());
                    check_range(p, static_cast<double>(i), key);
                    out.push_back(i);
                } else if (p.type == ParamType::RealList) {
                    if (!e.is_number() || !std::isfinite(e.get<double>())) type_error();
                    check_range(p, e.get<double>(), key);
                    out.push_back(e.get<double>());
                } else {
                    if (!e.is_string()) type_error();
                    check_choice(p, e.get<std::string>(), key);
                    out.push_back(e);
                }
            }
            return out;
        }
    }
    return v;
}

}  // namespace detail

/**
 * Validates a scenario document:
 *
 *   { "kind": "...", "seed": 7, "output": "dir", "params": { ... } }
 *
 * Only "kind" is required. Unknown keys at either level are rejected,
 * parameters are type- and range-checked and missing ones take defaults.
 */
inline Scenario scenario_from_json(const json& doc) {
    if (!doc.is_object()) throw ConfigError("", "scenario must be a JSON object");
    for (const auto& [k, v] : doc.items())
        if (k != "kind" && k != "seed" && k != "output" && k != "params")
            throw ConfigError(k, "unknown top-level key '" + k + "'");
    if (!doc.contains("kind") || !doc["kind"].is_string()) throw ConfigError("kind", "missing string key 'kind'");

    Scenario s;
    s.kind = doc["kind"].get<std::string>();
    const KindSchema& schema = schema_for(s.kind);

    if (doc.contains("seed")) {
        const json& seed = doc["seed"];
        if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0))
            throw ConfigError("seed", "'seed' must be a non-negative integer");
        s.seed = seed.get<std::uint64_t>();
    }
    if (doc.contains("output")) {
        if (!doc["output"].is_string()) throw ConfigError("output", "'output' must be a string");
        s.output = doc["output"].get<std::string>();
    }

    json given = doc.contains("params") ? doc["params"] : json::object();
    if (!given.is_object()) throw ConfigError("params", "'params' must be an object");
    for (const auto& [k, v] : given.items())
        if (schema.find(k) == nullptr) throw ConfigError(k, "unknown parameter '" + k + "' for kind " + s.kind);

    s.params = json::object();
    for (const auto& p : schema.params) s.params[p.name] = detail::coerce(p, given.contains(p.name) ? given[p.name] : p.default_value);
    return s;
}

inline Scenario parse_scenario(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("parse error: ") + e.what());
    }
    return scenario_from_json(doc);
}

inline Scenario load_scenario(const std::string& path) {
    std::string text;
    try {
        text = io::read_file(path);
    } catch (const InvalidArgument& e) {
        throw ConfigError("", e.what());
    }
    return parse_scenario(text);
}

inline json scenario_to_json(const Scenario& s) {
    json doc = {{"kind", s.kind}, {"seed", s.seed}, {"params", s.params}};
    if (!s.output.empty()) doc["output"] = s.output;
    return doc;
}

inline std::string serialize_scenario(const Scenario& s) { return scenario_to_json(s).dump(2) + "\n"; }

/// Human-readable schema listing for every kind.
inline std::string describe_kinds() {
    std::string out;
    for (const auto& k : schemas()) {
        out += k.kind + ": " + k.summary + "\n";
        for (const auto& p : k.params) {
            out += "  " + p.name + " (" + to_string(p.type) + ", default " + p.default_value.dump() + ")";
            if (p.min || p.max) {
                out += " range ";
                out += p.min ? (p.exclusive_min ? "(" : "[") + io::format_number(*p.min) : "(-inf";
                out += ", ";
                out += p.max ? io::format_number(*p.max) + "]" : "inf)";
            }
            if (!p.choices.empty()) {
                out += " one of {";
                for (std::size_t i = 0; i < p.choices.size(); ++i) out += (i ? ", " : "") + p.choices[i];
                out += "}";
            }
            out += "\n      " + p.description + "\n";
        }
    }
    return out;
}

}  // namespace isac::harness
