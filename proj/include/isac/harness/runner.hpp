#pragma once

#include <cstdlib>
#include <filesystem>
#include <string>

#include <openssl/evp.h>

#include "isac/harness/experiments.hpp"
#include "isac/harness/scenario.hpp"
#include "isac/io/csv.hpp"

namespace isac::harness {

inline constexpr const char* kToolkitName = "isac-toolkit";
inline constexpr const char* kToolkitVersion = "1.0.0";
inline constexpr const char* kOutDirEnv = "ISAC_OUT_DIR";

inline std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256: digest failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

/// Manifest text. Carries no timestamps or worker counts so it is as reproducible as the CSVs.
inline std::string render_manifest(const Scenario& s, const Artifacts& files) {
    json doc;
    doc["toolkit"] = kToolkitName;
    doc["version"] = kToolkitVersion;
    doc["kind"] = s.kind;
    doc["seed"] = s.seed;
    doc["params"] = s.params;
    json list = json::array();
    for (const auto& [name, content] : files)
        list.push_back({{"name", name}, {"bytes", content.size()}, {"sha256", sha256_hex(content)}});
    doc["files"] = list;
    return doc.dump(2) + "\n";
}

/// --out beats the environment variable, which beats the scenario's output field.
inline std::string resolve_output_dir(const Scenario& s, const std::string& cli_out) {
    if (!cli_out.empty()) return cli_out;
    if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') return env;
    if (!s.output.empty()) return s.output;
    return "isac_out/" + s.kind;
}

struct RunResult {
    std::string out_dir;
    Artifacts files;  // includes manifest.json
};

inline RunResult run_and_write(const Scenario& s, const std::string& out_dir, const RunOptions& opt = {}) {
    RunResult r;
    r.out_dir = out_dir;
    r.files = run_experiment(s, opt);
    const std::string manifest = render_manifest(s, r.files);
    std::filesystem::create_directories(out_dir);
    for (const auto& [name, content] : r.files) io::write_file((std::filesystem::path(out_dir) / name).string(), content);
    io::write_file((std::filesystem::path(out_dir) / "manifest.json").string(), manifest);
    r.files["manifest.json"] = manifest;
    return r;
}

/// Machine-readable failure record.
inline std::string error_record(const std::string& type, const std::string& message, const std::string& key = {},
                                const std::string& kind = {}) {
    json doc = {{"status", "error"}, {"type", type}, {"message", message}};
    if (!key.empty()) doc["key"] = key;
    if (!kind.empty()) doc["kind"] = kind;
    return doc.dump() + "\n";
}

}  // namespace isac::harness
