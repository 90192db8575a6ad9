#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "hcn/jsp.hpp"
#include "hcn/model.hpp"
#include "hcn/simkit.hpp"

namespace hcn {

inline constexpr const char* kToolVersion = "0.1.0";

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Flat key-value run configuration. Keys follow the romanized symbol names
/// (lambda_m, lambda_M0, c_M, R_M, lambda_S0, c_S1, R_S1, sigma, c_S, R_S,
/// alpha, eps, P_m_dbm, P_s_dbm, beta_m_db, beta_s_db) plus run controls.
/// Unknown keys are hard errors. Powers/thresholds are converted from
/// dBm/dB to linear units here and nowhere else.
class RunConfig {
  public:
    static RunConfig from_json(const nlohmann::json& j);
    static RunConfig from_file(const std::string& path);

    const nlohmann::json& raw() const { return raw_; }

    bool has(const std::string& key) const { return raw_.contains(key); }
    double number(const std::string& key) const;
    double number_or(const std::string& key, double fallback) const;
    std::uint64_t integer_or(const std::string& key, std::uint64_t fallback) const;
    std::string text_or(const std::string& key, const std::string& fallback) const;
    bool flag_or(const std::string& key, bool fallback) const;
    std::vector<double> grid(const std::string& key, std::vector<double> fallback) const;

    RadioParams radio() const;
    SbsVariant variant() const;
    /// Two-tier model for the configured `model` variant.
    HcnModel model() const;
    /// Model with the stated variant (used for sweeps across variants).
    HcnModel model_as(SbsVariant v) const;
    SchemeDescriptor scheme(Scheme kind) const;
    PgflOptions pgfl_options() const;

    void set(const std::string& key, const nlohmann::json& value);

  private:
    nlohmann::json raw_;
};

struct ManifestOutput {
    std::string path;
    std::string sha256;
};

/// Written alongside every CLI output; replaying it reproduces the outputs
/// byte-for-byte.
struct RunManifest {
    std::string command;
    nlohmann::json config;
    std::uint64_t seed = 0;
    std::string version = kToolVersion;
    double duration_seconds = 0.0;
    std::vector<ManifestOutput> outputs;

    nlohmann::json to_json() const;
    static RunManifest from_file(const std::string& path);
    void write(const std::string& path) const;
};

std::string sha256_hex(const void* data, std::size_t len);
std::string sha256_file(const std::string& path);

}  // namespace hcn
