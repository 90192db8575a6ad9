#include "hcn/runconfig.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <set>

namespace hcn {

namespace {

enum class KeyKind { Number, Integer, Text, Flag, Grid };

const std::set<std::string>& known_keys(KeyKind kind) {
    static const std::set<std::string> numbers = {
        "lambda_m", "lambda_P",  "lambda_M0", "c_M",      "R_M",       "lambda_S0",
        "c_S1",     "R_S1",      "sigma",     "c_S",      "R_S",       "alpha",
        "eps",      "P_m_dbm",   "P_s_dbm",   "beta_m_db", "beta_s_db", "fading_sq_mean",
        "window_radius", "tau",  "p_random",  "q_all_fail", "D_m",     "D_s"};
    static const std::set<std::string> integers = {"trials", "seed",    "threads", "slots",
                                                   "horizon", "backoff_max", "probes"};
    static const std::set<std::string> texts = {"model", "user", "pgfl_method"};
    static const std::set<std::string> flags = {"exact_D", "count_silent_in_fraction"};
    static const std::set<std::string> grids = {"u_grid", "beta_db_grid", "c_grid", "R_grid",
                                                "n_grid"};
    switch (kind) {
        case KeyKind::Number: return numbers;
        case KeyKind::Integer: return integers;
        case KeyKind::Text: return texts;
        case KeyKind::Flag: return flags;
        default: return grids;
    }
}

void validate_key(const std::string& key, const nlohmann::json& value) {
    if (known_keys(KeyKind::Number).count(key)) {
        if (!value.is_number()) throw ConfigError("config key '" + key + "' must be a number");
        return;
    }
    if (known_keys(KeyKind::Integer).count(key)) {
        if (!value.is_number_integer() && !value.is_number_unsigned())
            throw ConfigError("config key '" + key + "' must be an integer");
        return;
    }
    if (known_keys(KeyKind::Text).count(key)) {
        if (!value.is_string()) throw ConfigError("config key '" + key + "' must be a string");
        return;
    }
    if (known_keys(KeyKind::Flag).count(key)) {
        if (!value.is_boolean()) throw ConfigError("config key '" + key + "' must be a boolean");
        return;
    }
    if (known_keys(KeyKind::Grid).count(key)) {
        if (!value.is_array()) throw ConfigError("config key '" + key + "' must be an array");
        for (const auto& v : value)
            if (!v.is_number()) throw ConfigError("config key '" + key + "' must hold numbers");
        return;
    }
    throw ConfigError("unknown config key '" + key + "'");
}

}  // namespace

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    for (const auto& [key, value] : j.items()) validate_key(key, value);
    RunConfig c;
    c.raw_ = j;
    return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config parse failure in " + path + ": " + e.what());
    }
    return from_json(j);
}

double RunConfig::number(const std::string& key) const {
    if (!raw_.contains(key)) throw ConfigError("missing required config key '" + key + "'");
    return raw_.at(key).get<double>();
}

double RunConfig::number_or(const std::string& key, double fallback) const {
    return raw_.contains(key) ? raw_.at(key).get<double>() : fallback;
}

std::uint64_t RunConfig::integer_or(const std::string& key, std::uint64_t fallback) const {
    return raw_.contains(key) ? raw_.at(key).get<std::uint64_t>() : fallback;
}

std::string RunConfig::text_or(const std::string& key, const std::string& fallback) const {
    return raw_.contains(key) ? raw_.at(key).get<std::string>() : fallback;
}

bool RunConfig::flag_or(const std::string& key, bool fallback) const {
    return raw_.contains(key) ? raw_.at(key).get<bool>() : fallback;
}

std::vector<double> RunConfig::grid(const std::string& key, std::vector<double> fallback) const {
    if (!raw_.contains(key)) return fallback;
    return raw_.at(key).get<std::vector<double>>();
}

RadioParams RunConfig::radio() const {
    RadioParams r;
    r.alpha = number_or("alpha", 4.0);
    r.eps = number_or("eps", 0.01);
    r.fading_sq_mean = number_or("fading_sq_mean", 2.0);
    r.power_mbs = dbm_to_watts(number_or("P_m_dbm", 39.0));
    r.power_sbs = dbm_to_watts(number_or("P_s_dbm", 13.0));
    r.beta_m = db_to_linear(number_or("beta_m_db", -2.0));
    r.beta_s = db_to_linear(number_or("beta_s_db", -3.0));
    r.validate();
    return r;
}

SbsVariant RunConfig::variant() const {
    const std::string m = text_or("model", "");
    if (m == "PPP") return SbsVariant::PPP;
    if (m == "MCP") return SbsVariant::MCP;
    if (m == "SOCP") return SbsVariant::SOCP;
    throw ConfigError("config key 'model' must be one of PPP, MCP, SOCP");
}

HcnModel RunConfig::model() const { return model_as(variant()); }

HcnModel RunConfig::model_as(SbsVariant v) const {
    HcnModel m;
    m.radio = radio();
    switch (v) {
        case SbsVariant::PPP:
            m.mbs_density = number("lambda_m");
            m.sbs = PppSpec{number("lambda_P")};
            break;
        case SbsVariant::MCP:
            m.mbs_density = number("lambda_m");
            m.sbs = MatClusterSpec{number("lambda_M0"), number("c_M"), number("R_M")};
            break;
        case SbsVariant::SOCP: {
            SocpSpec s{number("lambda_S0"), number("c_S1"), number("R_S1"),
                       number("sigma"),     number("c_S"),  number("R_S")};
            m.mbs_density = number_or("lambda_m", s.parent_density);
            m.sbs = s;
            break;
        }
    }
    if (has("D_m") || has("D_s")) {
        if (!(has("D_m") && has("D_s")))
            throw ConfigError("association-radius override needs both D_m and D_s");
        m.radii_override = AssociationRadii{number("D_m"), number("D_s")};
    }
    m.validate();
    return m;
}

SchemeDescriptor RunConfig::scheme(Scheme kind) const {
    SchemeDescriptor d;
    d.kind = kind;
    d.p = number_or("p_random", 0.5);
    d.tau = number_or("tau", 0.5);
    d.backoff_max = static_cast<int>(integer_or("backoff_max", 3));
    d.q_all_fail = number_or("q_all_fail", 0.5);
    d.count_silent_in_fraction = flag_or("count_silent_in_fraction", false);
    d.validate();
    return d;
}

PgflOptions RunConfig::pgfl_options() const {
    PgflOptions o;
    const std::string m = text_or("pgfl_method", "nested");
    if (m == "nested")
        o.method = PgflMethod::Nested;
    else if (m == "qmc")
        o.method = PgflMethod::QuasiMonteCarlo;
    else
        throw ConfigError("config key 'pgfl_method' must be 'nested' or 'qmc'");
    return o;
}

void RunConfig::set(const std::string& key, const nlohmann::json& value) {
    validate_key(key, value);
    raw_[key] = value;
}

nlohmann::json RunManifest::to_json() const {
    nlohmann::json j;
    j["command"] = command;
    j["config"] = config;
    j["seed"] = seed;
    j["version"] = version;
    j["duration_seconds"] = duration_seconds;
    j["outputs"] = nlohmann::json::array();
    for (const auto& o : outputs) j["outputs"].push_back({{"path", o.path}, {"sha256", o.sha256}});
    return j;
}

RunManifest RunManifest::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open manifest: " + path);
    nlohmann::json j;
    in >> j;
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.config = j.at("config");
    m.seed = j.at("seed").get<std::uint64_t>();
    m.version = j.value("version", std::string(kToolVersion));
    m.duration_seconds = j.value("duration_seconds", 0.0);
    if (j.contains("outputs"))
        for (const auto& o : j["outputs"])
            m.outputs.push_back({o.at("path").get<std::string>(), o.at("sha256").get<std::string>()});
    return m;
}

void RunManifest::write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write manifest: " + path);
    out << to_json().dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// SHA-256 (FIPS 180-4), compact implementation for output digests
// ---------------------------------------------------------------------------

namespace {

constexpr std::array<std::uint32_t, 64> kSha256K = {
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4,
    0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe,
    0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f,
    0x4a7484aa, 0x5cb0a9dc, 0x76f988da, 0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7,
    0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc,
    0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
    0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070, 0x19a4c116,
    0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
    0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7,
    0xc67178f2};

inline std::uint32_t rotr(std::uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

struct Sha256 {
    std::array<std::uint32_t, 8> h = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                                      0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
    std::array<std::uint8_t, 64> block{};
    std::size_t block_len = 0;
    std::uint64_t total = 0;

    void process() {
        std::uint32_t w[64];
        for (int i = 0; i < 16; ++i)
            w[i] = (std::uint32_t(block[4 * i]) << 24) | (std::uint32_t(block[4 * i + 1]) << 16) |
                   (std::uint32_t(block[4 * i + 2]) << 8) | std::uint32_t(block[4 * i + 3]);
        for (int i = 16; i < 64; ++i) {
            const std::uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
            const std::uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
            w[i] = w[i - 16] + s0 + w[i - 7] + s1;
        }
        auto a = h;
        for (int i = 0; i < 64; ++i) {
            const std::uint32_t s1 = rotr(a[4], 6) ^ rotr(a[4], 11) ^ rotr(a[4], 25);
            const std::uint32_t ch = (a[4] & a[5]) ^ (~a[4] & a[6]);
            const std::uint32_t t1 = a[7] + s1 + ch + kSha256K[i] + w[i];
            const std::uint32_t s0 = rotr(a[0], 2) ^ rotr(a[0], 13) ^ rotr(a[0], 22);
            const std::uint32_t maj = (a[0] & a[1]) ^ (a[0] & a[2]) ^ (a[1] & a[2]);
            const std::uint32_t t2 = s0 + maj;
            a[7] = a[6]; a[6] = a[5]; a[5] = a[4]; a[4] = a[3] + t1;
            a[3] = a[2]; a[2] = a[1]; a[1] = a[0]; a[0] = t1 + t2;
        }
        for (int i = 0; i < 8; ++i) h[i] += a[i];
    }

    void update(const std::uint8_t* data, std::size_t len) {
        total += len;
        while (len > 0) {
            const std::size_t take = std::min(len, block.size() - block_len);
            std::memcpy(block.data() + block_len, data, take);
            block_len += take;
            data += take;
            len -= take;
            if (block_len == block.size()) {
                process();
                block_len = 0;
            }
        }
    }

    std::string finish() {
        const std::uint64_t bits = total * 8;
        const std::uint8_t one = 0x80;
        update(&one, 1);
        const std::uint8_t zero = 0x00;
        while (block_len != 56) update(&zero, 1);
        std::uint8_t len_be[8];
        for (int i = 0; i < 8; ++i) len_be[i] = static_cast<std::uint8_t>(bits >> (56 - 8 * i));
        update(len_be, 8);
        static const char* hex = "0123456789abcdef";
        std::string out;
        out.reserve(64);
        for (std::uint32_t v : h)
            for (int i = 3; i >= 0; --i) {
                const std::uint8_t byte = static_cast<std::uint8_t>(v >> (8 * i));
                out.push_back(hex[byte >> 4]);
                out.push_back(hex[byte & 0xf]);
            }
        return out;
    }
};

}  // namespace

std::string sha256_hex(const void* data, std::size_t len) {
    Sha256 s;
    s.update(static_cast<const std::uint8_t*>(data), len);
    return s.finish();
}

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file for digest: " + path);
    Sha256 s;
    char buf[65536];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0)
        s.update(reinterpret_cast<const std::uint8_t*>(buf), static_cast<std::size_t>(in.gcount()));
    return s.finish();
}

}  // namespace hcn
