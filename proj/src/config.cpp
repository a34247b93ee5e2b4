#include "clusterdyn/config.hpp"

#include "clusterdyn/errors.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

namespace clusterdyn {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Cuts a trailing comment, respecting double-quoted strings.
std::string strip_comment(const std::string& s) {
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') quoted = !quoted;
        if (s[i] == '#' && !quoted) return s.substr(0, i);
    }
    return s;
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw config_error("config line " + std::to_string(line) + ": " + msg);
}

bool valid_key(const std::string& k) {
    if (k.empty()) return false;
    for (char ch : k)
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_' && ch != '-' && ch != '.')
            return false;
    return true;
}

bool parse_number(const std::string& text, double& out) {
    const char* begin = text.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    return end == begin + text.size() && !text.empty();
}

ConfigValue parse_value(const std::string& raw, int line) {
    ConfigValue v;
    v.line = line;
    const std::string s = trim(raw);
    if (s.empty()) fail(line, "missing value");
    if (s.front() == '"') {
        if (s.size() < 2 || s.back() != '"') fail(line, "unterminated string");
        v.kind = ConfigValue::Kind::string;
        v.str = s.substr(1, s.size() - 2);
        return v;
    }
    if (s == "true" || s == "false") {
        v.kind = ConfigValue::Kind::boolean;
        v.flag = s == "true";
        return v;
    }
    if (s.front() == '[') {
        if (s.back() != ']') fail(line, "unterminated array");
        v.kind = ConfigValue::Kind::number_array;
        std::string inner = s.substr(1, s.size() - 2);
        std::stringstream ss(inner);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) fail(line, "empty array element");
            double num = 0.0;
            if (!parse_number(item, num)) fail(line, "array element is not a number: " + item);
            v.arr.push_back(num);
        }
        return v;
    }
    double num = 0.0;
    if (!parse_number(s, num)) fail(line, "cannot parse value: " + s);
    v.kind = ConfigValue::Kind::number;
    v.num = num;
    return v;
}

} // namespace

ConfigMap parse_config_text(const std::string& text) {
    ConfigMap map;
    std::map<std::string, int> table_counts; // for [[name]] arrays
    std::string prefix;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string s = trim(strip_comment(raw));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.size() >= 4 && s[1] == '[') {
                if (s.substr(s.size() - 2) != "]]") fail(line, "malformed table array header");
                const std::string name = trim(s.substr(2, s.size() - 4));
                if (!valid_key(name)) fail(line, "invalid table name: " + name);
                prefix = name + "." + std::to_string(table_counts[name]++) + ".";
                continue;
            }
            if (s.back() != ']') fail(line, "malformed table header");
            const std::string name = trim(s.substr(1, s.size() - 2));
            if (!valid_key(name)) fail(line, "invalid table name: " + name);
            prefix = name + ".";
            continue;
        }
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos) fail(line, "expected key = value");
        const std::string key = trim(s.substr(0, eq));
        if (!valid_key(key)) fail(line, "invalid key: " + key);
        const std::string full = prefix + key;
        if (map.count(full)) fail(line, "duplicate key: " + full);
        map[full] = parse_value(s.substr(eq + 1), line);
    }
    return map;
}

ConfigMap load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

void apply_override(ConfigMap& map, const std::string& assignment) {
    const std::size_t eq = assignment.find('=');
    if (eq == std::string::npos)
        throw config_error("override must look like KEY=VALUE: " + assignment);
    const std::string key = trim(assignment.substr(0, eq));
    if (!valid_key(key)) throw config_error("invalid override key: " + key);
    std::string raw = trim(assignment.substr(eq + 1));
    if (raw.empty()) throw config_error("override has no value: " + assignment);
    ConfigValue v;
    // Accept bare words as strings so --set system=qcg works unquoted.
    if (raw.front() != '"' && raw.front() != '[' && raw != "true" && raw != "false") {
        double num = 0.0;
        if (parse_number(raw, num)) {
            v.kind = ConfigValue::Kind::number;
            v.num = num;
        } else {
            v.kind = ConfigValue::Kind::string;
            v.str = raw;
        }
        map[key] = v;
        return;
    }
    map[key] = parse_value(raw, 0);
}

const char* preset_name(SystemPreset s) {
    switch (s) {
        case SystemPreset::cg: return "cg";
        case SystemPreset::qcg: return "qcg";
        case SystemPreset::qpg: return "qpg";
        case SystemPreset::qrs: return "qrs";
        case SystemPreset::kappa_family: return "kappa";
    }
    return "?";
}

namespace {

class MapReader {
public:
    explicit MapReader(const ConfigMap& m) : map_(m) {}

    bool has(const std::string& key) const { return map_.count(key) != 0; }

    const ConfigValue& at(const std::string& key) const { return map_.at(key); }

    double number(const std::string& key) const {
        const ConfigValue& v = require(key);
        if (v.kind != ConfigValue::Kind::number)
            throw config_error("key '" + key + "' must be a number");
        return v.num;
    }

    double number_or(const std::string& key, double fallback) const {
        return has(key) ? number(key) : fallback;
    }

    std::string text(const std::string& key) const {
        const ConfigValue& v = require(key);
        if (v.kind != ConfigValue::Kind::string)
            throw config_error("key '" + key + "' must be a string");
        return v.str;
    }

    bool boolean_or(const std::string& key, bool fallback) const {
        if (!has(key)) return fallback;
        const ConfigValue& v = at(key);
        if (v.kind != ConfigValue::Kind::boolean)
            throw config_error("key '" + key + "' must be true or false");
        return v.flag;
    }

    std::vector<double> numbers(const std::string& key) const {
        const ConfigValue& v = require(key);
        if (v.kind == ConfigValue::Kind::number_array) return v.arr;
        if (v.kind == ConfigValue::Kind::number) return {v.num};
        throw config_error("key '" + key + "' must be a numeric array");
    }

    int integer(const std::string& key) const {
        const double d = number(key);
        const int i = static_cast<int>(d);
        if (static_cast<double>(i) != d)
            throw config_error("key '" + key + "' must be an integer");
        return i;
    }

private:
    const ConfigValue& require(const std::string& key) const {
        auto it = map_.find(key);
        if (it == map_.end()) throw config_error("missing required key: " + key);
        return it->second;
    }

    const ConfigMap& map_;
};

std::array<double, 2> range_of(const MapReader& r, const std::string& key,
                               std::array<double, 2> fallback) {
    if (!r.has(key)) return fallback;
    const std::vector<double> v = r.numbers(key);
    if (v.size() != 2 || !(v[0] <= v[1]))
        throw config_error("key '" + key + "' must be [low, high] with low <= high");
    return {v[0], v[1]};
}

// z and kappa constraints per preset; explicit conflicting values are
// rejected, absent values are filled in where the preset pins them.
void resolve_params(const MapReader& r, RunConfig& cfg) {
    const bool has_z = r.has("z");
    const bool has_k = r.has("kappa");
    const double z = has_z ? r.number("z") : 0.0;
    const double k = has_k ? r.number("kappa") : 0.0;
    switch (cfg.system) {
        case SystemPreset::cg:
            if (has_z && z != 0.0) throw config_error("system cg forces z = 0; offending key: z");
            if (has_k && k != 1.0)
                throw config_error("system cg forces kappa = 1; offending key: kappa");
            cfg.z = 0.0;
            cfg.kappa = 1.0;
            break;
        case SystemPreset::qcg:
            if (!has_z) throw config_error("system qcg requires a deformation; missing key: z");
            if (has_k && k != 1.0)
                throw config_error("system qcg forces kappa = 1; offending key: kappa");
            cfg.z = z;
            cfg.kappa = 1.0;
            break;
        case SystemPreset::qpg:
        case SystemPreset::qrs:
            if (!has_z)
                throw config_error(std::string("system ") + preset_name(cfg.system) +
                                   " requires a deformation; missing key: z");
            if (has_k && k != 0.0)
                throw config_error(std::string("system ") + preset_name(cfg.system) +
                                   " forces kappa = 0; offending key: kappa");
            cfg.z = z;
            cfg.kappa = 0.0;
            break;
        case SystemPreset::kappa_family:
            if (!has_z) throw config_error("system kappa leaves z free but it must be set; missing key: z");
            if (!has_k)
                throw config_error("system kappa leaves kappa free but it must be set; missing key: kappa");
            cfg.z = z;
            cfg.kappa = k;
            break;
    }
    if (!(cfg.kappa >= 0.0)) throw config_error("kappa must be >= 0; offending key: kappa");
}

} // namespace

RunConfig make_run_config(const ConfigMap& map) {
    const MapReader r(map);
    RunConfig cfg;

    const std::string sys = r.text("system");
    if (sys == "cg") cfg.system = SystemPreset::cg;
    else if (sys == "qcg") cfg.system = SystemPreset::qcg;
    else if (sys == "qpg") cfg.system = SystemPreset::qpg;
    else if (sys == "qrs") cfg.system = SystemPreset::qrs;
    else if (sys == "kappa") cfg.system = SystemPreset::kappa_family;
    else throw config_error("unknown system '" + sys + "' (expected cg|qcg|qpg|qrs|kappa)");

    resolve_params(r, cfg);

    for (int i = 0;; ++i) {
        const std::string p = "site." + std::to_string(i) + ".";
        if (!r.has(p + "s3") && !r.has(p + "splus") && !r.has(p + "sminus")) break;
        cfg.explicit_sites.push_back(
            SiteState{r.number(p + "s3"), r.number(p + "splus"), r.number(p + "sminus")});
    }

    if (r.has("n_sites")) {
        cfg.n_sites = r.integer("n_sites");
        if (cfg.n_sites < 1) throw config_error("n_sites must be >= 1");
        if (!cfg.explicit_sites.empty() &&
            cfg.n_sites != static_cast<int>(cfg.explicit_sites.size()))
            throw config_error("n_sites disagrees with the number of [[site]] tables");
    } else if (!cfg.explicit_sites.empty()) {
        cfg.n_sites = static_cast<int>(cfg.explicit_sites.size());
    } else {
        throw config_error("missing required key: n_sites (or explicit [[site]] tables)");
    }

    if (r.has("seed")) {
        const double s = r.number("seed");
        if (s < 0.0 || s != static_cast<double>(static_cast<std::uint64_t>(s)))
            throw config_error("seed must be a non-negative integer");
        cfg.seed = static_cast<std::uint64_t>(s);
    }
    if (r.has("label")) cfg.label = r.text("label");

    cfg.range_s3 = range_of(r, "ranges.s3", cfg.range_s3);
    cfg.range_sp = range_of(r, "ranges.splus", cfg.range_sp);
    cfg.range_sm = range_of(r, "ranges.sminus", cfg.range_sm);

    if (r.has("integrator.method")) {
        const std::string m = r.text("integrator.method");
        if (m == "rk4") cfg.integrator.method = Method::rk4_fixed;
        else if (m == "rk45") cfg.integrator.method = Method::rk45_adaptive;
        else throw config_error("integrator.method must be rk4 or rk45");
    }
    cfg.integrator.t0 = r.number_or("integrator.t0", 0.0);
    cfg.integrator.t1 = r.number_or("integrator.t1", 10.0);
    cfg.integrator.dt = r.number_or("integrator.dt", 0.0);
    cfg.integrator.rtol = r.number_or("integrator.rtol", 1e-10);
    cfg.integrator.atol = r.number_or("integrator.atol", 1e-12);
    cfg.integrator.sample_every = r.number_or("integrator.sample_every", 0.01);
    if (!(cfg.integrator.t1 > cfg.integrator.t0))
        throw config_error("integrator.t1 must exceed integrator.t0");
    if (!(cfg.integrator.sample_every > 0.0))
        throw config_error("integrator.sample_every must be > 0");
    if (cfg.integrator.method == Method::rk4_fixed && !(cfg.integrator.dt > 0.0))
        throw config_error("integrator.dt must be > 0 for method rk4");
    if (cfg.integrator.method == Method::rk45_adaptive &&
        (!(cfg.integrator.rtol > 0.0) || cfg.integrator.rtol > 1e-2 ||
         !(cfg.integrator.atol > 0.0) || cfg.integrator.atol > 1e-2))
        throw config_error("integrator.rtol and integrator.atol must lie in (0, 1e-2]");

    if (r.has("clusters")) {
        cfg.clusters.clear();
        for (double d : r.numbers("clusters")) {
            const int m = static_cast<int>(d);
            if (static_cast<double>(m) != d || m < 1 || m > cfg.n_sites)
                throw config_error("clusters entries must be integers in [1, n_sites]");
            cfg.clusters.push_back(m);
        }
        if (cfg.clusters.empty()) throw config_error("clusters must not be empty");
    }

    if (r.has("outputs.dir")) cfg.out.dir = r.text("outputs.dir");
    cfg.out.csv = r.boolean_or("outputs.csv", cfg.out.csv);
    cfg.out.json = r.boolean_or("outputs.json", cfg.out.json);
    cfg.out.svg = r.boolean_or("outputs.svg", cfg.out.svg);
    return cfg;
}

SystemKind system_kind(const RunConfig& cfg) {
    SystemKind k;
    k.tag = cfg.system == SystemPreset::qrs ? SystemTag::qrs : SystemTag::gaudin_kappa;
    k.params = DeformParams{cfg.z, cfg.kappa};
    return k;
}

ChainState initial_chain(const RunConfig& cfg) {
    ChainState c;
    c.params = DeformParams{cfg.z, cfg.kappa};
    if (!cfg.explicit_sites.empty()) {
        c.sites = cfg.explicit_sites;
        return c;
    }
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> d3(cfg.range_s3[0], cfg.range_s3[1]);
    std::uniform_real_distribution<double> dp(cfg.range_sp[0], cfg.range_sp[1]);
    std::uniform_real_distribution<double> dm(cfg.range_sm[0], cfg.range_sm[1]);
    c.sites.reserve(static_cast<std::size_t>(cfg.n_sites));
    for (int i = 0; i < cfg.n_sites; ++i) c.sites.push_back(SiteState{d3(rng), dp(rng), dm(rng)});
    return c;
}

} // namespace clusterdyn
