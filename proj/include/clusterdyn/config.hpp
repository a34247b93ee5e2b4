#ifndef CLUSTERDYN_CONFIG_HPP
#define CLUSTERDYN_CONFIG_HPP

#include "clusterdyn/integrate.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace clusterdyn {

// Scalar or numeric-array value from the key-value config grammar
// (TOML-compatible subset: tables, array-of-tables, strings, numbers,
// booleans, numeric arrays).
struct ConfigValue {
    enum class Kind { string, number, boolean, number_array };
    Kind kind = Kind::string;
    std::string str;
    double num = 0.0;
    bool flag = false;
    std::vector<double> arr;
    int line = 0; // 0 for command-line overrides
};

// Keys are dotted paths; array-of-tables entries become "site.0.s3" etc.
using ConfigMap = std::map<std::string, ConfigValue>;

// Throws config_error with a line number on any syntax problem.
ConfigMap parse_config_text(const std::string& text);
ConfigMap load_config_file(const std::string& path);

// Applies a KEY=VALUE override; VALUE uses the same scalar/array grammar.
void apply_override(ConfigMap& map, const std::string& assignment);

enum class SystemPreset { cg, qcg, qpg, qrs, kappa_family };

const char* preset_name(SystemPreset s);

struct OutputOptions {
    std::string dir = ".";
    bool csv = true;
    bool json = true;
    bool svg = false;
};

struct RunConfig {
    SystemPreset system = SystemPreset::qcg;
    int n_sites = 0;
    double z = 0.0;
    double kappa = 1.0;
    std::uint64_t seed = 1;
    std::string label = "run";
    // Explicit initial sites win over random generation.
    std::vector<SiteState> explicit_sites;
    std::array<double, 2> range_s3{-1.0, 1.0};
    std::array<double, 2> range_sp{0.1, 1.0};
    std::array<double, 2> range_sm{0.1, 1.0};
    IntegratorConfig integrator;
    std::vector<int> clusters{1};
    OutputOptions out;
};

// Validates the whole map and resolves the system presets:
// cg forces z=0 and kappa=1, qcg forces kappa=1, qpg/qrs force kappa=0,
// kappa_family leaves both free. Conflicting explicit values are
// configuration errors naming the offending key, never silent overrides.
RunConfig make_run_config(const ConfigMap& map);

SystemKind system_kind(const RunConfig& cfg);

// Explicit sites, or uniform draws from the configured ranges seeded by
// cfg.seed (deterministic for a fixed platform).
ChainState initial_chain(const RunConfig& cfg);

} // namespace clusterdyn

#endif
