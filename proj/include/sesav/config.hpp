#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "sesav/harness.hpp"

namespace sesav {

/// Raised for malformed config files, unknown keys, and bad override strings.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using ConfigScalar = std::variant<double, bool, std::string>;

struct ConfigValue {
    bool is_array = false;
    std::vector<ConfigScalar> items;  // exactly one item unless is_array
};

// std::map keeps key iteration deterministic.
using ConfigMap = std::map<std::string, ConfigValue>;

/// Parses the TOML-style `key = value` format: one assignment per line,
/// `#` comments, values being numbers, booleans, quoted or bare-word strings,
/// or `[ ... ]` arrays of those.
ConfigMap parse_config_text(const std::string& text);
ConfigMap parse_config_file(const std::filesystem::path& path);

/// Applies one `key=value` override (same value grammar as the file format).
void apply_override(ConfigMap& map, const std::string& assignment);

/// A parsed config: the base run plus the optional study-only fields.
struct StudyConfig {
    RunConfig run;
    std::vector<double> tau_list;       // converge
    double benchmark_tau = 0.0;         // converge
    bool has_benchmark_tau = false;
    std::vector<SchemeId> schemes;      // converge (optional) / compare
    std::vector<KappaSpec> kappas;      // compare
};

/// Validates keys and types; unknown keys are errors.
StudyConfig study_config_from(const ConfigMap& map);

} // namespace sesav
