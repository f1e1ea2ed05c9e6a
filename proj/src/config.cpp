#include "sesav/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace sesav {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool parse_number(const std::string& tok, double& out) {
    const char* begin = tok.data();
    const char* end = begin + tok.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

bool is_bare_word(const std::string& tok) {
    if (tok.empty()) return false;
    for (char c : tok)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.'))
            return false;
    return !std::isdigit(static_cast<unsigned char>(tok.front()));
}

ConfigScalar parse_scalar(const std::string& raw) {
    const std::string tok = trim(raw);
    if (tok.empty()) throw ConfigError("empty value");
    if (tok.size() >= 2 && tok.front() == '"' && tok.back() == '"')
        return tok.substr(1, tok.size() - 2);
    if (tok == "true") return true;
    if (tok == "false") return false;
    double num = 0.0;
    if (parse_number(tok, num)) return num;
    if (is_bare_word(tok)) return tok;
    throw ConfigError("cannot parse value: '" + tok + "'");
}

ConfigValue parse_value(const std::string& raw) {
    const std::string tok = trim(raw);
    if (tok.empty()) throw ConfigError("empty value");
    ConfigValue v;
    if (tok.front() == '[') {
        if (tok.back() != ']') throw ConfigError("unterminated array: '" + tok + "'");
        v.is_array = true;
        const std::string body = tok.substr(1, tok.size() - 2);
        std::string item;
        std::istringstream ss(body);
        while (std::getline(ss, item, ',')) {
            if (trim(item).empty()) continue;
            v.items.push_back(parse_scalar(item));
        }
        return v;
    }
    v.items.push_back(parse_scalar(tok));
    return v;
}

} // namespace

ConfigMap parse_config_text(const std::string& text) {
    ConfigMap map;
    std::istringstream stream(text);
    std::string line;
    int lineno = 0;
    while (std::getline(stream, line)) {
        ++lineno;
        // strip comment (respecting quoted strings)
        bool in_quote = false;
        for (std::size_t k = 0; k < line.size(); ++k) {
            if (line[k] == '"') in_quote = !in_quote;
            if (line[k] == '#' && !in_quote) {
                line.resize(k);
                break;
            }
        }
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(stripped.substr(0, eq));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        map[key] = parse_value(stripped.substr(eq + 1));
    }
    return map;
}

ConfigMap parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

void apply_override(ConfigMap& map, const std::string& assignment) {
    const std::size_t eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("override must be key=value: '" + assignment + "'");
    const std::string key = trim(assignment.substr(0, eq));
    map[key] = parse_value(assignment.substr(eq + 1));
}

namespace {

double as_number(const ConfigValue& v, const std::string& key) {
    if (v.is_array || v.items.size() != 1 || !std::holds_alternative<double>(v.items[0]))
        throw ConfigError("key '" + key + "' must be a number");
    return std::get<double>(v.items[0]);
}

std::string as_string(const ConfigValue& v, const std::string& key) {
    if (v.is_array || v.items.size() != 1 || !std::holds_alternative<std::string>(v.items[0]))
        throw ConfigError("key '" + key + "' must be a string");
    return std::get<std::string>(v.items[0]);
}

long as_integer(const ConfigValue& v, const std::string& key) {
    const double x = as_number(v, key);
    const long n = std::lround(x);
    if (static_cast<double>(n) != x)
        throw ConfigError("key '" + key + "' must be an integer");
    return n;
}

KappaSpec kappa_from_scalar(const ConfigScalar& s, const std::string& key) {
    if (std::holds_alternative<double>(s)) return KappaSpec::number(std::get<double>(s));
    if (std::holds_alternative<std::string>(s)) {
        const std::string& word = std::get<std::string>(s);
        if (word == "lip") return KappaSpec::lipschitz();
        if (word == "half-lip") return KappaSpec::half_lipschitz();
        throw ConfigError("key '" + key + "': expected a number, \"lip\", or \"half-lip\"");
    }
    throw ConfigError("key '" + key + "': expected a number, \"lip\", or \"half-lip\"");
}

SchemeId scheme_from_string(const std::string& name, const std::string& key) {
    auto id = parse_scheme(name);
    if (!id) throw ConfigError("key '" + key + "': unknown scheme '" + name + "'");
    return *id;
}

} // namespace

StudyConfig study_config_from(const ConfigMap& map) {
    static const char* known[] = {
        "L",          "M",           "potential",     "theta",         "theta_c",
        "scheme",     "eps",         "kappa",         "tau",           "delta_offset",
        "t_end",      "n_steps",     "initial",       "random_min",    "random_max",
        "constant_value", "seed",    "stride",        "steady_tol",    "csv",
        "snapshot",   "tau_list",    "benchmark_tau", "schemes",       "kappas",
    };
    for (const auto& [key, value] : map) {
        bool ok = false;
        for (const char* k : known)
            if (key == k) ok = true;
        if (!ok) throw ConfigError("unknown key: " + key);
    }

    StudyConfig sc;
    RunConfig& c = sc.run;

    if (auto it = map.find("L"); it != map.end()) c.domain_length = as_number(it->second, "L");
    if (auto it = map.find("M"); it != map.end())
        c.grid_points = static_cast<int>(as_integer(it->second, "M"));

    if (auto it = map.find("potential"); it != map.end()) {
        const std::string name = as_string(it->second, "potential");
        if (name == "double_well") c.potential = PotentialKind::DoubleWell;
        else if (name == "flory_huggins") c.potential = PotentialKind::FloryHuggins;
        else if (name == "zero") c.potential = PotentialKind::Zero;
        else throw ConfigError("unknown potential: " + name);
    }
    if (auto it = map.find("theta"); it != map.end()) c.theta = as_number(it->second, "theta");
    if (auto it = map.find("theta_c"); it != map.end())
        c.theta_c = as_number(it->second, "theta_c");

    if (auto it = map.find("scheme"); it != map.end())
        c.scheme = scheme_from_string(as_string(it->second, "scheme"), "scheme");
    if (auto it = map.find("eps"); it != map.end()) c.eps = as_number(it->second, "eps");
    if (auto it = map.find("kappa"); it != map.end()) {
        if (it->second.is_array || it->second.items.size() != 1)
            throw ConfigError("key 'kappa' must be scalar");
        c.kappa = kappa_from_scalar(it->second.items[0], "kappa");
    }
    if (auto it = map.find("tau"); it != map.end()) c.tau = as_number(it->second, "tau");
    if (auto it = map.find("delta_offset"); it != map.end())
        c.delta_offset = as_number(it->second, "delta_offset");

    if (auto it = map.find("t_end"); it != map.end()) c.t_end = as_number(it->second, "t_end");
    if (auto it = map.find("n_steps"); it != map.end())
        c.n_steps = as_integer(it->second, "n_steps");

    if (auto it = map.find("initial"); it != map.end()) {
        const std::string name = as_string(it->second, "initial");
        if (name == "sine") c.initial.kind = InitialKind::SmoothSine;
        else if (name == "random") c.initial.kind = InitialKind::UniformRandom;
        else if (name == "constant") c.initial.kind = InitialKind::Constant;
        else throw ConfigError("unknown initial condition: " + name);
    }
    if (auto it = map.find("random_min"); it != map.end())
        c.initial.low = as_number(it->second, "random_min");
    if (auto it = map.find("random_max"); it != map.end())
        c.initial.high = as_number(it->second, "random_max");
    if (auto it = map.find("constant_value"); it != map.end())
        c.initial.value = as_number(it->second, "constant_value");
    if (auto it = map.find("seed"); it != map.end()) {
        const long s = as_integer(it->second, "seed");
        if (s < 0) throw ConfigError("seed must be nonnegative");
        c.initial.seed = static_cast<std::uint64_t>(s);
    }
    if (auto it = map.find("stride"); it != map.end()) {
        c.stride = as_integer(it->second, "stride");
        if (c.stride < 1) throw ConfigError("stride must be >= 1");
    }
    if (auto it = map.find("steady_tol"); it != map.end())
        c.steady_tol = as_number(it->second, "steady_tol");
    if (auto it = map.find("csv"); it != map.end()) c.csv_path = as_string(it->second, "csv");
    if (auto it = map.find("snapshot"); it != map.end())
        c.snapshot_path = as_string(it->second, "snapshot");

    if (auto it = map.find("tau_list"); it != map.end()) {
        if (!it->second.is_array) throw ConfigError("tau_list must be an array");
        for (const ConfigScalar& s : it->second.items) {
            if (!std::holds_alternative<double>(s))
                throw ConfigError("tau_list entries must be numbers");
            sc.tau_list.push_back(std::get<double>(s));
        }
    }
    if (auto it = map.find("benchmark_tau"); it != map.end()) {
        sc.benchmark_tau = as_number(it->second, "benchmark_tau");
        sc.has_benchmark_tau = true;
    }
    if (auto it = map.find("schemes"); it != map.end()) {
        if (!it->second.is_array) throw ConfigError("schemes must be an array");
        for (const ConfigScalar& s : it->second.items) {
            if (!std::holds_alternative<std::string>(s))
                throw ConfigError("schemes entries must be names");
            sc.schemes.push_back(scheme_from_string(std::get<std::string>(s), "schemes"));
        }
    }
    if (auto it = map.find("kappas"); it != map.end()) {
        if (!it->second.is_array) throw ConfigError("kappas must be an array");
        for (const ConfigScalar& s : it->second.items)
            sc.kappas.push_back(kappa_from_scalar(s, "kappas"));
    }

    if (c.t_end.has_value() == c.n_steps.has_value())
        throw ConfigError("set exactly one of t_end / n_steps");
    return sc;
}

} // namespace sesav
