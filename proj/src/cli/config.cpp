#include "nodalheat/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace nodalheat {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, sep)) parts.push_back(trim(item));
    return parts;
}

double to_real(const std::string& key, const std::string& v) {
    double x = 0.0;
    const char* end = v.data() + v.size();
    const auto res = std::from_chars(v.data(), end, x);
    if (v.empty() || res.ec != std::errc() || res.ptr != end || !std::isfinite(x))
        throw ConfigError(key + ": expected a number, got '" + v + "'");
    return x;
}

long long to_int(const std::string& key, const std::string& v) {
    long long x = 0;
    const char* end = v.data() + v.size();
    const auto res = std::from_chars(v.data(), end, x);
    if (v.empty() || res.ec != std::errc() || res.ptr != end) throw ConfigError(key + ": expected an integer, got '" + v + "'");
    return x;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "off" || v == "no") return false;
    throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

} // namespace

std::vector<std::string> experiment_names() {
    return {"heat-content", "explicit-solution", "comparison", "theorem1", "max-point", "thin-domain",
            "avoided-crossing", "cone", "cone-condition", "isoperimetry", "global-survival", "ball-search", "suite"};
}

EigenfunctionModel parse_model(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw ConfigError("model must read kind:params, got '" + spec + "'");
    const std::string kind = spec.substr(0, colon);
    const auto p = split(spec.substr(colon + 1), ',');
    auto need = [&](std::size_t n) {
        if (p.size() != n) throw ConfigError("model " + kind + " takes " + std::to_string(n) + " parameters");
    };
    auto idx = [&](std::size_t k) { return static_cast<int>(to_int("model", p[k])); };
    try {
        if (kind == "torus") {
            need(2);
            return make_torus_eigenfunction(idx(0), idx(1));
        }
        if (kind == "rect") {
            need(4);
            return make_rectangle_eigenfunction(idx(0), idx(1), to_real("model", p[2]), to_real("model", p[3]));
        }
        if (kind == "disk") {
            need(3);
            return make_disk_eigenfunction(idx(0), idx(1), to_real("model", p[2]));
        }
        if (kind == "cone") {
            need(1);
            return make_cone_model(idx(0));
        }
    } catch (const InvalidParameter& e) {
        throw ConfigError(std::string("model: ") + e.what());
    }
    throw ConfigError("unknown model kind '" + kind + "' (torus, rect, disk, cone)");
}

std::vector<double> parse_times(const std::string& spec) {
    const auto p = split(spec, ':');
    if (p.size() != 3) throw ConfigError("times must read a:b:n, got '" + spec + "'");
    const double a = to_real("times", p[0]);
    const double b = to_real("times", p[1]);
    const long long n = to_int("times", p[2]);
    if (!(a > 0.0) || !(b >= a) || n < 1 || (n == 1 && b != a)) throw ConfigError("times need 0 < a <= b and n >= 1");
    std::vector<double> t(static_cast<std::size_t>(n));
    for (long long k = 0; k < n; ++k) t[k] = n == 1 ? a : a * std::pow(b / a, double(k) / double(n - 1));
    return t;
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::stringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(number) + ": missing '='");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError("config line " + std::to_string(number) + ": empty key");
        kv[key] = trim(line.substr(eq + 1));
    }
    return kv;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& v) {
    auto positive = [&](double x) {
        if (!(x > 0.0)) throw ConfigError(key + " must be positive");
        return x;
    };
    auto count = [&](long long x) {
        if (x < 0) throw ConfigError(key + " must be nonnegative");
        return x;
    };
    if (key == "experiment") {
        const auto names = experiment_names();
        if (std::find(names.begin(), names.end(), v) == names.end()) {
            std::string list;
            for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
            throw ConfigError("unknown experiment '" + v + "'; valid names: " + list);
        }
        cfg.experiment = v;
    } else if (key == "model") {
        parse_model(v);
        cfg.model = v;
    } else if (key == "grid") {
        cfg.grid = static_cast<int>(count(to_int(key, v)));
    } else if (key == "times") {
        parse_times(v);
        cfg.times = v;
    } else if (key == "paths") {
        cfg.paths = static_cast<std::size_t>(count(to_int(key, v)));
    } else if (key == "dt") {
        cfg.dt = positive(to_real(key, v));
    } else if (key == "seed") {
        cfg.seed = static_cast<std::uint64_t>(count(to_int(key, v)));
    } else if (key == "bridge") {
        cfg.bridge = to_bool(key, v);
    } else if (key == "out") {
        if (v.empty()) throw ConfigError("out must not be empty");
        cfg.out = v;
    } else if (key == "emit-fields") {
        cfg.emit_fields = to_bool(key, v);
    } else if (key == "quick") {
        cfg.quick = to_bool(key, v);
    } else if (key == "threads") {
        cfg.threads = static_cast<int>(count(to_int(key, v)));
    } else if (key == "domain") {
        cfg.domain = static_cast<int>(count(to_int(key, v)));
    } else if (key == "alpha") {
        cfg.alpha = positive(to_real(key, v));
    } else if (key == "r") {
        cfg.r = positive(to_real(key, v));
    } else if (key == "c") {
        cfg.c = positive(to_real(key, v));
    } else if (key == "c1") {
        cfg.c1 = positive(to_real(key, v));
    } else if (key == "bias") {
        cfg.bias = to_real(key, v);
        if (cfg.bias < 0.0) throw ConfigError("bias must be nonnegative");
    } else {
        throw ConfigError("unknown setting '" + key + "'");
    }
}

} // namespace nodalheat
