#include "slab/config.hpp"

#include "slab/errors.hpp"

#include <cctype>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <sstream>

namespace slab {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

} // namespace

KeyValueMap parse_config_text(const std::string& text) {
    KeyValueMap kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string t = trim(line);
        if (t.empty()) continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        kv[key] = val;
    }
    return kv;
}

KeyValueMap load_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

std::string format_config_text(const KeyValueMap& kv) {
    std::ostringstream out;
    for (const auto& [k, v] : kv) out << k << " = " << v << "\n";
    return out.str();
}

void save_config_file(const KeyValueMap& kv, const std::string& path) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw ConfigError("cannot write config file: " + path);
    f << format_config_text(kv);
    if (!f) throw ConfigError("short config write: " + path);
}

double get_double(const KeyValueMap& kv, const std::string& key, double fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
        std::size_t pos = 0;
        double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': not a number: '" + it->second + "'");
    }
}

std::int64_t get_int(const KeyValueMap& kv, const std::string& key, std::int64_t fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
        std::size_t pos = 0;
        long long v = std::stoll(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': not an integer: '" + it->second + "'");
    }
}

bool get_bool(const KeyValueMap& kv, const std::string& key, bool fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    const std::string& v = it->second;
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("key '" + key + "': not a boolean: '" + v + "'");
}

std::string get_string(const KeyValueMap& kv, const std::string& key,
                       const std::string& fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
}

void apply_overrides(KeyValueMap& base, const std::vector<std::string>& kv_args,
                     const std::set<std::string>& allowed_keys) {
    std::vector<std::pair<std::string, std::string>> parsed;
    std::string bad;
    for (const std::string& arg : kv_args) {
        std::size_t eq = arg.find('=');
        if (eq == std::string::npos) {
            bad += (bad.empty() ? "" : ", ") + arg + " (missing '=')";
            continue;
        }
        std::string key = trim(arg.substr(0, eq));
        if (!allowed_keys.count(key)) {
            bad += (bad.empty() ? "" : ", ") + key;
            continue;
        }
        parsed.emplace_back(key, trim(arg.substr(eq + 1)));
    }
    if (!bad.empty()) throw ConfigError("invalid override keys: " + bad);
    for (auto& [k, v] : parsed) base[k] = v;
}

std::string format_double(double v) {
    if (v == static_cast<long long>(v) && std::abs(v) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(v));
        return buf;
    }
    // shortest representation that round-trips
    for (int prec = 1; prec <= 17; ++prec) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == v) return buf;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace slab
