#include "mechent/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace mechent {

namespace {

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

struct ParamField {
    const char* key;
    double SystemParams::*member;
};

constexpr ParamField kFields[] = {
    {"omega_m", &SystemParams::omega_m},     {"delta0", &SystemParams::delta0},
    {"kappa", &SystemParams::kappa},         {"gamma_m", &SystemParams::gamma_m},
    {"g", &SystemParams::g},                 {"e0", &SystemParams::e0},
    {"e1", &SystemParams::e1},               {"omega_mod", &SystemParams::omega_mod},
    {"lambda0", &SystemParams::lambda0},     {"temp_ratio", &SystemParams::temp_ratio},
};

const ParamField& field(const std::string& key)
{
    for (const auto& f : kFields)
        if (key == f.key)
            return f;
    throw ConfigError("unknown parameter '" + key + "'");
}

} // namespace

double parse_double(const std::string& text, const std::string& key)
{
    const std::string t = trim(text);
    double v = 0.0;
    const auto* end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(t.data(), end, v);
    if (t.empty() || ec != std::errc() || ptr != end || !std::isfinite(v))
        throw ConfigError("value of '" + key + "' is not a finite number: '" + text + "'");
    return v;
}

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

KeyValueConfig KeyValueConfig::parse(std::istream& in, const std::string& source)
{
    KeyValueConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string body = trim(line);
        if (body.empty() || body[0] == '#')
            continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(body.substr(0, eq));
        if (key.empty())
            throw ConfigError(source + ":" + std::to_string(lineno) + ": empty key");
        if (cfg.contains(key))
            throw ConfigError(source + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
        cfg.set(key, trim(body.substr(eq + 1)));
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    return parse(in, path);
}

void KeyValueConfig::set(const std::string& key, const std::string& value) { entries_[key] = value; }

bool KeyValueConfig::contains(const std::string& key) const { return entries_.count(key) != 0; }

const std::string& KeyValueConfig::get(const std::string& key) const
{
    const auto it = entries_.find(key);
    if (it == entries_.end())
        throw ConfigError("missing key '" + key + "'");
    return it->second;
}

double KeyValueConfig::get_double(const std::string& key) const { return parse_double(get(key), key); }

int KeyValueConfig::get_int(const std::string& key) const
{
    const double v = get_double(key);
    if (v != std::floor(v) || std::abs(v) > 1e9)
        throw ConfigError("value of '" + key + "' must be an integer");
    return static_cast<int>(v);
}

std::vector<double> KeyValueConfig::get_list(const std::string& key) const
{
    std::vector<double> out;
    std::stringstream ss(get(key));
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_double(item, key));
    return out;
}

void KeyValueConfig::write(std::ostream& out) const
{
    for (const auto& [k, v] : entries_)
        out << k << " = " << v << '\n';
}

const std::vector<std::string>& param_keys()
{
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& f : kFields)
            k.emplace_back(f.key);
        return k;
    }();
    return keys;
}

std::string default_param_value(const std::string& key)
{
    return format_double(SystemParams{}.*field(key).member);
}

void set_param(SystemParams& p, const std::string& key, double value) { p.*field(key).member = value; }

double get_param(const SystemParams& p, const std::string& key) { return p.*field(key).member; }

SystemParams params_from_config(const KeyValueConfig& cfg)
{
    SystemParams p;
    for (const auto& key : param_keys())
        if (cfg.contains(key))
            set_param(p, key, cfg.get_double(key));
    return p;
}

} // namespace mechent
