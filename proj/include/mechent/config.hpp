#pragma once

#include "mechent/params.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace mechent {

/// Ordered `key = value` settings. Lines starting with '#' and blank lines
/// are ignored; values are kept verbatim so that a written manifest parses
/// back to bit-identical doubles.
class KeyValueConfig {
public:
    static KeyValueConfig parse(std::istream& in, const std::string& source = "<stream>");
    static KeyValueConfig load(const std::string& path);

    void set(const std::string& key, const std::string& value);
    bool contains(const std::string& key) const;
    const std::string& get(const std::string& key) const;

    double get_double(const std::string& key) const;
    int get_int(const std::string& key) const;
    std::vector<double> get_list(const std::string& key) const;

    const std::map<std::string, std::string>& entries() const { return entries_; }

    void write(std::ostream& out) const;

private:
    std::map<std::string, std::string> entries_;
};

double parse_double(const std::string& text, const std::string& key);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// The configuration keys naming SystemParams fields, in declaration order.
const std::vector<std::string>& param_keys();

/// Default value of a SystemParams key, formatted for a config file.
std::string default_param_value(const std::string& key);

/// Sets the SystemParams field named `key`; throws ConfigError for unknown names.
void set_param(SystemParams& p, const std::string& key, double value);
double get_param(const SystemParams& p, const std::string& key);

/// Builds SystemParams from the parameter keys present in `cfg` (missing keys keep defaults).
SystemParams params_from_config(const KeyValueConfig& cfg);

} // namespace mechent
