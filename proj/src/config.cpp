#include "slads/config.hpp"

#include "slads/text.hpp"

#include <fstream>
#include <sstream>

namespace slads {

Config Config::parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_string(buffer.str(), path.string());
}

Config Config::parse_string(const std::string& text, const std::string& source) {
    Config cfg;
    cfg.source_ = source;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        const size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ContractError(source + ":" + std::to_string(line_no) +
                                ": expected key=value, got '" + t + "'");
        const std::string key = trim(t.substr(0, eq));
        if (key.empty())
            throw ContractError(source + ":" + std::to_string(line_no) + ": empty key");
        if (cfg.values_.count(key))
            throw ContractError(source + ": duplicate config key '" + key + "'");
        // A comment marker ends the value only at the start or after
        // whitespace, so values like 'file#1.csv' survive.
        std::string value = t.substr(eq + 1);
        for (size_t i = 0; i < value.size(); ++i) {
            if ((value[i] == '#' || value[i] == ';') &&
                (i == 0 || value[i - 1] == ' ' || value[i - 1] == '\t')) {
                value.resize(i);
                break;
            }
        }
        cfg.values_[key] = trim(value);
    }
    return cfg;
}

std::string Config::raw(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end())
        throw ContractError(source_ + ": missing config key '" + key + "'");
    consumed_.insert(key);
    return it->second;
}

std::string Config::get_string(const std::string& key) const { return raw(key); }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    return raw(key);
}

double Config::get_double(const std::string& key) const {
    const std::string v = raw(key);
    try {
        size_t used = 0;
        const double d = std::stod(v, &used);
        if (trim(v.substr(used)).empty()) return d;
    } catch (const std::exception&) {
    }
    throw ContractError(source_ + ": config key '" + key + "' expects a number, got '" + v + "'");
}

double Config::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

int Config::get_int(const std::string& key) const {
    const double d = get_double(key);
    const int i = static_cast<int>(d);
    if (static_cast<double>(i) != d)
        throw ContractError(source_ + ": config key '" + key + "' expects an integer");
    return i;
}

int Config::get_int(const std::string& key, int fallback) const {
    return has(key) ? get_int(key) : fallback;
}

uint64_t Config::get_u64(const std::string& key, uint64_t fallback) const {
    if (!has(key)) return fallback;
    const std::string v = raw(key);
    try {
        size_t used = 0;
        const unsigned long long u = std::stoull(v, &used);
        if (trim(v.substr(used)).empty()) return u;
    } catch (const std::exception&) {
    }
    throw ContractError(source_ + ": config key '" + key + "' expects an unsigned integer, got '" +
                        v + "'");
}

std::vector<double> Config::get_double_list(const std::string& key) const {
    const std::string v = raw(key);
    std::vector<double> out;
    for (const std::string& cell : split(v, ',')) {
        const std::string c = trim(cell);
        if (c.empty())
            throw ContractError(source_ + ": config key '" + key + "' has an empty list entry");
        try {
            size_t used = 0;
            const double d = std::stod(c, &used);
            if (trim(c.substr(used)).empty()) {
                out.push_back(d);
                continue;
            }
        } catch (const std::exception&) {
        }
        throw ContractError(source_ + ": config key '" + key + "' has a non-numeric entry '" + c +
                            "'");
    }
    if (out.empty())
        throw ContractError(source_ + ": config key '" + key + "' lists no values");
    return out;
}

std::vector<double> Config::get_double_list(const std::string& key,
                                            const std::vector<double>& fallback) const {
    return has(key) ? get_double_list(key) : fallback;
}

std::vector<std::string> Config::get_string_list(const std::string& key) const {
    const std::string v = raw(key);
    std::vector<std::string> out;
    for (const std::string& cell : split(v, ',')) {
        const std::string c = trim(cell);
        if (c.empty())
            throw ContractError(source_ + ": config key '" + key + "' has an empty list entry");
        out.push_back(c);
    }
    if (out.empty())
        throw ContractError(source_ + ": config key '" + key + "' lists no values");
    return out;
}

void Config::ensure_all_consumed() const {
    for (const auto& [key, value] : values_)
        if (!consumed_.count(key))
            throw ContractError(source_ + ": unknown config key '" + key + "'");
}

} // namespace slads
