#pragma once

#include "slads/error.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace slads {

// Flat key=value configuration. '#' and ';' start comments; keys must be
// unique.  Every diagnostic names the offending key.  Readers mark keys as
// consumed so ensure_all_consumed() can reject typos.
class Config {
public:
    static Config parse_file(const std::filesystem::path& path);
    static Config parse_string(const std::string& text, const std::string& source = "<string>");

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key) const;
    int get_int(const std::string& key, int fallback) const;
    uint64_t get_u64(const std::string& key, uint64_t fallback) const;
    std::vector<double> get_double_list(const std::string& key) const;
    std::vector<double> get_double_list(const std::string& key,
                                        const std::vector<double>& fallback) const;
    std::vector<std::string> get_string_list(const std::string& key) const;

    // Throws naming the first key nobody read; call once parsing is done.
    void ensure_all_consumed() const;

    const std::string& source() const { return source_; }
    const std::map<std::string, std::string>& entries() const { return values_; }

private:
    std::string raw(const std::string& key) const;

    std::map<std::string, std::string> values_;
    mutable std::set<std::string> consumed_;
    std::string source_;
};

} // namespace slads
