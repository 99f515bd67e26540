#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace slads {

/// Shortest round-trippable decimal form. Locale-independent, used for every
/// value written to CSV so reruns are byte-identical.
inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // prefer the shortest representation that still round-trips
    for (int prec = 1; prec <= 16; ++prec) {
        char tryb[40];
        std::snprintf(tryb, sizeof(tryb), "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(tryb, "%lf", &back);
        if (back == v) return tryb;
    }
    return buf;
}

inline std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t p = s.find(sep, start);
        if (p == std::string::npos) {
            out.push_back(s.substr(start));
            break;
        }
        out.push_back(s.substr(start, p - start));
        start = p + 1;
    }
    return out;
}

} // namespace slads
