#include "slads/halton.hpp"

#include <cmath>

namespace slads {

double radical_inverse(int base, long long n) {
    if (base < 2) throw ContractError("radical_inverse: base must be >= 2");
    if (n < 0) throw ContractError("radical_inverse: n must be >= 0");
    double result = 0.0;
    double digit_value = 1.0 / base;
    while (n > 0) {
        result += static_cast<double>(n % base) * digit_value;
        n /= base;
        digit_value /= base;
    }
    return result;
}

std::vector<PixelLocation> low_discrepancy_pattern(int width, int height, long long count) {
    if (width <= 0 || height <= 0)
        throw ContractError("low_discrepancy_pattern: dimensions must be positive");
    const long long n_px = static_cast<long long>(width) * height;
    if (count < 0 || count > n_px)
        throw ContractError("low_discrepancy_pattern: count out of range");

    std::vector<PixelLocation> out;
    out.reserve(static_cast<size_t>(count));
    std::vector<uint8_t> taken(static_cast<size_t>(n_px), 0);
    auto push = [&](PixelLocation p) {
        uint8_t& t = taken[static_cast<size_t>(p.row) * width + p.col];
        if (t) return;
        t = 1;
        out.push_back(p);
    };

    // a full cover takes at most lcm(2^a, 3^b) draws; this cap is far beyond it
    const long long cap = 64 * n_px + 4096;
    for (long long n = 1; static_cast<long long>(out.size()) < count && n <= cap; ++n) {
        const int row = static_cast<int>(radical_inverse(2, n) * height);
        const int col = static_cast<int>(radical_inverse(3, n) * width);
        push({row < height ? row : height - 1, col < width ? col : width - 1});
    }
    for (int row = 0; static_cast<long long>(out.size()) < count && row < height; ++row)
        for (int col = 0; static_cast<long long>(out.size()) < count && col < width; ++col)
            push({row, col});
    return out;
}

} // namespace slads
