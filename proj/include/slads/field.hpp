#pragma once

#include "slads/image.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace slads {

// Per-pixel scalar map over an image grid. Locations without a value (for the
// sampler: measured pixels) hold NaN.
struct ScalarField {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    ScalarField() = default;
    ScalarField(int w, int h)
        : width(w), height(h),
          values(static_cast<size_t>(w) * h, std::numeric_limits<double>::quiet_NaN()) {}

    double at(PixelLocation p) const {
        return values[static_cast<size_t>(p.row) * width + p.col];
    }
    void set(PixelLocation p, double v) {
        values[static_cast<size_t>(p.row) * width + p.col] = v;
    }
    bool has(PixelLocation p) const { return !std::isnan(at(p)); }
};

} // namespace slads
