#include "slads/image.hpp"

#include <cmath>
#include <set>
#include <string>

namespace slads {

const char* mode_name(Mode m) {
    return m == Mode::Discrete ? "discrete" : "continuous";
}

Mode mode_from_name(const std::string& name) {
    if (name == "discrete") return Mode::Discrete;
    if (name == "continuous") return Mode::Continuous;
    throw ContractError("unknown mode '" + name + "' (expected discrete or continuous)");
}

Image::Image(int width, int height, Mode mode, double fill)
    : width_(width), height_(height), mode_(mode) {
    if (width <= 0 || height <= 0)
        throw ContractError("image dimensions must be positive");
    px_.assign(static_cast<size_t>(width) * height, fill);
}

double pixel_distortion(double a, double b, Mode mode) {
    if (!std::isfinite(a) || !std::isfinite(b))
        throw ContractError("pixel_distortion: non-finite value");
    if (mode == Mode::Discrete) {
        if (a != std::floor(a) || b != std::floor(b) || a < 0 || b < 0)
            throw ContractError("pixel_distortion: discrete mode requires nonnegative integer labels");
        return a == b ? 0.0 : 1.0;
    }
    return std::abs(a - b);
}

double total_distortion(const Image& x, const Image& xhat) {
    if (!x.same_shape(xhat))
        throw ContractError("total_distortion: dimension mismatch");
    if (x.mode() != xhat.mode())
        throw ContractError("total_distortion: mode mismatch");
    double sum = 0.0;
    const auto& a = x.pixels();
    const auto& b = xhat.pixels();
    for (size_t i = 0; i < a.size(); ++i)
        sum += pixel_distortion(a[i], b[i], x.mode());
    return sum;
}

double normalized_td(const Image& x, const Image& xhat) {
    return total_distortion(x, xhat) / static_cast<double>(x.size());
}

int label_count(const Image& img) {
    if (img.mode() != Mode::Discrete)
        throw ContractError("label_count: discrete image required");
    std::set<double> labels(img.pixels().begin(), img.pixels().end());
    return static_cast<int>(labels.size());
}

} // namespace slads
