#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slads/error.hpp"

namespace slads {

/// Pixel value semantics: discrete class labels or continuous 0..255 intensities.
enum class Mode { Discrete, Continuous };

const char* mode_name(Mode m);
Mode mode_from_name(const std::string& name);

struct PixelLocation {
    int row = 0;
    int col = 0;

    friend bool operator==(PixelLocation a, PixelLocation b) {
        return a.row == b.row && a.col == b.col;
    }
    /// Row-major order; the tie-break rule used throughout the sampler.
    friend bool operator<(PixelLocation a, PixelLocation b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    }
};

/// Squared Euclidean distance. Integer coordinates keep this exact.
inline long long dist2(PixelLocation a, PixelLocation b) {
    const long long dr = a.row - b.row;
    const long long dc = a.col - b.col;
    return dr * dr + dc * dc;
}

/// Dense 2-D image. Discrete images hold small integer labels, continuous
/// images hold real intensities on the 0..255 scale; both are stored as
/// doubles so distortion code is mode-agnostic.
class Image {
public:
    Image() = default;
    Image(int width, int height, Mode mode, double fill = 0.0);

    int width() const { return width_; }
    int height() const { return height_; }
    long long size() const { return static_cast<long long>(width_) * height_; }
    Mode mode() const { return mode_; }

    double at(int row, int col) const { return px_[idx(row, col)]; }
    double at(PixelLocation p) const { return px_[idx(p.row, p.col)]; }
    void set(int row, int col, double v) { px_[idx(row, col)] = v; }
    void set(PixelLocation p, double v) { px_[idx(p.row, p.col)] = v; }

    bool in_bounds(PixelLocation p) const {
        return p.row >= 0 && p.row < height_ && p.col >= 0 && p.col < width_;
    }
    bool same_shape(const Image& o) const {
        return width_ == o.width_ && height_ == o.height_;
    }
    long long index_of(PixelLocation p) const { return idx(p.row, p.col); }
    PixelLocation location_of(long long index) const {
        return {static_cast<int>(index / width_), static_cast<int>(index % width_)};
    }

    const std::vector<double>& pixels() const { return px_; }
    std::vector<double>& pixels() { return px_; }

private:
    long long idx(int row, int col) const {
        return static_cast<long long>(row) * width_ + col;
    }

    int width_ = 0;
    int height_ = 0;
    Mode mode_ = Mode::Discrete;
    std::vector<double> px_;
};

/// Scalar distortion between two pixel values.
/// Discrete: 0/1 indicator of disagreement. Continuous: absolute difference.
double pixel_distortion(double a, double b, Mode mode);

/// Sum of pixel_distortion over all locations. Shapes and modes must match.
double total_distortion(const Image& x, const Image& xhat);

/// total_distortion divided by the pixel count. For discrete images this is
/// the fraction of mislabeled pixels.
double normalized_td(const Image& x, const Image& xhat);

/// Number of distinct labels in a discrete image.
int label_count(const Image& img);

} // namespace slads
