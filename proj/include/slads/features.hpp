#pragma once

#include "slads/image.hpp"
#include "slads/measurement.hpp"

#include <array>
#include <iosfwd>
#include <vector>

namespace slads {

inline constexpr int kFeatureCount = 28;

// Six per-pixel statistics describing an unmeasured location: two local
// gradients of the reconstruction, two deviation measures over the nearest
// measurements, and two measurement-density measures.
struct DescriptorVector {
    double z1 = 0.0; // horizontal gradient (distortion between column neighbors)
    double z2 = 0.0; // vertical gradient (distortion between row neighbors)
    double z3 = 0.0; // RMS deviation of neighbor measurements from the local estimate
    double z4 = 0.0; // weighted mean deviation of neighbor measurements
    double z5 = 0.0; // Euclidean distance to the closest measurement
    double z6 = 0.0; // (1 + circle pixel count) / (1 + measured count inside circle)
};

// Fixed order: [1, z1..z6, z1^2, z1z2, ..., z1z6, z2^2, z2z3, ..., z6^2].
using FeatureVector = std::array<double, kFeatureCount>;

struct DescriptorParams {
    int neighbor_count = 10;  // size of the neighbor set for z3/z4
    double lambda = 0.25;     // circle area for z6, as a percentage of the image area
};

// Per-image-shape cache for the z6 circle: the lattice offsets within a circle
// whose area is lambda percent of the image area.
class FeatureContext {
public:
    FeatureContext(int width, int height, double lambda);

    int width() const { return width_; }
    int height() const { return height_; }

    // Offsets (dr, dc) with dr^2 + dc^2 <= r^2, r = sqrt(lambda * N / (100 pi)).
    const std::vector<std::pair<int, int>>& circle_offsets() const { return offsets_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::pair<int, int>> offsets_;
};

// Descriptors at unmeasured location `s` given the current measurements and a
// full reconstruction.  The context must match the state's dimensions.
DescriptorVector compute_descriptors(const MeasurementState& state, const Image& recon,
                                     PixelLocation s, const DescriptorParams& params,
                                     const FeatureContext& ctx);

// Convenience overload that builds the circle cache on the fly.
DescriptorVector compute_descriptors(const MeasurementState& state, const Image& recon,
                                     PixelLocation s, const DescriptorParams& params);

// Second-degree expansion of the descriptors.  Throws on non-finite input.
FeatureVector expand_features(const DescriptorVector& d);

// Debug dump: one CSV row (row, col, z1..z6, f0..f27) per unmeasured pixel in
// row-major order, with a header line.
void dump_features_csv(std::ostream& out, const MeasurementState& state, const Image& recon,
                       const DescriptorParams& params);

} // namespace slads
