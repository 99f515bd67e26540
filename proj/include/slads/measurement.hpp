#pragma once

#include <vector>

#include "slads/image.hpp"

namespace slads {

struct Measurement {
    PixelLocation loc;
    double value = 0.0;
};

struct Neighbor {
    PixelLocation loc;
    long long d2 = 0;   ///< exact squared Euclidean distance to the query
    double value = 0.0; ///< measured value at loc
};

/// Nearest measurements first; ties broken by row-major location order.
using NeighborSet = std::vector<Neighbor>;

/// The set of measured locations with their values, plus an exact
/// nearest-neighbor index over a uniform bucket grid. Insertion is O(1);
/// queries expand rings of buckets until the k-th best distance is proven.
///
/// Mutation happens only between sampling steps by a single owner; all
/// queries over a frozen state are const and safe to run concurrently.
class MeasurementState {
public:
    MeasurementState(int width, int height, Mode mode);

    int width() const { return width_; }
    int height() const { return height_; }

    bool in_bounds(PixelLocation p) const {
        return p.row >= 0 && p.row < height_ && p.col >= 0 && p.col < width_;
    }
    long long num_pixels() const { return static_cast<long long>(width_) * height_; }
    Mode mode() const { return mode_; }

    size_t count() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const std::vector<Measurement>& entries() const { return entries_; }
    const std::vector<uint8_t>& mask() const { return mask_; }

    bool measured(PixelLocation p) const;
    double value_at(PixelLocation p) const; ///< requires measured(p)

    /// Appends a measurement. Throws on out-of-bounds or duplicate location.
    void add(PixelLocation p, double value);

    /// Removes the most recently added measurement (used to discard
    /// pseudo-measurements after group selection).
    void pop_last();

    /// The min(k, count) nearest measured locations to s.
    NeighborSet nearest(PixelLocation s, int k) const;

    /// Squared distance from s to the closest measurement.
    long long nearest_d2(PixelLocation s) const;

private:
    int cell_of(PixelLocation p) const {
        return (p.row / kCell) * grid_w_ + (p.col / kCell);
    }

    static constexpr int kCell = 8;

    int width_ = 0;
    int height_ = 0;
    Mode mode_ = Mode::Discrete;
    int grid_w_ = 0;
    int grid_h_ = 0;
    std::vector<Measurement> entries_;
    std::vector<uint8_t> mask_;
    std::vector<std::vector<int32_t>> cells_;
};

/// Normalized inverse-squared-distance weights for a neighbor set.
/// A zero-distance neighbor short-circuits to weight 1 for itself.
std::vector<double> inverse_square_weights(const NeighborSet& neighbors);

} // namespace slads
