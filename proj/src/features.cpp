#include "slads/features.hpp"

#include "slads/text.hpp"

#include <cmath>
#include <ostream>

namespace slads {

FeatureContext::FeatureContext(int width, int height, double lambda)
    : width_(width), height_(height) {
    if (width <= 0 || height <= 0)
        throw ContractError("FeatureContext: dimensions must be positive");
    if (lambda <= 0.0)
        throw ContractError("FeatureContext: lambda must be positive");
    const double n_px = static_cast<double>(width) * height;
    const double r2 = lambda * n_px / (100.0 * std::acos(-1.0));
    const int r_max = static_cast<int>(std::floor(std::sqrt(r2)));
    for (int dr = -r_max; dr <= r_max; ++dr)
        for (int dc = -r_max; dc <= r_max; ++dc)
            if (static_cast<double>(dr) * dr + static_cast<double>(dc) * dc <= r2)
                offsets_.emplace_back(dr, dc);
}

DescriptorVector compute_descriptors(const MeasurementState& state, const Image& recon,
                                     PixelLocation s, const DescriptorParams& params,
                                     const FeatureContext& ctx) {
    if (recon.width() != state.width() || recon.height() != state.height())
        throw ContractError("compute_descriptors: reconstruction shape mismatch");
    if (ctx.width() != state.width() || ctx.height() != state.height())
        throw ContractError("compute_descriptors: context shape mismatch");
    if (state.measured(s))
        throw ContractError("compute_descriptors: location already measured");

    const Mode mode = state.mode();
    DescriptorVector d;

    // Gradients from the flanking reconstruction values.  When a side falls
    // outside the image both samples collapse to the available side and the
    // component vanishes.
    if (s.col - 1 >= 0 && s.col + 1 < recon.width())
        d.z1 = pixel_distortion(recon.at({s.row, s.col + 1}), recon.at({s.row, s.col - 1}), mode);
    if (s.row - 1 >= 0 && s.row + 1 < recon.height())
        d.z2 = pixel_distortion(recon.at({s.row + 1, s.col}), recon.at({s.row - 1, s.col}), mode);

    // Deviation of the nearest measured values from the local estimate.
    const NeighborSet neighbors = state.nearest(s, params.neighbor_count);
    const std::vector<double> w = inverse_square_weights(neighbors);
    const double center = recon.at(s);
    double sq_sum = 0.0;
    for (size_t i = 0; i < neighbors.size(); ++i) {
        const double dev = pixel_distortion(neighbors[i].value, center, mode);
        sq_sum += dev * dev;
        d.z4 += w[i] * dev;
    }
    d.z3 = std::sqrt(sq_sum / static_cast<double>(neighbors.size()));

    d.z5 = std::sqrt(static_cast<double>(neighbors.front().d2));

    // Density: lattice points of the circle that land in bounds, and how many
    // of them are measured.
    long long area = 0, measured = 0;
    for (const auto& [dr, dc] : ctx.circle_offsets()) {
        const PixelLocation p{s.row + dr, s.col + dc};
        if (!state.in_bounds(p)) continue;
        ++area;
        if (state.measured(p)) ++measured;
    }
    d.z6 = static_cast<double>(1 + area) / static_cast<double>(1 + measured);

    return d;
}

DescriptorVector compute_descriptors(const MeasurementState& state, const Image& recon,
                                     PixelLocation s, const DescriptorParams& params) {
    const FeatureContext ctx(state.width(), state.height(), params.lambda);
    return compute_descriptors(state, recon, s, params, ctx);
}

FeatureVector expand_features(const DescriptorVector& d) {
    const std::array<double, 6> z{d.z1, d.z2, d.z3, d.z4, d.z5, d.z6};
    for (double v : z)
        if (!std::isfinite(v))
            throw ContractError("expand_features: non-finite descriptor");
    FeatureVector f{};
    f[0] = 1.0;
    for (int i = 0; i < 6; ++i)
        f[static_cast<size_t>(1 + i)] = z[static_cast<size_t>(i)];
    size_t k = 7;
    for (int i = 0; i < 6; ++i)
        for (int j = i; j < 6; ++j)
            f[k++] = z[static_cast<size_t>(i)] * z[static_cast<size_t>(j)];
    return f;
}

void dump_features_csv(std::ostream& out, const MeasurementState& state, const Image& recon,
                       const DescriptorParams& params) {
    out << "row,col,z1,z2,z3,z4,z5,z6";
    for (int i = 0; i < kFeatureCount; ++i) out << ",f" << i;
    out << "\n";
    const FeatureContext ctx(state.width(), state.height(), params.lambda);
    for (int row = 0; row < state.height(); ++row) {
        for (int col = 0; col < state.width(); ++col) {
            const PixelLocation s{row, col};
            if (state.measured(s)) continue;
            const DescriptorVector d = compute_descriptors(state, recon, s, params, ctx);
            const FeatureVector f = expand_features(d);
            out << row << "," << col;
            for (double v : {d.z1, d.z2, d.z3, d.z4, d.z5, d.z6})
                out << "," << fmt_double(v);
            for (double v : f) out << "," << fmt_double(v);
            out << "\n";
        }
    }
}

} // namespace slads
