#include "slads/grain.hpp"

#include "slads/rng.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

namespace slads {

namespace {

struct Tessellation {
    std::vector<PixelLocation> sites;
    std::vector<int> grain_of; // per pixel, row-major
};

Tessellation tessellate(const SyntheticGrainSpec& spec, std::mt19937_64& rng) {
    if (spec.width <= 0 || spec.height <= 0)
        throw ContractError("grain image: dimensions must be positive");
    const long long n_px = static_cast<long long>(spec.width) * spec.height;
    if (spec.grain_count < 1 || spec.grain_count > n_px)
        throw ContractError("grain image: grain count out of range");
    if (spec.label_count < 1 || spec.label_count > spec.grain_count)
        throw ContractError("grain image: label count must be in [1, grain count]");

    Tessellation t;
    for (int64_t idx : sample_distinct(n_px, spec.grain_count, rng))
        t.sites.push_back({static_cast<int>(idx / spec.width),
                           static_cast<int>(idx % spec.width)});

    t.grain_of.assign(static_cast<size_t>(n_px), 0);
    for (int row = 0; row < spec.height; ++row) {
        for (int col = 0; col < spec.width; ++col) {
            const PixelLocation p{row, col};
            int best = 0;
            long long best_d2 = dist2(p, t.sites[0]);
            for (size_t g = 1; g < t.sites.size(); ++g) {
                const long long d2 = dist2(p, t.sites[g]);
                if (d2 < best_d2) {
                    best_d2 = d2;
                    best = static_cast<int>(g);
                }
            }
            t.grain_of[static_cast<size_t>(row) * spec.width + col] = best;
        }
    }
    return t;
}

std::vector<std::set<int>> grain_adjacency(const Tessellation& t, int width, int height,
                                           int grain_count) {
    std::vector<std::set<int>> adj(static_cast<size_t>(grain_count));
    auto link = [&](int a, int b) {
        if (a == b) return;
        adj[static_cast<size_t>(a)].insert(b);
        adj[static_cast<size_t>(b)].insert(a);
    };
    for (int row = 0; row < height; ++row) {
        for (int col = 0; col < width; ++col) {
            const int g = t.grain_of[static_cast<size_t>(row) * width + col];
            if (col + 1 < width)
                link(g, t.grain_of[static_cast<size_t>(row) * width + col + 1]);
            if (row + 1 < height)
                link(g, t.grain_of[static_cast<size_t>(row + 1) * width + col]);
        }
    }
    return adj;
}

std::vector<int> color_grains(const Tessellation& t, const SyntheticGrainSpec& spec,
                              std::mt19937_64& rng, bool* fallback) {
    const auto adj = grain_adjacency(t, spec.width, spec.height, spec.grain_count);
    std::vector<int> label(static_cast<size_t>(spec.grain_count), -1);
    for (int g = 0; g < spec.grain_count; ++g) {
        std::vector<uint8_t> used(static_cast<size_t>(spec.label_count), 0);
        for (int nb : adj[static_cast<size_t>(g)])
            if (label[static_cast<size_t>(nb)] >= 0)
                used[static_cast<size_t>(label[static_cast<size_t>(nb)])] = 1;
        std::vector<int> allowed;
        for (int l = 0; l < spec.label_count; ++l)
            if (!used[static_cast<size_t>(l)]) allowed.push_back(l);
        if (allowed.empty()) {
            // neighborhood exhausts the label budget; give up on distinctness here
            if (fallback) *fallback = true;
            label[static_cast<size_t>(g)] =
                static_cast<int>(uniform_below(rng, static_cast<uint64_t>(spec.label_count)));
        } else {
            label[static_cast<size_t>(g)] = allowed[static_cast<size_t>(
                uniform_below(rng, static_cast<uint64_t>(allowed.size())))];
        }
    }
    return label;
}

} // namespace

Image generate_grain_image(const SyntheticGrainSpec& spec, bool* coloring_fallback) {
    if (coloring_fallback) *coloring_fallback = false;
    std::mt19937_64 rng(mix_seed(spec.seed, 0x4752414eULL));
    const Tessellation t = tessellate(spec, rng);
    const std::vector<int> label = color_grains(t, spec, rng, coloring_fallback);

    Image img(spec.width, spec.height, Mode::Discrete);
    for (int row = 0; row < spec.height; ++row)
        for (int col = 0; col < spec.width; ++col)
            img.set(row, col,
                    label[static_cast<size_t>(
                        t.grain_of[static_cast<size_t>(row) * spec.width + col])]);
    return img;
}

Image generate_shaded_grain_image(const SyntheticGrainSpec& spec) {
    std::mt19937_64 rng(mix_seed(spec.seed, 0x53484144ULL));
    const Tessellation t = tessellate(spec, rng);

    std::vector<double> base(static_cast<size_t>(spec.grain_count));
    std::vector<double> slope(static_cast<size_t>(spec.grain_count));
    for (int g = 0; g < spec.grain_count; ++g) {
        base[static_cast<size_t>(g)] =
            30.0 + static_cast<double>(uniform_below(rng, 196)); // 30..225
        slope[static_cast<size_t>(g)] =
            (static_cast<double>(uniform_below(rng, 61)) - 30.0) / 10.0; // -3..3
    }

    Image img(spec.width, spec.height, Mode::Continuous);
    for (int row = 0; row < spec.height; ++row) {
        for (int col = 0; col < spec.width; ++col) {
            const int g = t.grain_of[static_cast<size_t>(row) * spec.width + col];
            const double d =
                std::sqrt(static_cast<double>(dist2({row, col}, t.sites[static_cast<size_t>(g)])));
            const double v = base[static_cast<size_t>(g)] + slope[static_cast<size_t>(g)] * d;
            img.set(row, col, std::clamp(v, 0.0, 255.0));
        }
    }
    return img;
}

} // namespace slads
