#pragma once

#include "slads/image.hpp"

#include <cstdint>

namespace slads {

struct SyntheticGrainSpec {
    int width = 64;
    int height = 64;
    int grain_count = 40;
    int label_count = 4;
    uint64_t seed = 0;
};

// Seeded polycrystal-style test image: pixels take the label of their nearest
// site (ties to the earlier site), and labels are drawn so that touching
// grains differ wherever the label budget allows.  When some grain's
// neighborhood already uses every label, that grain gets a random label and
// *coloring_fallback (when provided) is set.
Image generate_grain_image(const SyntheticGrainSpec& spec, bool* coloring_fallback = nullptr);

// Continuous variant: same grain geometry, but each grain renders as a random
// base intensity with a gentle slope away from its site, clamped to 0..255.
Image generate_shaded_grain_image(const SyntheticGrainSpec& spec);

} // namespace slads
