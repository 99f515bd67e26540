#pragma once

#include "slads/image.hpp"

#include <vector>

namespace slads {

// Radical inverse of n in the given base: the base-b digits of n mirrored
// around the radix point.  n starts at 1; base must be >= 2.
double radical_inverse(int base, long long n);

// Deterministic quasi-uniform pattern: points of the 2-D radical-inverse
// sequence (base 2 for rows, base 3 for columns) mapped onto the grid,
// duplicates skipped, until `count` distinct locations are collected.
// Prefixes are nested: the first m points of a longer pattern equal the
// pattern of size m.  If the sequence stalls before reaching `count` (tiny
// grids), the remainder is filled in row-major order.
std::vector<PixelLocation> low_discrepancy_pattern(int width, int height, long long count);

} // namespace slads
