#pragma once

#include <string>
#include <vector>

#include "slads/image.hpp"

namespace slads {

/// Reads a comma-separated integer matrix as a discrete image. Arbitrary
/// nonnegative label values are remapped to dense 0..K-1 in ascending order.
Image load_discrete_csv(const std::string& path);
void save_discrete_csv(const std::string& path, const Image& img);

/// 8-bit grayscale PGM (P5 or P2 accepted on read, P5 written).
Image load_pgm(const std::string& path);
void save_pgm(const std::string& path, const Image& img);

/// 8-bit grayscale PNG. Reads any PNG libpng can expand to gray-8.
Image load_png(const std::string& path);
void save_png(const std::string& path, const Image& img);

/// 0/255 grayscale PNG of a boolean grid (row-major, width*height entries).
void save_mask_png(const std::string& path, const std::vector<uint8_t>& mask,
                   int width, int height);

/// Dispatch on file extension: .csv discrete, .pgm/.png continuous.
Image load_image(const std::string& path, Mode mode);
void save_image(const std::string& path, const Image& img);

} // namespace slads
