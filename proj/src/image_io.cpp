#include "slads/image_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include "slads/text.hpp"

namespace slads {

namespace {

uint8_t quantize_byte(double v) {
    double r = std::lround(v);
    if (r < 0) r = 0;
    if (r > 255) r = 255;
    return static_cast<uint8_t>(r);
}

bool has_suffix(const std::string& s, const std::string& suf) {
    return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

struct FileCloser {
    void operator()(std::FILE* f) const { if (f) std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

} // namespace

Image load_discrete_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::vector<std::vector<long long>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::vector<long long> row;
        for (const auto& cell : split(line, ',')) {
            const std::string t = trim(cell);
            char* end = nullptr;
            long long v = std::strtoll(t.c_str(), &end, 10);
            if (end == t.c_str() || *end != '\0' || v < 0)
                throw IoError(path + ": invalid label '" + t + "'");
            row.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError(path + ": empty matrix");
    const size_t w = rows[0].size();
    for (const auto& r : rows)
        if (r.size() != w) throw IoError(path + ": ragged rows");

    // remap arbitrary label values to dense 0..K-1, ascending
    std::map<long long, int> remap;
    for (const auto& r : rows)
        for (long long v : r) remap.emplace(v, 0);
    int next = 0;
    for (auto& [v, id] : remap) id = next++;

    Image img(static_cast<int>(w), static_cast<int>(rows.size()), Mode::Discrete);
    for (size_t r = 0; r < rows.size(); ++r)
        for (size_t c = 0; c < w; ++c)
            img.set(static_cast<int>(r), static_cast<int>(c),
                    static_cast<double>(remap.at(rows[r][c])));
    return img;
}

void save_discrete_csv(const std::string& path, const Image& img) {
    if (img.mode() != Mode::Discrete)
        throw ContractError("save_discrete_csv: discrete image required");
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            if (c) out << ',';
            out << static_cast<long long>(img.at(r, c));
        }
        out << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

Image load_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::string magic;
    in >> magic;
    if (magic != "P5" && magic != "P2") throw IoError(path + ": not an 8-bit PGM");
    auto next_token = [&]() -> long long {
        std::string tok;
        while (in >> tok) {
            if (tok[0] == '#') { std::string rest; std::getline(in, rest); continue; }
            return std::stoll(tok);
        }
        throw IoError(path + ": truncated PGM header");
    };
    const long long w = next_token(), h = next_token(), maxval = next_token();
    if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 255)
        throw IoError(path + ": unsupported PGM geometry");
    Image img(static_cast<int>(w), static_cast<int>(h), Mode::Continuous);
    if (magic == "P5") {
        in.get(); // single whitespace after maxval
        std::vector<uint8_t> buf(static_cast<size_t>(w) * h);
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
        if (!in) throw IoError(path + ": truncated PGM data");
        for (size_t i = 0; i < buf.size(); ++i) img.pixels()[i] = buf[i];
    } else {
        for (auto& px : img.pixels()) {
            long long v = next_token();
            if (v < 0 || v > maxval) throw IoError(path + ": sample out of range");
            px = static_cast<double>(v);
        }
    }
    return img;
}

void save_pgm(const std::string& path, const Image& img) {
    if (img.mode() != Mode::Continuous)
        throw ContractError("save_pgm: continuous image required");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
    std::vector<uint8_t> buf(static_cast<size_t>(img.size()));
    for (size_t i = 0; i < buf.size(); ++i) buf[i] = quantize_byte(img.pixels()[i]);
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!out) throw IoError("write failed: " + path);
}

namespace {

std::vector<uint8_t> read_png_gray8(const std::string& path, int& w, int& h) {
    FilePtr f(std::fopen(path.c_str(), "rb"));
    if (!f) throw IoError("cannot open " + path);
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError(path + ": PNG decode error");
    }
    png_init_io(png, f.get());
    png_read_info(png, info);

    // normalize anything to 8-bit grayscale
    png_byte color = png_get_color_type(png, info);
    png_byte depth = png_get_bit_depth(png, info);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (depth == 16) png_set_strip_16(png);
    if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    if (color == PNG_COLOR_TYPE_RGB || color == PNG_COLOR_TYPE_RGB_ALPHA ||
        color == PNG_COLOR_TYPE_PALETTE)
        png_set_rgb_to_gray_fixed(png, 1, -1, -1);
    png_read_update_info(png, info);

    w = static_cast<int>(png_get_image_width(png, info));
    h = static_cast<int>(png_get_image_height(png, info));
    std::vector<uint8_t> data(static_cast<size_t>(w) * h);
    std::vector<png_bytep> rows(static_cast<size_t>(h));
    for (int r = 0; r < h; ++r) rows[static_cast<size_t>(r)] = data.data() + static_cast<size_t>(r) * w;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return data;
}

void write_png_gray8(const std::string& path, const std::vector<uint8_t>& data, int w, int h) {
    FilePtr f(std::fopen(path.c_str(), "wb"));
    if (!f) throw IoError("cannot write " + path);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError(path + ": PNG encode error");
    }
    png_init_io(png, f.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h), 8,
                 PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<png_bytep> rows(static_cast<size_t>(h));
    for (int r = 0; r < h; ++r)
        rows[static_cast<size_t>(r)] =
            const_cast<png_bytep>(data.data() + static_cast<size_t>(r) * w);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

} // namespace

Image load_png(const std::string& path) {
    int w = 0, h = 0;
    const auto data = read_png_gray8(path, w, h);
    Image img(w, h, Mode::Continuous);
    for (size_t i = 0; i < data.size(); ++i) img.pixels()[i] = data[i];
    return img;
}

void save_png(const std::string& path, const Image& img) {
    if (img.mode() != Mode::Continuous)
        throw ContractError("save_png: continuous image required");
    std::vector<uint8_t> data(static_cast<size_t>(img.size()));
    for (size_t i = 0; i < data.size(); ++i) data[i] = quantize_byte(img.pixels()[i]);
    write_png_gray8(path, data, img.width(), img.height());
}

void save_mask_png(const std::string& path, const std::vector<uint8_t>& mask,
                   int width, int height) {
    if (mask.size() != static_cast<size_t>(width) * height)
        throw ContractError("save_mask_png: mask size mismatch");
    std::vector<uint8_t> data(mask.size());
    for (size_t i = 0; i < mask.size(); ++i) data[i] = mask[i] ? 255 : 0;
    write_png_gray8(path, data, width, height);
}

Image load_image(const std::string& path, Mode mode) {
    if (has_suffix(path, ".csv")) {
        if (mode != Mode::Discrete)
            throw ContractError(path + ": CSV images are discrete");
        return load_discrete_csv(path);
    }
    if (has_suffix(path, ".pgm")) {
        if (mode != Mode::Continuous)
            throw ContractError(path + ": PGM images are continuous");
        return load_pgm(path);
    }
    if (has_suffix(path, ".png")) {
        if (mode != Mode::Continuous)
            throw ContractError(path + ": PNG images are continuous");
        return load_png(path);
    }
    throw IoError(path + ": unsupported image extension (expected .csv, .pgm, .png)");
}

void save_image(const std::string& path, const Image& img) {
    if (has_suffix(path, ".csv")) save_discrete_csv(path, img);
    else if (has_suffix(path, ".pgm")) save_pgm(path, img);
    else if (has_suffix(path, ".png")) save_png(path, img);
    else throw IoError(path + ": unsupported image extension");
}

} // namespace slads
