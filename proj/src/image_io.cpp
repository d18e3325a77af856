#include "reproj/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <vector>

#include "reproj/errors.hpp"

namespace reproj {

namespace {

void swap_float_bytes(std::vector<float>& data) {
    for (float& f : data) {
        uint32_t bits;
        std::memcpy(&bits, &f, 4);
        bits = __builtin_bswap32(bits);
        std::memcpy(&f, &bits, 4);
    }
}

constexpr bool host_little_endian() { return std::endian::native == std::endian::little; }

std::string next_token(std::istream& in) {
    std::string tok;
    in >> tok;
    return tok;
}

}  // namespace

ScalarGrid read_pfm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInputError("cannot open PFM: " + path);
    const std::string magic = next_token(in);
    if (magic == "PF")
        throw InvalidInputError("color PFM not supported (wrong channel count): " + path);
    if (magic != "Pf") throw InvalidInputError("malformed PFM header: " + path);
    int w = 0, h = 0;
    double scale = 0.0;
    if (!(in >> w >> h >> scale) || w <= 0 || h <= 0 || scale == 0.0)
        throw InvalidInputError("malformed PFM header: " + path);
    in.get();  // single whitespace separating header from data
    std::vector<float> data(static_cast<size_t>(w) * h);
    in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size() * 4));
    if (!in) throw InvalidInputError("truncated PFM data: " + path);
    const bool file_little = scale < 0.0;
    if (file_little != host_little_endian()) swap_float_bytes(data);

    ScalarGrid grid(w, h);
    // PFM rows are stored bottom-up.
    for (int y = 0; y < h; ++y) {
        const float* row = data.data() + static_cast<size_t>(h - 1 - y) * w;
        for (int x = 0; x < w; ++x) {
            const float f = row[x];
            if (std::isnan(f)) throw InvalidInputError("PFM contains NaN: " + path);
            grid.at(x, y) = f;
        }
    }
    return grid;
}

void write_pfm(const std::string& path, const ScalarGrid& map) {
    if (map.width <= 0 || map.height <= 0)
        throw InvalidInputError("cannot write empty PFM: " + path);
    for (double v : map.values)
        if (std::isnan(v)) throw InvalidInputError("refusing to write NaN to PFM: " + path);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInputError("cannot write PFM: " + path);
    out << "Pf\n" << map.width << " " << map.height << "\n-1.0\n";
    std::vector<float> row(map.width);
    for (int y = map.height - 1; y >= 0; --y) {
        for (int x = 0; x < map.width; ++x) row[x] = static_cast<float>(map.at(x, y));
        if (!host_little_endian()) swap_float_bytes(row);
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(row.size() * 4));
    }
    if (!out) throw InvalidInputError("failed writing PFM: " + path);
}

DepthMap read_pfm_depth(const std::string& path) {
    const ScalarGrid grid = read_pfm(path);
    DepthMap depth(grid.width, grid.height);
    depth.values = grid.values;
    depth.validate();
    return depth;
}

void write_pfm_depth(const std::string& path, const DepthMap& map) {
    ScalarGrid grid(map.width, map.height);
    grid.values = map.values;
    write_pfm(path, grid);
}

ImageBuffer read_png(const std::string& path) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.c_str()))
        throw InvalidInputError("cannot read PNG: " + path + ": " + image.message);
    if (image.format & PNG_FORMAT_FLAG_LINEAR) {
        png_image_free(&image);
        throw InvalidInputError("unsupported PNG bit depth (16-bit): " + path);
    }
    const bool color = image.format & PNG_FORMAT_FLAG_COLOR;
    image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    const int channels = color ? 3 : 1;
    std::vector<uint8_t> bytes(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, bytes.data(), 0, nullptr)) {
        const std::string msg = image.message;
        png_image_free(&image);
        throw InvalidInputError("cannot decode PNG: " + path + ": " + msg);
    }
    ImageBuffer out(channels, static_cast<int>(image.width), static_cast<int>(image.height));
    for (size_t i = 0; i < bytes.size(); ++i) out.values[i] = bytes[i] / 255.0;
    return out;
}

namespace {

void write_png_bytes(const std::string& path, const uint8_t* bytes, int width, int height,
                     int channels) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(width);
    image.height = static_cast<png_uint_32>(height);
    image.format = channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    if (!png_image_write_to_file(&image, path.c_str(), 0, bytes, 0, nullptr))
        throw InvalidInputError("cannot write PNG: " + path + ": " + image.message);
}

uint8_t quantize(double v) {
    return static_cast<uint8_t>(std::clamp(std::lround(v * 255.0), 0L, 255L));
}

}  // namespace

void write_png(const std::string& path, const ImageBuffer& image) {
    if (image.channels != 1 && image.channels != 3)
        throw InvalidInputError("PNG output needs 1 or 3 channels");
    std::vector<uint8_t> bytes(image.values.size());
    for (size_t i = 0; i < bytes.size(); ++i) bytes[i] = quantize(image.values[i]);
    write_png_bytes(path, bytes.data(), image.width, image.height, image.channels);
}

void write_mask_png(const std::string& path, const BinaryMask& mask) {
    std::vector<uint8_t> bytes(mask.values.size());
    for (size_t i = 0; i < bytes.size(); ++i) bytes[i] = mask.values[i] ? 255 : 0;
    write_png_bytes(path, bytes.data(), mask.width, mask.height, 1);
}

BinaryMask read_mask_png(const std::string& path) {
    const ImageBuffer img = read_png(path);
    if (img.channels != 1) throw InvalidInputError("mask PNG must be grayscale: " + path);
    BinaryMask mask(img.width, img.height);
    for (size_t i = 0; i < mask.values.size(); ++i) mask.values[i] = img.values[i] >= 0.5 ? 1 : 0;
    return mask;
}

void write_colormapped_png(const std::string& path, const ScalarGrid& map, double lo, double hi) {
    if (!(hi > lo)) throw InvalidInputError("colormap range must satisfy hi > lo");
    std::vector<uint8_t> bytes(map.values.size() * 3);
    for (size_t i = 0; i < map.values.size(); ++i) {
        const double t = std::clamp((map.values[i] - lo) / (hi - lo), 0.0, 1.0);
        const auto& rgb = kViridis[static_cast<size_t>(std::lround(t * 255.0))];
        bytes[i * 3 + 0] = rgb[0];
        bytes[i * 3 + 1] = rgb[1];
        bytes[i * 3 + 2] = rgb[2];
    }
    write_png_bytes(path, bytes.data(), map.width, map.height, 3);
}

}  // namespace reproj
