#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "reproj/buffers.hpp"

namespace reproj {

// PFM, grayscale "Pf" variant: 32-bit IEEE-754 floats, bottom-up rows, scale
// line sign giving endianness. Written form is always "-1.0" (little-endian);
// big-endian files are accepted on read. NaN values and the color "PF"
// variant are rejected.

ScalarGrid read_pfm(const std::string& path);
void write_pfm(const std::string& path, const ScalarGrid& map);

DepthMap read_pfm_depth(const std::string& path);
void write_pfm_depth(const std::string& path, const DepthMap& map);

// 8-bit grayscale/RGB PNG; intensities map to [0,1] by /255 (255 -> 1.0
// exactly). Other bit depths are rejected.

ImageBuffer read_png(const std::string& path);
void write_png(const std::string& path, const ImageBuffer& image);

/// Masks render 0 -> black, 1 -> white.
void write_mask_png(const std::string& path, const BinaryMask& mask);
BinaryMask read_mask_png(const std::string& path);

/// 256-entry viridis colormap used for loss/depth panels.
extern const std::array<std::array<uint8_t, 3>, 256> kViridis;

/// Colormapped panel: values clamped to [lo,hi], mapped through kViridis.
void write_colormapped_png(const std::string& path, const ScalarGrid& map, double lo = 0.0,
                           double hi = 1.0);

}  // namespace reproj
