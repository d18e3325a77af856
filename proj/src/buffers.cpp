#include "reproj/buffers.hpp"

#include <cmath>

#include "reproj/errors.hpp"

namespace reproj {

ScalarGrid::ScalarGrid(int w, int h, double fill)
    : width(w), height(h), values(static_cast<size_t>(w) * h, fill) {
    if (w <= 0 || h <= 0) throw InvalidInputError("ScalarGrid dimensions must be positive");
}

DepthMap::DepthMap(int w, int h, double fill)
    : width(w), height(h), values(static_cast<size_t>(w) * h, fill) {
    if (w <= 0 || h <= 0) throw InvalidInputError("DepthMap dimensions must be positive");
}

void DepthMap::validate() const {
    for (double z : values) {
        if (!std::isfinite(z) || z <= 0.0)
            throw InvalidInputError("depth values must be finite and positive");
    }
}

DisparityMap DepthMap::to_disparity() const {
    DisparityMap d(width, height);
    for (size_t i = 0; i < values.size(); ++i) d.values[i] = 1.0 / values[i];
    return d;
}

ImageBuffer::ImageBuffer(int channels, int w, int h, double fill)
    : channels(channels), width(w), height(h),
      values(static_cast<size_t>(channels) * w * h, fill) {
    if (channels != 1 && channels != 3)
        throw InvalidInputError("ImageBuffer supports 1 or 3 channels");
    if (w <= 0 || h <= 0) throw InvalidInputError("ImageBuffer dimensions must be positive");
}

BinaryMask::BinaryMask(int w, int h, uint8_t fill)
    : width(w), height(h), values(static_cast<size_t>(w) * h, fill) {
    if (w <= 0 || h <= 0) throw InvalidInputError("BinaryMask dimensions must be positive");
}

double BinaryMask::agreement(const BinaryMask& other) const {
    if (width != other.width || height != other.height)
        throw InvalidInputError("mask dimensions differ");
    size_t same = 0;
    for (size_t i = 0; i < values.size(); ++i)
        if (values[i] == other.values[i]) ++same;
    return static_cast<double>(same) / static_cast<double>(values.size());
}

}  // namespace reproj
