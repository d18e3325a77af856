#pragma once

#include <cstdint>
#include <vector>

namespace reproj {

/// Single-channel scalar field on a pixel grid, row-major.
struct ScalarGrid {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    ScalarGrid() = default;
    ScalarGrid(int w, int h, double fill = 0.0);

    double& at(int x, int y) { return values[static_cast<size_t>(y) * width + x]; }
    double at(int x, int y) const { return values[static_cast<size_t>(y) * width + x]; }
    size_t size() const { return values.size(); }
    bool same_shape(const ScalarGrid& other) const {
        return width == other.width && height == other.height;
    }
};

/// Per-pixel loss values; nonnegative by construction of the producing ops.
using LossMap = ScalarGrid;

/// Inverse depth (1/meters), or a normalized disparity in [0,1] when used as a
/// network-style prediction.
using DisparityMap = ScalarGrid;

/// Per-pixel metric depth in meters. Values must stay positive and finite.
struct DepthMap {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    DepthMap() = default;
    DepthMap(int w, int h, double fill = 1.0);

    double& at(int x, int y) { return values[static_cast<size_t>(y) * width + x]; }
    double at(int x, int y) const { return values[static_cast<size_t>(y) * width + x]; }
    size_t size() const { return values.size(); }

    /// Throws InvalidInputError unless every value is finite and > 0.
    void validate() const;

    /// Elementwise 1/depth. Exact: disparity.at(x,y) == 1.0 / at(x,y).
    DisparityMap to_disparity() const;
};

/// Multi-channel image, interleaved row-major; photometric inputs live in [0,1].
struct ImageBuffer {
    int channels = 0;
    int width = 0;
    int height = 0;
    std::vector<double> values;

    ImageBuffer() = default;
    ImageBuffer(int channels, int w, int h, double fill = 0.0);

    double& at(int x, int y, int c) {
        return values[(static_cast<size_t>(y) * width + x) * channels + c];
    }
    double at(int x, int y, int c) const {
        return values[(static_cast<size_t>(y) * width + x) * channels + c];
    }
    size_t pixel_count() const { return static_cast<size_t>(width) * height; }
    bool same_shape(const ImageBuffer& other) const {
        return channels == other.channels && width == other.width && height == other.height;
    }
};

/// Strictly binary per-pixel mask. 1 = usable/selected, 0 = masked out.
/// Selection maps reuse this storage with values holding the chosen frame index.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> values;

    BinaryMask() = default;
    BinaryMask(int w, int h, uint8_t fill = 0);

    uint8_t& at(int x, int y) { return values[static_cast<size_t>(y) * width + x]; }
    uint8_t at(int x, int y) const { return values[static_cast<size_t>(y) * width + x]; }
    size_t size() const { return values.size(); }

    /// Fraction of pixels equal between two masks of the same shape.
    double agreement(const BinaryMask& other) const;
};

}  // namespace reproj
