#include "reproj/warp.hpp"

#include <algorithm>
#include <cmath>

#include "reproj/errors.hpp"

namespace reproj {

namespace {

struct BilinearTaps {
    int x0, x1, y0, y1;
    double wx, wy;
};

// Clamp-before-interpolation: coordinates are clamped to the valid rectangle
// first, so border samples reduce to the closest border pixel with exact
// weights (1,0,0,0) at integer coordinates.
inline BilinearTaps taps_for(double u, double v, int w, int h) {
    u = std::clamp(u, 0.0, static_cast<double>(w - 1));
    v = std::clamp(v, 0.0, static_cast<double>(h - 1));
    BilinearTaps t;
    t.x0 = static_cast<int>(std::floor(u));
    t.y0 = static_cast<int>(std::floor(v));
    t.x1 = std::min(t.x0 + 1, w - 1);
    t.y1 = std::min(t.y0 + 1, h - 1);
    t.wx = u - t.x0;
    t.wy = v - t.y0;
    return t;
}

template <typename Buffer>
inline double lerp2(const Buffer& src, const BilinearTaps& t) {
    const double top = (1.0 - t.wx) * src.at(t.x0, t.y0) + t.wx * src.at(t.x1, t.y0);
    const double bot = (1.0 - t.wx) * src.at(t.x0, t.y1) + t.wx * src.at(t.x1, t.y1);
    return (1.0 - t.wy) * top + t.wy * bot;
}

}  // namespace

double bilinear_sample(const ScalarGrid& source, double u, double v) {
    return lerp2(source, taps_for(u, v, source.width, source.height));
}

double bilinear_sample_depth(const DepthMap& source, double u, double v) {
    return lerp2(source, taps_for(u, v, source.width, source.height));
}

void bilinear_sample_pixel(const ImageBuffer& source, double u, double v, double* out) {
    const BilinearTaps t = taps_for(u, v, source.width, source.height);
    for (int c = 0; c < source.channels; ++c) {
        const double top =
            (1.0 - t.wx) * source.at(t.x0, t.y0, c) + t.wx * source.at(t.x1, t.y0, c);
        const double bot =
            (1.0 - t.wx) * source.at(t.x0, t.y1, c) + t.wx * source.at(t.x1, t.y1, c);
        out[c] = (1.0 - t.wy) * top + t.wy * bot;
    }
}

ImageBuffer bilinear_sample(const ImageBuffer& source, const SampleGrid& grid) {
    if (source.width <= 0 || source.height <= 0)
        throw InvalidInputError("bilinear_sample requires a non-empty source");
    ImageBuffer out(source.channels, grid.width, grid.height);
    size_t i = 0;
    for (int y = 0; y < grid.height; ++y)
        for (int x = 0; x < grid.width; ++x, ++i)
            bilinear_sample_pixel(source, grid.u[i], grid.v[i],
                                  &out.values[i * source.channels]);
    return out;
}

double nearest_sample_depth(const DepthMap& source, double u, double v) {
    const int x = std::clamp(static_cast<int>(std::lround(u)), 0, source.width - 1);
    const int y = std::clamp(static_cast<int>(std::lround(v)), 0, source.height - 1);
    return source.at(x, y);
}

ReconstructResult reconstruct(const ImageBuffer& source_image, const DepthMap& target_depth,
                              const Intrinsics& k, const RigidTransform& t) {
    ReconstructResult r;
    r.grid = reproject(target_depth, k, t);
    r.image = bilinear_sample(source_image, r.grid);
    return r;
}

BinaryMask in_bounds_mask(const SampleGrid& grid, int source_width, int source_height) {
    BinaryMask mask(grid.width, grid.height);
    for (size_t i = 0; i < mask.values.size(); ++i) {
        const bool in = grid.u[i] >= 0.0 && grid.u[i] <= source_width - 1.0 &&
                        grid.v[i] >= 0.0 && grid.v[i] <= source_height - 1.0 &&
                        grid.z_proj[i] > 0.0;
        mask.values[i] = in ? 1 : 0;
    }
    return mask;
}

namespace {

template <typename Buffer>
Buffer resize_impl(const Buffer& source, int width, int height, int channels) {
    Buffer out = [&] {
        if constexpr (std::is_same_v<Buffer, ImageBuffer>)
            return ImageBuffer(channels, width, height);
        else
            return Buffer(width, height);
    }();
    const double sx = static_cast<double>(source.width) / width;
    const double sy = static_cast<double>(source.height) / height;
    for (int y = 0; y < height; ++y) {
        const double v = (y + 0.5) * sy - 0.5;
        for (int x = 0; x < width; ++x) {
            const double u = (x + 0.5) * sx - 0.5;
            if constexpr (std::is_same_v<Buffer, ImageBuffer>) {
                bilinear_sample_pixel(source, u, v,
                                      &out.values[(static_cast<size_t>(y) * width + x) * channels]);
            } else {
                const BilinearTaps t = taps_for(u, v, source.width, source.height);
                out.at(x, y) = lerp2(source, t);
            }
        }
    }
    return out;
}

}  // namespace

DepthMap resize_bilinear(const DepthMap& source, int width, int height) {
    if (width <= 0 || height <= 0) throw InvalidInputError("resize target must be positive");
    return resize_impl(source, width, height, 1);
}

ImageBuffer resize_bilinear(const ImageBuffer& source, int width, int height) {
    if (width <= 0 || height <= 0) throw InvalidInputError("resize target must be positive");
    return resize_impl(source, width, height, source.channels);
}

}  // namespace reproj
