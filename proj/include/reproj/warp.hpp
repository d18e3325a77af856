#pragma once

#include "reproj/buffers.hpp"
#include "reproj/geometry.hpp"

namespace reproj {

/// Bilinear lookup with coordinates clamped to [0,w-1]x[0,h-1] before the
/// interpolation weights are computed, so out-of-image samples return the
/// closest border pixel. Integer coordinates return the pixel value exactly.
double bilinear_sample(const ScalarGrid& source, double u, double v);
double bilinear_sample_depth(const DepthMap& source, double u, double v);
void bilinear_sample_pixel(const ImageBuffer& source, double u, double v, double* out);

/// Sample a whole image at the grid's (u,v) locations. Output has the grid's
/// dimensions and the source's channel count.
ImageBuffer bilinear_sample(const ImageBuffer& source, const SampleGrid& grid);

/// Nearest-neighbor variant, used by the occlusion test when depth blending at
/// edges is unwanted.
double nearest_sample_depth(const DepthMap& source, double u, double v);

/// Warp the source image into the target frame: bilinear_sample over
/// reproject(target_depth, k, t). The grid is returned alongside since its
/// z_proj feeds the occlusion mask.
struct ReconstructResult {
    ImageBuffer image;
    SampleGrid grid;
};
ReconstructResult reconstruct(const ImageBuffer& source_image, const DepthMap& target_depth,
                              const Intrinsics& k, const RigidTransform& t);

/// 1 where 0 <= u <= w-1, 0 <= v <= h-1 and z_proj > 0; 0 otherwise.
BinaryMask in_bounds_mask(const SampleGrid& grid, int source_width, int source_height);

/// Bilinear resize (align_corners=false convention: source coordinate of
/// output pixel x is (x+0.5)*w_src/w_dst - 0.5, clamped). Used to upsample
/// per-scale depth maps to full resolution.
DepthMap resize_bilinear(const DepthMap& source, int width, int height);
ImageBuffer resize_bilinear(const ImageBuffer& source, int width, int height);

}  // namespace reproj
