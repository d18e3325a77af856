#pragma once

#include "reproj/buffers.hpp"

namespace reproj {

/// Per-pixel SSIM in [-1,1] over a 3x3 box window with reflection padding.
/// Stabilization constants C1 = 0.01^2, C2 = 0.03^2 on a [0,1] dynamic range.
/// Multi-channel images are scored per channel and averaged.
LossMap ssim_map(const ImageBuffer& a, const ImageBuffer& b);

/// pe = alpha * (1 - SSIM)/2 + (1 - alpha) * |a - b|_1, the L1 term averaged
/// over channels. Output clamped to [0,1] against rounding at the SSIM edge.
LossMap photometric_error(const ImageBuffer& a, const ImageBuffer& b, double alpha);

inline constexpr double kDefaultAlpha = 0.85;

/// Edge-aware smoothness of the mean-normalized disparity:
/// mean |dx d*| e^-|dx I| + mean |dy d*| e^-|dy I|, forward differences, the
/// last column (resp. row) dropped from each mean; image gradients averaged
/// over channels. Invariant under positive scaling of the disparity.
double smoothness_loss(const DisparityMap& disparity, const ImageBuffer& image);

}  // namespace reproj
