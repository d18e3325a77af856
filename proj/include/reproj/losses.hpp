#pragma once

#include <string>
#include <vector>

#include "reproj/buffers.hpp"
#include "reproj/geometry.hpp"
#include "reproj/photometric.hpp"

namespace reproj {

enum class LossKind {
    average,
    min_reprojection,
    nonoccluded_average,
    nonoccluded_min,
};

LossKind loss_kind_from_string(const std::string& name);
std::string to_string(LossKind kind);

enum class DepthSampling { bilinear, nearest };

struct LossConfig {
    double lambda_smoothness = 0.001;
    double alpha = 0.85;
    double tolerance = 0.3;
    int scales = 4;
    LossKind loss_kind = LossKind::nonoccluded_min;

    /// lambda >= 0, alpha in [0,1], tolerance in [0,1), scales >= 1.
    void validate() const;
};

/// Occlusion mask from reprojected depth: a pixel is occluded (0) when the
/// depth sampled from the source prediction at (u,v) is closer than the
/// projected depth by more than the tolerance ratio,
///     z_sampled < z_proj * (1 - tolerance),
/// i.e. something nearer blocks the view. Out-of-image samples and
/// behind-camera projections are 0 as well; 1 otherwise.
BinaryMask occlusion_mask(const SampleGrid& grid, const DepthMap& source_depth, double tolerance,
                          DepthSampling sampling = DepthSampling::bilinear);

/// Stationary-pixel mask: 1 where the best warped error beats the best
/// unwarped error (strict), 0 otherwise. When occlusion penalties are given,
/// (1 - omega) is added to each warped error before the minimum, so regions
/// occluded in every source are suppressed too.
BinaryMask automask(const ImageBuffer& target, const std::vector<ImageBuffer>& sources,
                    const std::vector<ImageBuffer>& reconstructions, double alpha,
                    const std::vector<BinaryMask>* occlusion_penalties = nullptr);

/// Per-pixel minimum over the given error maps. The selection mask records the
/// chosen frame index (0 = first/previous); ties keep the first frame.
struct MinLossResult {
    LossMap loss;
    BinaryMask selection;
};
MinLossResult min_reprojection(const std::vector<LossMap>& pe_maps);

/// Average of the non-occluded errors: sum(omega * pe) / max(sum(omega), 1)
/// per pixel; pixels occluded everywhere contribute 0.
LossMap nonoccluded_average(const std::vector<LossMap>& pe_maps,
                            const std::vector<BinaryMask>& masks);

/// Per-pixel minimum of pe + (1 - omega). Requires pe <= 1 so the penalty
/// dominates; throws ContractViolation otherwise.
MinLossResult nonoccluded_min(const std::vector<LossMap>& pe_maps,
                              const std::vector<BinaryMask>& masks);

/// One adjacent frame's contribution to the loss at a single scale.
struct FrameObservation {
    ImageBuffer source_image;
    ImageBuffer reconstruction;
    SampleGrid grid;
    DepthMap source_depth;
};

/// Everything the loss needs at one scale. target_depth is the scale's depth
/// prediction upsampled to full resolution (see build_frame_set).
struct FrameSet {
    ImageBuffer target;
    DepthMap target_depth;
    std::vector<FrameObservation> frames;

    void validate() const;
};

/// Inputs for one adjacent frame when assembling a FrameSet.
struct SourceFrame {
    ImageBuffer image;
    DepthMap depth;
    RigidTransform target_to_source;
};

/// Upsample the scale's depth prediction to the target resolution, reproject,
/// and reconstruct each source. Source depths are upsampled likewise.
FrameSet build_frame_set(const ImageBuffer& target, const DepthMap& scale_depth,
                         const std::vector<SourceFrame>& sources, const Intrinsics& k);

struct ScaleDiagnostics {
    std::vector<LossMap> pe;          // per frame
    std::vector<BinaryMask> omega;    // per frame
    BinaryMask mu;                    // automask
    LossMap photometric;              // Lp before the automask
    BinaryMask selection;             // for min-style kinds
    double smoothness = 0.0;          // Ls
    double scale_loss = 0.0;          // lambda*Ls + mean(mu*Lp)
};

struct TotalLossResult {
    double loss = 0.0;
    std::vector<ScaleDiagnostics> scales;
};

/// Total training loss, averaged over pixels and scales:
/// per scale, lambda * Ls + mean(mu * Lp) with Lp per the configured kind.
/// The nonoccluded_min kind also feeds (1 - omega) into the automask.
TotalLossResult total_loss(const std::vector<FrameSet>& frame_set_per_scale,
                           const LossConfig& config);

/// Map a normalized disparity in [0,1] to metric depth:
/// depth = 1 / (1/max_depth + disp * (1/min_depth - 1/max_depth)).
DepthMap disparity_to_depth(const DisparityMap& disp, double min_depth, double max_depth);

}  // namespace reproj
