#include "reproj/losses.hpp"

#include <algorithm>
#include <cmath>

#include "reproj/errors.hpp"
#include "reproj/warp.hpp"

namespace reproj {

LossKind loss_kind_from_string(const std::string& name) {
    if (name == "average") return LossKind::average;
    if (name == "min_reprojection") return LossKind::min_reprojection;
    if (name == "nonoccluded_average") return LossKind::nonoccluded_average;
    if (name == "nonoccluded_min") return LossKind::nonoccluded_min;
    throw InvalidInputError("unknown loss_kind: " + name);
}

std::string to_string(LossKind kind) {
    switch (kind) {
        case LossKind::average: return "average";
        case LossKind::min_reprojection: return "min_reprojection";
        case LossKind::nonoccluded_average: return "nonoccluded_average";
        case LossKind::nonoccluded_min: return "nonoccluded_min";
    }
    throw InvalidInputError("unknown loss kind value");
}

void LossConfig::validate() const {
    if (!(lambda_smoothness >= 0.0)) throw InvalidInputError("lambda_smoothness must be >= 0");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidInputError("alpha must lie in [0,1]");
    if (!(tolerance >= 0.0 && tolerance < 1.0))
        throw InvalidInputError("tolerance must lie in [0,1)");
    if (scales < 1) throw InvalidInputError("scales must be >= 1");
}

BinaryMask occlusion_mask(const SampleGrid& grid, const DepthMap& source_depth, double tolerance,
                          DepthSampling sampling) {
    if (!(tolerance >= 0.0 && tolerance < 1.0))
        throw InvalidInputError("tolerance must lie in [0,1)");
    BinaryMask mask(grid.width, grid.height);
    const double w_max = source_depth.width - 1.0;
    const double h_max = source_depth.height - 1.0;
    for (size_t i = 0; i < mask.values.size(); ++i) {
        const double u = grid.u[i];
        const double v = grid.v[i];
        const double z = grid.z_proj[i];
        if (z <= 0.0 || u < 0.0 || u > w_max || v < 0.0 || v > h_max) {
            mask.values[i] = 0;
            continue;
        }
        const double sampled = sampling == DepthSampling::bilinear
                                   ? bilinear_sample_depth(source_depth, u, v)
                                   : nearest_sample_depth(source_depth, u, v);
        mask.values[i] = sampled < z * (1.0 - tolerance) ? 0 : 1;
    }
    return mask;
}

namespace {

void check_same_shape(const ImageBuffer& a, const ImageBuffer& b, const char* what) {
    if (!a.same_shape(b)) throw InvalidInputError(std::string(what) + ": shape mismatch");
}

}  // namespace

BinaryMask automask(const ImageBuffer& target, const std::vector<ImageBuffer>& sources,
                    const std::vector<ImageBuffer>& reconstructions, double alpha,
                    const std::vector<BinaryMask>* occlusion_penalties) {
    if (sources.empty() || sources.size() != reconstructions.size())
        throw InvalidInputError("automask needs one reconstruction per source");
    if (occlusion_penalties && occlusion_penalties->size() != sources.size())
        throw InvalidInputError("automask needs one occlusion mask per source");

    std::vector<LossMap> unwarped, warped;
    for (size_t f = 0; f < sources.size(); ++f) {
        check_same_shape(target, sources[f], "automask source");
        check_same_shape(target, reconstructions[f], "automask reconstruction");
        unwarped.push_back(photometric_error(target, sources[f], alpha));
        warped.push_back(photometric_error(target, reconstructions[f], alpha));
    }

    BinaryMask mu(target.width, target.height);
    for (size_t i = 0; i < mu.values.size(); ++i) {
        double min_unwarped = unwarped[0].values[i];
        double min_warped = warped[0].values[i] +
                            (occlusion_penalties ? 1.0 - (*occlusion_penalties)[0].values[i] : 0.0);
        for (size_t f = 1; f < sources.size(); ++f) {
            min_unwarped = std::min(min_unwarped, unwarped[f].values[i]);
            double e = warped[f].values[i];
            if (occlusion_penalties) e += 1.0 - (*occlusion_penalties)[f].values[i];
            min_warped = std::min(min_warped, e);
        }
        mu.values[i] = min_unwarped > min_warped ? 1 : 0;
    }
    return mu;
}

MinLossResult min_reprojection(const std::vector<LossMap>& pe_maps) {
    if (pe_maps.empty()) throw InvalidInputError("min_reprojection needs at least one map");
    for (const auto& m : pe_maps)
        if (!m.same_shape(pe_maps.front()))
            throw InvalidInputError("min_reprojection maps must share shape");

    MinLossResult r{LossMap(pe_maps[0].width, pe_maps[0].height),
                    BinaryMask(pe_maps[0].width, pe_maps[0].height)};
    for (size_t i = 0; i < r.loss.values.size(); ++i) {
        double best = pe_maps[0].values[i];
        uint8_t pick = 0;
        for (size_t f = 1; f < pe_maps.size(); ++f) {
            if (pe_maps[f].values[i] < best) {
                best = pe_maps[f].values[i];
                pick = static_cast<uint8_t>(f);
            }
        }
        r.loss.values[i] = best;
        r.selection.values[i] = pick;
    }
    return r;
}

LossMap nonoccluded_average(const std::vector<LossMap>& pe_maps,
                            const std::vector<BinaryMask>& masks) {
    if (pe_maps.empty() || pe_maps.size() != masks.size())
        throw InvalidInputError("nonoccluded_average needs one mask per map");
    LossMap out(pe_maps[0].width, pe_maps[0].height);
    for (size_t f = 0; f < pe_maps.size(); ++f)
        if (!pe_maps[f].same_shape(pe_maps[0]) || masks[f].width != pe_maps[0].width ||
            masks[f].height != pe_maps[0].height)
            throw InvalidInputError("nonoccluded_average shapes must agree");
    for (size_t i = 0; i < out.values.size(); ++i) {
        double weighted = 0.0;
        double count = 0.0;
        for (size_t f = 0; f < pe_maps.size(); ++f) {
            weighted += masks[f].values[i] * pe_maps[f].values[i];
            count += masks[f].values[i];
        }
        out.values[i] = weighted / std::max(count, 1.0);
    }
    return out;
}

MinLossResult nonoccluded_min(const std::vector<LossMap>& pe_maps,
                              const std::vector<BinaryMask>& masks) {
    if (pe_maps.empty() || pe_maps.size() != masks.size())
        throw InvalidInputError("nonoccluded_min needs one mask per map");
    for (size_t f = 0; f < pe_maps.size(); ++f) {
        if (!pe_maps[f].same_shape(pe_maps[0]) || masks[f].width != pe_maps[0].width ||
            masks[f].height != pe_maps[0].height)
            throw InvalidInputError("nonoccluded_min shapes must agree");
        for (double v : pe_maps[f].values)
            if (v > 1.0)
                throw ContractViolation(
                    "photometric error above 1: the occlusion penalty no longer dominates");
    }

    MinLossResult r{LossMap(pe_maps[0].width, pe_maps[0].height),
                    BinaryMask(pe_maps[0].width, pe_maps[0].height)};
    for (size_t i = 0; i < r.loss.values.size(); ++i) {
        double best = pe_maps[0].values[i] + (1.0 - masks[0].values[i]);
        uint8_t pick = 0;
        for (size_t f = 1; f < pe_maps.size(); ++f) {
            const double e = pe_maps[f].values[i] + (1.0 - masks[f].values[i]);
            if (e < best) {
                best = e;
                pick = static_cast<uint8_t>(f);
            }
        }
        r.loss.values[i] = best;
        r.selection.values[i] = pick;
    }
    return r;
}

void FrameSet::validate() const {
    if (frames.empty()) throw InvalidInputError("FrameSet needs at least one adjacent frame");
    if (target.width != target_depth.width || target.height != target_depth.height)
        throw InvalidInputError("FrameSet target depth dimensions must match the target image");
    for (const auto& f : frames) {
        if (!f.source_image.same_shape(target) || !f.reconstruction.same_shape(target) ||
            f.grid.width != target.width || f.grid.height != target.height)
            throw InvalidInputError("FrameSet buffers must share the target dimensions");
    }
}

FrameSet build_frame_set(const ImageBuffer& target, const DepthMap& scale_depth,
                         const std::vector<SourceFrame>& sources, const Intrinsics& k) {
    FrameSet fs;
    fs.target = target;
    fs.target_depth = (scale_depth.width == target.width && scale_depth.height == target.height)
                          ? scale_depth
                          : resize_bilinear(scale_depth, target.width, target.height);
    for (const auto& s : sources) {
        FrameObservation obs;
        obs.source_image = s.image;
        obs.source_depth =
            (s.depth.width == target.width && s.depth.height == target.height)
                ? s.depth
                : resize_bilinear(s.depth, target.width, target.height);
        auto rec = reconstruct(s.image, fs.target_depth, k, s.target_to_source);
        obs.reconstruction = std::move(rec.image);
        obs.grid = std::move(rec.grid);
        fs.frames.push_back(std::move(obs));
    }
    fs.validate();
    return fs;
}

TotalLossResult total_loss(const std::vector<FrameSet>& frame_set_per_scale,
                           const LossConfig& config) {
    config.validate();
    if (frame_set_per_scale.empty()) throw InvalidInputError("total_loss needs at least one scale");
    if (static_cast<int>(frame_set_per_scale.size()) != config.scales)
        throw InvalidInputError("total_loss needs one frame set per configured scale");

    TotalLossResult result;
    double loss_sum = 0.0;
    for (const auto& fs : frame_set_per_scale) {
        fs.validate();
        ScaleDiagnostics diag;

        std::vector<ImageBuffer> sources, recons;
        for (const auto& f : fs.frames) {
            diag.pe.push_back(photometric_error(fs.target, f.reconstruction, config.alpha));
            diag.omega.push_back(occlusion_mask(f.grid, f.source_depth, config.tolerance));
            sources.push_back(f.source_image);
            recons.push_back(f.reconstruction);
        }

        switch (config.loss_kind) {
            case LossKind::average: {
                LossMap lp(fs.target.width, fs.target.height);
                for (size_t i = 0; i < lp.values.size(); ++i) {
                    double s = 0.0;
                    for (const auto& pe : diag.pe) s += pe.values[i];
                    lp.values[i] = s / diag.pe.size();
                }
                diag.photometric = std::move(lp);
                break;
            }
            case LossKind::min_reprojection: {
                auto r = min_reprojection(diag.pe);
                diag.photometric = std::move(r.loss);
                diag.selection = std::move(r.selection);
                break;
            }
            case LossKind::nonoccluded_average:
                diag.photometric = nonoccluded_average(diag.pe, diag.omega);
                break;
            case LossKind::nonoccluded_min: {
                auto r = nonoccluded_min(diag.pe, diag.omega);
                diag.photometric = std::move(r.loss);
                diag.selection = std::move(r.selection);
                break;
            }
        }

        const bool penalize = config.loss_kind == LossKind::nonoccluded_min;
        diag.mu = automask(fs.target, sources, recons, config.alpha,
                           penalize ? &diag.omega : nullptr);

        diag.smoothness = smoothness_loss(fs.target_depth.to_disparity(), fs.target);

        double masked_sum = 0.0;
        for (size_t i = 0; i < diag.photometric.values.size(); ++i)
            masked_sum += diag.mu.values[i] * diag.photometric.values[i];
        diag.scale_loss = config.lambda_smoothness * diag.smoothness +
                          masked_sum / static_cast<double>(diag.photometric.values.size());

        loss_sum += diag.scale_loss;
        result.scales.push_back(std::move(diag));
    }
    result.loss = loss_sum / static_cast<double>(frame_set_per_scale.size());
    return result;
}

DepthMap disparity_to_depth(const DisparityMap& disp, double min_depth, double max_depth) {
    if (!(min_depth > 0.0) || !(min_depth < max_depth))
        throw InvalidInputError("need 0 < min_depth < max_depth");
    const double inv_max = 1.0 / max_depth;
    const double inv_min = 1.0 / min_depth;
    DepthMap out(disp.width, disp.height);
    for (size_t i = 0; i < disp.values.size(); ++i) {
        const double d = disp.values[i];
        if (!(d >= 0.0 && d <= 1.0))
            throw InvalidInputError("normalized disparity must lie in [0,1]");
        out.values[i] = 1.0 / (inv_max + d * (inv_min - inv_max));
    }
    return out;
}

}  // namespace reproj
