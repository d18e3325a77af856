#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "reproj/errors.hpp"
#include "reproj/json_io.hpp"
#include "reproj/losses.hpp"
#include "reproj/warp.hpp"

using namespace reproj;
using reproj::testing::TestRng;

namespace {

SampleGrid single_pixel_grid(double u, double v, double z) {
    SampleGrid g(1, 1);
    g.u[0] = u;
    g.v[0] = v;
    g.z_proj[0] = z;
    return g;
}

LossMap loss_of(int w, int h, std::initializer_list<double> vals) {
    LossMap m(w, h);
    std::copy(vals.begin(), vals.end(), m.values.begin());
    return m;
}

BinaryMask mask_of(int w, int h, std::initializer_list<int> vals) {
    BinaryMask m(w, h);
    size_t i = 0;
    for (int v : vals) m.values[i++] = static_cast<uint8_t>(v);
    return m;
}

}  // namespace

TEST_CASE("occlusion mask scalar cases") {
    DepthMap source(3, 3, 1.0);

    // Consistent depths under identity motion: visible for any tolerance > 0.
    source.at(1, 1) = 2.0;
    CHECK(occlusion_mask(single_pixel_grid(1, 1, 2.0), source, 0.3).values[0] == 1);

    // Sampled 1.0 against expected 2.0: 1.0 < 1.4, occluded.
    source.at(1, 1) = 1.0;
    CHECK(occlusion_mask(single_pixel_grid(1, 1, 2.0), source, 0.3).values[0] == 0);

    // Sampled 1.9 against expected 2.0: 1.9 >= 1.4, visible.
    source.at(1, 1) = 1.9;
    CHECK(occlusion_mask(single_pixel_grid(1, 1, 2.0), source, 0.3).values[0] == 1);

    // Out of image or behind the camera.
    CHECK(occlusion_mask(single_pixel_grid(-0.5, 1, 2.0), source, 0.3).values[0] == 0);
    CHECK(occlusion_mask(single_pixel_grid(1, 2.25, 2.0), source, 0.3).values[0] == 0);
    CHECK(occlusion_mask(single_pixel_grid(kBehindCameraSentinel, kBehindCameraSentinel, -2.0),
                         source, 0.3)
              .values[0] == 0);

    CHECK_THROWS_AS(occlusion_mask(single_pixel_grid(1, 1, 2.0), source, 1.0), InvalidInputError);
}

TEST_CASE("occlusion mask under identity reprojection is all ones in bounds") {
    TestRng rng(41);
    const Intrinsics k(100, 100, 7.5, 5.5);
    DepthMap depth = reproj::testing::noise_depth(rng, 16, 12, 1.0, 30.0);
    const SampleGrid grid = reproject(depth, k, RigidTransform::identity());
    for (double tol : {0.05, 0.3, 0.9}) {
        const BinaryMask mask = occlusion_mask(grid, depth, tol);
        for (uint8_t v : mask.values) CHECK(v == 1);
    }
}

TEST_CASE("occlusion mask is monotone in tolerance") {
    TestRng rng(42);
    const Intrinsics k(80, 80, 10, 8);
    DepthMap target = reproj::testing::noise_depth(rng, 20, 16, 2.0, 10.0);
    DepthMap source = reproj::testing::noise_depth(rng, 20, 16, 2.0, 10.0);
    const RigidTransform t(Eigen::Matrix3d::Identity(), Eigen::Vector3d(-0.4, 0.05, 0.1));
    const SampleGrid grid = reproject(target, k, t);

    BinaryMask prev = occlusion_mask(grid, source, 0.0);
    for (double tol : {0.1, 0.3, 0.6, 0.95}) {
        const BinaryMask cur = occlusion_mask(grid, source, tol);
        for (size_t i = 0; i < cur.values.size(); ++i)
            if (prev.values[i] == 1) CHECK(cur.values[i] == 1);
        prev = cur;
    }

    // Nearest-neighbor sampling variant stays binary and respects bounds.
    const BinaryMask nn = occlusion_mask(grid, source, 0.3, DepthSampling::nearest);
    for (uint8_t v : nn.values) CHECK((v == 0 || v == 1));
}

TEST_CASE("automask stationary and perfect-reconstruction cases") {
    TestRng rng(43);
    const ImageBuffer target = reproj::testing::noise_image(rng, 3, 12, 8);
    ImageBuffer other = reproj::testing::noise_image(rng, 3, 12, 8);

    // Duplicated frames (static camera): the unwarped error is zero, never
    // strictly greater than anything.
    const BinaryMask stationary =
        automask(target, {target, target}, {other, other}, kDefaultAlpha);
    for (uint8_t v : stationary.values) CHECK(v == 0);

    // Perfect reconstructions with nonzero unwarped error.
    const BinaryMask moving = automask(target, {other, other}, {target, target}, kDefaultAlpha);
    const LossMap unwarped = photometric_error(target, other, kDefaultAlpha);
    for (size_t i = 0; i < moving.values.size(); ++i)
        CHECK(moving.values[i] == (unwarped.values[i] > 0.0 ? 1 : 0));
}

TEST_CASE("automask suppresses doubly occluded regions via penalties") {
    TestRng rng(44);
    const ImageBuffer target = reproj::testing::noise_image(rng, 1, 6, 6);
    const ImageBuffer source = reproj::testing::noise_image(rng, 1, 6, 6);
    // Perfect reconstructions would win everywhere without penalties.
    const std::vector<ImageBuffer> recons{target, target};
    const std::vector<ImageBuffer> sources{source, source};

    const std::vector<BinaryMask> occluded{BinaryMask(6, 6, 0), BinaryMask(6, 6, 0)};
    const BinaryMask mu = automask(target, sources, recons, kDefaultAlpha, &occluded);
    // Right-hand minimum is >= 1, unwarped pe is <= 1: never strictly greater.
    for (uint8_t v : mu.values) CHECK(v == 0);

    const std::vector<BinaryMask> visible{BinaryMask(6, 6, 1), BinaryMask(6, 6, 1)};
    const BinaryMask mu2 = automask(target, sources, recons, kDefaultAlpha, &visible);
    const LossMap unwarped = photometric_error(target, source, kDefaultAlpha);
    for (size_t i = 0; i < mu2.values.size(); ++i)
        CHECK(mu2.values[i] == (unwarped.values[i] > 0.0 ? 1 : 0));
}

TEST_CASE("automask ignores the order of adjacent frames") {
    TestRng rng(45);
    const ImageBuffer target = reproj::testing::noise_image(rng, 3, 10, 7);
    const ImageBuffer s1 = reproj::testing::noise_image(rng, 3, 10, 7);
    const ImageBuffer s2 = reproj::testing::noise_image(rng, 3, 10, 7);
    const ImageBuffer r1 = reproj::testing::noise_image(rng, 3, 10, 7);
    const ImageBuffer r2 = reproj::testing::noise_image(rng, 3, 10, 7);
    const BinaryMask a = automask(target, {s1, s2}, {r1, r2}, kDefaultAlpha);
    const BinaryMask b = automask(target, {s2, s1}, {r2, r1}, kDefaultAlpha);
    CHECK(a.values == b.values);
}

TEST_CASE("min reprojection choice and tie-break") {
    const auto r = min_reprojection({loss_of(1, 1, {0.2}), loss_of(1, 1, {0.5})});
    CHECK(r.loss.values[0] == 0.2);
    CHECK(r.selection.values[0] == 0);

    const auto tie = min_reprojection({loss_of(1, 1, {0.3}), loss_of(1, 1, {0.3})});
    CHECK(tie.loss.values[0] == 0.3);
    CHECK(tie.selection.values[0] == 0);  // first frame wins ties

    const auto single = min_reprojection({loss_of(1, 1, {0.7})});
    CHECK(single.loss.values[0] == 0.7);

    CHECK_THROWS_AS(min_reprojection({}), InvalidInputError);
}

TEST_CASE("nonoccluded average three-way table") {
    const std::vector<LossMap> pes{loss_of(1, 1, {0.2}), loss_of(1, 1, {0.4})};
    CHECK(nonoccluded_average(pes, {mask_of(1, 1, {1}), mask_of(1, 1, {1})}).values[0] ==
          doctest::Approx(0.3));
    CHECK(nonoccluded_average(pes, {mask_of(1, 1, {0}), mask_of(1, 1, {1})}).values[0] == 0.4);
    CHECK(nonoccluded_average(pes, {mask_of(1, 1, {0}), mask_of(1, 1, {0})}).values[0] == 0.0);
}

TEST_CASE("nonoccluded min penalty cases") {
    const std::vector<LossMap> pes{loss_of(1, 1, {0.2}), loss_of(1, 1, {0.5})};

    const auto both = nonoccluded_min(pes, {mask_of(1, 1, {1}), mask_of(1, 1, {1})});
    CHECK(both.loss.values[0] == 0.2);
    CHECK(both.selection.values[0] == 0);

    const auto first_occluded = nonoccluded_min(pes, {mask_of(1, 1, {0}), mask_of(1, 1, {1})});
    CHECK(first_occluded.loss.values[0] == 0.5);  // min(1.2, 0.5)
    CHECK(first_occluded.selection.values[0] == 1);

    const auto both_occluded = nonoccluded_min(pes, {mask_of(1, 1, {0}), mask_of(1, 1, {0})});
    CHECK(both_occluded.loss.values[0] == doctest::Approx(1.2));

    CHECK_THROWS_AS(nonoccluded_min({loss_of(1, 1, {1.5})}, {mask_of(1, 1, {1})}),
                    ContractViolation);
}

TEST_CASE("nonoccluded min degenerates to min reprojection when all visible") {
    TestRng rng(46);
    std::vector<LossMap> pes;
    std::vector<BinaryMask> masks;
    for (int f = 0; f < 2; ++f) {
        LossMap m(9, 6);
        for (auto& v : m.values) v = rng.uniform(0.0, 1.0);
        pes.push_back(std::move(m));
        masks.emplace_back(9, 6, 1);
    }
    const auto plain = min_reprojection(pes);
    const auto masked = nonoccluded_min(pes, masks);
    CHECK(plain.loss.values == masked.loss.values);
    CHECK(plain.selection.values == masked.selection.values);

    // One mask up, the other down: the average equals the surviving map.
    const LossMap avg = nonoccluded_average(pes, {masks[0], BinaryMask(9, 6, 0)});
    CHECK(avg.values == pes[0].values);
}

TEST_CASE("disparity_to_depth endpoints and monotonicity") {
    DisparityMap disp(3, 1);
    disp.values = {0.0, 0.5, 1.0};
    const DepthMap depth = disparity_to_depth(disp, 0.1, 100.0);
    CHECK(depth.values[0] == doctest::Approx(100.0).epsilon(1e-12));
    // 1 / (0.01 + 0.5*(10 - 0.01)) = 1/5.005
    CHECK(depth.values[1] == doctest::Approx(1.0 / 5.005).epsilon(1e-12));
    CHECK(depth.values[2] == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(depth.values[0] > depth.values[1]);
    CHECK(depth.values[1] > depth.values[2]);

    CHECK_THROWS_AS(disparity_to_depth(disp, 10.0, 1.0), InvalidInputError);
    DisparityMap bad(1, 1, 1.5);
    CHECK_THROWS_AS(disparity_to_depth(bad, 0.1, 100.0), InvalidInputError);
}

TEST_CASE("loss config validation and JSON defaults") {
    LossConfig c;
    CHECK(c.lambda_smoothness == 0.001);
    CHECK(c.alpha == 0.85);
    CHECK(c.tolerance == 0.3);
    CHECK(c.scales == 4);
    c.validate();

    const LossConfig parsed = loss_config_from_json("{\"tolerance\": 0.1}");
    CHECK(parsed.tolerance == 0.1);
    CHECK(parsed.alpha == 0.85);  // default applied

    const LossConfig round = loss_config_from_json(to_json(parsed));
    CHECK(round.tolerance == parsed.tolerance);
    CHECK(round.loss_kind == parsed.loss_kind);

    CHECK_THROWS_AS(loss_config_from_json("{\"scales\": 0}"), InvalidInputError);
    CHECK_THROWS_AS(loss_config_from_json("{\"loss_kind\": \"bogus\"}"), InvalidInputError);
    CHECK_THROWS_AS(loss_config_from_json("{\"tolerance\": 1.0}"), InvalidInputError);
}

TEST_CASE("total loss constant and zero-lambda cases") {
    // A flat scene seen from identity poses: reconstructions are exact, so the
    // photometric term vanishes and only the smoothness term remains.
    TestRng rng(47);
    const int w = 16, h = 12;
    const Intrinsics k(80, 80, (w - 1) / 2.0, (h - 1) / 2.0);
    const ImageBuffer target = reproj::testing::noise_image(rng, 3, w, h);
    DepthMap depth = reproj::testing::noise_depth(rng, w, h, 2.0, 4.0);

    std::vector<SourceFrame> sources{{target, depth, RigidTransform::identity()},
                                     {target, depth, RigidTransform::identity()}};
    const FrameSet fs = build_frame_set(target, depth, sources, k);

    LossConfig config;
    config.scales = 1;
    config.loss_kind = LossKind::min_reprojection;
    const auto result = total_loss({fs}, config);
    // Identity warp: reconstruction == target, pe == 0, automask mu == 0.
    const double ls = smoothness_loss(depth.to_disparity(), target);
    CHECK(result.loss == doctest::Approx(config.lambda_smoothness * ls).epsilon(1e-12));
    CHECK(result.scales.size() == 1);
    for (uint8_t v : result.scales[0].mu.values) CHECK(v == 0);

    LossConfig no_smooth = config;
    no_smooth.lambda_smoothness = 0.0;
    CHECK(total_loss({fs}, no_smooth).loss == 0.0);
}

TEST_CASE("total loss multi-scale upsamples the per-scale depth") {
    TestRng rng(48);
    const int w = 24, h = 16;
    const Intrinsics k(60, 60, (w - 1) / 2.0, (h - 1) / 2.0);
    const ImageBuffer target = reproj::testing::noise_image(rng, 3, w, h);
    const DepthMap full = reproj::testing::noise_depth(rng, w, h, 3.0, 6.0);
    const DepthMap half = resize_bilinear(full, w / 2, h / 2);

    std::vector<SourceFrame> sources{{target, full, RigidTransform::identity()}};
    const FrameSet fs_full = build_frame_set(target, full, sources, k);
    const FrameSet fs_half = build_frame_set(target, half, sources, k);
    CHECK(fs_half.target_depth.width == w);
    CHECK(fs_half.target_depth.height == h);

    LossConfig config;
    config.scales = 2;
    config.loss_kind = LossKind::nonoccluded_average;
    const auto result = total_loss({fs_full, fs_half}, config);
    CHECK(result.scales.size() == 2);
    CHECK(result.loss ==
          doctest::Approx(0.5 * (result.scales[0].scale_loss + result.scales[1].scale_loss)));
    CHECK(std::isfinite(result.loss));

    // Each scale composes as lambda*Ls + mean(mu * Lp) over its diagnostics.
    for (const auto& diag : result.scales) {
        double masked = 0.0;
        for (size_t i = 0; i < diag.photometric.values.size(); ++i)
            masked += diag.mu.values[i] * diag.photometric.values[i];
        masked /= static_cast<double>(diag.photometric.values.size());
        CHECK(diag.scale_loss ==
              doctest::Approx(config.lambda_smoothness * diag.smoothness + masked));
    }

    CHECK_THROWS_AS(total_loss({fs_full}, config), InvalidInputError);  // scales mismatch
}
