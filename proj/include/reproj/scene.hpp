#pragma once

#include <cstdint>
#include <vector>

#include "reproj/buffers.hpp"
#include "reproj/geometry.hpp"

namespace reproj {

enum class TextureKind { checker, value_noise };

/// Procedural Lambertian texture evaluated in the primitive's surface
/// coordinates (meters), so shading depends on the surface point only.
struct Texture {
    TextureKind kind = TextureKind::checker;
    uint64_t seed = 0;

    // checker
    double period = 1.0;
    double color_a[3] = {0.1, 0.1, 0.1};
    double color_b[3] = {0.9, 0.9, 0.9};

    // value_noise
    double feature_size = 1.0;  // base wavelength in meters
    int octaves = 2;
    double low = 0.0;
    double high = 1.0;

    void sample(double s, double t, double* rgb) const;
};

enum class PrimitiveKind { plane, sphere };

/// A textured scene element. For planes the pose's rotation columns give the
/// two in-plane axes and the normal, translation is the center, extent the
/// half-sizes. For spheres translation is the center and extent[0] the radius.
struct Primitive {
    PrimitiveKind kind = PrimitiveKind::plane;
    RigidTransform pose;
    std::vector<double> extent = {1.0, 1.0};
    Texture texture;
};

/// Static scene: primitives plus an infinite background plane at
/// z_world = background_depth facing the canonical camera.
struct Scene {
    std::vector<Primitive> primitives;
    double background_depth = 90.0;
    Texture background_texture;
};

struct RenderOutput {
    ImageBuffer image;
    DepthMap depth;
    RigidTransform pose;  // camera-to-world
};

/// Nearest-hit ray cast per pixel. pose is camera-to-world. Depth is the
/// camera-frame z of the nearest hit. Throws InvalidInputError when a ray
/// misses everything.
RenderOutput render(const Scene& scene, const Intrinsics& k, const RigidTransform& pose,
                    int width, int height);

/// Camera motion between two camera-to-world poses, mapping frame-t camera
/// coordinates to frame-t' camera coordinates.
RigidTransform relative_transform(const RigidTransform& pose_t, const RigidTransform& pose_t_prime);

/// Brute-force visibility ground truth: a target pixel is occluded (0) when
/// the ray from the source camera toward its true 3-D point first hits the
/// scene more than 1e-6 m nearer than the point, or the point projects out of
/// the source image; 1 otherwise.
BinaryMask zbuffer_occlusion_oracle(const Scene& scene, const Intrinsics& k,
                                    const RigidTransform& pose_target,
                                    const RigidTransform& pose_source, int width, int height);

/// Deterministic scene from a seed: 2-6 noise-textured primitives with
/// pairwise well-separated depths in [2,50] m and a background far plane.
Scene generate_random_scene(uint64_t seed);

/// Deterministic adjacent-camera pose (camera-to-world) for the seeded scene
/// harnesses: a modest lateral/forward baseline and sub-degree rotation.
/// direction +1 = next frame, -1 = previous frame (mirrored motion).
RigidTransform generate_adjacent_pose(uint64_t seed, int direction);

/// Canonical camera used by the seeded harnesses and the oracle-check command.
Intrinsics canonical_intrinsics(int width, int height);

/// Fraction of pixels where mask equals reference, ignoring pixels within
/// band_px (Chebyshev) of a value change in the reference. Vacuously 1 when
/// nothing remains.
double boundary_excluded_agreement(const BinaryMask& mask, const BinaryMask& reference,
                                   int band_px);

/// One seeded comparison of the reprojected-depth occlusion mask against the
/// z-buffer oracle on ground-truth inputs.
struct OracleCheckResult {
    double agreement = 0.0;  // boundary-excluded, band 1 px
    BinaryMask mask;
    BinaryMask oracle;
};
OracleCheckResult run_oracle_check(uint64_t seed, double tolerance, int width, int height);

}  // namespace reproj
