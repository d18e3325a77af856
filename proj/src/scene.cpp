#include "reproj/scene.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <limits>

#include "reproj/errors.hpp"
#include "reproj/losses.hpp"

namespace reproj {

namespace {

constexpr double kRayEpsilon = 1e-9;

// splitmix64 finalizer; the deterministic backbone of textures and scenes.
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline double hash_unit(uint64_t x) {
    return static_cast<double>(mix64(x) >> 11) * 0x1.0p-53;
}

inline double lattice_value(int64_t ix, int64_t iy, int octave, int channel, uint64_t seed) {
    uint64_t h = seed;
    h = mix64(h ^ static_cast<uint64_t>(ix) * 0x8da6b343ULL);
    h = mix64(h ^ static_cast<uint64_t>(iy) * 0xd8163841ULL);
    h = mix64(h ^ (static_cast<uint64_t>(octave) << 32 | static_cast<uint64_t>(channel)));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

inline double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

double value_noise(double s, double t, int octave, int channel, uint64_t seed) {
    const double fs = std::floor(s);
    const double ft = std::floor(t);
    const auto ix = static_cast<int64_t>(fs);
    const auto iy = static_cast<int64_t>(ft);
    const double wx = smoothstep(s - fs);
    const double wy = smoothstep(t - ft);
    const double v00 = lattice_value(ix, iy, octave, channel, seed);
    const double v10 = lattice_value(ix + 1, iy, octave, channel, seed);
    const double v01 = lattice_value(ix, iy + 1, octave, channel, seed);
    const double v11 = lattice_value(ix + 1, iy + 1, octave, channel, seed);
    const double top = v00 + wx * (v10 - v00);
    const double bot = v01 + wx * (v11 - v01);
    return top + wy * (bot - top);
}

}  // namespace

void Texture::sample(double s, double t, double* rgb) const {
    if (kind == TextureKind::checker) {
        const auto cell = static_cast<int64_t>(std::floor(s / period)) +
                          static_cast<int64_t>(std::floor(t / period));
        const double* c = (cell & 1) ? color_b : color_a;
        rgb[0] = c[0];
        rgb[1] = c[1];
        rgb[2] = c[2];
        return;
    }
    for (int ch = 0; ch < 3; ++ch) {
        double acc = 0.0;
        double amp = 1.0;
        double amp_sum = 0.0;
        double freq = 1.0 / feature_size;
        for (int o = 0; o < octaves; ++o) {
            acc += amp * value_noise(s * freq, t * freq, o, ch, seed);
            amp_sum += amp;
            amp *= 0.5;
            freq *= 2.0;
        }
        rgb[ch] = low + (high - low) * (acc / amp_sum);
    }
}

namespace {

struct Hit {
    double s = std::numeric_limits<double>::infinity();  // ray parameter
    const Primitive* primitive = nullptr;
    bool background = false;
    double tex_u = 0.0, tex_v = 0.0;
};

// Ray parametrized as origin + s*dir, dir not normalized. Returns the nearest
// intersection past kRayEpsilon.
Hit cast_ray(const Scene& scene, const Eigen::Vector3d& origin, const Eigen::Vector3d& dir) {
    Hit best;
    for (const auto& prim : scene.primitives) {
        if (prim.kind == PrimitiveKind::plane) {
            const Eigen::Vector3d axis_u = prim.pose.rotation().col(0);
            const Eigen::Vector3d axis_v = prim.pose.rotation().col(1);
            const Eigen::Vector3d normal = prim.pose.rotation().col(2);
            const Eigen::Vector3d center = prim.pose.translation();
            const double denom = dir.dot(normal);
            if (std::abs(denom) < 1e-12) continue;
            const double s = (center - origin).dot(normal) / denom;
            if (s <= kRayEpsilon || s >= best.s) continue;
            const Eigen::Vector3d local = origin + s * dir - center;
            const double lu = local.dot(axis_u);
            const double lv = local.dot(axis_v);
            if (std::abs(lu) > prim.extent[0] || std::abs(lv) > prim.extent[1]) continue;
            best.s = s;
            best.primitive = &prim;
            best.background = false;
            best.tex_u = lu;
            best.tex_v = lv;
        } else {
            const Eigen::Vector3d center = prim.pose.translation();
            const double radius = prim.extent[0];
            const Eigen::Vector3d oc = origin - center;
            const double a = dir.dot(dir);
            const double b = 2.0 * dir.dot(oc);
            const double c = oc.dot(oc) - radius * radius;
            const double disc = b * b - 4.0 * a * c;
            if (disc < 0.0) continue;
            const double sq = std::sqrt(disc);
            double s = (-b - sq) / (2.0 * a);
            if (s <= kRayEpsilon) s = (-b + sq) / (2.0 * a);
            if (s <= kRayEpsilon || s >= best.s) continue;
            const Eigen::Vector3d local =
                prim.pose.rotation().transpose() * (origin + s * dir - center);
            best.s = s;
            best.primitive = &prim;
            best.background = false;
            best.tex_u = std::atan2(local.y(), local.x()) * radius;
            best.tex_v = std::acos(std::clamp(local.z() / radius, -1.0, 1.0)) * radius;
        }
    }
    // Background: infinite plane z_world = background_depth.
    if (dir.z() > 1e-12) {
        const double s = (scene.background_depth - origin.z()) / dir.z();
        if (s > kRayEpsilon && s < best.s) {
            const Eigen::Vector3d p = origin + s * dir;
            best.s = s;
            best.primitive = nullptr;
            best.background = true;
            best.tex_u = p.x();
            best.tex_v = p.y();
        }
    }
    return best;
}

}  // namespace

RenderOutput render(const Scene& scene, const Intrinsics& k, const RigidTransform& pose,
                    int width, int height) {
    if (width <= 0 || height <= 0) throw InvalidInputError("render resolution must be positive");
    RenderOutput out{ImageBuffer(3, width, height), DepthMap(width, height), pose};
    const Eigen::Matrix3d& r = pose.rotation();
    const Eigen::Vector3d& origin = pose.translation();
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const Eigen::Vector3d dir_cam((x - k.cx) / k.fx, (y - k.cy) / k.fy, 1.0);
            const Eigen::Vector3d dir = r * dir_cam;
            const Hit hit = cast_ray(scene, origin, dir);
            if (!hit.primitive && !hit.background)
                throw InvalidInputError("ray missed the scene; background cannot cover the view");
            // dir_cam.z == 1, so the ray parameter equals the camera-frame depth.
            out.depth.at(x, y) = hit.s;
            double rgb[3];
            const Texture& tex =
                hit.background ? scene.background_texture : hit.primitive->texture;
            tex.sample(hit.tex_u, hit.tex_v, rgb);
            for (int c = 0; c < 3; ++c) out.image.at(x, y, c) = rgb[c];
        }
    }
    return out;
}

RigidTransform relative_transform(const RigidTransform& pose_t,
                                  const RigidTransform& pose_t_prime) {
    return pose_t_prime.inverse() * pose_t;
}

BinaryMask zbuffer_occlusion_oracle(const Scene& scene, const Intrinsics& k,
                                    const RigidTransform& pose_target,
                                    const RigidTransform& pose_source, int width, int height) {
    const RenderOutput target = render(scene, k, pose_target, width, height);
    const RigidTransform source_from_world = pose_source.inverse();
    const Eigen::Vector3d source_origin = pose_source.translation();
    BinaryMask mask(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const Eigen::Vector3d point_cam = backproject(x, y, target.depth.at(x, y), k);
            const Eigen::Vector3d point_world = pose_target.apply(point_cam);
            const Eigen::Vector3d point_src = source_from_world.apply(point_world);
            if (point_src.z() <= 0.0) {
                mask.at(x, y) = 0;
                continue;
            }
            double u, v, z;
            project(point_src, k, u, v, z);
            if (u < 0.0 || u > width - 1.0 || v < 0.0 || v > height - 1.0) {
                mask.at(x, y) = 0;
                continue;
            }
            const Eigen::Vector3d dir = point_world - source_origin;
            const Hit hit = cast_ray(scene, source_origin, dir);
            const double dist = dir.norm();
            // First hit strictly nearer than the point itself means blocked.
            mask.at(x, y) = (hit.s * dist < dist - 1e-6) ? 0 : 1;
        }
    }
    return mask;
}

namespace {

/// Deterministic uniform draw in [lo, hi) from a counter-keyed hash.
double draw(uint64_t seed, uint64_t counter, double lo, double hi) {
    return lo + (hi - lo) * hash_unit(mix64(seed) ^ counter * 0x2545f4914f6cdd1dULL);
}

Texture make_noise_texture(uint64_t seed, double depth, double fx) {
    Texture tex;
    tex.kind = TextureKind::value_noise;
    tex.seed = mix64(seed ^ 0xfeedULL);
    // Base wavelength sized to project to roughly 15-45 pixels at this depth.
    const double px = draw(seed, 11, 15.0, 45.0);
    tex.feature_size = px * depth / fx;
    tex.octaves = 2 + static_cast<int>(draw(seed, 12, 0.0, 2.0));
    tex.low = 0.12;
    tex.high = 0.88;
    return tex;
}

}  // namespace

Intrinsics canonical_intrinsics(int width, int height) {
    const double f = 0.58 * width;
    return Intrinsics(f, f, (width - 1) / 2.0, (height - 1) / 2.0);
}

Scene generate_random_scene(uint64_t seed) {
    Scene scene;
    const double fx = canonical_intrinsics(640, 192).fx;
    const int count = 2 + static_cast<int>(draw(seed, 0, 0.0, 5.0));  // 2..6

    // Depths climb a multiplicative ladder so no two surfaces sit at a mild
    // ratio where a tolerance-based occlusion test goes blind.
    double depth = draw(seed, 1, 2.0, 3.2);
    for (int i = 0; i < count && depth <= 50.0; ++i) {
        const uint64_t ps = mix64(seed ^ (0x100 + i));
        Primitive prim;
        const bool sphere = draw(ps, 0, 0.0, 1.0) < 0.3;
        // Lateral placement keeps the primitive inside the view frustum.
        const double span_x = 0.45 * depth;  // ~half horizontal extent of the frustum
        const double span_y = 0.12 * depth;
        const double cx = draw(ps, 1, -span_x, span_x);
        const double cy = draw(ps, 2, -span_y, span_y);
        if (sphere) {
            prim.kind = PrimitiveKind::sphere;
            prim.extent = {draw(ps, 3, 0.08, 0.18) * depth};
            prim.pose = RigidTransform(Eigen::Matrix3d::Identity(),
                                       Eigen::Vector3d(cx, cy, depth));
        } else {
            prim.kind = PrimitiveKind::plane;
            prim.extent = {draw(ps, 3, 0.10, 0.22) * depth, draw(ps, 4, 0.10, 0.22) * depth};
            const double tilt_x = draw(ps, 5, -0.5, 0.5);  // radians, <= ~29 deg
            const double tilt_y = draw(ps, 6, -0.5, 0.5);
            const Eigen::Matrix3d rot =
                (Eigen::AngleAxisd(tilt_y, Eigen::Vector3d::UnitY()) *
                 Eigen::AngleAxisd(tilt_x, Eigen::Vector3d::UnitX()))
                    .toRotationMatrix();
            prim.pose = RigidTransform(rot, Eigen::Vector3d(cx, cy, depth));
        }
        prim.texture = make_noise_texture(ps, depth, fx);
        scene.primitives.push_back(std::move(prim));
        depth *= draw(seed, 2 + i, 1.9, 2.4);
    }

    const double deepest = scene.primitives.back().pose.translation().z();
    scene.background_depth = std::max(60.0, 1.9 * deepest);
    scene.background_texture = make_noise_texture(mix64(seed ^ 0xb9ULL), scene.background_depth, fx);
    return scene;
}

double boundary_excluded_agreement(const BinaryMask& mask, const BinaryMask& reference,
                                   int band_px) {
    if (mask.width != reference.width || mask.height != reference.height)
        throw InvalidInputError("agreement masks must share dimensions");
    const int w = reference.width, h = reference.height;
    std::vector<uint8_t> edge(reference.values.size(), 0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const uint8_t v = reference.at(x, y);
            bool is_edge = false;
            for (int dy = -1; dy <= 1 && !is_edge; ++dy)
                for (int dx = -1; dx <= 1 && !is_edge; ++dx) {
                    const int nx = x + dx, ny = y + dy;
                    if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                    if (reference.at(nx, ny) != v) is_edge = true;
                }
            edge[static_cast<size_t>(y) * w + x] = is_edge ? 1 : 0;
        }
    }
    size_t kept = 0, same = 0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            bool excluded = false;
            for (int dy = -band_px; dy <= band_px && !excluded; ++dy)
                for (int dx = -band_px; dx <= band_px && !excluded; ++dx) {
                    const int nx = x + dx, ny = y + dy;
                    if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                    if (edge[static_cast<size_t>(ny) * w + nx]) excluded = true;
                }
            if (excluded) continue;
            ++kept;
            if (mask.at(x, y) == reference.at(x, y)) ++same;
        }
    }
    return kept == 0 ? 1.0 : static_cast<double>(same) / static_cast<double>(kept);
}

RigidTransform generate_adjacent_pose(uint64_t seed, int direction) {
    const uint64_t ms = mix64(seed ^ 0x5eedULL);
    const double side = draw(ms, 0, 0.0, 1.0) < 0.5 ? -1.0 : 1.0;
    Eigen::Vector3d t(side * draw(ms, 1, 0.15, 0.45), draw(ms, 2, -0.05, 0.05),
                      draw(ms, 3, -0.25, 0.25));
    const double deg = M_PI / 180.0;
    Eigen::Matrix3d rot = (Eigen::AngleAxisd(draw(ms, 4, -0.8, 0.8) * deg, Eigen::Vector3d::UnitY()) *
                           Eigen::AngleAxisd(draw(ms, 5, -0.4, 0.4) * deg, Eigen::Vector3d::UnitX()) *
                           Eigen::AngleAxisd(draw(ms, 6, -0.4, 0.4) * deg, Eigen::Vector3d::UnitZ()))
                              .toRotationMatrix();
    RigidTransform motion(rot, t);
    return direction >= 0 ? motion : motion.inverse();
}

OracleCheckResult run_oracle_check(uint64_t seed, double tolerance, int width, int height) {
    const Scene scene = generate_random_scene(seed);
    const Intrinsics k = canonical_intrinsics(width, height);
    const RigidTransform pose_target = RigidTransform::identity();
    const RigidTransform pose_source = generate_adjacent_pose(seed, +1);

    const RenderOutput target = render(scene, k, pose_target, width, height);
    const RenderOutput source = render(scene, k, pose_source, width, height);
    const SampleGrid grid =
        reproject(target.depth, k, relative_transform(pose_target, pose_source));

    OracleCheckResult result;
    result.mask = occlusion_mask(grid, source.depth, tolerance);
    result.oracle = zbuffer_occlusion_oracle(scene, k, pose_target, pose_source, width, height);
    result.agreement = boundary_excluded_agreement(result.mask, result.oracle, 1);
    return result;
}

}  // namespace reproj
