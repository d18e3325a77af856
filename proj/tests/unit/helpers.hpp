#pragma once

#include <Eigen/Geometry>
#include <random>

#include "reproj/buffers.hpp"
#include "reproj/geometry.hpp"

namespace reproj::testing {

// Deterministic uniform draws independent of any library distribution.
struct TestRng {
    std::mt19937_64 gen;
    explicit TestRng(uint64_t seed) : gen(seed) {}
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(gen() >> 11) * 0x1.0p-53);
    }
    int uniform_int(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(uniform(0.0, hi - lo + 1.0 - 1e-12));
    }
};

inline Eigen::Matrix3d random_rotation(TestRng& rng, double max_angle) {
    Eigen::Vector3d axis(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    if (axis.norm() < 1e-6) axis = Eigen::Vector3d::UnitZ();
    axis.normalize();
    return Eigen::AngleAxisd(rng.uniform(-max_angle, max_angle), axis).toRotationMatrix();
}

inline Intrinsics random_intrinsics(TestRng& rng) {
    return Intrinsics(rng.uniform(50, 500), rng.uniform(50, 500), rng.uniform(20, 600),
                      rng.uniform(20, 600));
}

inline RigidTransform random_transform(TestRng& rng, double max_angle = 0.3,
                                       double max_translation = 2.0) {
    Eigen::Vector3d t(rng.uniform(-max_translation, max_translation),
                      rng.uniform(-max_translation, max_translation),
                      rng.uniform(-max_translation, max_translation));
    return RigidTransform(random_rotation(rng, max_angle), t);
}

inline ImageBuffer noise_image(TestRng& rng, int channels, int w, int h) {
    ImageBuffer img(channels, w, h);
    for (auto& v : img.values) v = rng.uniform(0.0, 1.0);
    return img;
}

inline DepthMap noise_depth(TestRng& rng, int w, int h, double lo, double hi) {
    DepthMap d(w, h);
    for (auto& v : d.values) v = rng.uniform(lo, hi);
    return d;
}

inline BinaryMask constant_mask(int w, int h, uint8_t v) { return BinaryMask(w, h, v); }

}  // namespace reproj::testing
