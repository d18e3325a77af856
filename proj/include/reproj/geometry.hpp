#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "reproj/buffers.hpp"

namespace reproj {

/// Pinhole intrinsics (zero skew). Pixel (0,0) is the center of the top-left
/// pixel; x right, y down, z forward.
struct Intrinsics {
    double fx = 1.0;
    double fy = 1.0;
    double cx = 0.0;
    double cy = 0.0;

    Intrinsics() = default;
    Intrinsics(double fx, double fy, double cx, double cy);

    Eigen::Matrix3d matrix() const;
    Eigen::Matrix3d inverse_matrix() const;
};

/// SE(3) motion mapping frame-t camera coordinates to frame-t' camera
/// coordinates: p' = R p + t.
class RigidTransform {
public:
    RigidTransform();
    /// Validates orthonormality and det(+1) to 1e-9; throws InvalidInputError.
    RigidTransform(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation);

    static RigidTransform identity() { return RigidTransform(); }

    const Eigen::Matrix3d& rotation() const { return rotation_; }
    const Eigen::Vector3d& translation() const { return translation_; }

    Eigen::Vector3d apply(const Eigen::Vector3d& p) const { return rotation_ * p + translation_; }
    RigidTransform inverse() const;
    RigidTransform operator*(const RigidTransform& rhs) const;

private:
    Eigen::Matrix3d rotation_;
    Eigen::Vector3d translation_;
};

/// Camera-frame 3-D points, one per pixel of the grid they came from.
struct PointField {
    int width = 0;
    int height = 0;
    std::vector<Eigen::Vector3d> points;

    Eigen::Vector3d& at(int x, int y) { return points[static_cast<size_t>(y) * width + x]; }
    const Eigen::Vector3d& at(int x, int y) const {
        return points[static_cast<size_t>(y) * width + x];
    }
};

/// Per-pixel projected sample coordinates (u,v) in source-image pixels and the
/// projected depth z_proj in meters. Behind-camera projections carry the
/// sentinel coordinate so downstream masks classify them out of image.
struct SampleGrid {
    int width = 0;
    int height = 0;
    std::vector<double> u;
    std::vector<double> v;
    std::vector<double> z_proj;

    SampleGrid() = default;
    SampleGrid(int w, int h);

    size_t index(int x, int y) const { return static_cast<size_t>(y) * width + x; }
};

/// Sentinel sample coordinate for points that project behind the camera.
inline constexpr double kBehindCameraSentinel = -1.0e6;

/// Lift one pixel with known depth to a camera-frame point.
/// Throws InvalidInputError when depth is not finite and positive.
Eigen::Vector3d backproject(double px, double py, double depth, const Intrinsics& k);

/// Lift every pixel of the depth map; grid coordinates are the pixel grid.
PointField backproject(const DepthMap& depth, const Intrinsics& k);

Eigen::Vector3d transform_point(const Eigen::Vector3d& p, const RigidTransform& t);
PointField transform_points(const PointField& points, const RigidTransform& t);

/// Project one camera-frame point. Points with z <= 0 get sentinel (u,v) and
/// keep their z so the invalidity is visible downstream.
void project(const Eigen::Vector3d& p, const Intrinsics& k, double& u, double& v, double& z);
SampleGrid project(const PointField& points, const Intrinsics& k);

/// Full rigid reprojection of a depth map: where each target pixel lands in the
/// source view and at what depth. Single fused pass; elementwise equal to
/// project(transform_points(backproject(depth,k),t),k).
SampleGrid reproject(const DepthMap& depth, const Intrinsics& k, const RigidTransform& t);

/// Analytic (du/dz, dv/dz) of the sample location with respect to the source
/// pixel's depth. Throws InvalidInputError when the projected depth is <= 0.
std::pair<double, double> sample_jacobian_wrt_depth(double px, double py, double depth,
                                                    const Intrinsics& k,
                                                    const RigidTransform& t);

}  // namespace reproj
