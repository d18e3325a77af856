#include "reproj/geometry.hpp"

#include <Eigen/LU>

#include <cmath>

#include "reproj/errors.hpp"

namespace reproj {

Intrinsics::Intrinsics(double fx, double fy, double cx, double cy)
    : fx(fx), fy(fy), cx(cx), cy(cy) {
    if (!(fx > 0.0) || !(fy > 0.0) || !std::isfinite(fx) || !std::isfinite(fy))
        throw InvalidInputError("focal lengths must be positive and finite");
    if (!std::isfinite(cx) || !std::isfinite(cy))
        throw InvalidInputError("principal point must be finite");
}

Eigen::Matrix3d Intrinsics::matrix() const {
    Eigen::Matrix3d k;
    k << fx, 0, cx, 0, fy, cy, 0, 0, 1;
    return k;
}

Eigen::Matrix3d Intrinsics::inverse_matrix() const {
    Eigen::Matrix3d k;
    k << 1.0 / fx, 0, -cx / fx, 0, 1.0 / fy, -cy / fy, 0, 0, 1;
    return k;
}

namespace {
constexpr double kOrthonormalTol = 1e-9;
}

RigidTransform::RigidTransform()
    : rotation_(Eigen::Matrix3d::Identity()), translation_(Eigen::Vector3d::Zero()) {}

RigidTransform::RigidTransform(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation)
    : rotation_(rotation), translation_(translation) {
    if (!rotation_.allFinite() || !translation_.allFinite())
        throw InvalidInputError("rigid transform entries must be finite");
    const double ortho =
        (rotation_.transpose() * rotation_ - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
    if (ortho > kOrthonormalTol)
        throw InvalidInputError("rotation is not orthonormal");
    if (std::abs(rotation_.determinant() - 1.0) > kOrthonormalTol)
        throw InvalidInputError("rotation determinant must be +1");
}

RigidTransform RigidTransform::inverse() const {
    RigidTransform inv;
    inv.rotation_ = rotation_.transpose();
    inv.translation_ = -(rotation_.transpose() * translation_);
    return inv;
}

RigidTransform RigidTransform::operator*(const RigidTransform& rhs) const {
    RigidTransform out;
    out.rotation_ = rotation_ * rhs.rotation_;
    out.translation_ = rotation_ * rhs.translation_ + translation_;
    return out;
}

SampleGrid::SampleGrid(int w, int h)
    : width(w), height(h), u(static_cast<size_t>(w) * h), v(static_cast<size_t>(w) * h),
      z_proj(static_cast<size_t>(w) * h) {
    if (w <= 0 || h <= 0) throw InvalidInputError("SampleGrid dimensions must be positive");
}

Eigen::Vector3d backproject(double px, double py, double depth, const Intrinsics& k) {
    if (!std::isfinite(depth) || depth <= 0.0)
        throw InvalidInputError("backproject requires finite positive depth");
    return {(px - k.cx) / k.fx * depth, (py - k.cy) / k.fy * depth, depth};
}

PointField backproject(const DepthMap& depth, const Intrinsics& k) {
    PointField field;
    field.width = depth.width;
    field.height = depth.height;
    field.points.reserve(depth.size());
    for (int y = 0; y < depth.height; ++y)
        for (int x = 0; x < depth.width; ++x)
            field.points.push_back(backproject(x, y, depth.at(x, y), k));
    return field;
}

Eigen::Vector3d transform_point(const Eigen::Vector3d& p, const RigidTransform& t) {
    return t.apply(p);
}

PointField transform_points(const PointField& points, const RigidTransform& t) {
    PointField out;
    out.width = points.width;
    out.height = points.height;
    out.points.reserve(points.points.size());
    for (const auto& p : points.points) out.points.push_back(t.apply(p));
    return out;
}

void project(const Eigen::Vector3d& p, const Intrinsics& k, double& u, double& v, double& z) {
    z = p.z();
    if (p.z() > 0.0) {
        u = k.fx * p.x() / p.z() + k.cx;
        v = k.fy * p.y() / p.z() + k.cy;
    } else {
        u = kBehindCameraSentinel;
        v = kBehindCameraSentinel;
    }
}

SampleGrid project(const PointField& points, const Intrinsics& k) {
    SampleGrid grid(points.width, points.height);
    for (size_t i = 0; i < points.points.size(); ++i)
        project(points.points[i], k, grid.u[i], grid.v[i], grid.z_proj[i]);
    return grid;
}

SampleGrid reproject(const DepthMap& depth, const Intrinsics& k, const RigidTransform& t) {
    depth.validate();
    SampleGrid grid(depth.width, depth.height);
    const Eigen::Matrix3d& r = t.rotation();
    const Eigen::Vector3d& tr = t.translation();
    // Exact identity keeps the pixel grid and depth bit-for-bit.
    if (r.isIdentity(0.0) && tr.isZero(0.0)) {
        size_t i = 0;
        for (int y = 0; y < depth.height; ++y)
            for (int x = 0; x < depth.width; ++x, ++i) {
                grid.u[i] = x;
                grid.v[i] = y;
                grid.z_proj[i] = depth.values[i];
            }
        return grid;
    }
    size_t i = 0;
    for (int y = 0; y < depth.height; ++y) {
        const double ry = (y - k.cy) / k.fy;
        for (int x = 0; x < depth.width; ++x, ++i) {
            const double rx = (x - k.cx) / k.fx;
            const double z = depth.values[i];
            const Eigen::Vector3d q = r * Eigen::Vector3d(rx * z, ry * z, z) + tr;
            project(q, k, grid.u[i], grid.v[i], grid.z_proj[i]);
        }
    }
    return grid;
}

std::pair<double, double> sample_jacobian_wrt_depth(double px, double py, double depth,
                                                    const Intrinsics& k,
                                                    const RigidTransform& t) {
    const Eigen::Vector3d ray((px - k.cx) / k.fx, (py - k.cy) / k.fy, 1.0);
    const Eigen::Vector3d a = t.rotation() * ray;  // dq/dz
    const Eigen::Vector3d q = depth * a + t.translation();
    if (q.z() <= 0.0)
        throw InvalidInputError("sample jacobian undefined for nonpositive projected depth");
    const double zz = q.z() * q.z();
    return {k.fx * (a.x() * q.z() - q.x() * a.z()) / zz,
            k.fy * (a.y() * q.z() - q.y() * a.z()) / zz};
}

}  // namespace reproj
