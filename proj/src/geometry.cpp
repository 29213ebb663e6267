#include "mixpose/geometry.hpp"

#include <cmath>

#include "mixpose/errors.hpp"

namespace mixpose {

PoseKind kind_of(const Pose& pose) {
  return std::holds_alternative<Pose6D>(pose) ? PoseKind::Full6D : PoseKind::Reduced2P;
}

int pose_dim(PoseKind kind) { return kind == PoseKind::Full6D ? 6 : 2; }

std::vector<double> pose_to_vector(const Pose& pose) {
  if (const auto* p = std::get_if<Pose6D>(&pose)) {
    return {p->phi.x(), p->phi.y(), p->phi.z(), p->w.x(), p->w.y(), p->w.z()};
  }
  const auto& p = std::get<Pose2P>(pose);
  return {p.phi, p.w};
}

Pose pose_from_vector(PoseKind kind, std::span<const double> params) {
  if (static_cast<int>(params.size()) != pose_dim(kind))
    throw Error("pose parameter vector has wrong length");
  if (kind == PoseKind::Full6D) {
    Pose6D p;
    p.phi = Eigen::Vector3d(params[0], params[1], params[2]);
    p.w = Eigen::Vector3d(params[3], params[4], params[5]);
    return p;
  }
  return Pose2P{params[0], params[1]};
}

Eigen::Matrix3d rotation_matrix(const Eigen::Vector3d& phi) {
  const double c1 = std::cos(phi.x()), s1 = std::sin(phi.x());
  const double c2 = std::cos(phi.y()), s2 = std::sin(phi.y());
  const double c3 = std::cos(phi.z()), s3 = std::sin(phi.z());
  Eigen::Matrix3d r1, r2, r3;
  r1 << 1, 0, 0,
        0, c1, -s1,
        0, s1, c1;
  r2 << c2, 0, s2,
        0, 1, 0,
        -s2, 0, c2;
  r3 << c3, -s3, 0,
        s3, c3, 0,
        0, 0, 1;
  return r3 * r2 * r1;
}

Eigen::Vector3d rigid_transform(const Eigen::Vector3d& z, const Pose6D& pose) {
  return rotation_matrix(pose.phi) * (z + pose.w);
}

Eigen::Vector3d rigid_transform_2p(const Eigen::Vector3d& z, const Pose2P& pose) {
  const double c = std::cos(pose.phi), s = std::sin(pose.phi);
  const double x = z.x() + pose.w;
  const double y = z.y() + pose.w;
  return {c * x + s * y, -s * x + c * y, z.z() + pose.w};
}

PoseTransform::PoseTransform(const Pose& pose) {
  if (const auto* p6 = std::get_if<Pose6D>(&pose)) {
    linear_ = rotation_matrix(p6->phi);
    offset_ = linear_ * p6->w;
    return;
  }
  const auto& p2 = std::get<Pose2P>(pose);
  const double c = std::cos(p2.phi), s = std::sin(p2.phi);
  linear_ << c, s, 0,
             -s, c, 0,
             0, 0, 1;
  offset_ = linear_ * Eigen::Vector3d::Constant(p2.w);
}

Eigen::Vector2d camera_project(const Eigen::Vector3d& u, const CameraGeometry& geom) {
  const double c = std::cos(geom.gamma), s = std::sin(geom.gamma);
  return {c * u.x() + s * u.y(), u.z()};
}

double laterate(const Eigen::Vector3d& u, const LaterationGeometry& geom) {
  return (u - geom.gamma).norm();
}

int Projector::output_dim() const { return is_camera() ? 2 : 1; }

Eigen::Vector2d Projector::project(const Eigen::Vector3d& u) const {
  if (const auto* cam = std::get_if<CameraGeometry>(&geometry))
    return camera_project(u, *cam);
  return {laterate(u, std::get<LaterationGeometry>(geometry)), 0.0};
}

Projector camera_projector(double gamma) { return Projector{CameraGeometry{gamma}}; }

Projector lateration_projector(const Eigen::Vector3d& source) {
  return Projector{LaterationGeometry{source}};
}

std::vector<Eigen::Vector3d> deform(const std::vector<Eigen::Vector3d>& points,
                                    const Eigen::Vector3d& scales) {
  if (points.empty()) throw Error("deform requires a nonempty point set");
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (const auto& p : points) centroid += p;
  centroid /= static_cast<double>(points.size());

  std::vector<Eigen::Vector3d> out;
  out.reserve(points.size());
  for (const auto& p : points)
    out.push_back(centroid + (scales.array() * (p - centroid).array()).matrix());
  return out;
}

}  // namespace mixpose
