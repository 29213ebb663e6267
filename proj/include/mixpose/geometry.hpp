#pragma once

#include <Eigen/Core>
#include <span>
#include <variant>
#include <vector>

namespace mixpose {

/// Full rigid pose: three rotation angles (radians) and a 3D translation.
struct Pose6D {
  Eigen::Vector3d phi = Eigen::Vector3d::Zero();
  Eigen::Vector3d w = Eigen::Vector3d::Zero();
};

/// Reduced pose for map plots: one rotation angle and one scalar translation
/// that is added to every coordinate.
struct Pose2P {
  double phi = 0.0;
  double w = 0.0;
};

enum class PoseKind { Full6D, Reduced2P };

using Pose = std::variant<Pose6D, Pose2P>;

PoseKind kind_of(const Pose& pose);
int pose_dim(PoseKind kind);
std::vector<double> pose_to_vector(const Pose& pose);
Pose pose_from_vector(PoseKind kind, std::span<const double> params);

/// R(phi) = R3(phi3) * R2(phi2) * R1(phi1) with right-handed,
/// counter-clockwise-positive elementary rotations about the coordinate axes.
Eigen::Matrix3d rotation_matrix(const Eigen::Vector3d& phi);

/// Rigid transform R(phi) * (z + w): translate first, then rotate.
Eigen::Vector3d rigid_transform(const Eigen::Vector3d& z, const Pose6D& pose);

/// Reduced transform: rotation about the third axis with the same scalar w
/// added to every coordinate before rotating.
Eigen::Vector3d rigid_transform_2p(const Eigen::Vector3d& z, const Pose2P& pose);

/// Pose applied as a cached affine map u = A z + b, with the rotation
/// evaluated once at construction. Valid for both pose parameterizations.
class PoseTransform {
 public:
  explicit PoseTransform(const Pose& pose);
  Eigen::Vector3d operator()(const Eigen::Vector3d& z) const { return linear_ * z + offset_; }

 private:
  Eigen::Matrix3d linear_;
  Eigen::Vector3d offset_;
};

/// Parallel-beam camera: gamma is the observation angle around the third axis.
struct CameraGeometry {
  double gamma = 0.0;
};

/// Lateration source position in 3D.
struct LaterationGeometry {
  Eigen::Vector3d gamma = Eigen::Vector3d::Zero();
};

/// Parallel projection onto the (cos g, sin g, 0) x (0, 0, 1) image plane.
Eigen::Vector2d camera_project(const Eigen::Vector3d& u, const CameraGeometry& geom);

/// Euclidean distance from u to the lateration source.
double laterate(const Eigen::Vector3d& u, const LaterationGeometry& geom);

/// Device-specific projection p2 into 1D or 2D measurement space.
struct Projector {
  std::variant<CameraGeometry, LaterationGeometry> geometry;

  int output_dim() const;
  bool is_camera() const { return std::holds_alternative<CameraGeometry>(geometry); }

  /// Projects a transformed object point; 1D results live in the x component.
  Eigen::Vector2d project(const Eigen::Vector3d& u) const;
};

Projector camera_projector(double gamma);
Projector lateration_projector(const Eigen::Vector3d& source);

/// Scales each coordinate about the centroid of the point set:
/// p_j -> c_j + scales_j * (p_j - c_j).
std::vector<Eigen::Vector3d> deform(const std::vector<Eigen::Vector3d>& points,
                                    const Eigen::Vector3d& scales);

}  // namespace mixpose
