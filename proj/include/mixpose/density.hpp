#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <vector>

namespace mixpose {

enum class FeatureKind { Delta, DiagonalGaussian };

/// One component q_i(z) of the object feature mixture: either an exactly
/// known coordinate (Delta) or an axis-aligned normal density around it.
struct FeatureComponent {
  FeatureKind kind = FeatureKind::Delta;
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  Eigen::Vector3d sigmas = Eigen::Vector3d::Zero();  // ignored for Delta
};

FeatureComponent delta_feature(const Eigen::Vector3d& center);
FeatureComponent gaussian_feature(const Eigen::Vector3d& center,
                                  const Eigen::Vector3d& sigmas);
FeatureComponent gaussian_feature(const Eigen::Vector3d& center, double sigma);

/// Uniform-weight mixture q(z) = (1/N) sum_i q_i(z) over feature components
/// in 3D object space.
struct ObjectModel {
  std::vector<FeatureComponent> components;

  int size() const { return static_cast<int>(components.size()); }
  bool all_delta() const;
  std::vector<Eigen::Vector3d> centers() const;

  /// Throws InvalidModelError on an empty model or nonpositive Gaussian sigmas.
  void validate() const;
};

/// Node-centred rectilinear grid over a 1D or 2D measurement space. Nodes of
/// axis a lie at origin[a] + i * spacing[a], i in [0, counts[a]).
struct GridSpec {
  int dim = 2;
  std::array<double, 2> origin{0.0, 0.0};
  std::array<double, 2> spacing{1.0, 1.0};
  std::array<int, 2> counts{2, 2};  // second axis unused when dim == 1

  std::size_t node_count() const;
  double cell_volume() const;
  /// Largest coordinate covered on axis a.
  double extent_max(int a) const { return origin[a] + (counts[a] - 1) * spacing[a]; }
  void validate() const;
};

GridSpec grid_1d(double origin, double spacing, int count);
GridSpec grid_2d(const Eigen::Vector2d& origin, const Eigen::Vector2d& spacing,
                 int nx, int ny);

/// A gridded density g(y) over measurement space. Values are samples at grid
/// nodes; the integral is taken as sum(values) * cell_volume.
struct MeasurementDensity {
  GridSpec grid;
  std::vector<double> values;  // index ix (1D) or iy * nx + ix (2D)
  double normalization = 1.0;  // integral recorded before the last scaling to 1

  double& at(int ix, int iy = 0);
  double at(int ix, int iy = 0) const;

  double integral() const;
  double max_value() const;

  /// Scales values to unit integral and records the prior integral in
  /// `normalization`. Throws on a nonpositive integral.
  void normalize();

  /// Linear (1D) / bilinear (2D) interpolation of the node values; returns 0
  /// for query points outside the grid extent. For 1D grids only y.x() is used.
  double interpolate(const Eigen::Vector2d& y) const;
  double interpolate(double x) const { return interpolate(Eigen::Vector2d(x, 0.0)); }
};

/// Gaussian feature-extraction error density; sigma_eps in length units.
struct SensingKernel {
  double sigma_eps = 1.0;
};

/// Deposits each point onto the nodes of its enclosing cell with linear /
/// bilinear weights. The result is an unnormalized pattern whose value sum
/// equals the number of points. For 1D grids only the x coordinate is used.
/// Throws OutOfBoundsError for points outside the grid extent.
MeasurementDensity splat_points(const std::vector<Eigen::Vector2d>& points,
                                const GridSpec& grid);

/// Blurs the density with an isotropic Gaussian of std kernel.sigma_eps
/// (separable direct convolution, taps truncated at 4 sigma and normalized),
/// then renormalizes to unit integral. Throws DegenerateKernelError when
/// sigma_eps < 0.1 * spacing on any axis.
MeasurementDensity convolve_gaussian(const MeasurementDensity& d,
                                     const SensingKernel& kernel);

/// Adds i.i.d. zero-mean Gaussian noise with std max(values)/snr to every
/// node, clamps negatives to zero, renormalizes. Deterministic given seed.
MeasurementDensity add_noise(const MeasurementDensity& d, double snr,
                             std::uint64_t seed);

/// Per-component Monte-Carlo samples of the object mixture.
struct SampleSet {
  std::vector<std::vector<Eigen::Vector3d>> samples;  // [component][draw]
  std::uint64_t seed = 0;
  int draws_per_component = 0;
};

/// Draws R samples per component. Gaussian components use normally
/// distributed latin hypercube sampling: per axis one uniform draw in each
/// stratum [(r-1)/R, r/R) mapped through the inverse normal CDF, strata
/// independently permuted per axis. Delta components yield R copies of the
/// center. Deterministic given seed.
SampleSet sample_components(const ObjectModel& model, int R, std::uint64_t seed);

}  // namespace mixpose
