#include "mixpose/density.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "mixpose/errors.hpp"
#include "mixpose/random.hpp"

namespace mixpose {

FeatureComponent delta_feature(const Eigen::Vector3d& center) {
  return FeatureComponent{FeatureKind::Delta, center, Eigen::Vector3d::Zero()};
}

FeatureComponent gaussian_feature(const Eigen::Vector3d& center,
                                  const Eigen::Vector3d& sigmas) {
  return FeatureComponent{FeatureKind::DiagonalGaussian, center, sigmas};
}

FeatureComponent gaussian_feature(const Eigen::Vector3d& center, double sigma) {
  return gaussian_feature(center, Eigen::Vector3d::Constant(sigma));
}

bool ObjectModel::all_delta() const {
  return std::all_of(components.begin(), components.end(),
                     [](const FeatureComponent& c) { return c.kind == FeatureKind::Delta; });
}

std::vector<Eigen::Vector3d> ObjectModel::centers() const {
  std::vector<Eigen::Vector3d> out;
  out.reserve(components.size());
  for (const auto& c : components) out.push_back(c.center);
  return out;
}

void ObjectModel::validate() const {
  if (components.empty()) throw InvalidModelError("object model has no components");
  for (std::size_t i = 0; i < components.size(); ++i) {
    const auto& c = components[i];
    if (!c.center.allFinite())
      throw InvalidModelError("component " + std::to_string(i) + " has non-finite center");
    if (c.kind == FeatureKind::DiagonalGaussian && (c.sigmas.array() <= 0.0).any())
      throw InvalidModelError("component " + std::to_string(i) + " has nonpositive sigma");
  }
}

std::size_t GridSpec::node_count() const {
  std::size_t n = static_cast<std::size_t>(counts[0]);
  if (dim == 2) n *= static_cast<std::size_t>(counts[1]);
  return n;
}

double GridSpec::cell_volume() const {
  return dim == 1 ? spacing[0] : spacing[0] * spacing[1];
}

void GridSpec::validate() const {
  if (dim != 1 && dim != 2) throw Error("grid dim must be 1 or 2");
  for (int a = 0; a < dim; ++a) {
    if (!(spacing[a] > 0.0)) throw Error("grid spacing must be positive");
    if (counts[a] < 2) throw Error("grid needs at least 2 nodes per axis");
  }
}

GridSpec grid_1d(double origin, double spacing, int count) {
  GridSpec g;
  g.dim = 1;
  g.origin = {origin, 0.0};
  g.spacing = {spacing, 1.0};
  g.counts = {count, 1};
  g.validate();
  return g;
}

GridSpec grid_2d(const Eigen::Vector2d& origin, const Eigen::Vector2d& spacing,
                 int nx, int ny) {
  GridSpec g;
  g.dim = 2;
  g.origin = {origin.x(), origin.y()};
  g.spacing = {spacing.x(), spacing.y()};
  g.counts = {nx, ny};
  g.validate();
  return g;
}

double& MeasurementDensity::at(int ix, int iy) {
  return values[static_cast<std::size_t>(iy) * grid.counts[0] + ix];
}

double MeasurementDensity::at(int ix, int iy) const {
  return values[static_cast<std::size_t>(iy) * grid.counts[0] + ix];
}

double MeasurementDensity::integral() const {
  return std::accumulate(values.begin(), values.end(), 0.0) * grid.cell_volume();
}

double MeasurementDensity::max_value() const {
  return *std::max_element(values.begin(), values.end());
}

void MeasurementDensity::normalize() {
  const double mass = integral();
  if (!(mass > 0.0)) throw Error("cannot normalize density with nonpositive integral");
  const double inv = 1.0 / mass;
  for (double& v : values) v *= inv;
  normalization = mass;
}

double MeasurementDensity::interpolate(const Eigen::Vector2d& y) const {
  const int nx = grid.counts[0];
  const double fx = (y.x() - grid.origin[0]) / grid.spacing[0];
  if (!(fx >= 0.0 && fx <= nx - 1)) return 0.0;  // also rejects NaN
  int ix = std::min(static_cast<int>(fx), nx - 2);
  const double tx = fx - ix;

  if (grid.dim == 1) {
    return values[ix] * (1.0 - tx) + values[ix + 1] * tx;
  }

  const int ny = grid.counts[1];
  const double fy = (y.y() - grid.origin[1]) / grid.spacing[1];
  if (!(fy >= 0.0 && fy <= ny - 1)) return 0.0;
  int iy = std::min(static_cast<int>(fy), ny - 2);
  const double ty = fy - iy;

  const double* row0 = values.data() + static_cast<std::size_t>(iy) * nx + ix;
  const double* row1 = row0 + nx;
  return (row0[0] * (1.0 - tx) + row0[1] * tx) * (1.0 - ty) +
         (row1[0] * (1.0 - tx) + row1[1] * tx) * ty;
}

namespace {

// Cell index and barycentric weight along one axis; the far grid edge maps
// onto the last cell with t == 1 so boundary nodes stay addressable.
struct AxisPos {
  int i;
  double t;
};

AxisPos axis_position(double coord, double origin, double spacing, int count,
                      const Eigen::Vector2d& point) {
  const double f = (coord - origin) / spacing;
  if (!(f >= 0.0 && f <= count - 1)) {
    std::ostringstream msg;
    msg << "point (" << point.x() << ", " << point.y() << ") outside grid extent";
    throw OutOfBoundsError(msg.str());
  }
  int i = std::min(static_cast<int>(f), count - 2);
  return {i, f - i};
}

std::vector<double> gaussian_taps(double sigma, double spacing) {
  if (sigma < 0.1 * spacing)
    throw DegenerateKernelError("sigma_eps " + std::to_string(sigma) +
                                " unresolvable on grid spacing " + std::to_string(spacing));
  const int radius = static_cast<int>(std::ceil(4.0 * sigma / spacing));
  std::vector<double> taps(2 * radius + 1);
  double sum = 0.0;
  for (int j = -radius; j <= radius; ++j) {
    const double x = j * spacing;
    taps[j + radius] = std::exp(-0.5 * x * x / (sigma * sigma));
    sum += taps[j + radius];
  }
  for (double& t : taps) t /= sum;
  return taps;
}

// 1D convolution along x for every row, zero values assumed outside the grid.
void convolve_axis_x(const std::vector<double>& in, std::vector<double>& out,
                     int nx, int ny, const std::vector<double>& taps) {
  const int radius = static_cast<int>(taps.size() / 2);
  for (int iy = 0; iy < ny; ++iy) {
    const double* src = in.data() + static_cast<std::size_t>(iy) * nx;
    double* dst = out.data() + static_cast<std::size_t>(iy) * nx;
    for (int ix = 0; ix < nx; ++ix) {
      const int j0 = std::max(-radius, -ix);
      const int j1 = std::min(radius, nx - 1 - ix);
      double acc = 0.0;
      for (int j = j0; j <= j1; ++j) acc += src[ix + j] * taps[radius + j];
      dst[ix] = acc;
    }
  }
}

void convolve_axis_y(const std::vector<double>& in, std::vector<double>& out,
                     int nx, int ny, const std::vector<double>& taps) {
  const int radius = static_cast<int>(taps.size() / 2);
  for (int iy = 0; iy < ny; ++iy) {
    const int j0 = std::max(-radius, -iy);
    const int j1 = std::min(radius, ny - 1 - iy);
    double* dst = out.data() + static_cast<std::size_t>(iy) * nx;
    for (int ix = 0; ix < nx; ++ix) {
      double acc = 0.0;
      for (int j = j0; j <= j1; ++j)
        acc += in[static_cast<std::size_t>(iy + j) * nx + ix] * taps[radius + j];
      dst[ix] = acc;
    }
  }
}

}  // namespace

MeasurementDensity splat_points(const std::vector<Eigen::Vector2d>& points,
                                const GridSpec& grid) {
  grid.validate();
  MeasurementDensity d;
  d.grid = grid;
  d.values.assign(grid.node_count(), 0.0);

  for (const auto& p : points) {
    const AxisPos x = axis_position(p.x(), grid.origin[0], grid.spacing[0],
                                    grid.counts[0], p);
    if (grid.dim == 1) {
      d.at(x.i) += 1.0 - x.t;
      d.at(x.i + 1) += x.t;
      continue;
    }
    const AxisPos y = axis_position(p.y(), grid.origin[1], grid.spacing[1],
                                    grid.counts[1], p);
    d.at(x.i, y.i) += (1.0 - x.t) * (1.0 - y.t);
    d.at(x.i + 1, y.i) += x.t * (1.0 - y.t);
    d.at(x.i, y.i + 1) += (1.0 - x.t) * y.t;
    d.at(x.i + 1, y.i + 1) += x.t * y.t;
  }
  d.normalization = d.integral();
  return d;
}

MeasurementDensity convolve_gaussian(const MeasurementDensity& d,
                                     const SensingKernel& kernel) {
  if (!(kernel.sigma_eps > 0.0)) throw DegenerateKernelError("sigma_eps must be positive");
  const int nx = d.grid.counts[0];
  const int ny = d.grid.dim == 2 ? d.grid.counts[1] : 1;

  MeasurementDensity out;
  out.grid = d.grid;
  out.values.assign(d.values.size(), 0.0);

  const auto taps_x = gaussian_taps(kernel.sigma_eps, d.grid.spacing[0]);
  convolve_axis_x(d.values, out.values, nx, ny, taps_x);
  if (d.grid.dim == 2) {
    const auto taps_y = gaussian_taps(kernel.sigma_eps, d.grid.spacing[1]);
    std::vector<double> tmp = out.values;
    convolve_axis_y(tmp, out.values, nx, ny, taps_y);
  }
  out.normalize();
  return out;
}

MeasurementDensity add_noise(const MeasurementDensity& d, double snr,
                             std::uint64_t seed) {
  if (!(snr > 0.0)) throw Error("snr must be positive");
  MeasurementDensity out = d;
  const double sigma = d.max_value() / snr;
  Rng rng(seed);
  for (double& v : out.values) {
    v += sigma * rng.normal();
    if (v < 0.0) v = 0.0;
  }
  out.normalize();
  return out;
}

SampleSet sample_components(const ObjectModel& model, int R, std::uint64_t seed) {
  model.validate();
  if (R < 1) throw Error("sample count R must be >= 1");

  SampleSet set;
  set.seed = seed;
  set.draws_per_component = R;
  set.samples.resize(model.components.size());

  Rng rng(seed);
  std::vector<double> axis_values(static_cast<std::size_t>(R));
  std::vector<int> perm(static_cast<std::size_t>(R));

  for (std::size_t i = 0; i < model.components.size(); ++i) {
    const auto& comp = model.components[i];
    auto& draws = set.samples[i];
    draws.assign(static_cast<std::size_t>(R), comp.center);
    if (comp.kind == FeatureKind::Delta) continue;

    for (int axis = 0; axis < 3; ++axis) {
      // One draw per stratum, then an independent permutation of the strata.
      for (int r = 0; r < R; ++r) {
        double u = (r + rng.uniform01()) / R;
        if (u <= 0.0) u = 0x1.0p-53;
        axis_values[r] = norminv(u);
      }
      std::iota(perm.begin(), perm.end(), 0);
      for (int r = R - 1; r > 0; --r)
        std::swap(perm[r], perm[rng.index(static_cast<std::size_t>(r) + 1)]);
      for (int r = 0; r < R; ++r)
        draws[r][axis] = comp.center[axis] + comp.sigmas[axis] * axis_values[perm[r]];
    }
  }
  return set;
}

}  // namespace mixpose
