#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "mixpose/density.hpp"
#include "mixpose/geometry.hpp"

namespace mixpose {

/// One measurement: a gridded density paired with the projection geometry
/// that produced it. `raw_pattern` keeps the unblurred pattern so the
/// sensing kernel can be re-applied at other widths (annealing); `sigma_eps`
/// records the kernel the density was built with (0 when unknown).
struct Observation {
  MeasurementDensity density;
  Projector projector;
  std::optional<MeasurementDensity> raw_pattern;
  double sigma_eps = 0.0;
};

/// A pose estimation setting: the object mixture and L observations.
struct Problem {
  ObjectModel object;
  std::vector<Observation> observations;
  PoseKind pose_kind = PoseKind::Full6D;

  int num_observations() const { return static_cast<int>(observations.size()); }
  void validate() const;
};

/// Monte-Carlo matching objective
///   (1/(N R)) sum_i sum_r prod_l g_l(p(z_{i,r}; pose, gamma_l)),
/// with the product over observations taken inside the double sum.
double objective_mc(const Problem& problem, const Pose& pose, const SampleSet& samples);

/// Closed form for all-Delta objects: (1/N) sum_i prod_l g_l(p(z_i)).
/// Throws InvalidModelError if any component is not Delta.
double objective_delta(const Problem& problem, const Pose& pose);

/// The independence-assuming baseline (1/(NR))^L prod_l (sum_i sum_r g_l(...)).
/// Ignores the dependency of the per-observation matches on the common
/// object features; kept only for comparison against objective_mc.
double objective_naive(const Problem& problem, const Pose& pose, const SampleSet& samples);

/// Dense evaluation of the objective over a (phi, w) grid for reduced poses.
struct ObjectiveMap {
  std::vector<double> values;  // [iphi * n_w + iw]
  int n_phi = 0;
  int n_w = 0;
  double phi_min = 0, phi_max = 0;
  double w_min = 0, w_max = 0;
  int argmax_iphi = 0;
  int argmax_iw = 0;
  double max_value = 0;

  double at(int iphi, int iw) const { return values[static_cast<std::size_t>(iphi) * n_w + iw]; }
  double phi_at(int iphi) const;
  double w_at(int iw) const;
  double argmax_phi() const { return phi_at(argmax_iphi); }
  double argmax_w() const { return w_at(argmax_iw); }
};

/// Evaluates the objective on the Cartesian grid of n_phi x n_w reduced
/// poses (objective_delta for all-Delta objects, otherwise objective_mc with
/// the one fixed sample set). Requires pose_kind == Reduced2P.
ObjectiveMap objective_map(const Problem& problem, const SampleSet& samples,
                           std::pair<double, double> phi_range,
                           std::pair<double, double> w_range,
                           int n_phi, int n_w, int jobs = 1);

/// Number of strict interior local maxima with value >= frac * global max.
int count_local_maxima(const ObjectiveMap& map, double frac);

}  // namespace mixpose
