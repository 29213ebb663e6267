#include "mixpose/objective.hpp"

#include <cmath>

#include "mixpose/errors.hpp"
#include "mixpose/parallel.hpp"

namespace mixpose {

void Problem::validate() const {
  object.validate();
  if (observations.empty()) throw Error("problem needs at least one observation");
  for (const auto& obs : observations) {
    if (obs.density.grid.dim != obs.projector.output_dim())
      throw Error("observation grid dimension does not match projector output");
  }
}

namespace {

void check_samples(const Problem& problem, const SampleSet& samples) {
  if (samples.samples.size() != problem.object.components.size())
    throw Error("sample set does not match the object model");
  if (samples.draws_per_component < 1) throw Error("sample set is empty");
}

double product_over_observations(const Problem& problem, const PoseTransform& transform,
                                 const Eigen::Vector3d& z) {
  const Eigen::Vector3d u = transform(z);
  double prod = 1.0;
  for (const auto& obs : problem.observations) {
    prod *= obs.density.interpolate(obs.projector.project(u));
    if (prod == 0.0) break;
  }
  return prod;
}

}  // namespace

double objective_mc(const Problem& problem, const Pose& pose, const SampleSet& samples) {
  check_samples(problem, samples);
  const PoseTransform transform(pose);
  double acc = 0.0;
  for (const auto& draws : samples.samples)
    for (const auto& z : draws) acc += product_over_observations(problem, transform, z);
  const double n = static_cast<double>(samples.samples.size());
  const double r = static_cast<double>(samples.draws_per_component);
  return acc / (n * r);
}

double objective_delta(const Problem& problem, const Pose& pose) {
  if (!problem.object.all_delta())
    throw InvalidModelError("objective_delta requires an all-Delta object model");
  const PoseTransform transform(pose);
  double acc = 0.0;
  for (const auto& comp : problem.object.components)
    acc += product_over_observations(problem, transform, comp.center);
  return acc / static_cast<double>(problem.object.components.size());
}

double objective_naive(const Problem& problem, const Pose& pose, const SampleSet& samples) {
  check_samples(problem, samples);
  const PoseTransform transform(pose);
  const double nr = static_cast<double>(samples.samples.size()) *
                    static_cast<double>(samples.draws_per_component);
  double prod = 1.0;
  for (const auto& obs : problem.observations) {
    double view_sum = 0.0;
    for (const auto& draws : samples.samples)
      for (const auto& z : draws)
        view_sum += obs.density.interpolate(obs.projector.project(transform(z)));
    prod *= view_sum / nr;
  }
  return prod;
}

double ObjectiveMap::phi_at(int iphi) const {
  if (n_phi == 1) return phi_min;
  return phi_min + (phi_max - phi_min) * iphi / (n_phi - 1);
}

double ObjectiveMap::w_at(int iw) const {
  if (n_w == 1) return w_min;
  return w_min + (w_max - w_min) * iw / (n_w - 1);
}

ObjectiveMap objective_map(const Problem& problem, const SampleSet& samples,
                           std::pair<double, double> phi_range,
                           std::pair<double, double> w_range,
                           int n_phi, int n_w, int jobs) {
  if (problem.pose_kind != PoseKind::Reduced2P)
    throw Error("objective_map requires a reduced 2-parameter pose");
  if (n_phi < 1 || n_w < 1) throw Error("map resolution must be at least 1x1");
  if (!(phi_range.second >= phi_range.first) || !(w_range.second >= w_range.first))
    throw Error("empty map range");

  ObjectiveMap map;
  map.n_phi = n_phi;
  map.n_w = n_w;
  map.phi_min = phi_range.first;
  map.phi_max = phi_range.second;
  map.w_min = w_range.first;
  map.w_max = w_range.second;
  map.values.assign(static_cast<std::size_t>(n_phi) * n_w, 0.0);

  const bool use_delta = problem.object.all_delta();
  parallel_for(static_cast<std::size_t>(n_phi), jobs, [&](std::size_t iphi) {
    for (int iw = 0; iw < n_w; ++iw) {
      const Pose pose = Pose2P{map.phi_at(static_cast<int>(iphi)), map.w_at(iw)};
      map.values[iphi * n_w + iw] =
          use_delta ? objective_delta(problem, pose) : objective_mc(problem, pose, samples);
    }
  });

  map.max_value = map.values[0];
  for (int iphi = 0; iphi < n_phi; ++iphi)
    for (int iw = 0; iw < n_w; ++iw)
      if (map.at(iphi, iw) > map.max_value) {
        map.max_value = map.at(iphi, iw);
        map.argmax_iphi = iphi;
        map.argmax_iw = iw;
      }
  return map;
}

int count_local_maxima(const ObjectiveMap& map, double frac) {
  const double threshold = frac * map.max_value;
  int count = 0;
  for (int i = 1; i < map.n_phi - 1; ++i) {
    for (int j = 1; j < map.n_w - 1; ++j) {
      const double v = map.at(i, j);
      if (v < threshold) continue;
      bool is_max = true;
      for (int di = -1; di <= 1 && is_max; ++di)
        for (int dj = -1; dj <= 1 && is_max; ++dj)
          if ((di != 0 || dj != 0) && map.at(i + di, j + dj) >= v) is_max = false;
      if (is_max) ++count;
    }
  }
  return count;
}

}  // namespace mixpose
