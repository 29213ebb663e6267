#include "mixpose/simharness.hpp"

#include <cmath>

#include "mixpose/errors.hpp"
#include "mixpose/parallel.hpp"
#include "mixpose/random.hpp"

namespace mixpose {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::string to_string(ScenarioId id) {
  switch (id) {
    case ScenarioId::I: return "I";
    case ScenarioId::II: return "II";
    case ScenarioId::III: return "III";
    case ScenarioId::IV: return "IV";
  }
  return "?";
}

ScenarioId scenario_from_string(const std::string& s) {
  if (s == "I" || s == "i" || s == "1") return ScenarioId::I;
  if (s == "II" || s == "ii" || s == "2") return ScenarioId::II;
  if (s == "III" || s == "iii" || s == "3") return ScenarioId::III;
  if (s == "IV" || s == "iv" || s == "4") return ScenarioId::IV;
  throw UsageError("unknown scenario '" + s + "' (expected I, II, III or IV)");
}

SystemSpec make_system(SystemId id, double object_sigma) {
  SystemSpec spec;
  spec.id = id;
  switch (id) {
    case SystemId::S1_CameraDelta:
      spec.projectors = {camera_projector(0.0), camera_projector(kPi / 2.0)};
      spec.object_sigma = 0.0;
      break;
    case SystemId::S2_CameraGaussian:
      spec.projectors = {camera_projector(0.0), camera_projector(kPi / 2.0)};
      spec.object_sigma = object_sigma;
      break;
    case SystemId::S3_Lateration:
      spec.projectors = {lateration_projector({0.0, -1000.0, 0.0}),
                         lateration_projector({1000.0, 0.0, 0.0}),
                         lateration_projector({0.0, 0.0, 1000.0})};
      spec.object_sigma = object_sigma;
      break;
  }
  return spec;
}

ScenarioConfig make_scenario(ScenarioId id) {
  ScenarioConfig cfg;
  cfg.id = id;
  switch (id) {
    case ScenarioId::I:
      break;
    case ScenarioId::II:
      cfg.sigma_eps = 20.0;
      break;
    case ScenarioId::III:
      cfg.deform_scales = Eigen::Vector3d(0.8, 1.0, 1.2);
      break;
    case ScenarioId::IV:
      cfg.snr = 0.5;
      break;
  }
  return cfg;
}

ObjectModel default_object(double sigma) {
  static const std::array<Eigen::Vector3d, 6> kFeaturePoints = {{
      {0.0, -25.00, -43.30},
      {100.00, -25.00, -43.30},
      {0.0, 61.60, -93.30},
      {100.00, 111.60, -6.70},
      {100.00, 25.00, 43.30},
      {0.0, 111.60, -6.70},
  }};
  ObjectModel model;
  model.components.reserve(kFeaturePoints.size());
  for (const auto& p : kFeaturePoints)
    model.components.push_back(sigma > 0.0 ? gaussian_feature(p, sigma) : delta_feature(p));
  return model;
}

namespace {

GridSpec autofit_camera_grid(const std::vector<Eigen::Vector2d>& points, double sigma_eps) {
  const double margin = 6.0 * sigma_eps;
  Eigen::Vector2d lo = points.front(), hi = points.front();
  for (const auto& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const int x0 = static_cast<int>(std::floor(lo.x() - margin));
  const int y0 = static_cast<int>(std::floor(lo.y() - margin));
  const int x1 = static_cast<int>(std::ceil(hi.x() + margin));
  const int y1 = static_cast<int>(std::ceil(hi.y() + margin));
  return grid_2d({static_cast<double>(x0), static_cast<double>(y0)},
                 {1.0, 1.0}, x1 - x0 + 1, y1 - y0 + 1);
}

GridSpec autofit_lateration_grid(const std::vector<Eigen::Vector2d>& distances) {
  double max_dist = 0.0;
  for (const auto& d : distances) max_dist = std::max(max_dist, d.x());
  const int count = static_cast<int>(std::ceil(2.0 * max_dist)) + 1;
  return grid_1d(0.0, 1.0, count);
}

}  // namespace

Problem synthesize(const SystemSpec& system, const ScenarioConfig& scenario,
                   const Pose& true_pose, std::uint64_t seed) {
  const double object_sigma = system.id == SystemId::S1_CameraDelta
                                  ? 0.0
                                  : scenario.object_sigma_override.value_or(system.object_sigma);
  return synthesize(default_object(object_sigma), system.projectors, scenario, true_pose, seed);
}

Problem synthesize(const ObjectModel& object, const std::vector<Projector>& projectors,
                   const ScenarioConfig& scenario, const Pose& true_pose,
                   std::uint64_t seed) {
  Problem problem;
  problem.pose_kind = kind_of(true_pose);
  problem.object = object;

  // Deformation acts on the measurement side only; the model keeps the
  // undeformed feature coordinates.
  const std::vector<Eigen::Vector3d> measured =
      deform(problem.object.centers(), scenario.deform_scales);

  const PoseTransform transform(true_pose);
  const SensingKernel kernel{scenario.sigma_eps};

  for (std::size_t l = 0; l < projectors.size(); ++l) {
    const Projector& projector = projectors[l];
    std::vector<Eigen::Vector2d> projected;
    projected.reserve(measured.size());
    for (const auto& z : measured) projected.push_back(projector.project(transform(z)));

    const GridSpec grid = projector.is_camera() ? autofit_camera_grid(projected, scenario.sigma_eps)
                                                : autofit_lateration_grid(projected);

    Observation obs;
    obs.projector = projector;
    obs.sigma_eps = scenario.sigma_eps;
    obs.raw_pattern = splat_points(projected, grid);
    obs.density = convolve_gaussian(*obs.raw_pattern, kernel);
    if (scenario.snr)
      obs.density = add_noise(obs.density, *scenario.snr, derive_seed(seed, l));
    problem.observations.push_back(std::move(obs));
  }
  return problem;
}

Pose6D sample_true_pose(std::uint64_t seed) {
  Rng rng(seed);
  Pose6D pose;
  pose.phi.x() = rng.uniform(-kPi / 36.0, kPi / 36.0);
  pose.phi.y() = rng.uniform(-kPi / 36.0, kPi / 36.0);
  pose.phi.z() = rng.uniform(-kPi / 3.0 - kPi / 36.0, -kPi / 3.0 + kPi / 36.0);
  for (int j = 0; j < 3; ++j) pose.w[j] = rng.uniform(35.0, 45.0);
  return pose;
}

Pose6D sample_start_offset(std::uint64_t seed) {
  Rng rng(seed);
  Pose6D delta;
  for (int j = 0; j < 3; ++j) delta.phi[j] = rng.uniform(-kPi / 72.0, kPi / 72.0);
  for (int j = 0; j < 3; ++j) delta.w[j] = rng.uniform(-5.0, 5.0);
  return delta;
}

StudyResult run_study(const SystemSpec& system, const ScenarioConfig& scenario,
                      int M, int R, std::uint64_t master_seed, int jobs,
                      const OptimizerOptions& opts) {
  if (M < 1) throw Error("study needs M >= 1 runs");
  if (R < 1) throw Error("study needs R >= 1 samples");

  StudyResult result;
  result.M = M;
  result.runs.resize(static_cast<std::size_t>(M));

  parallel_for(static_cast<std::size_t>(M), jobs, [&](std::size_t i) {
    RunRecord& rec = result.runs[i];
    rec.seed = derive_seed(master_seed, i);
    rec.true_pose = sample_true_pose(derive_seed(rec.seed, 0));
    const Pose6D offset = sample_start_offset(derive_seed(rec.seed, 2));
    rec.start_pose.phi = rec.true_pose.phi + offset.phi;
    rec.start_pose.w = rec.true_pose.w + offset.w;
    try {
      const Problem problem = synthesize(system, scenario, rec.true_pose,
                                         derive_seed(rec.seed, 1));
      const SampleSet samples = sample_components(problem.object, R, derive_seed(rec.seed, 3));
      const EstimationResult est = estimate_pose(problem, rec.start_pose, samples, opts);
      rec.estimate = std::get<Pose6D>(est.pose);
      rec.objective_value = est.objective_value;
      rec.iterations = est.iterations;
      rec.converged = est.converged;
    } catch (const std::exception& e) {
      rec.failed = true;
      rec.failure_reason = e.what();
    }
  });

  std::array<double, 6> sq{};
  int included = 0;
  for (const auto& rec : result.runs) {
    if (rec.failed) {
      ++result.failures;
      continue;
    }
    ++included;
    for (int j = 0; j < 3; ++j) {
      const double dphi = rec.estimate.phi[j] - rec.true_pose.phi[j];
      const double dw = rec.estimate.w[j] - rec.true_pose.w[j];
      sq[j] += dphi * dphi;
      sq[j + 3] += dw * dw;
    }
  }
  if (included > 0)
    for (int j = 0; j < 6; ++j) result.rms[j] = std::sqrt(sq[j] / included);
  return result;
}

Pose2P map_true_pose() { return Pose2P{kPi / 3.0, 40.0}; }

ObjectiveMap run_map_study(const SystemSpec& system, const ScenarioConfig& scenario,
                           const MapStudyConfig& config) {
  const double object_sigma =
      system.id == SystemId::S1_CameraDelta
          ? 0.0
          : scenario.object_sigma_override.value_or(system.object_sigma);
  return run_map_study(default_object(object_sigma), system.projectors, scenario, config);
}

ObjectiveMap run_map_study(const ObjectModel& object, const std::vector<Projector>& projectors,
                           const ScenarioConfig& scenario, const MapStudyConfig& config) {
  const Problem problem = synthesize(object, projectors, scenario, map_true_pose(), config.seed);

  int R = config.R;
  if (R <= 0) R = projectors.front().is_camera() ? 240 : 120;
  const SampleSet samples = sample_components(problem.object, R, derive_seed(config.seed, 17));

  return objective_map(problem, samples, {config.phi_min, config.phi_max},
                       {config.w_min, config.w_max}, config.n_phi, config.n_w, config.jobs);
}

}  // namespace mixpose
