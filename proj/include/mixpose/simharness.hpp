#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "mixpose/estimator.hpp"

namespace mixpose {

enum class SystemId { S1_CameraDelta = 1, S2_CameraGaussian = 2, S3_Lateration = 3 };
enum class ScenarioId { I = 1, II = 2, III = 3, IV = 4 };

std::string to_string(ScenarioId id);
ScenarioId scenario_from_string(const std::string& s);

/// Observation system under study: the projector set plus the knowledge
/// level about the object features (0 => exactly known, Delta components).
struct SystemSpec {
  SystemId id = SystemId::S2_CameraGaussian;
  std::vector<Projector> projectors;
  double object_sigma = 5.0;
};

/// Systems 1 and 2: two cameras at gamma = 0 and pi/2. System 3: lateration
/// sources at (0,-1000,0), (1000,0,0), (0,0,1000). System 1 forces
/// object_sigma = 0.
SystemSpec make_system(SystemId id, double object_sigma = 5.0);

/// Simulation scenario: I base (sigma_eps = 5), II low resolution
/// (sigma_eps = 20), III deformation scales (0.8, 1.0, 1.2), IV noise with
/// SNR 0.5.
struct ScenarioConfig {
  ScenarioId id = ScenarioId::I;
  double sigma_eps = 5.0;
  Eigen::Vector3d deform_scales = Eigen::Vector3d::Ones();
  std::optional<double> snr;
  std::optional<double> object_sigma_override;
};

ScenarioConfig make_scenario(ScenarioId id);

/// The six reference feature points. sigma <= 0 gives Delta components,
/// otherwise isotropic Gaussians of that std.
ObjectModel default_object(double sigma = 0.0);

/// Builds the L simulated measurements for a true pose: deformation applied
/// to the measurement side only, rigid transform, projection, splatting onto
/// an auto-fitted grid, sensing blur, normalization, scenario noise. The
/// returned problem keeps the undeformed object model.
Problem synthesize(const SystemSpec& system, const ScenarioConfig& scenario,
                   const Pose& true_pose, std::uint64_t seed);

/// Core synthesis for an explicit object model and projector set.
Problem synthesize(const ObjectModel& object, const std::vector<Projector>& projectors,
                   const ScenarioConfig& scenario, const Pose& true_pose,
                   std::uint64_t seed);

/// Uniform true pose: phi1, phi2 in [-pi/36, pi/36], phi3 in
/// [-pi/3 - pi/36, -pi/3 + pi/36], w components in [35, 45].
Pose6D sample_true_pose(std::uint64_t seed);

/// Uniform start offset: dphi in [-pi/72, pi/72]^3, dw in [-5, 5]^3.
Pose6D sample_start_offset(std::uint64_t seed);

struct RunRecord {
  std::uint64_t seed = 0;
  Pose6D true_pose;
  Pose6D start_pose;
  Pose6D estimate;
  double objective_value = 0.0;
  int iterations = 0;
  bool converged = false;
  bool failed = false;
  std::string failure_reason;
};

struct StudyResult {
  std::vector<RunRecord> runs;
  std::array<double, 6> rms{};  // phi1..3 [rad], w1..3 [length units]
  int M = 0;
  int failures = 0;
};

/// Runs M randomized 6D estimation runs (independent per-run seed streams
/// derived from master_seed, so any job count gives identical results) and
/// aggregates per-parameter RMS errors. Runs that raise are recorded as
/// failed and excluded from the RMS; non-converged runs are included.
StudyResult run_study(const SystemSpec& system, const ScenarioConfig& scenario,
                      int M, int R, std::uint64_t master_seed, int jobs = 1,
                      const OptimizerOptions& opts = {});

/// Reduced-pose objective map study around the true value (pi/3, 40).
/// The default (phi, w) window is centred on the true pose.
struct MapStudyConfig {
  int n_phi = 201;
  int n_w = 201;
  double phi_min = 0.0;
  double phi_max = 2.0 * 3.14159265358979323846 / 3.0;
  double w_min = 0.0;
  double w_max = 80.0;
  int R = 0;  // 0 selects the per-system default (240 camera, 120 lateration)
  std::uint64_t seed = 1;
  int jobs = 1;
};

/// Synthesizes the reduced-pose measurements and evaluates the objective
/// map. Use make_system(id, 10.0) for the reference map setting.
ObjectiveMap run_map_study(const SystemSpec& system, const ScenarioConfig& scenario,
                           const MapStudyConfig& config);

ObjectiveMap run_map_study(const ObjectModel& object, const std::vector<Projector>& projectors,
                           const ScenarioConfig& scenario, const MapStudyConfig& config);

/// True reduced pose used by the map study.
Pose2P map_true_pose();

}  // namespace mixpose
