#include "mixpose/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "mixpose/errors.hpp"
#include "mixpose/io.hpp"
#include "mixpose/random.hpp"

namespace mixpose {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string command_name(RunConfig::Command c) {
  switch (c) {
    case RunConfig::Command::Map: return "map";
    case RunConfig::Command::Estimate: return "estimate";
    case RunConfig::Command::Calibrate: return "calibrate";
    case RunConfig::Command::Study: return "study";
  }
  return "?";
}

void add_common_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--system", cfg.system, "Observation system (1 camera/delta, 2 camera/gaussian, 3 lateration)")
      ->check(CLI::Range(1, 3))
      ->capture_default_str();
  cmd->add_option_function<std::string>(
         "--scenario",
         [&cfg](const std::string& s) { cfg.scenario = scenario_from_string(s); },
         "Simulation scenario I, II, III or IV")
      ->default_str("I");
  cmd->add_option("--seed", cfg.seed, "Master random seed")->capture_default_str();
  cmd->add_option("--sigma-eps", cfg.sigma_eps,
                  "Sensing density std (default from the scenario: 5, II uses 20)");
  cmd->add_option("--object-sigma", cfg.object_sigma,
                  "Object feature std (default 5; maps use 10; system 1 is always exact)");
  cmd->add_option("--snr", cfg.snr, "Measurement noise SNR (default: scenario IV uses 0.5)");
  cmd->add_option("--out", cfg.out_dir, "Output directory")->capture_default_str();
  cmd->add_option("--config", cfg.config_path,
                  "Scene config file replacing the built-in object and geometries");
}

MetaList base_meta(const RunConfig& cfg) {
  MetaList meta;
  meta.emplace_back("command", command_name(cfg.command));
  meta.emplace_back("system", std::to_string(cfg.system));
  meta.emplace_back("scenario", to_string(cfg.scenario));
  meta.emplace_back("seed", std::to_string(cfg.seed));
  meta.emplace_back("M", std::to_string(cfg.M));
  meta.emplace_back("R", std::to_string(cfg.R));
  if (cfg.sigma_eps) meta.emplace_back("sigma_eps", format_double(*cfg.sigma_eps));
  if (cfg.object_sigma) meta.emplace_back("object_sigma", format_double(*cfg.object_sigma));
  if (cfg.snr) meta.emplace_back("snr", format_double(*cfg.snr));
  return meta;
}

ScenarioConfig scenario_with_overrides(const RunConfig& cfg) {
  ScenarioConfig scn = make_scenario(cfg.scenario);
  if (cfg.sigma_eps) scn.sigma_eps = *cfg.sigma_eps;
  if (cfg.snr) scn.snr = cfg.snr;
  if (cfg.object_sigma) scn.object_sigma_override = cfg.object_sigma;
  return scn;
}

std::filesystem::path prepare_out_dir(const RunConfig& cfg) {
  std::filesystem::path dir(cfg.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  return dir;
}

std::string tag_of(const RunConfig& cfg) {
  return "system" + std::to_string(cfg.system) + "_" + to_string(cfg.scenario);
}

std::string pose_summary(const Pose6D& p) {
  std::ostringstream os;
  os << "phi=(" << p.phi.x() << ", " << p.phi.y() << ", " << p.phi.z() << ") w=("
     << p.w.x() << ", " << p.w.y() << ", " << p.w.z() << ")";
  return os.str();
}

int run_map(const RunConfig& cfg) {
  const auto dir = prepare_out_dir(cfg);
  const ScenarioConfig scn = scenario_with_overrides(cfg);

  MapStudyConfig map_cfg;
  map_cfg.n_phi = cfg.map_res;
  map_cfg.n_w = cfg.map_res;
  map_cfg.R = cfg.R;
  map_cfg.seed = cfg.seed;
  map_cfg.jobs = cfg.jobs;

  ObjectiveMap map;
  Problem problem;
  if (!cfg.config_path.empty()) {
    const SceneConfig scene = load_scene_config(cfg.config_path);
    problem = synthesize(scene.object, scene.projectors, scn, map_true_pose(), cfg.seed);
    map = run_map_study(scene.object, scene.projectors, scn, map_cfg);
  } else {
    const SystemSpec system =
        make_system(static_cast<SystemId>(cfg.system), cfg.object_sigma.value_or(10.0));
    problem = synthesize(system, scn, map_true_pose(), cfg.seed);
    map = run_map_study(system, scn, map_cfg);
  }

  MetaList meta = base_meta(cfg);
  meta.emplace_back("map_res", std::to_string(cfg.map_res));
  const std::string tag = tag_of(cfg);
  write_map_csv(map, dir / ("map_" + tag + ".csv"), meta);
  write_map_pgm(map, dir / ("map_" + tag + ".pgm"));
  write_map_argmax(map, dir / ("map_" + tag + "_argmax.txt"), meta);
  for (std::size_t l = 0; l < problem.observations.size(); ++l) {
    const std::string stem = "measurement_" + tag + "_view" + std::to_string(l);
    write_density_csv(problem.observations[l].density, dir / (stem + ".csv"), meta);
    write_density_pgm(problem.observations[l].density, dir / (stem + ".pgm"));
  }

  std::cout << "map argmax: phi=" << map.argmax_phi() << " w=" << map.argmax_w()
            << " cell=(" << map.argmax_iphi << "," << map.argmax_iw
            << ") max=" << map.max_value << "\n";
  return kExitOk;
}

int run_estimate(const RunConfig& cfg) {
  const auto dir = prepare_out_dir(cfg);
  const ScenarioConfig scn = scenario_with_overrides(cfg);

  RunRecord rec;
  rec.seed = cfg.seed;
  rec.true_pose = sample_true_pose(derive_seed(cfg.seed, 0));
  const Pose6D offset = sample_start_offset(derive_seed(cfg.seed, 2));
  rec.start_pose.phi = rec.true_pose.phi + offset.phi;
  rec.start_pose.w = rec.true_pose.w + offset.w;

  Problem problem;
  if (!cfg.config_path.empty()) {
    const SceneConfig scene = load_scene_config(cfg.config_path);
    problem = synthesize(scene.object, scene.projectors, scn, rec.true_pose,
                         derive_seed(cfg.seed, 1));
  } else {
    const SystemSpec system =
        make_system(static_cast<SystemId>(cfg.system), cfg.object_sigma.value_or(5.0));
    problem = synthesize(system, scn, rec.true_pose, derive_seed(cfg.seed, 1));
  }

  const SampleSet samples = sample_components(problem.object, cfg.R, derive_seed(cfg.seed, 3));
  std::optional<AnnealSchedule> schedule;
  if (!cfg.anneal.empty()) schedule = AnnealSchedule{cfg.anneal};

  const EstimationResult est = estimate_pose(problem, rec.start_pose, samples, {}, schedule);
  rec.estimate = std::get<Pose6D>(est.pose);
  rec.objective_value = est.objective_value;
  rec.iterations = est.iterations;
  rec.converged = est.converged;

  write_run_records_csv({rec}, dir / ("estimate_" + tag_of(cfg) + ".csv"), base_meta(cfg));
  std::cout << "estimate: " << pose_summary(rec.estimate) << " value=" << rec.objective_value
            << " iterations=" << rec.iterations << " converged=" << (rec.converged ? 1 : 0)
            << "\n";
  return kExitOk;
}

// Synthesize-then-recover demonstration of the geometry calibration with the
// gauge fixing appropriate for each system kind.
int run_calibrate(const RunConfig& cfg) {
  const auto dir = prepare_out_dir(cfg);
  const ScenarioConfig scn = scenario_with_overrides(cfg);
  Rng perturb(derive_seed(cfg.seed, 5));

  const bool camera_system = cfg.system != 3;
  std::vector<Projector> true_geom, init_geom;
  std::vector<bool> free_mask;
  Pose6D beta_fixed;
  if (camera_system) {
    // gamma_1 pinned to zero, gamma_2 recovers the deviation from pi/2.
    true_geom = {camera_projector(0.0),
                 camera_projector(kPi / 2.0 + perturb.uniform(-0.1, 0.1))};
    init_geom = {camera_projector(0.0), camera_projector(kPi / 2.0)};
    free_mask = {false, true};
  } else {
    // Lateration gauge: source 1 fixed, source 2 free in x, source 3 in x, y.
    const double d2 = perturb.uniform(-5.0, 5.0);
    const double d3x = perturb.uniform(-5.0, 5.0);
    const double d3y = perturb.uniform(-5.0, 5.0);
    true_geom = {lateration_projector({0.0, 0.0, 0.0}),
                 lateration_projector({1000.0 + d2, 0.0, 0.0}),
                 lateration_projector({d3x, 1000.0 + d3y, 0.0})};
    init_geom = {lateration_projector({0.0, 0.0, 0.0}),
                 lateration_projector({1000.0, 0.0, 0.0}),
                 lateration_projector({0.0, 1000.0, 0.0})};
    free_mask = {false, false, false, true, false, false, true, true, false};
    beta_fixed.w = Eigen::Vector3d(40.0, 40.0, 40.0);
  }

  const double object_sigma = cfg.system == 1 ? 0.0 : cfg.object_sigma.value_or(5.0);
  const ObjectModel object = default_object(object_sigma);
  const Problem problem =
      synthesize(object, true_geom, scn, beta_fixed, derive_seed(cfg.seed, 1));
  const SampleSet samples = sample_components(object, cfg.R, derive_seed(cfg.seed, 3));

  const std::vector<Projector> recovered =
      calibrate(problem, beta_fixed, init_geom, free_mask, samples);

  auto out = std::ofstream(dir / ("calibrate_" + tag_of(cfg) + ".csv"));
  if (!out) throw IoError("cannot write calibration results");
  for (const auto& [key, value] : base_meta(cfg)) out << "# " << key << "=" << value << "\n";
  out << "view,param,true,init,recovered,abs_error\n";
  double worst = 0.0;
  for (std::size_t l = 0; l < recovered.size(); ++l) {
    const auto dump = [&](const char* name, double tv, double iv, double rv) {
      const double err = std::abs(rv - tv);
      worst = std::max(worst, err);
      out << l << "," << name << "," << format_double(tv) << "," << format_double(iv) << ","
          << format_double(rv) << "," << format_double(err) << "\n";
    };
    if (recovered[l].is_camera()) {
      dump("gamma", std::get<CameraGeometry>(true_geom[l].geometry).gamma,
           std::get<CameraGeometry>(init_geom[l].geometry).gamma,
           std::get<CameraGeometry>(recovered[l].geometry).gamma);
    } else {
      const auto& tv = std::get<LaterationGeometry>(true_geom[l].geometry).gamma;
      const auto& iv = std::get<LaterationGeometry>(init_geom[l].geometry).gamma;
      const auto& rv = std::get<LaterationGeometry>(recovered[l].geometry).gamma;
      const char* names[3] = {"x", "y", "z"};
      for (int j = 0; j < 3; ++j) dump(names[j], tv[j], iv[j], rv[j]);
    }
  }
  std::cout << "calibrate: recovered " << recovered.size()
            << " geometries, max abs error " << worst << "\n";
  return kExitOk;
}

int run_study_command(const RunConfig& cfg) {
  const auto dir = prepare_out_dir(cfg);
  const ScenarioConfig scn = scenario_with_overrides(cfg);
  const SystemSpec system =
      make_system(static_cast<SystemId>(cfg.system), cfg.object_sigma.value_or(5.0));

  const StudyResult result = run_study(system, scn, cfg.M, cfg.R, cfg.seed, cfg.jobs);

  MetaList meta = base_meta(cfg);
  meta.emplace_back("jobs", std::to_string(cfg.jobs));
  const std::string tag = tag_of(cfg);
  write_run_records_csv(result.runs, dir / ("study_" + tag + "_runs.csv"), meta);
  write_study_table_csv({{system.id, scn.id, result.rms, result.M, result.failures}},
                        dir / ("study_" + tag + "_table.csv"), meta);

  std::cout << "study rms: phi=[" << result.rms[0] << ", " << result.rms[1] << ", "
            << result.rms[2] << "] rad w=[" << result.rms[3] << ", " << result.rms[4]
            << ", " << result.rms[5] << "] failures=" << result.failures << "\n";
  return kExitOk;
}

}  // namespace

RunConfig parse_args(const std::vector<std::string>& args, std::string* help_text) {
  RunConfig cfg;
  CLI::App app{"mixpose: correspondence-free rigid pose estimation from "
               "mixture-model densities"};
  app.require_subcommand(0, 1);

  CLI::App* map_cmd = app.add_subcommand(
      "map", "Dense (phi, w) objective map around the reference reduced pose");
  CLI::App* est_cmd = app.add_subcommand(
      "estimate", "One randomized 6D estimation run (true pose drawn from --seed)");
  CLI::App* cal_cmd = app.add_subcommand(
      "calibrate", "Synthesize-then-recover geometry calibration demonstration");
  CLI::App* study_cmd = app.add_subcommand(
      "study", "Randomized M-run 6D estimation study with RMS aggregation");

  for (CLI::App* cmd : {map_cmd, est_cmd, cal_cmd, study_cmd}) add_common_options(cmd, cfg);

  map_cmd->add_option("--map-res", cfg.map_res, "Map resolution per axis")
      ->check(CLI::Range(2, 4001))
      ->capture_default_str();
  map_cmd->add_option("--R", cfg.R, "Samples per map pixel (0 = per-system default)")
      ->check(CLI::Range(0, 1000000));
  map_cmd->add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::Range(1, 256));

  for (CLI::App* cmd : {est_cmd, cal_cmd}) {
    cmd->add_option("--R", cfg.R, "Monte-Carlo samples per feature")
        ->check(CLI::Range(1, 1000000))
        ->capture_default_str();
  }
  est_cmd->add_option("--anneal", cfg.anneal,
                      "Comma-separated sigma_eps annealing levels ending at the physical value")
      ->delimiter(',');

  study_cmd->add_option("--M", cfg.M, "Number of simulation runs")
      ->check(CLI::Range(1, 1000000))
      ->capture_default_str();
  study_cmd->add_option("--R", cfg.R, "Monte-Carlo samples per feature")
      ->check(CLI::Range(1, 1000000))
      ->capture_default_str();
  study_cmd->add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::Range(1, 256));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    if (help_text) *help_text = app.help();
    return cfg;
  } catch (const CLI::ParseError& e) {
    throw UsageError(std::string(e.what()) + "\nRun with --help for usage.");
  }

  if (map_cmd->parsed()) {
    cfg.command = RunConfig::Command::Map;
    if (map_cmd->get_option("--R")->empty()) cfg.R = 0;                // per-system default
    if (map_cmd->get_option("--system")->empty()) cfg.system = 1;     // reference map system
  } else if (est_cmd->parsed()) {
    cfg.command = RunConfig::Command::Estimate;
  } else if (cal_cmd->parsed()) {
    cfg.command = RunConfig::Command::Calibrate;
  } else if (study_cmd->parsed()) {
    cfg.command = RunConfig::Command::Study;
  } else {
    throw UsageError(app.help());
  }
  return cfg;
}

int run(const RunConfig& cfg) {
  switch (cfg.command) {
    case RunConfig::Command::Map: return run_map(cfg);
    case RunConfig::Command::Estimate: return run_estimate(cfg);
    case RunConfig::Command::Calibrate: return run_calibrate(cfg);
    case RunConfig::Command::Study: return run_study_command(cfg);
  }
  throw UsageError("unknown command");
}

int cli_main(int argc, const char* const* argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  try {
    std::string help;
    RunConfig cfg = parse_args(args, &help);
    if (!help.empty()) {
      std::cout << help;
      return kExitOk;
    }
    return run(cfg);
  } catch (const UsageError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace mixpose
