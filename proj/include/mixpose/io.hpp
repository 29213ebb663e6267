#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "mixpose/objective.hpp"
#include "mixpose/simharness.hpp"

namespace mixpose {

/// key=value pairs echoed into file headers so outputs are self-describing.
using MetaList = std::vector<std::pair<std::string, std::string>>;

/// Formats a double with round-trip precision (%.17g).
std::string format_double(double v);

/// CSV with '#' header lines encoding the grid spec and meta, then one row
/// of values per grid line (a single row for 1D densities).
void write_density_csv(const MeasurementDensity& d, const std::filesystem::path& path,
                       const MetaList& meta = {});

/// 16-bit binary PGM scaled to the density maximum (1D densities become a
/// one-row image).
void write_density_pgm(const MeasurementDensity& d, const std::filesystem::path& path);

/// CSV of the map values, one row per phi line.
void write_map_csv(const ObjectiveMap& map, const std::filesystem::path& path,
                   const MetaList& meta = {});

void write_map_pgm(const ObjectiveMap& map, const std::filesystem::path& path);

/// Sidecar text file annotating the argmax cell of a map.
void write_map_argmax(const ObjectiveMap& map, const std::filesystem::path& path,
                      const MetaList& meta = {});

/// Per-run CSV: seed, true pose, start pose, estimate, objective value,
/// iterations, converged and failed flags.
void write_run_records_csv(const std::vector<RunRecord>& runs,
                           const std::filesystem::path& path, const MetaList& meta = {});

struct StudyTableRow {
  SystemId system;
  ScenarioId scenario;
  std::array<double, 6> rms;
  int M = 0;
  int failures = 0;
};

/// Summary table: one row per system x scenario with the six RMS values
/// (angle RMS also in degrees).
void write_study_table_csv(const std::vector<StudyTableRow>& rows,
                           const std::filesystem::path& path, const MetaList& meta = {});

/// Plain-text config describing an object model and observation geometries.
/// Line forms (comments start with '#'):
///   point X Y Z [SX SY SZ]
///   camera GAMMA
///   lateration X Y Z
/// Points without sigmas become Delta components.
struct SceneConfig {
  ObjectModel object;
  std::vector<Projector> projectors;
};

SceneConfig load_scene_config(const std::filesystem::path& path);

}  // namespace mixpose
