#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mixpose/objective.hpp"

namespace mixpose {

struct OptimizerOptions {
  int max_iters = 2000;
  double xtol = 1e-6;   // simplex diameter (max-norm) termination threshold
  double ftol = 1e-12;  // value-spread termination threshold
  /// Per-parameter offsets for the initial simplex; empty selects defaults of
  /// 0.02 rad per angle and 2.0 length units per translation.
  std::vector<double> initial_simplex_scale;

  void validate() const;
};

struct NelderMeadResult {
  std::vector<double> x;
  double f = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Derivative-free maximization of f with the standard simplex method
/// (reflection 1, expansion 2, contraction 0.5, shrink 0.5), implemented by
/// minimizing -f. Terminates when the simplex diameter drops below xtol and
/// the value spread below ftol, or at max_iters. Deterministic: ties in the
/// vertex ordering break by insertion order. Throws on non-finite f at the
/// initial simplex. `scale` must have one entry per parameter.
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> x0, std::span<const double> scale,
                             const OptimizerOptions& opts);

/// Coarse-to-fine sensing widths; strictly decreasing, the last level is the
/// physical sigma_eps of the measurements.
struct AnnealSchedule {
  std::vector<double> sigma_eps_levels;

  void validate(double physical_sigma_eps) const;
};

struct EstimationResult {
  Pose pose;
  double objective_value = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Optimum per annealing level (single entry without a schedule).
  std::vector<std::pair<Pose, double>> trace;
};

/// Maximizes the matching objective over the pose starting from pose0, using
/// the sample set held fixed across iterations. With a schedule, each level
/// re-convolves the stored raw patterns at that sigma_eps and warm-starts
/// from the previous optimum; the final level uses the measurement densities
/// as given. Throws NoOverlapError when the objective is identically zero on
/// the initial simplex.
EstimationResult estimate_pose(const Problem& problem, const Pose& pose0,
                               const SampleSet& samples, const OptimizerOptions& opts = {},
                               const std::optional<AnnealSchedule>& schedule = {});

/// Calibrates observation geometries: maximizes the matching objective over
/// the geometry parameters selected by free_mask (concatenated per
/// observation: 1 angle per camera, 3 coordinates per lateration source) with
/// the object pose held at beta_fixed. Fixed parameters keep their
/// gamma_init values. Returns the full geometry list.
std::vector<Projector> calibrate(const Problem& problem, const Pose& beta_fixed,
                                 const std::vector<Projector>& gamma_init,
                                 const std::vector<bool>& free_mask,
                                 const SampleSet& samples,
                                 const OptimizerOptions& opts = {});

}  // namespace mixpose
