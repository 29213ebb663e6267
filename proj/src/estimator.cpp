#include "mixpose/estimator.hpp"

#include <algorithm>
#include <cmath>

#include "mixpose/errors.hpp"

namespace mixpose {

void OptimizerOptions::validate() const {
  if (max_iters < 1) throw Error("max_iters must be >= 1");
  if (!(xtol > 0.0) || !(ftol > 0.0)) throw Error("optimizer tolerances must be positive");
}

namespace {

struct Vertex {
  std::vector<double> x;
  double f = 0.0;     // internal minimization value (-objective)
  long order = 0;     // insertion index, breaks value ties deterministically
};

double simplex_diameter(const std::vector<Vertex>& simplex) {
  const auto& best = simplex.front().x;
  double diam = 0.0;
  for (std::size_t v = 1; v < simplex.size(); ++v)
    for (std::size_t j = 0; j < best.size(); ++j)
      diam = std::max(diam, std::abs(simplex[v].x[j] - best[j]));
  return diam;
}

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> x0, std::span<const double> scale,
                             const OptimizerOptions& opts) {
  opts.validate();
  const std::size_t n = x0.size();
  if (n == 0) throw Error("nelder_mead needs at least one parameter");
  if (scale.size() != n) throw Error("simplex scale length does not match parameter count");

  const auto eval = [&f](const std::vector<double>& x) { return -f(x); };

  long next_order = 0;
  std::vector<Vertex> simplex;
  simplex.reserve(n + 1);
  simplex.push_back({x0, eval(x0), next_order++});
  if (!std::isfinite(simplex[0].f))
    throw Error("objective is not finite at the start point");
  for (std::size_t j = 0; j < n; ++j) {
    Vertex v{x0, 0.0, next_order++};
    v.x[j] += scale[j];
    v.f = eval(v.x);
    if (!std::isfinite(v.f)) throw Error("objective is not finite at an initial simplex vertex");
    simplex.push_back(std::move(v));
  }

  const auto order_simplex = [&simplex] {
    std::stable_sort(simplex.begin(), simplex.end(), [](const Vertex& a, const Vertex& b) {
      return a.f < b.f || (a.f == b.f && a.order < b.order);
    });
  };
  order_simplex();

  constexpr double reflection = 1.0;
  constexpr double expansion = 2.0;
  constexpr double contraction = 0.5;
  constexpr double shrink = 0.5;

  int iterations = 0;
  bool converged = false;
  std::vector<double> centroid(n), candidate(n);

  while (iterations < opts.max_iters) {
    const double spread = std::abs(simplex.back().f - simplex.front().f);
    if (simplex_diameter(simplex) < opts.xtol && spread < opts.ftol) {
      converged = true;
      break;
    }
    ++iterations;

    // Centroid of all vertices except the worst.
    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[v].x[j];
    for (double& c : centroid) c /= static_cast<double>(n);

    Vertex& worst = simplex.back();
    const double f_best = simplex.front().f;
    const double f_second_worst = simplex[n - 1].f;

    const auto try_point = [&](double coeff) {
      for (std::size_t j = 0; j < n; ++j)
        candidate[j] = centroid[j] + coeff * (centroid[j] - worst.x[j]);
      return eval(candidate);
    };
    const auto accept = [&](double fv) {
      worst.x = candidate;
      worst.f = fv;
      worst.order = next_order++;
    };

    const double f_reflect = try_point(reflection);
    if (f_reflect < f_best) {
      const std::vector<double> reflected = candidate;
      const double f_expand = try_point(expansion);
      if (f_expand < f_reflect) {
        accept(f_expand);
      } else {
        candidate = reflected;
        accept(f_reflect);
      }
    } else if (f_reflect < f_second_worst) {
      accept(f_reflect);
    } else {
      bool do_shrink = false;
      if (f_reflect < worst.f) {
        const double f_out = try_point(contraction);
        if (f_out <= f_reflect) {
          accept(f_out);
        } else {
          do_shrink = true;
        }
      } else {
        const double f_in = try_point(-contraction);
        if (f_in < worst.f) {
          accept(f_in);
        } else {
          do_shrink = true;
        }
      }
      if (do_shrink) {
        const std::vector<double> best_x = simplex.front().x;
        for (std::size_t v = 1; v <= n; ++v) {
          for (std::size_t j = 0; j < n; ++j)
            simplex[v].x[j] = best_x[j] + shrink * (simplex[v].x[j] - best_x[j]);
          simplex[v].f = eval(simplex[v].x);
          simplex[v].order = next_order++;
        }
      }
    }
    order_simplex();
  }

  NelderMeadResult result;
  result.x = simplex.front().x;
  result.f = -simplex.front().f;
  result.iterations = iterations;
  result.converged = converged;
  return result;
}

void AnnealSchedule::validate(double physical_sigma_eps) const {
  if (sigma_eps_levels.empty()) throw Error("annealing schedule is empty");
  for (std::size_t i = 0; i < sigma_eps_levels.size(); ++i) {
    if (!(sigma_eps_levels[i] > 0.0)) throw Error("annealing levels must be positive");
    if (i > 0 && !(sigma_eps_levels[i] < sigma_eps_levels[i - 1]))
      throw Error("annealing levels must be strictly decreasing");
  }
  if (physical_sigma_eps > 0.0 &&
      std::abs(sigma_eps_levels.back() - physical_sigma_eps) > 1e-12 * physical_sigma_eps)
    throw Error("last annealing level must equal the physical sigma_eps");
}

namespace {

std::vector<double> default_pose_scale(PoseKind kind) {
  if (kind == PoseKind::Full6D) return {0.02, 0.02, 0.02, 2.0, 2.0, 2.0};
  return {0.02, 2.0};
}

// One Nelder-Mead run of the pose objective on the given problem.
NelderMeadResult run_pose_level(const Problem& problem, const Pose& start,
                                const SampleSet& samples, std::span<const double> scale,
                                const OptimizerOptions& opts, bool check_overlap) {
  const PoseKind kind = kind_of(start);
  const bool use_delta = problem.object.all_delta();
  const auto objective = [&](std::span<const double> params) {
    const Pose pose = pose_from_vector(kind, params);
    return use_delta ? objective_delta(problem, pose) : objective_mc(problem, pose, samples);
  };

  if (check_overlap) {
    std::vector<double> x = pose_to_vector(start);
    bool any_positive = objective(x) > 0.0;
    for (std::size_t j = 0; j < x.size() && !any_positive; ++j) {
      std::vector<double> v = x;
      v[j] += scale[j];
      any_positive = objective(v) > 0.0;
    }
    if (!any_positive)
      throw NoOverlapError(
          "objective is identically zero around the start pose; use a broader "
          "annealing schedule or a better start pose");
  }
  return nelder_mead(objective, pose_to_vector(start), scale, opts);
}

}  // namespace

EstimationResult estimate_pose(const Problem& problem, const Pose& pose0,
                               const SampleSet& samples, const OptimizerOptions& opts,
                               const std::optional<AnnealSchedule>& schedule) {
  problem.validate();
  if (kind_of(pose0) != problem.pose_kind)
    throw Error("start pose parameterization does not match the problem");

  std::vector<double> scale = opts.initial_simplex_scale.empty()
                                  ? default_pose_scale(problem.pose_kind)
                                  : opts.initial_simplex_scale;
  if (static_cast<int>(scale.size()) != pose_dim(problem.pose_kind))
    throw Error("initial_simplex_scale length does not match the pose dimension");

  EstimationResult result;
  Pose current = pose0;

  if (schedule) {
    for (const auto& obs : problem.observations) {
      schedule->validate(obs.sigma_eps);
      if (!obs.raw_pattern)
        throw Error("annealing requires observations that carry their raw pattern");
    }
    // Coarse levels rebuild the blur from the raw patterns; the final level
    // runs on the measurement densities exactly as given.
    Problem level_problem = problem;
    const std::size_t levels = schedule->sigma_eps_levels.size();
    for (std::size_t k = 0; k + 1 < levels; ++k) {
      const SensingKernel kernel{schedule->sigma_eps_levels[k]};
      for (std::size_t l = 0; l < level_problem.observations.size(); ++l)
        level_problem.observations[l].density =
            convolve_gaussian(*problem.observations[l].raw_pattern, kernel);
      const NelderMeadResult nm =
          run_pose_level(level_problem, current, samples, scale, opts, k == 0);
      current = pose_from_vector(problem.pose_kind, nm.x);
      result.iterations += nm.iterations;
      result.trace.emplace_back(current, nm.f);
    }
  }

  const NelderMeadResult nm =
      run_pose_level(problem, current, samples, scale, opts, !schedule);
  result.pose = pose_from_vector(problem.pose_kind, nm.x);
  result.objective_value = nm.f;
  result.iterations += nm.iterations;
  result.converged = nm.converged;
  result.trace.emplace_back(result.pose, nm.f);
  return result;
}

namespace {

int geometry_param_count(const Projector& p) { return p.is_camera() ? 1 : 3; }

std::vector<double> pack_geometries(const std::vector<Projector>& projectors) {
  std::vector<double> params;
  for (const auto& p : projectors) {
    if (const auto* cam = std::get_if<CameraGeometry>(&p.geometry)) {
      params.push_back(cam->gamma);
    } else {
      const auto& lat = std::get<LaterationGeometry>(p.geometry);
      params.insert(params.end(), {lat.gamma.x(), lat.gamma.y(), lat.gamma.z()});
    }
  }
  return params;
}

void unpack_geometries(std::span<const double> params, std::vector<Projector>& projectors) {
  std::size_t k = 0;
  for (auto& p : projectors) {
    if (auto* cam = std::get_if<CameraGeometry>(&p.geometry)) {
      cam->gamma = params[k++];
    } else {
      auto& lat = std::get<LaterationGeometry>(p.geometry);
      lat.gamma = Eigen::Vector3d(params[k], params[k + 1], params[k + 2]);
      k += 3;
    }
  }
}

}  // namespace

std::vector<Projector> calibrate(const Problem& problem, const Pose& beta_fixed,
                                 const std::vector<Projector>& gamma_init,
                                 const std::vector<bool>& free_mask,
                                 const SampleSet& samples,
                                 const OptimizerOptions& opts) {
  problem.validate();
  if (gamma_init.size() != problem.observations.size())
    throw Error("calibrate needs one initial geometry per observation");
  for (std::size_t l = 0; l < gamma_init.size(); ++l)
    if (gamma_init[l].output_dim() != problem.observations[l].projector.output_dim())
      throw Error("initial geometry kind does not match observation " + std::to_string(l));

  const std::vector<double> all_params = pack_geometries(gamma_init);
  if (free_mask.size() != all_params.size())
    throw Error("free_mask length does not match the geometry parameter count");
  if (std::none_of(free_mask.begin(), free_mask.end(), [](bool b) { return b; }))
    throw Error("calibrate needs at least one free geometry parameter");

  // Per-parameter simplex scale: angles for cameras, lengths for lateration.
  std::vector<double> all_scale;
  for (const auto& p : gamma_init)
    for (int j = 0; j < geometry_param_count(p); ++j)
      all_scale.push_back(p.is_camera() ? 0.02 : 2.0);

  std::vector<std::size_t> free_idx;
  for (std::size_t j = 0; j < free_mask.size(); ++j)
    if (free_mask[j]) free_idx.push_back(j);

  std::vector<double> x0, scale;
  for (std::size_t j : free_idx) {
    x0.push_back(all_params[j]);
    scale.push_back(opts.initial_simplex_scale.empty() ? all_scale[j]
                                                       : opts.initial_simplex_scale[j]);
  }

  Problem work = problem;
  const bool use_delta = work.object.all_delta();
  std::vector<double> full = all_params;
  std::vector<Projector> geometries = gamma_init;
  const auto objective = [&](std::span<const double> params) {
    for (std::size_t k = 0; k < free_idx.size(); ++k) full[free_idx[k]] = params[k];
    unpack_geometries(full, geometries);
    for (std::size_t l = 0; l < work.observations.size(); ++l)
      work.observations[l].projector = geometries[l];
    return use_delta ? objective_delta(work, beta_fixed)
                     : objective_mc(work, beta_fixed, samples);
  };

  const NelderMeadResult nm = nelder_mead(objective, x0, scale, opts);
  for (std::size_t k = 0; k < free_idx.size(); ++k) full[free_idx[k]] = nm.x[k];
  unpack_geometries(full, geometries);
  return geometries;
}

}  // namespace mixpose
