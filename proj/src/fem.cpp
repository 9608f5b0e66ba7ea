#include "robincap/fem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace robincap {

namespace {

// 4-point Gauss-Legendre on [0, 1]; exact through degree 7, so the edge
// integrals of |v|^p are exact for p in {2, 3, 4} on linear v.
constexpr double kGauss4X[] = {0.06943184420297371, 0.33000947820757187,
                               0.66999052179242813, 0.93056815579702629};
constexpr double kGauss4W[] = {0.17392742256872693, 0.32607257743127307,
                               0.32607257743127307, 0.17392742256872693};

// 2-point rule, used when a lower boundary order is requested.
constexpr double kGauss2X[] = {0.21132486540518713, 0.78867513459481287};
constexpr double kGauss2W[] = {0.5, 0.5};

struct EdgeRule {
  const double* x;
  const double* w;
  int count;
};

EdgeRule edge_rule(int order) {
  if (order <= 2) return {kGauss2X, kGauss2W, 2};
  return {kGauss4X, kGauss4W, 4};
}

double pow_abs(double v, double e) { return std::pow(std::abs(v), e); }

void check_sizes(const AnnularMesh& mesh, const std::vector<double>& values) {
  if (values.size() != mesh.nodes.size())
    throw std::invalid_argument("nodal vector size does not match the mesh");
}

// Precomputed P1 geometry so the descent loop never touches coordinates.
struct Assembly {
  const AnnularMesh& mesh;
  double p;
  double beta;
  bool quadratic;  // p == 2 fast path
  EdgeRule rule;
  std::vector<double> tri_area;
  std::vector<Vec2> tri_grad;  // 3 shape-function gradients per triangle

  Assembly(const AnnularMesh& m, const ProblemParams& params, int bdry_order)
      : mesh(m),
        p(params.p),
        beta(params.beta),
        quadratic(params.p == 2.0),
        rule(edge_rule(bdry_order)) {
    tri_area.resize(mesh.triangles.size());
    tri_grad.resize(3 * mesh.triangles.size());
    for (size_t t = 0; t < mesh.triangles.size(); ++t) {
      const auto& tri = mesh.triangles[t];
      const Vec2 p0 = mesh.nodes[tri[0]];
      const Vec2 p1 = mesh.nodes[tri[1]];
      const Vec2 p2 = mesh.nodes[tri[2]];
      const double twice = cross(p1 - p0, p2 - p0);
      tri_area[t] = 0.5 * twice;
      tri_grad[3 * t + 0] = {(p1.y - p2.y) / twice, (p2.x - p1.x) / twice};
      tri_grad[3 * t + 1] = {(p2.y - p0.y) / twice, (p0.x - p2.x) / twice};
      tri_grad[3 * t + 2] = {(p0.y - p1.y) / twice, (p1.x - p0.x) / twice};
    }
  }

  double energy(const std::vector<double>& v, double eps) const {
    const double eps2 = eps * eps;
    double grad_part = 0.0;
    for (size_t t = 0; t < mesh.triangles.size(); ++t) {
      const auto& tri = mesh.triangles[t];
      Vec2 g = v[tri[0]] * tri_grad[3 * t] + v[tri[1]] * tri_grad[3 * t + 1] +
               v[tri[2]] * tri_grad[3 * t + 2];
      const double q = dot(g, g) + eps2;
      grad_part += tri_area[t] * (quadratic ? q : std::pow(q, 0.5 * p));
    }
    double bdry_part = 0.0;
    for (size_t e = 0; e < mesh.outer_edges.size(); ++e) {
      const auto& [a, b] = mesh.outer_edges[e];
      double edge_acc = 0.0;
      for (int q = 0; q < rule.count; ++q) {
        const double val = (1.0 - rule.x[q]) * v[a] + rule.x[q] * v[b];
        edge_acc += rule.w[q] * (quadratic ? val * val : pow_abs(val, p));
      }
      bdry_part += mesh.outer_edge_lengths[e] * edge_acc;
    }
    return grad_part + beta * bdry_part;
  }

  void gradient(const std::vector<double>& v, double eps,
                std::vector<double>& out) const {
    const double eps2 = eps * eps;
    out.assign(v.size(), 0.0);
    for (size_t t = 0; t < mesh.triangles.size(); ++t) {
      const auto& tri = mesh.triangles[t];
      Vec2 g = v[tri[0]] * tri_grad[3 * t] + v[tri[1]] * tri_grad[3 * t + 1] +
               v[tri[2]] * tri_grad[3 * t + 2];
      const double w =
          p * tri_area[t] *
          (quadratic ? 1.0 : std::pow(dot(g, g) + eps2, 0.5 * p - 1.0));
      out[tri[0]] += w * dot(g, tri_grad[3 * t]);
      out[tri[1]] += w * dot(g, tri_grad[3 * t + 1]);
      out[tri[2]] += w * dot(g, tri_grad[3 * t + 2]);
    }
    for (size_t e = 0; e < mesh.outer_edges.size(); ++e) {
      const auto& [a, b] = mesh.outer_edges[e];
      const double len = mesh.outer_edge_lengths[e];
      for (int q = 0; q < rule.count; ++q) {
        const double x = rule.x[q];
        const double val = (1.0 - x) * v[a] + x * v[b];
        const double w =
            beta * p * rule.w[q] * len *
            (quadratic ? val
                       : pow_abs(val, p - 1.0) * (val >= 0.0 ? 1.0 : -1.0));
        out[a] += w * (1.0 - x);
        out[b] += w * x;
      }
    }
    for (int i : mesh.inner_nodes) out[i] = 0.0;
  }
};

}  // namespace

double discrete_energy(const AnnularMesh& mesh, const std::vector<double>& values,
                       const ProblemParams& params, double epsilon,
                       int boundary_order) {
  check_sizes(mesh, values);
  return Assembly(mesh, params, boundary_order).energy(values, epsilon);
}

std::vector<double> discrete_gradient(const AnnularMesh& mesh,
                                      const std::vector<double>& values,
                                      const ProblemParams& params,
                                      double epsilon, int boundary_order) {
  check_sizes(mesh, values);
  std::vector<double> out;
  Assembly(mesh, params, boundary_order).gradient(values, epsilon, out);
  return out;
}

namespace {

double norm2(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

// Initial guess: 1 on the inner ring, radial-solution-informed value on the
// outer ring, linear in the transfinite coordinate.
std::vector<double> initial_guess(const AnnularMesh& mesh,
                                  const ProblemParams& params) {
  const double area_core = mesh.core_area();
  const double area_total = area_core + mesh.total_area();
  double outer = 0.5;
  if (area_core > 0.0 && area_total > area_core * 1.0002) {
    const double r_eq = std::sqrt(area_total / area_core);
    outer = u_star(params, r_eq, r_eq);
  }
  outer = std::clamp(outer, 0.05, 0.999);

  std::vector<double> v(mesh.nodes.size());
  for (size_t i = 0; i < v.size(); ++i)
    v[i] = 1.0 + (outer - 1.0) * mesh.node_level[i];
  return v;
}

struct StageResult {
  int iterations;
  double gradient_norm;
  bool converged;
};

// One continuation stage: BB step with Armijo backtracking. The regularized
// energy is convex for every eps > 0, so each stage has a unique minimizer.
// Besides the gradient test, the stage stops once the energy stagnates at
// machine precision over a trailing window.
StageResult minimize_stage(const Assembly& assembly, double epsilon,
                           double gradient_tolerance, int max_iterations,
                           std::vector<double>& v) {
  std::vector<double> g;
  assembly.gradient(v, epsilon, g);
  const double g0 = norm2(g);
  if (g0 == 0.0) return {0, 0.0, true};
  const double tol = gradient_tolerance * g0;

  double energy = assembly.energy(v, epsilon);
  std::vector<double> v_prev, g_prev, trial(v.size());
  double step = 1.0 / std::max(1.0, g0);
  double window_best = energy;
  int since_improvement = 0;

  for (int it = 1; it <= max_iterations; ++it) {
    const double gnorm = norm2(g);
    if (gnorm <= tol) return {it - 1, gnorm, true};

    // Two-point (BB1) step from the previous accepted move.
    if (!v_prev.empty()) {
      double sy = 0.0, ss = 0.0;
      for (size_t i = 0; i < v.size(); ++i) {
        const double s = v[i] - v_prev[i];
        sy += s * (g[i] - g_prev[i]);
        ss += s * s;
      }
      if (sy > 0.0) step = std::clamp(ss / sy, 1e-14, 1e6);
    }

    // Backtracking on E(v - t g) <= E - c t |g|^2.
    const double slope = gnorm * gnorm;
    double t = step;
    double trial_energy = std::numeric_limits<double>::infinity();
    while (true) {
      for (size_t i = 0; i < v.size(); ++i) trial[i] = v[i] - t * g[i];
      trial_energy = assembly.energy(trial, epsilon);
      if (std::isnan(trial_energy))
        throw std::runtime_error("fem solve: energy became NaN");
      if (trial_energy <= energy - 1e-4 * t * slope) break;
      t *= 0.5;
      if (t < 1e-18) return {it, gnorm, true};  // step underflow: at the floor
    }

    v_prev = v;
    g_prev = g;
    v.swap(trial);
    trial = v_prev;  // reuse storage
    energy = trial_energy;
    assembly.gradient(v, epsilon, g);

    if (energy < window_best * (1.0 - 1e-15) - 1e-300) {
      window_best = energy;
      since_improvement = 0;
    } else if (++since_improvement >= 64) {
      return {it, norm2(g), true};  // energy stagnated at machine precision
    }
  }
  return {max_iterations, norm2(g), false};
}

// Energies / flux of the reported field at eps = 0.
void report_energies(const Assembly& assembly, FemSolution& sol) {
  const AnnularMesh& mesh = sol.mesh;
  const double p = assembly.p;
  double grad_part = 0.0;
  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    Vec2 g = sol.values[tri[0]] * assembly.tri_grad[3 * t] +
             sol.values[tri[1]] * assembly.tri_grad[3 * t + 1] +
             sol.values[tri[2]] * assembly.tri_grad[3 * t + 2];
    grad_part += assembly.tri_area[t] * std::pow(dot(g, g), 0.5 * p);
  }
  const EdgeRule& rule = assembly.rule;
  double bdry_part = 0.0, flux = 0.0;
  for (size_t e = 0; e < mesh.outer_edges.size(); ++e) {
    const auto& [a, b] = mesh.outer_edges[e];
    double acc_p = 0.0, acc_pm1 = 0.0;
    for (int q = 0; q < rule.count; ++q) {
      const double v =
          (1.0 - rule.x[q]) * sol.values[a] + rule.x[q] * sol.values[b];
      acc_p += rule.w[q] * pow_abs(v, p);
      acc_pm1 += rule.w[q] * pow_abs(v, p - 1.0);
    }
    bdry_part += mesh.outer_edge_lengths[e] * acc_p;
    flux += mesh.outer_edge_lengths[e] * acc_pm1;
  }
  sol.energy_gradient_part = grad_part;
  sol.energy_boundary_part = assembly.beta * bdry_part;
  sol.energy_total = sol.energy_gradient_part + sol.energy_boundary_part;
  sol.robin_flux = assembly.beta * flux;
}

}  // namespace

FemSolution solve(const AnnularMesh& mesh, const ProblemParams& params,
                  const SolveOptions& options) {
  if (options.epsilon_schedule.empty())
    throw std::invalid_argument("solve: empty epsilon schedule");
  for (size_t i = 0; i < options.epsilon_schedule.size(); ++i) {
    const double e = options.epsilon_schedule[i];
    if (!(e > 0.0) || (i > 0 && e >= options.epsilon_schedule[i - 1]))
      throw std::invalid_argument(
          "solve: epsilon schedule must be positive and strictly decreasing");
  }

  const Assembly assembly(mesh, params, options.quadrature_order_boundary);

  FemSolution sol;
  sol.mesh = mesh;
  sol.values = initial_guess(mesh, params);
  for (int i : mesh.inner_nodes) sol.values[i] = 1.0;

  bool last_converged = false;
  for (double eps : options.epsilon_schedule) {
    const StageResult stage =
        minimize_stage(assembly, eps, options.gradient_tolerance,
                       options.max_iterations, sol.values);
    sol.iterations += stage.iterations;
    sol.final_gradient_norm = stage.gradient_norm;
    sol.epsilon_final = eps;
    last_converged = stage.converged;
  }
  sol.converged = last_converged;

  // Projection onto [0, 1] cannot increase the energy; report at eps = 0.
  for (size_t i = 0; i < sol.values.size(); ++i)
    sol.values[i] = std::clamp(sol.values[i], 0.0, 1.0);
  for (int i : mesh.inner_nodes) sol.values[i] = 1.0;

  report_energies(assembly, sol);
  return sol;
}

FemSolution make_solution(const AnnularMesh& mesh, std::vector<double> values,
                          const ProblemParams& params, int boundary_order) {
  check_sizes(mesh, values);
  FemSolution sol;
  sol.mesh = mesh;
  sol.values = std::move(values);
  sol.converged = true;
  report_energies(Assembly(sol.mesh, params, boundary_order), sol);
  return sol;
}

RobinIdentity robin_identity_check(const FemSolution& solution,
                                   const ProblemParams& params) {
  (void)params;
  return {solution.energy_total, solution.robin_flux, solution.converged};
}

ConvergenceStudy convergence_study(
    const ShapePair& pair, const ProblemParams& params,
    const std::vector<std::pair<int, int>>& mesh_levels, double oracle_energy,
    const SolveOptions& options) {
  ConvergenceStudy study;
  for (const auto& [nt, nr] : mesh_levels) {
    const AnnularMesh mesh = build_annular_mesh(pair, nt, nr);
    const FemSolution sol = solve(mesh, params, options);
    StudyRow row;
    row.n_theta = nt;
    row.n_radial = nr;
    row.h = std::sqrt(mesh.total_area() / mesh.triangles.size());
    row.energy = sol.energy_total;
    row.error = std::numeric_limits<double>::quiet_NaN();
    study.rows.push_back(row);
  }

  const double reference = std::isfinite(oracle_energy)
                               ? oracle_energy
                               : study.rows.back().energy;
  const size_t last_with_error =
      std::isfinite(oracle_energy) ? study.rows.size() : study.rows.size() - 1;
  for (size_t i = 0; i < last_with_error; ++i)
    study.rows[i].error = std::abs(study.rows[i].energy - reference);

  // Least-squares slope of log error vs log h.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (const StudyRow& row : study.rows) {
    if (!std::isfinite(row.error) || row.error <= 0.0) continue;
    const double x = std::log(row.h), y = std::log(row.error);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++m;
  }
  study.observed_order = (m >= 2)
                             ? (m * sxy - sx * sy) / (m * sxx - sx * sx)
                             : std::numeric_limits<double>::quiet_NaN();
  return study;
}

}  // namespace robincap
