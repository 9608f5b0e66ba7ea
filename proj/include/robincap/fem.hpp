#pragma once

#include <limits>
#include <vector>

#include "robincap/mesh.hpp"
#include "robincap/radial.hpp"

// Piecewise-linear minimization of J(v) = int |grad v|^p + beta int_bdry |v|^p
// over fields equal to 1 on the inner ring. Degeneracy of the p-Laplacian at
// grad v = 0 is handled by continuation on (|grad v|^2 + eps^2)^{p/2}; the
// reported energies are evaluated at eps = 0.

namespace robincap {

struct SolveOptions {
  std::vector<double> epsilon_schedule{1e-2, 1e-4, 1e-6, 1e-8};
  double gradient_tolerance = 1e-10;  // relative to the initial gradient norm
  int max_iterations = 5000;          // per continuation stage
  int quadrature_order_boundary = 4;  // Gauss points per outer edge
};

struct FemSolution {
  AnnularMesh mesh;
  std::vector<double> values;    // nodal u, in [0, 1], 1 on inner ring
  double energy_total = 0.0;
  double energy_gradient_part = 0.0;  // int |grad u|^p
  double energy_boundary_part = 0.0;  // beta int |u|^p
  double robin_flux = 0.0;            // beta int u^{p-1}
  int iterations = 0;
  double final_gradient_norm = 0.0;
  double epsilon_final = 0.0;
  bool converged = false;
};

/// Regularized discrete energy; eps = 0 gives the exact P1 energy.
double discrete_energy(const AnnularMesh& mesh, const std::vector<double>& values,
                       const ProblemParams& params, double epsilon,
                       int boundary_order = 4);

/// Exact gradient of discrete_energy w.r.t. free nodal values; entries at
/// inner (Dirichlet) nodes are zero.
std::vector<double> discrete_gradient(const AnnularMesh& mesh,
                                      const std::vector<double>& values,
                                      const ProblemParams& params,
                                      double epsilon, int boundary_order = 4);

/// Continuation + two-point (Barzilai-Borwein) steps with backtracking;
/// every accepted step decreases the stage energy. Deterministic.
FemSolution solve(const AnnularMesh& mesh, const ProblemParams& params,
                  const SolveOptions& options = {});

/// Packages an explicit nodal field (e.g. an interpolated radial solution)
/// as a FemSolution, with energies and flux evaluated at eps = 0.
FemSolution make_solution(const AnnularMesh& mesh, std::vector<double> values,
                          const ProblemParams& params, int boundary_order = 4);

struct RobinIdentity {
  double lhs;  // energy_total
  double rhs;  // beta int u^{p-1} over the outer boundary
  bool converged_input;
};

RobinIdentity robin_identity_check(const FemSolution& solution,
                                   const ProblemParams& params);

struct StudyRow {
  int n_theta;
  int n_radial;
  double h;       // mean triangle diameter scale, sqrt(total area / count)
  double energy;
  double error;   // vs oracle if provided, else vs finest level (NaN there)
};

struct ConvergenceStudy {
  std::vector<StudyRow> rows;
  double observed_order;  // log-ratio estimate; NaN with < 2 error entries
};

/// Solves on each (n_theta, n_radial) level; errors vs `oracle_energy` when
/// finite, otherwise vs the finest level.
ConvergenceStudy convergence_study(
    const ShapePair& pair, const ProblemParams& params,
    const std::vector<std::pair<int, int>>& mesh_levels,
    double oracle_energy = std::numeric_limits<double>::quiet_NaN(),
    const SolveOptions& options = {});

}  // namespace robincap
