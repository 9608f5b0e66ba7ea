#pragma once

#include <array>
#include <vector>

#include "robincap/fem.hpp"

// Level-set machinery: superlevel geometry of P1 fields, the H-function
// H(t, phi) = int_{interior boundary} |phi|^{p-1}
//             - (p-1) int_{superlevel} |phi|^p + beta H^1(exterior boundary),
// its exact radial counterpart, and the derearrangement that transplants the
// radial ratio |grad u*|/u* onto a general solution through the volume
// radius r(t).

namespace robincap {

/// Geometry of U_t = {u > t} for a nodal field on an annular mesh. The core
/// region bounded by the inner ring belongs to U_t for every t < 1.
struct LevelSetGeometry {
  double t = 0.0;
  std::vector<std::array<Vec2, 2>> internal_segments;  // chords u = t
  std::vector<int> segment_triangle;                   // hosting triangle
  std::vector<double> triangle_area_above;             // clipped area per tri
  double internal_length = 0.0;
  double superlevel_area = 0.0;  // includes the core polygon
  double external_length = 0.0;  // outer boundary portion with u > t
  Vec2 centroid{0.0, 0.0};
  bool converged_input = true;
};

LevelSetGeometry extract_level_set(const FemSolution& solution, double t);

/// Fast path: |U_t| only (clipped triangle areas + core polygon).
double superlevel_area(const FemSolution& solution, double t);

/// Piecewise-constant test field: one value per triangle (level chords
/// inherit their hosting triangle's value) plus the value on the core.
struct PhiField {
  std::vector<double> per_triangle;
  double core_value = 0.0;
};

/// phi = |grad u| / u with the vertex-mean attribution of u per triangle.
PhiField solution_ratio_phi(const FemSolution& solution);
PhiField constant_phi(const FemSolution& solution, double value);

struct HEvaluation {
  double t = 0.0;
  double h_value = 0.0;
  double internal_part = 0.0;  //  int |phi|^{p-1} over the chords
  double area_part = 0.0;      // -(p-1) int |phi|^p over U_t (signed)
  double external_part = 0.0;  //  beta H^1(exterior boundary)
};

HEvaluation h_function(const FemSolution& solution, double t,
                       const PhiField& phi, const ProblemParams& params);

/// Exact H on the radial solution of (B_1, B_R) with phi = scale * g,
/// g = |grad u*|/u*, for t in (u*(R), 1); constant in t and equal to
/// ball_energy when scale = 1.
double h_star_radial_scaled(const ProblemParams& params, double R, double t,
                            double scale);
double h_star_radial(const ProblemParams& params, double R, double t);

/// Volume radius r(t) = (|U_t| / w_n)^{1/n}.
double r_of_t(double superlevel_volume, int n);

struct DerearrangedPhi {
  PhiField phi;
  int clamped = 0;  // triangles whose r(t) fell outside [1, R_ref]
};

/// Transplants g = |grad u*|/u* of the reference pair (B_1, B_{R_ref})
/// through r(t): per triangle, t is the vertex mean and phi = g(r(|U_t|)).
/// Values are clipped to [0, beta^{1/(p-1)}] when the reference satisfies
/// the gradient-ratio bound.
DerearrangedPhi derearranged_phi(const FemSolution& solution,
                                 const ProblemParams& params, double R_ref);

struct HMinResult {
  double t_found;
  double h_at_t;
};

/// Scans 200 levels in (min outer trace, 1) and returns the minimizing one.
HMinResult h_min_search(const FemSolution& solution,
                           const ProblemParams& params, const PhiField& phi);

/// int_0^1 t^{p-1} (H(t, phi) - E) dt over the same 200-level scan, with the
/// closed-form head on (0, min outer trace) where U_t is the whole domain.
double weighted_h_integral(const FemSolution& solution,
                           const ProblemParams& params, const PhiField& phi);

/// Radial counterpart with phi = scale * g, exact up to quadrature.
double weighted_h_integral_radial(const ProblemParams& params, double R,
                                  double scale);

/// Max distance between the centroid of U_t and the mid-scan centroid.
double centroid_drift(const FemSolution& solution);

}  // namespace robincap
