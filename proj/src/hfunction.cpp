#include "robincap/hfunction.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace robincap {

namespace {

constexpr int kScanLevels = 200;

// Nudge t off nodal values (ties make the chord ill-defined).
double untie(const std::vector<double>& values, double t) {
  for (int pass = 0; pass < 4; ++pass) {
    bool tied = false;
    for (double v : values)
      if (v == t) {
        tied = true;
        break;
      }
    if (!tied) return t;
    t += 1e-12;
  }
  return t;
}

struct TriangleClip {
  double area_above = 0.0;
  Vec2 centroid{0.0, 0.0};  // of the clipped region
  bool has_chord = false;
  Vec2 chord[2];
};

Vec2 lerp(Vec2 a, Vec2 b, double s) { return (1.0 - s) * a + s * b; }

// Clip {u > t} inside one triangle with linear u; exact for P1 fields.
TriangleClip clip_triangle(const Vec2* pts, const double* vals, double t,
                           double full_area) {
  TriangleClip clip;
  int above[3], below[3];
  int na = 0, nb = 0;
  for (int i = 0; i < 3; ++i)
    (vals[i] > t ? above[na++] : below[nb++]) = i;

  if (na == 3) {
    clip.area_above = full_area;
    clip.centroid = (1.0 / 3.0) * (pts[0] + pts[1] + pts[2]);
    return clip;
  }
  if (na == 0) return clip;

  if (na == 1) {
    const int a = above[0], b0 = below[0], b1 = below[1];
    const double la = (t - vals[a]) / (vals[b0] - vals[a]);
    const double lb = (t - vals[a]) / (vals[b1] - vals[a]);
    const Vec2 x0 = lerp(pts[a], pts[b0], la);
    const Vec2 x1 = lerp(pts[a], pts[b1], lb);
    clip.area_above = full_area * la * lb;
    clip.centroid = (1.0 / 3.0) * (pts[a] + x0 + x1);
    clip.has_chord = true;
    clip.chord[0] = x0;
    clip.chord[1] = x1;
    return clip;
  }

  // na == 2: the below-corner cuts off a small triangle.
  const int b = below[0], a0 = above[0], a1 = above[1];
  const double l0 = (t - vals[b]) / (vals[a0] - vals[b]);
  const double l1 = (t - vals[b]) / (vals[a1] - vals[b]);
  const Vec2 x0 = lerp(pts[b], pts[a0], l0);
  const Vec2 x1 = lerp(pts[b], pts[a1], l1);
  const double cut_area = full_area * l0 * l1;
  const Vec2 cut_centroid = (1.0 / 3.0) * (pts[b] + x0 + x1);
  const Vec2 full_centroid = (1.0 / 3.0) * (pts[0] + pts[1] + pts[2]);
  clip.area_above = full_area - cut_area;
  if (clip.area_above > 0.0)
    clip.centroid = (1.0 / clip.area_above) *
                    (full_area * full_centroid - cut_area * cut_centroid);
  clip.has_chord = true;
  clip.chord[0] = x0;
  clip.chord[1] = x1;
  return clip;
}

double min_outer_trace(const FemSolution& solution) {
  double lo = 1.0;
  for (const auto& [a, b] : solution.mesh.outer_edges)
    lo = std::min({lo, solution.values[a], solution.values[b]});
  return lo;
}

std::vector<double> scan_levels(const FemSolution& solution) {
  const double lo = min_outer_trace(solution);
  const double span = 1.0 - lo;
  std::vector<double> levels(kScanLevels);
  for (int k = 0; k < kScanLevels; ++k)
    levels[k] = lo + span * (k + 0.5) / kScanLevels;
  return levels;
}

// Adaptive Simpson with absolute tolerance.
double simpson_step(const std::function<double(double)>& f, double a,
                    double fa, double b, double fb, double m, double fm,
                    double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, fa, b, fb, m, fm, whole, tol, 40);
}

// Level radius of u* on (B_1, B_R): the unique rho with u*(rho) = t.
double radial_level_radius(const ProblemParams& params, double R, double t) {
  double lo = 1.0, hi = R;
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    (u_star(params, R, mid) > t ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// int_{B_rho \ B_1} (scale * g)^p, the volume term of the radial H.
double radial_ratio_volume_integral(const ProblemParams& params, double R,
                                    double rho, double scale) {
  const double surface = params.n * unit_ball_volume(params.n);
  auto f = [&](double r) {
    return surface * std::pow(r, params.n - 1.0) *
           std::pow(scale * gradient_ratio(params, R, r), params.p);
  };
  return integrate(f, 1.0, rho, 1e-12 * std::max(1.0, ball_energy(params, R)));
}

}  // namespace

LevelSetGeometry extract_level_set(const FemSolution& solution, double t) {
  if (!(t > 0.0 && t < 1.0))
    throw std::domain_error("extract_level_set: t must lie in (0, 1)");
  const AnnularMesh& mesh = solution.mesh;
  t = untie(solution.values, t);

  LevelSetGeometry geo;
  geo.t = t;
  geo.converged_input = solution.converged;
  geo.triangle_area_above.resize(mesh.triangles.size(), 0.0);

  const double core = mesh.core_area();
  const Vec2 core_c = mesh.core_centroid();
  double area_acc = core;
  Vec2 moment = core * core_c;

  for (size_t ti = 0; ti < mesh.triangles.size(); ++ti) {
    const auto& tri = mesh.triangles[ti];
    const Vec2 pts[3] = {mesh.nodes[tri[0]], mesh.nodes[tri[1]],
                         mesh.nodes[tri[2]]};
    const double vals[3] = {solution.values[tri[0]], solution.values[tri[1]],
                            solution.values[tri[2]]};
    const TriangleClip clip =
        clip_triangle(pts, vals, t, mesh.triangle_area(static_cast<int>(ti)));
    geo.triangle_area_above[ti] = clip.area_above;
    area_acc += clip.area_above;
    moment = moment + clip.area_above * clip.centroid;
    if (clip.has_chord) {
      geo.internal_segments.push_back({clip.chord[0], clip.chord[1]});
      geo.segment_triangle.push_back(static_cast<int>(ti));
      geo.internal_length += norm(clip.chord[1] - clip.chord[0]);
    }
  }

  for (size_t e = 0; e < mesh.outer_edges.size(); ++e) {
    const auto& [a, b] = mesh.outer_edges[e];
    const double va = solution.values[a], vb = solution.values[b];
    const double len = mesh.outer_edge_lengths[e];
    if (va > t && vb > t) {
      geo.external_length += len;
    } else if (va > t) {
      geo.external_length += len * (va - t) / (va - vb);
    } else if (vb > t) {
      geo.external_length += len * (vb - t) / (vb - va);
    }
  }

  geo.superlevel_area = area_acc;
  geo.centroid = area_acc > 0.0 ? (1.0 / area_acc) * moment : Vec2{0.0, 0.0};
  return geo;
}

double superlevel_area(const FemSolution& solution, double t) {
  const AnnularMesh& mesh = solution.mesh;
  t = untie(solution.values, t);
  double acc = mesh.core_area();
  for (size_t ti = 0; ti < mesh.triangles.size(); ++ti) {
    const auto& tri = mesh.triangles[ti];
    double v[3] = {solution.values[tri[0]], solution.values[tri[1]],
                   solution.values[tri[2]]};
    std::sort(v, v + 3);
    const double full = mesh.triangle_area(static_cast<int>(ti));
    if (t < v[0]) {
      acc += full;
    } else if (t < v[1]) {
      acc += full * (1.0 - (t - v[0]) * (t - v[0]) /
                               ((v[1] - v[0]) * (v[2] - v[0])));
    } else if (t < v[2]) {
      acc += full * (v[2] - t) * (v[2] - t) / ((v[2] - v[1]) * (v[2] - v[0]));
    }
  }
  return acc;
}

PhiField solution_ratio_phi(const FemSolution& solution) {
  const AnnularMesh& mesh = solution.mesh;
  PhiField phi;
  phi.per_triangle.resize(mesh.triangles.size());
  phi.core_value = 0.0;
  for (size_t ti = 0; ti < mesh.triangles.size(); ++ti) {
    const auto& tri = mesh.triangles[ti];
    const Vec2 p0 = mesh.nodes[tri[0]], p1 = mesh.nodes[tri[1]],
               p2 = mesh.nodes[tri[2]];
    const double twice_area = cross(p1 - p0, p2 - p0);
    const double u0 = solution.values[tri[0]], u1 = solution.values[tri[1]],
                 u2 = solution.values[tri[2]];
    const Vec2 grad =
        (1.0 / twice_area) *
        Vec2{u0 * (p1.y - p2.y) + u1 * (p2.y - p0.y) + u2 * (p0.y - p1.y),
             u0 * (p2.x - p1.x) + u1 * (p0.x - p2.x) + u2 * (p1.x - p0.x)};
    const double mean = (u0 + u1 + u2) / 3.0;
    phi.per_triangle[ti] = mean > 0.0 ? norm(grad) / mean : 0.0;
  }
  return phi;
}

PhiField constant_phi(const FemSolution& solution, double value) {
  PhiField phi;
  phi.per_triangle.assign(solution.mesh.triangles.size(), value);
  phi.core_value = value;
  return phi;
}

HEvaluation h_function(const FemSolution& solution, double t,
                       const PhiField& phi, const ProblemParams& params) {
  if (phi.per_triangle.size() != solution.mesh.triangles.size())
    throw std::invalid_argument("h_function: phi size does not match mesh");
  const LevelSetGeometry geo = extract_level_set(solution, t);
  const double p = params.p;

  HEvaluation eval;
  eval.t = geo.t;
  for (size_t s = 0; s < geo.internal_segments.size(); ++s) {
    const double len =
        norm(geo.internal_segments[s][1] - geo.internal_segments[s][0]);
    eval.internal_part +=
        len * std::pow(std::abs(phi.per_triangle[geo.segment_triangle[s]]),
                       p - 1.0);
  }

  double volume_integral =
      std::pow(std::abs(phi.core_value), p) * solution.mesh.core_area();
  for (size_t ti = 0; ti < phi.per_triangle.size(); ++ti)
    volume_integral +=
        std::pow(std::abs(phi.per_triangle[ti]), p) * geo.triangle_area_above[ti];
  eval.area_part = -(p - 1.0) * volume_integral;

  eval.external_part = params.beta * geo.external_length;
  eval.h_value = eval.internal_part + eval.area_part + eval.external_part;
  return eval;
}

double h_star_radial_scaled(const ProblemParams& params, double R, double t,
                            double scale) {
  if (!(R > 1.0)) throw std::domain_error("h_star_radial: R must be > 1");
  const double floor = u_star(params, R, R);
  if (!(t > floor && t < 1.0))
    throw std::domain_error("h_star_radial: t must lie in (u*(R), 1)");
  const double rho = radial_level_radius(params, R, t);
  const double surface = params.n * unit_ball_volume(params.n);
  const double internal =
      surface * std::pow(rho, params.n - 1.0) *
      std::pow(scale * gradient_ratio(params, R, rho), params.p - 1.0);
  const double volume = radial_ratio_volume_integral(params, R, rho, scale);
  // For t > u*(R) the superlevel ball stays inside B_R: no exterior term.
  return internal - (params.p - 1.0) * volume;
}

double h_star_radial(const ProblemParams& params, double R, double t) {
  return h_star_radial_scaled(params, R, t, 1.0);
}

double r_of_t(double superlevel_volume, int n) {
  if (superlevel_volume < 0.0)
    throw std::domain_error("r_of_t: volume must be >= 0");
  return std::pow(superlevel_volume / unit_ball_volume(n), 1.0 / n);
}

DerearrangedPhi derearranged_phi(const FemSolution& solution,
                                 const ProblemParams& params, double R_ref) {
  if (!(R_ref > 1.0))
    throw std::domain_error("derearranged_phi: R_ref must be > 1");
  const bool clip = gradient_bound_predicate(params, R_ref).first;
  const double bound = params.robin_root();

  DerearrangedPhi out;
  out.phi.core_value = 0.0;
  out.phi.per_triangle.resize(solution.mesh.triangles.size());
  for (size_t ti = 0; ti < solution.mesh.triangles.size(); ++ti) {
    const auto& tri = solution.mesh.triangles[ti];
    double t = (solution.values[tri[0]] + solution.values[tri[1]] +
                solution.values[tri[2]]) /
               3.0;
    t = std::clamp(t, 1e-12, 1.0 - 1e-12);
    double r = r_of_t(superlevel_area(solution, t), params.n);
    if (r < 1.0 || r > R_ref) {
      r = std::clamp(r, 1.0, R_ref);
      ++out.clamped;
    }
    double value = gradient_ratio(params, R_ref, r);
    if (clip) value = std::min(value, bound);
    out.phi.per_triangle[ti] = value;
  }
  return out;
}

HMinResult h_min_search(const FemSolution& solution,
                           const ProblemParams& params, const PhiField& phi) {
  const std::vector<double> levels = scan_levels(solution);
  HMinResult best{levels.front(), std::numeric_limits<double>::infinity()};
  for (double t : levels) {
    const HEvaluation eval = h_function(solution, t, phi, params);
    if (eval.h_value < best.h_at_t) best = {t, eval.h_value};
  }
  return best;
}

double weighted_h_integral(const FemSolution& solution,
                           const ProblemParams& params, const PhiField& phi) {
  const double energy = solution.energy_total;
  const double lo = min_outer_trace(solution);
  const double p = params.p;

  // Below the outer trace U_t is the whole domain and H is t-independent.
  double acc = 0.0;
  if (lo > 0.0) {
    const double t_below = lo * (1.0 - 1e-9);
    const HEvaluation below = h_function(solution, t_below, phi, params);
    acc += std::pow(lo, p) / p * (below.h_value - energy);
  }

  const std::vector<double> levels = scan_levels(solution);
  const double dt = (1.0 - lo) / kScanLevels;
  for (double t : levels) {
    const HEvaluation eval = h_function(solution, t, phi, params);
    acc += std::pow(t, p - 1.0) * (eval.h_value - energy) * dt;
  }
  return acc;
}

double weighted_h_integral_radial(const ProblemParams& params, double R,
                                  double scale) {
  const double energy = ball_energy(params, R);
  const double floor = u_star(params, R, R);
  const double p = params.p;
  const double surface = params.n * unit_ball_volume(params.n);

  // t < u*(R): U_t = B_R, with the whole outer sphere as exterior boundary.
  const double whole =
      -(p - 1.0) * radial_ratio_volume_integral(params, R, R, scale) +
      params.beta * surface * std::pow(R, params.n - 1.0);
  double acc = std::pow(floor, p) / p * (whole - energy);

  // Composite Simpson on [u*(R), 1]; the integrand vanishes identically
  // when scale = 1.
  constexpr int kIntervals = 400;
  auto f = [&](double t) {
    if (t <= floor || t >= 1.0) t = std::clamp(t, floor + 1e-13, 1.0 - 1e-13);
    return std::pow(t, p - 1.0) *
           (h_star_radial_scaled(params, R, t, scale) - energy);
  };
  const double h = (1.0 - floor) / kIntervals;
  double simpson = f(floor) + f(1.0);
  for (int k = 1; k < kIntervals; ++k)
    simpson += f(floor + k * h) * (k % 2 == 1 ? 4.0 : 2.0);
  acc += simpson * h / 3.0;
  return acc;
}

double centroid_drift(const FemSolution& solution) {
  const double lo = min_outer_trace(solution);
  if (1.0 - lo < 1e-12) return 0.0;  // u == 1 everywhere
  const std::vector<double> levels = scan_levels(solution);
  const Vec2 mid =
      extract_level_set(solution, levels[levels.size() / 2]).centroid;
  double drift = 0.0;
  for (double t : levels)
    drift = std::max(drift,
                     norm(extract_level_set(solution, t).centroid - mid));
  return drift;
}

}  // namespace robincap
