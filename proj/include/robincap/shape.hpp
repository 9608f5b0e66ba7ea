#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

// Star-shaped boundary curves in the plane, Fourier-parametrized, with the
// area / perimeter quadrature and the containment validation needed to set
// up compact/domain pairs for the FEM solver.

namespace robincap {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double norm(Vec2 a);

class InvalidShape : public std::runtime_error {
 public:
  explicit InvalidShape(const std::string& what) : std::runtime_error(what) {}
};
class ContainmentViolation : public std::runtime_error {
 public:
  explicit ContainmentViolation(const std::string& what)
      : std::runtime_error(what) {}
};
class NotStarShapedAboutCenter : public std::runtime_error {
 public:
  explicit NotStarShapedAboutCenter(const std::string& what)
      : std::runtime_error(what) {}
};

/// Boundary curve rho(theta) = a0 + sum_k (a_k cos k theta + b_k sin k theta)
/// about `center`. Valid when rho > 0 everywhere; a0 > sum(|a_k| + |b_k|) is
/// accepted as a certificate without the grid check.
struct StarShape {
  Vec2 center;
  double a0 = 1.0;
  std::vector<double> cos_coeffs;  // a_k, k = 1..K
  std::vector<double> sin_coeffs;  // b_k, k = 1..K

  double radius(double theta) const;
  double radius_derivative(double theta) const;
  Vec2 point(double theta) const;
  double max_radius_bound() const;  // a0 + sum(|a_k| + |b_k|)
};

StarShape make_circle(Vec2 center, double radius);

/// Throws InvalidShape unless rho > 0 (certificate or 4096-point grid).
void validate_shape(const StarShape& shape);

double area(const StarShape& shape);
double perimeter(const StarShape& shape);

/// Scales every Fourier coefficient by sqrt(target / area).
StarShape normalize_area(const StarShape& shape, double target);

/// Radius of `shape`'s boundary measured from `origin` along direction
/// theta, by ray-curve intersection (bisection to 1e-12). Throws
/// NotStarShapedAboutCenter if the ray crosses the boundary more than once,
/// ContainmentViolation if `origin` lies outside the shape.
double radius_about(const StarShape& shape, Vec2 origin, double theta);

/// A validated compact/domain pair: K contained in the closure of Omega and
/// Omega star-shaped about K.center. K == Omega is representable.
struct ShapePair {
  StarShape K;
  StarShape Omega;
};

/// Checks containment on 4096 rays from K.center; throws
/// ContainmentViolation / NotStarShapedAboutCenter on failure.
ShapePair validate_pair(const StarShape& K, const StarShape& Omega);

/// Seeded deterministic pair: K a perturbed circle of area pi, Omega a
/// perturbed enclosing curve (center offset scaled by amplitude) of area M.
/// Fourier modes k <= 6, coefficients uniform in [-amplitude, amplitude];
/// redraws until validate_pair passes (at most 100 attempts).
ShapePair sample_random_pair(std::uint64_t seed, double M, double amplitude);

}  // namespace robincap
