#include "robincap/shape.hpp"

#include <cmath>
#include <random>

namespace robincap {

namespace {

constexpr int kQuadPoints = 4096;  // spectral for trig data up to K_max = 32

double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

}  // namespace

double norm(Vec2 a) { return std::hypot(a.x, a.y); }

double StarShape::radius(double theta) const {
  double r = a0;
  for (size_t k = 0; k < cos_coeffs.size(); ++k)
    r += cos_coeffs[k] * std::cos((k + 1.0) * theta);
  for (size_t k = 0; k < sin_coeffs.size(); ++k)
    r += sin_coeffs[k] * std::sin((k + 1.0) * theta);
  return r;
}

double StarShape::radius_derivative(double theta) const {
  double dr = 0.0;
  for (size_t k = 0; k < cos_coeffs.size(); ++k)
    dr -= (k + 1.0) * cos_coeffs[k] * std::sin((k + 1.0) * theta);
  for (size_t k = 0; k < sin_coeffs.size(); ++k)
    dr += (k + 1.0) * sin_coeffs[k] * std::cos((k + 1.0) * theta);
  return dr;
}

Vec2 StarShape::point(double theta) const {
  const double r = radius(theta);
  return {center.x + r * std::cos(theta), center.y + r * std::sin(theta)};
}

double StarShape::max_radius_bound() const {
  double s = a0;
  for (double c : cos_coeffs) s += std::abs(c);
  for (double c : sin_coeffs) s += std::abs(c);
  return s;
}

StarShape make_circle(Vec2 center, double radius) {
  StarShape s;
  s.center = center;
  s.a0 = radius;
  return s;
}

void validate_shape(const StarShape& shape) {
  if (!std::isfinite(shape.a0))
    throw InvalidShape("non-finite leading coefficient");
  double wiggle = 0.0;
  for (double c : shape.cos_coeffs) wiggle += std::abs(c);
  for (double c : shape.sin_coeffs) wiggle += std::abs(c);
  if (shape.a0 > wiggle) return;  // positivity certificate
  for (int i = 0; i < kQuadPoints; ++i) {
    const double theta = 2.0 * M_PI * i / kQuadPoints;
    if (!(shape.radius(theta) > 0.0))
      throw InvalidShape("radius function is not positive everywhere");
  }
}

double area(const StarShape& shape) {
  validate_shape(shape);
  // (1/2) int rho^2; the uniform rule is exact for trig polynomials of
  // degree < kQuadPoints / 2.
  double acc = 0.0;
  for (int i = 0; i < kQuadPoints; ++i) {
    const double r = shape.radius(2.0 * M_PI * i / kQuadPoints);
    acc += r * r;
  }
  return 0.5 * acc * 2.0 * M_PI / kQuadPoints;
}

double perimeter(const StarShape& shape) {
  validate_shape(shape);
  double acc = 0.0;
  for (int i = 0; i < kQuadPoints; ++i) {
    const double theta = 2.0 * M_PI * i / kQuadPoints;
    const double r = shape.radius(theta);
    const double dr = shape.radius_derivative(theta);
    acc += std::sqrt(r * r + dr * dr);
  }
  return acc * 2.0 * M_PI / kQuadPoints;
}

StarShape normalize_area(const StarShape& shape, double target) {
  if (!(target > 0.0))
    throw std::domain_error("normalize_area: target must be positive");
  const double scale = std::sqrt(target / area(shape));
  StarShape out = shape;
  out.a0 *= scale;
  for (double& c : out.cos_coeffs) c *= scale;
  for (double& c : out.sin_coeffs) c *= scale;
  return out;
}

double radius_about(const StarShape& shape, Vec2 origin, double theta) {
  validate_shape(shape);
  const Vec2 dir{std::cos(theta), std::sin(theta)};

  // Signed "outside" indicator along the ray, in the shape's own polar frame.
  auto level = [&](double s) {
    const Vec2 q = origin + s * dir - shape.center;
    const double rr = norm(q);
    if (rr == 0.0) return -shape.radius(0.0);
    return rr - shape.radius(std::atan2(q.y, q.x));
  };

  if (level(0.0) >= 0.0)
    throw ContainmentViolation("ray origin lies outside the shape");

  const double s_max =
      norm(origin - shape.center) + shape.max_radius_bound() + 1.0;
  constexpr int kScan = 512;
  double lo = -1.0, hi = -1.0;
  int crossings = 0;
  double prev = level(0.0);
  for (int i = 1; i <= kScan; ++i) {
    const double s = s_max * i / kScan;
    const double cur = level(s);
    if ((prev < 0.0) != (cur < 0.0)) {
      ++crossings;
      if (crossings == 1) {
        lo = s_max * (i - 1.0) / kScan;
        hi = s;
      }
    }
    prev = cur;
  }
  if (crossings != 1)
    throw NotStarShapedAboutCenter(
        "ray crosses the boundary " + std::to_string(crossings) + " times");

  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (level(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

ShapePair validate_pair(const StarShape& K, const StarShape& Omega) {
  validate_shape(K);
  validate_shape(Omega);
  for (int i = 0; i < kQuadPoints; ++i) {
    const double theta = 2.0 * M_PI * i / kQuadPoints;
    const double rK = K.radius(theta);
    const double rOmega = radius_about(Omega, K.center, theta);
    // closure containment: the equality case K = Omega must pass, so allow
    // the ray-intersection tolerance
    if (rK > rOmega + 1e-9 * std::max(1.0, rOmega))
      throw ContainmentViolation("K leaves Omega at theta = " +
                                 std::to_string(theta));
  }
  return ShapePair{K, Omega};
}

ShapePair sample_random_pair(std::uint64_t seed, double M, double amplitude) {
  if (!(M > M_PI))
    throw std::domain_error("sample_random_pair: M must exceed pi");
  if (amplitude < 0.0)
    throw std::domain_error("sample_random_pair: amplitude must be >= 0");

  std::mt19937_64 rng(seed);
  constexpr int kModes = 6;

  for (int attempt = 0; attempt < 100; ++attempt) {
    StarShape k;
    k.a0 = 1.0;
    for (int m = 0; m < kModes; ++m) {
      k.cos_coeffs.push_back(uniform(rng, -amplitude, amplitude));
      k.sin_coeffs.push_back(uniform(rng, -amplitude, amplitude));
    }

    StarShape omega;
    omega.center = {amplitude * uniform(rng, -0.5, 0.5),
                    amplitude * uniform(rng, -0.5, 0.5)};
    omega.a0 = std::sqrt(M / M_PI);
    for (int m = 0; m < kModes; ++m) {
      omega.cos_coeffs.push_back(uniform(rng, -amplitude, amplitude));
      omega.sin_coeffs.push_back(uniform(rng, -amplitude, amplitude));
    }

    try {
      validate_shape(k);
      validate_shape(omega);
      return validate_pair(normalize_area(k, M_PI), normalize_area(omega, M));
    } catch (const InvalidShape&) {
    } catch (const ContainmentViolation&) {
    } catch (const NotStarShapedAboutCenter&) {
    }
  }
  throw std::runtime_error(
      "sample_random_pair: no admissible pair in 100 attempts (amplitude too "
      "large for M?)");
}

}  // namespace robincap
