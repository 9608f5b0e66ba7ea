#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "robincap/shape.hpp"

using namespace robincap;

namespace {

// Dense polygonal arc length, independent of the quadrature in perimeter().
double polygonal_perimeter(const StarShape& s, int segments) {
  double acc = 0.0;
  Vec2 prev = s.point(0.0);
  for (int i = 1; i <= segments; ++i) {
    const Vec2 cur = s.point(2.0 * M_PI * i / segments);
    acc += norm(cur - prev);
    prev = cur;
  }
  return acc;
}

StarShape wobbly(double base, double amp3) {
  StarShape s;
  s.a0 = base;
  s.cos_coeffs = {0.0, 0.0, amp3};
  return s;
}

}  // namespace

TEST_CASE("area of circles and a perturbed circle") {
  CHECK(area(make_circle({0, 0}, 1.0)) == doctest::Approx(M_PI).epsilon(1e-12));
  CHECK(area(make_circle({3, -1}, 2.0)) ==
        doctest::Approx(4.0 * M_PI).epsilon(1e-12));
  // (1/2) int (1 + 0.1 cos 3t)^2 = pi (1 + 0.1^2 / 2)
  CHECK(area(wobbly(1.0, 0.1)) ==
        doctest::Approx(M_PI * 1.005).epsilon(1e-12));
}

TEST_CASE("perimeter against the polygonal oracle") {
  CHECK(perimeter(make_circle({0, 0}, 1.0)) ==
        doctest::Approx(2.0 * M_PI).epsilon(1e-12));
  CHECK(perimeter(make_circle({0, 0}, 3.5)) ==
        doctest::Approx(7.0 * M_PI).epsilon(1e-12));
  const StarShape s = wobbly(1.0, 0.1);
  CHECK(perimeter(s) ==
        doctest::Approx(polygonal_perimeter(s, 1 << 20)).epsilon(1e-8));
}

TEST_CASE("normalize_area") {
  const StarShape half = normalize_area(make_circle({0, 0}, 2.0), M_PI);
  CHECK(half.a0 == doctest::Approx(1.0).epsilon(1e-12));

  StarShape s = wobbly(1.3, 0.2);
  s.sin_coeffs = {0.05};
  const StarShape scaled = normalize_area(s, 2.5);
  CHECK(area(scaled) == doctest::Approx(2.5).epsilon(1e-10));

  // fixed point and idempotence
  const StarShape again = normalize_area(scaled, 2.5);
  CHECK(again.a0 == doctest::Approx(scaled.a0).epsilon(1e-12));
  for (size_t k = 0; k < again.cos_coeffs.size(); ++k)
    CHECK(again.cos_coeffs[k] ==
          doctest::Approx(scaled.cos_coeffs[k]).epsilon(1e-12));
}

TEST_CASE("area is invariant under rotation of the Fourier phase") {
  StarShape s = wobbly(1.0, 0.12);
  s.cos_coeffs.push_back(0.03);
  s.sin_coeffs = {0.02, -0.04};
  const double a0 = area(s);
  for (int rot = 1; rot <= 10; ++rot) {
    const double delta = 0.61803398875 * rot;  // irrational spread of angles
    StarShape r = s;
    // rotate rho(theta) -> rho(theta + delta): per-mode phase shift
    const size_t kmax = std::max(r.cos_coeffs.size(), r.sin_coeffs.size());
    r.cos_coeffs.resize(kmax, 0.0);
    r.sin_coeffs.resize(kmax, 0.0);
    for (size_t k = 0; k < kmax; ++k) {
      const double c = r.cos_coeffs[k], d = r.sin_coeffs[k];
      const double w = (k + 1.0) * delta;
      r.cos_coeffs[k] = c * std::cos(w) + d * std::sin(w);
      r.sin_coeffs[k] = -c * std::sin(w) + d * std::cos(w);
    }
    CHECK(area(r) == doctest::Approx(a0).epsilon(1e-10));
  }
}

TEST_CASE("invalid shapes are rejected") {
  StarShape bad;
  bad.a0 = 0.1;
  bad.cos_coeffs = {0.5};  // rho dips negative
  CHECK_THROWS_AS(area(bad), InvalidShape);
  CHECK_THROWS_AS(perimeter(bad), InvalidShape);

  // no certificate but positive on the grid: accepted
  StarShape edgy;
  edgy.a0 = 1.0;
  edgy.cos_coeffs = {0.6, 0.5};  // sum 1.1 > a0, yet rho > 0 everywhere
  CHECK(area(edgy) > 0.0);
}

TEST_CASE("validate_pair accepts nested pairs and rejects bad ones") {
  const StarShape unit = make_circle({0, 0}, 1.0);
  CHECK_NOTHROW(validate_pair(unit, make_circle({0, 0}, 2.0)));
  CHECK_THROWS_AS(validate_pair(unit, make_circle({3.0, 0}, 1.0)),
                  ContainmentViolation);
  // off-center enclosing circle: min clearance 0.5 along the negative x ray
  CHECK_NOTHROW(validate_pair(unit, make_circle({0.5, 0.0}, 2.0)));
  // equality case K = Omega is representable
  CHECK_NOTHROW(validate_pair(unit, unit));
}

TEST_CASE("radius_about re-expresses an offset circle") {
  const StarShape omega = make_circle({0.5, 0.0}, 2.0);
  // |P - (0.5, 0)| = 2 along theta: s^2 - s cos(theta) + 0.25 = 4
  for (double theta : {0.0, 0.7, M_PI / 2, 2.4, M_PI, 4.5}) {
    const double c = std::cos(theta);
    const double expected = 0.5 * c + std::sqrt(0.25 * c * c + 3.75);
    CHECK(radius_about(omega, {0, 0}, theta) ==
          doctest::Approx(expected).epsilon(1e-10));
  }
  CHECK_THROWS_AS(radius_about(omega, {5.0, 0.0}, 0.0), ContainmentViolation);
}

TEST_CASE("sampled pairs are deterministic and normalized") {
  const double M = 4.0 * M_PI;
  const ShapePair a = sample_random_pair(42, M, 0.15);
  const ShapePair b = sample_random_pair(42, M, 0.15);
  CHECK(a.K.a0 == b.K.a0);
  REQUIRE(a.K.cos_coeffs.size() == b.K.cos_coeffs.size());
  for (size_t k = 0; k < a.K.cos_coeffs.size(); ++k) {
    CHECK(a.K.cos_coeffs[k] == b.K.cos_coeffs[k]);
    CHECK(a.K.sin_coeffs[k] == b.K.sin_coeffs[k]);
  }
  CHECK(a.Omega.center.x == b.Omega.center.x);

  CHECK(area(a.K) == doctest::Approx(M_PI).epsilon(1e-10));
  CHECK(area(a.Omega) <= M * (1.0 + 1e-10));

  const ShapePair c = sample_random_pair(43, M, 0.15);
  CHECK(a.K.cos_coeffs[0] != c.K.cos_coeffs[0]);

  const ShapePair flat = sample_random_pair(7, M, 0.0);
  CHECK(flat.K.a0 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(flat.Omega.a0 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(flat.Omega.center.x == 0.0);
  CHECK(flat.Omega.center.y == 0.0);
}

TEST_CASE("sampler gives up after exhausting its retry budget") {
  CHECK_THROWS_AS(sample_random_pair(1, 4.0, 10.0), std::runtime_error);
  CHECK_THROWS_AS(sample_random_pair(1, 2.0, 0.1), std::domain_error);
}
