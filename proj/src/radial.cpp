#include "robincap/radial.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace robincap {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::domain_error(msg);
}

}  // namespace

ProblemParams::ProblemParams(int n_, double p_, double beta_)
    : n(n_), p(p_), beta(beta_) {
  if (n < 2) throw std::invalid_argument("ProblemParams: n must be >= 2");
  if (!(p > 1.0) || !std::isfinite(p))
    throw std::invalid_argument("ProblemParams: p must be finite and > 1");
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw std::invalid_argument("ProblemParams: beta must be finite and > 0");
}

double ProblemParams::robin_root() const {
  return std::pow(beta, 1.0 / (p - 1.0));
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::MonotoneDecreasing: return "MonotoneDecreasing";
    case Regime::BumpThenDecreasing: return "BumpThenDecreasing";
    case Regime::MinAtOne: return "MinAtOne";
  }
  return "?";
}

double unit_ball_volume(int n) {
  if (n < 1) throw std::domain_error("unit_ball_volume: n must be >= 1");
  // w_1 = 2, w_2 = pi, w_n = w_{n-2} * 2 pi / n.
  double w = (n % 2 == 0) ? M_PI : 2.0;
  for (int k = (n % 2 == 0) ? 4 : 3; k <= n; k += 2) w *= 2.0 * M_PI / k;
  if (n == 1) return 2.0;
  return w;
}

double phi(const ProblemParams& params, double rho) {
  require(rho > 0.0, "phi: rho must be positive");
  if (params.p == static_cast<double>(params.n)) return std::log(rho);
  const double e = (params.n - params.p) / (params.p - 1.0);
  return -(1.0 / e) * std::pow(rho, -e);
}

double phi_diff(const ProblemParams& params, double rho) {
  return phi_between(params, 1.0, rho);
}

double phi_between(const ProblemParams& params, double a, double b) {
  require(a > 0.0 && b > 0.0, "phi_between: radii must be positive");
  if (params.p == static_cast<double>(params.n)) return std::log(b / a);
  const double e = (params.n - params.p) / (params.p - 1.0);
  // -(1/e) (b^-e - a^-e); expm1 keeps accuracy when e or b/a - 1 is small.
  return -(1.0 / e) * std::pow(a, -e) * std::expm1(-e * std::log(b / a));
}

double phi_prime(const ProblemParams& params, double rho) {
  require(rho > 0.0, "phi_prime: rho must be positive");
  return std::pow(rho, -(params.n - 1.0) / (params.p - 1.0));
}

double u_star_denominator(const ProblemParams& params, double R) {
  return phi_prime(params, R) + params.robin_root() * phi_diff(params, R);
}

double ball_energy(const ProblemParams& params, double R) {
  require(R >= 1.0, "ball_energy: R must be >= 1");
  const double surface = params.n * unit_ball_volume(params.n);
  if (R == 1.0) return surface * params.beta;
  return surface * params.beta /
         std::pow(u_star_denominator(params, R), params.p - 1.0);
}

double u_star(const ProblemParams& params, double R, double r) {
  require(R > 1.0, "u_star: R must be > 1");
  require(r >= 0.0 && r <= R, "u_star: r must lie in [0, R]");
  if (r <= 1.0) return 1.0;
  // (phi'(R) + b (phi(R) - phi(r))) / D: a ratio of positive sums, free of
  // the cancellation of the textbook 1 - b (phi(r) - phi(1)) / D form.
  return (phi_prime(params, R) +
          params.robin_root() * phi_between(params, r, R)) /
         u_star_denominator(params, R);
}

double gradient_ratio(const ProblemParams& params, double R, double r) {
  require(R > 1.0, "gradient_ratio: R must be > 1");
  require(r >= 1.0 && r <= R, "gradient_ratio: r must lie in [1, R]");
  const double b = params.robin_root();
  return b * phi_prime(params, r) /
         (phi_prime(params, R) + b * phi_between(params, r, R));
}

RegimeReport regime_classify(const ProblemParams& params) {
  const double b = params.robin_root();
  const double lower = (params.n - params.p) / (params.p - 1.0);
  const double upper = (params.n - 1.0) / (params.p - 1.0);

  RegimeReport report;
  report.alpha = upper / b;
  report.beta1 = params.p < params.n ? std::pow(lower, params.p - 1.0) : 0.0;
  report.beta2 = std::pow(upper, params.p - 1.0);
  report.limit_at_infinity =
      params.p < params.n
          ? params.n * unit_ball_volume(params.n) * std::pow(lower, params.p - 1.0)
          : 0.0;

  // Threshold ties go to the adjacent closed regime.
  if (b >= upper) {
    report.regime = Regime::MonotoneDecreasing;
  } else if (b <= lower) {
    report.regime = Regime::MinAtOne;
  } else {
    report.regime = Regime::BumpThenDecreasing;
    report.critical_radius = critical_radius(params);
  }
  return report;
}

double critical_radius(const ProblemParams& params) {
  const double b = params.robin_root();
  const double lower = (params.n - params.p) / (params.p - 1.0);
  const double upper = (params.n - 1.0) / (params.p - 1.0);
  if (!(b > lower && b < upper))
    throw std::logic_error(
        "critical_radius: defined only in the BumpThenDecreasing regime");

  const double alpha = upper / b;
  // D(1) = 1, D decreases to its minimum at alpha and then increases;
  // the second root of D(R) = 1 lies beyond alpha.
  auto excess = [&](double R) { return u_star_denominator(params, R) - 1.0; };

  double lo = alpha;
  double hi = 2.0 * alpha;
  int doublings = 0;
  while (excess(hi) < 0.0) {
    hi *= 2.0;
    if (++doublings > 60)
      throw std::runtime_error(
          "critical_radius: no sign change within 2^60 alpha (beta at or "
          "below the lower threshold; the root escapes to infinity)");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) < 0.0 ? lo : hi) = mid;
    if (hi - lo <= 1e-14 * hi) break;
  }
  return 0.5 * (lo + hi);
}

std::pair<bool, bool> gradient_bound_predicate(const ProblemParams& params, double R) {
  require(R > 1.0, "gradient_bound_predicate: R must be > 1");
  constexpr int kGrid = 2048;  // plus both endpoints
  const double b = params.robin_root();

  double ratio_sup = 0.0;
  double energy_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kGrid; ++i) {
    const double r = 1.0 + (R - 1.0) * static_cast<double>(i) / kGrid;
    ratio_sup = std::max(ratio_sup, gradient_ratio(params, R, r));
    energy_min = std::min(energy_min, ball_energy(params, r));
  }
  const bool ratio_ok = ratio_sup <= b * (1.0 + 1e-12);
  const bool energy_ok = energy_min >= ball_energy(params, R) * (1.0 - 1e-12);
  return {ratio_ok, energy_ok};
}

BallBound ball_lower_bound(const ProblemParams& params, double M) {
  const double wn = unit_ball_volume(params.n);
  if (!(M >= wn)) throw std::domain_error("ball_lower_bound: M must be >= w_n");
  const double r_max = std::pow(M / wn, 1.0 / params.n);

  const RegimeReport report = regime_classify(params);
  double r_opt = 1.0;
  switch (report.regime) {
    case Regime::MonotoneDecreasing:
      r_opt = r_max;
      break;
    case Regime::BumpThenDecreasing:
      r_opt = (r_max >= *report.critical_radius) ? r_max : 1.0;
      break;
    case Regime::MinAtOne:
      r_opt = 1.0;
      break;
  }
  return {ball_energy(params, r_opt), r_opt};
}

BallEnergyCurve ball_energy_curve(const ProblemParams& params, double r_min,
                                  double r_max, int samples) {
  if (!(r_min >= 1.0 && r_min < r_max))
    throw std::domain_error("ball_energy_curve: need 1 <= r_min < r_max");
  if (samples < 2) throw std::domain_error("ball_energy_curve: samples >= 2");

  BallEnergyCurve curve{params, {}, {}};
  curve.radii.reserve(samples);
  curve.energies.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    const double r = r_min + (r_max - r_min) * static_cast<double>(i) / (samples - 1);
    curve.radii.push_back(r);
    curve.energies.push_back(ball_energy(params, r));
  }
  return curve;
}

}  // namespace robincap
