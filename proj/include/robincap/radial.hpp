#pragma once

#include <optional>
#include <utility>
#include <vector>

// Closed-form radial quantities for the Robin p-capacity energy of
// concentric balls (B_1, B_R): the kernel Phi, the explicit minimizer,
// the energy curve R -> E(B_1,B_R), its regime classification, and the
// ball lower bound used by the verification campaign.

namespace robincap {

/// The three scalars governing every formula: dimension n >= 2,
/// exponent p > 1, Robin coefficient beta > 0.
struct ProblemParams {
  int n;
  double p;
  double beta;

  ProblemParams(int n_, double p_, double beta_);

  /// beta^(1/(p-1)), the scale separating the boundary and gradient terms.
  double robin_root() const;
};

enum class Regime {
  MonotoneDecreasing,  // beta^{1/(p-1)} >= (n-1)/(p-1)
  BumpThenDecreasing,  // strictly between the two thresholds
  MinAtOne             // beta^{1/(p-1)} <= (n-p)/(p-1)
};

const char* regime_name(Regime r);

/// Classification of R -> E(B_1,B_R) together with the Fig-style
/// thresholds beta1, beta2 and the critical radius when it exists.
struct RegimeReport {
  Regime regime;
  double alpha;                           // (n-1)/((p-1) beta^{1/(p-1)})
  double beta1;                           // ((n-p)/(p-1))^{p-1}, 0 for p >= n
  double beta2;                           // ((n-1)/(p-1))^{p-1}
  std::optional<double> critical_radius;  // only in BumpThenDecreasing
  double limit_at_infinity;
};

/// Sampled energy curve; radii strictly increasing, radii[i] >= 1.
struct BallEnergyCurve {
  ProblemParams params;
  std::vector<double> radii;
  std::vector<double> energies;
};

/// Volume of the unit ball in R^n: pi^{n/2} / Gamma(n/2 + 1).
double unit_ball_volume(int n);

/// Radial kernel: log(rho) for p = n, -((p-1)/(n-p)) rho^{-(n-p)/(p-1)} else.
double phi(const ProblemParams& params, double rho);

/// phi(rho) - phi(1), evaluated stably for all p (expm1 on the power branch).
double phi_diff(const ProblemParams& params, double rho);

/// phi(b) - phi(a), same stable evaluation.
double phi_between(const ProblemParams& params, double a, double b);

/// Derivative of phi: rho^{-(n-1)/(p-1)} (covers both branches).
double phi_prime(const ProblemParams& params, double rho);

/// Denominator of u*: phi'(R) + beta^{1/(p-1)} (phi(R) - phi(1)).
double u_star_denominator(const ProblemParams& params, double R);

/// E_{beta,p}(B_1,B_R) = n w_n beta / D(R)^{p-1} for R > 1; n w_n beta at R = 1.
double ball_energy(const ProblemParams& params, double R);

/// The explicit radial minimizer on (B_1, B_R); equals 1 for r <= 1.
double u_star(const ProblemParams& params, double R, double r);

/// |du*/dr| / u*(r) on [1, R].
double gradient_ratio(const ProblemParams& params, double R, double r);

RegimeReport regime_classify(const ProblemParams& params);

/// Unique R > alpha with ball_energy(R) = ball_energy(1), by bracketed
/// bisection on D(R) = 1. Requires the BumpThenDecreasing regime.
double critical_radius(const ProblemParams& params);

/// Dual criterion on (B_1,B_R): the pointwise bound
/// |grad u*|/u* <= beta^{1/(p-1)} holds exactly when R minimizes the ball
/// energy over [1, R], so the two grid tests below always agree.
///  first  = sup of gradient_ratio over a grid of [1,R] stays <= beta^{1/(p-1)}
///  second = min of ball_energy over a grid of [1,R] stays >= ball_energy(R)
std::pair<bool, bool> gradient_bound_predicate(const ProblemParams& params, double R);

struct BallBound {
  double energy;
  double r_opt;
};

/// Minimum of ball_energy over R in [1, (M/w_n)^{1/n}], resolved from the
/// regime structure without any grid search.
BallBound ball_lower_bound(const ProblemParams& params, double M);

/// Uniform sampling of R -> E(B_1,B_R) on [r_min, r_max].
BallEnergyCurve ball_energy_curve(const ProblemParams& params, double r_min,
                                  double r_max, int samples);

}  // namespace robincap
