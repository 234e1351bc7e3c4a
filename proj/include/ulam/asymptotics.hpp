#pragma once

#include <complex>
#include <functional>
#include <string>

#include "ulam/painleve.hpp"

namespace ulam::asymptotics {

// Large-deviation rate functions. U and H require 0 < x <= 2, I requires
// x >= 2; DomainError otherwise.
double rate_U(double x);
double rate_I(double x);
double rate_H(double x);

// Equilibrium measure on the unit circle for V(z) = -(gamma/2)(z + 1/z).
struct EquilibriumMeasure {
  double gamma = 0.0;
  bool full_circle = true;
  // Half-width of the support arc [-theta_c, theta_c]; pi on the full circle.
  double theta_c = 0.0;
  double lagrange_l = 0.0;

  // Density with respect to d theta, zero off the support.
  double density(double theta) const;
};

// Throws DomainError for gamma <= 0.
EquilibriumMeasure equilibrium_measure(double gamma);

// Total mass by tanh-sinh quadrature over the support.
double equilibrium_mass(const EquilibriumMeasure& mu);

// g(z) for 0 <= gamma <= 1: log z - gamma/(2z) outside the circle,
// -gamma z / 2 + pi i inside. Throws DomainError on the circle (within
// 1e-12) and on the cut (-inf, -1].
std::complex<double> eval_g(double gamma, std::complex<double> z);

// 2 int log|e^{i phi} - e^{i theta}| d mu(theta) - V(e^{i phi}) + l. Zero on
// the support, negative off it. Throws AccuracyError when the quadrature
// error estimate exceeds 1e-9.
double variational_residual(double gamma, double phi);

struct Thresholds {
  double delta5 = 0.1, delta6 = 0.1, delta7 = 0.1;
  double M5 = 2.0, M6 = 2.0, M7 = 2.0;
};

enum class Regime { SubFar, SubNear, Critical, SuperNear, SuperFar };

std::string to_string(Regime r);

struct RegimeClassification {
  int n = 0;
  double lambda = 0.0;
  double gamma = 0.0;  // 2 sqrt(lambda) / (n + 1)
  double t = 0.0;      // 2^{1/3} (n+1)^{2/3} (1 - gamma)
  Regime regime = Regime::Critical;
  Thresholds thresholds;
};

// Critical when |t| <= M6; otherwise SubFar for gamma <= 1 - delta5, SubNear
// for gamma < 1, SuperFar for gamma >= 1 + delta7 and SuperNear between.
RegimeClassification classify(int n, double lambda, const Thresholds& th = {});

struct PhiAsymptotic {
  RegimeClassification classification;
  // Critical: log F(t). SuperNear: the bound -|t|^3/96 without its unknown
  // additive constant. NaN elsewhere.
  double log_phi_estimate = 0.0;
  // Decay shape of the regime's statement with unknown constants set to one:
  // e^{-n}, e^{-t^{3/2}}, n^{-1/3}, e^{-|t|^3/96}, e^{-lambda}.
  double envelope = 0.0;
  std::string statement;
};

// Needs the evaluator only in the critical window.
PhiAsymptotic phi_asymptotic(int n, double lambda, const painleve::TracyWidomEvaluator& tw,
                             const Thresholds& th = {});

enum class KappaRegime { Subcritical, Critical, Supercritical };

std::string to_string(KappaRegime r);

// Closed-form prediction for kappa^2_{q-1} at gamma = 2 sqrt(lambda) / q.
struct KappaAsymptotic {
  int q = 0;
  double gamma = 0.0;
  double t = 0.0;  // 2^{1/3} q^{2/3} (1 - gamma)
  KappaRegime regime = KappaRegime::Critical;
  double prediction = 0.0;
  // Subcritical: e^{-(2 sqrt 2 / 3) q (1-gamma)^{3/2}} / q^{1/3}, the shape
  // of |kappa^2 - 1|; critical: q^{-2/3}; supercritical: 1/q.
  double envelope = 0.0;
  std::string caveat;
};

// Critical window |t| <= M: 1 + 2^{1/3} v(t) / q^{1/3} with v = 2i m_{1,22};
// below it 1, above it e^{q(-gamma + log gamma + 1)} / sqrt(gamma).
// Requires q >= 2 and gamma > 0.
KappaAsymptotic kappa_asymptotic(int q, double gamma, const painleve::TracyWidomEvaluator& tw, double M = 2.0);

using PhiEvaluator = std::function<double(int n, double lambda)>;

// phi_n(lambda) from the Toeplitz determinant.
PhiEvaluator toeplitz_phi();

struct SandwichBound {
  int n = 0;
  int N = 0;
  double m = 0.0;
  double mu_N = 0.0;
  double nu_N = 0.0;
  double lower = 0.0;  // phi_n(mu_N)
  double upper = 0.0;  // phi_n(nu_N), or 1 when nu_N <= 0
  bool upper_at_zero = false;
  // C / N^m with C unknown; reported as the power only.
  double slack_power = 0.0;
};

// Throws DomainError unless N >= 2, m > 0, n >= 1.
SandwichBound depoisson_bounds(int n, int N, double m, const PhiEvaluator& phi = toeplitz_phi());

struct ScaledCdf {
  int N = 0;
  double t = 0.0;
  int n = 0;
  double value = 0.0;
  // "trivial", "exact" or "poissonized"
  std::string path;
};

// q_{n,N} at n = floor(2 sqrt N + t N^{1/6}); exact up to `exact_limit`,
// otherwise the midpoint of the de-Poissonization bracket with m = 1.
ScaledCdf scaled_cdf(int N, double t, const PhiEvaluator& phi = toeplitz_phi(), int exact_limit = 60);

}  // namespace ulam::asymptotics
