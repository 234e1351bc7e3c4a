#include "ulam/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "ulam/combinat.hpp"
#include "ulam/errors.hpp"
#include "ulam/toeplitz.hpp"

namespace ulam::asymptotics {

using std::numbers::pi;

double rate_U(double x) {
  if (!(x > 0.0 && x <= 2.0)) throw DomainError("rate_U: x must lie in (0, 2]");
  return 1.0 - 2.0 * x + 0.75 * x * x + 0.5 * x * x * std::log(2.0 / x);
}

double rate_I(double x) {
  if (!(x >= 2.0) || !std::isfinite(x)) throw DomainError("rate_I: x must be >= 2");
  return 2.0 * x * std::acosh(x / 2.0) - 2.0 * std::sqrt(x * x - 4.0);
}

double rate_H(double x) {
  if (!(x > 0.0 && x <= 2.0)) throw DomainError("rate_H: x must lie in (0, 2]");
  const double x2 = x * x;
  return -0.5 + x2 / 8.0 + std::log(x / 2.0) - (1.0 + x2 / 4.0) * std::log(2.0 * x2 / (4.0 + x2));
}

double EquilibriumMeasure::density(double theta) const {
  if (full_circle) return (1.0 + gamma * std::cos(theta)) / (2.0 * pi);
  if (std::abs(theta) > theta_c) return 0.0;
  const double s = std::sin(theta / 2.0);
  return gamma / pi * std::cos(theta / 2.0) * std::sqrt(std::max(0.0, 1.0 / gamma - s * s));
}

EquilibriumMeasure equilibrium_measure(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("equilibrium_measure: gamma must be > 0");
  EquilibriumMeasure mu;
  mu.gamma = gamma;
  if (gamma <= 1.0) {
    mu.full_circle = true;
    mu.theta_c = pi;
    mu.lagrange_l = 0.0;
  } else {
    mu.full_circle = false;
    mu.theta_c = 2.0 * std::asin(1.0 / std::sqrt(gamma));
    mu.lagrange_l = -gamma + std::log(gamma) + 1.0;
  }
  return mu;
}

double equilibrium_mass(const EquilibriumMeasure& mu) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  auto f = [&](double theta) { return mu.density(theta); };
  return integrator.integrate(f, -mu.theta_c, 0.0) + integrator.integrate(f, 0.0, mu.theta_c);
}

std::complex<double> eval_g(double gamma, std::complex<double> z) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError("eval_g: gamma must lie in [0, 1]");
  const double r = std::abs(z);
  if (std::abs(r - 1.0) <= 1e-12) throw DomainError("eval_g: z lies on the unit circle");
  if (r < 1.0) return -gamma * z / 2.0 + std::complex<double>(0.0, pi);
  if (z.imag() == 0.0 && z.real() <= -1.0) throw DomainError("eval_g: z lies on the cut (-inf, -1]");
  return std::log(z) - gamma / (2.0 * z);
}

double variational_residual(double gamma, double phi) {
  const auto mu = equilibrium_measure(gamma);
  // Reduce phi to (-pi, pi].
  phi = std::remainder(phi, 2.0 * pi);

  std::vector<double> cuts = {-mu.theta_c, mu.theta_c};
  if (phi > -mu.theta_c && phi < mu.theta_c) cuts.push_back(phi);
  std::sort(cuts.begin(), cuts.end());

  boost::math::quadrature::tanh_sinh<double> integrator;
  const double tol = 1e-12;
  auto singular_at = [&](double endpoint) { return std::abs(std::sin((endpoint - phi) / 2.0)) < 1e-14; };
  double total = 0.0, error = 0.0;
  // Integrates over [a, b] in the offset s from an endpoint, so that the
  // distance to the logarithmic singularity is never formed by cancellation.
  auto piece = [&](double a, double b) {
    double err = 0.0, value = 0.0;
    if (singular_at(a)) {
      auto f = [&](double s) { return std::log(2.0 * std::sin(s / 2.0)) * mu.density(a + s); };
      value = integrator.integrate(f, 0.0, b - a, tol, &err);
    } else if (singular_at(b)) {
      auto f = [&](double s) { return std::log(2.0 * std::sin(s / 2.0)) * mu.density(b - s); };
      value = integrator.integrate(f, 0.0, b - a, tol, &err);
    } else {
      auto f = [&](double theta) {
        return std::log(std::abs(2.0 * std::sin((theta - phi) / 2.0))) * mu.density(theta);
      };
      value = integrator.integrate(f, a, b, tol, &err);
    }
    total += value;
    error += err * std::max(1.0, std::abs(value));
  };
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k], b = cuts[k + 1];
    if (singular_at(a) && singular_at(b)) {
      piece(a, 0.5 * (a + b));
      piece(0.5 * (a + b), b);
    } else {
      piece(a, b);
    }
  }
  if (!(error <= 1e-9) || !std::isfinite(total)) {
    throw AccuracyError("variational_residual: quadrature did not converge");
  }
  return 2.0 * total + gamma * std::cos(phi) + mu.lagrange_l;
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::SubFar: return "sub-far";
    case Regime::SubNear: return "sub-near";
    case Regime::Critical: return "critical";
    case Regime::SuperNear: return "super-near";
    case Regime::SuperFar: return "super-far";
  }
  return "unknown";
}

std::string to_string(KappaRegime r) {
  switch (r) {
    case KappaRegime::Subcritical: return "subcritical";
    case KappaRegime::Critical: return "critical";
    case KappaRegime::Supercritical: return "supercritical";
  }
  return "unknown";
}

RegimeClassification classify(int n, double lambda, const Thresholds& th) {
  if (n < 1) throw DomainError("classify: n must be >= 1");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("classify: lambda must be > 0");
  RegimeClassification c;
  c.n = n;
  c.lambda = lambda;
  c.thresholds = th;
  const double q = n + 1.0;
  c.gamma = 2.0 * std::sqrt(lambda) / q;
  c.t = std::cbrt(2.0) * std::pow(q, 2.0 / 3.0) * (1.0 - c.gamma);
  if (std::abs(c.t) <= th.M6) {
    c.regime = Regime::Critical;
  } else if (c.gamma <= 1.0 - th.delta5) {
    c.regime = Regime::SubFar;
  } else if (c.gamma < 1.0) {
    c.regime = Regime::SubNear;
  } else if (c.gamma >= 1.0 + th.delta7) {
    c.regime = Regime::SuperFar;
  } else {
    c.regime = Regime::SuperNear;
  }
  return c;
}

PhiAsymptotic phi_asymptotic(int n, double lambda, const painleve::TracyWidomEvaluator& tw, const Thresholds& th) {
  PhiAsymptotic out;
  out.classification = classify(n, lambda, th);
  const auto& c = out.classification;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out.log_phi_estimate = nan;
  switch (c.regime) {
    case Regime::SubFar:
      out.envelope = std::exp(-static_cast<double>(n));
      out.statement = "|log phi| <= C exp(-c n)";
      break;
    case Regime::SubNear:
      out.envelope = std::exp(-std::pow(c.t, 1.5));
      out.statement = "|log phi| <= C exp(-c t^{3/2})";
      break;
    case Regime::Critical:
      out.log_phi_estimate = tw.log_cdf(c.t);
      out.envelope = std::pow(static_cast<double>(n), -1.0 / 3.0);
      out.statement = "log phi = log F(t) + O(n^{-1/3}) + O(exp(-M^{3/2}/4))";
      break;
    case Regime::SuperNear:
      out.log_phi_estimate = -std::pow(std::abs(c.t), 3) / 96.0;
      out.envelope = std::exp(out.log_phi_estimate);
      out.statement = "log phi <= -|t|^3/96 + C(M)";
      break;
    case Regime::SuperFar:
      out.envelope = std::exp(-lambda);
      out.statement = "phi <= C exp(-c lambda)";
      break;
  }
  return out;
}

KappaAsymptotic kappa_asymptotic(int q, double gamma, const painleve::TracyWidomEvaluator& tw, double M) {
  if (q < 2) throw DomainError("kappa_asymptotic: q must be >= 2");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("kappa_asymptotic: gamma must be > 0");
  KappaAsymptotic out;
  out.q = q;
  out.gamma = gamma;
  const double qd = q;
  out.t = std::cbrt(2.0) * std::pow(qd, 2.0 / 3.0) * (1.0 - gamma);
  if (std::abs(out.t) <= M) {
    out.regime = KappaRegime::Critical;
    out.prediction = 1.0 + std::cbrt(2.0) * tw.v(out.t) / std::cbrt(qd);
    out.envelope = std::pow(qd, -2.0 / 3.0);
    out.caveat = "error O(q^{-2/3}) with an unspecified constant";
  } else if (gamma < 1.0) {
    out.regime = KappaRegime::Subcritical;
    out.prediction = 1.0;
    out.envelope = std::exp(-2.0 * std::numbers::sqrt2 / 3.0 * qd * std::pow(1.0 - gamma, 1.5)) / std::cbrt(qd);
    out.caveat = "|kappa^2 - 1| bounded by the envelope up to an unspecified constant";
  } else {
    out.regime = KappaRegime::Supercritical;
    out.prediction = std::exp(qd * (-gamma + std::log(gamma) + 1.0)) / std::sqrt(gamma);
    out.envelope = 1.0 / (qd * std::min(1.0, gamma - 1.0));
    out.caveat = "relative error O(1/(q (gamma - 1)))";
  }
  return out;
}

PhiEvaluator toeplitz_phi() {
  return [](int n, double lambda) { return toeplitz::phi(n, lambda).phi; };
}

SandwichBound depoisson_bounds(int n, int N, double m, const PhiEvaluator& phi) {
  if (N < 2) throw DomainError("depoisson_bounds: N must be >= 2");
  if (!(m > 0.0)) throw DomainError("depoisson_bounds: m must be > 0");
  if (n < 1) throw DomainError("depoisson_bounds: n must be >= 1");
  SandwichBound b;
  b.n = n;
  b.N = N;
  b.m = m;
  const double Nd = N;
  const double radius = (2.0 * std::sqrt(m + 1.0) + 1.0) * std::sqrt(Nd * std::log(Nd));
  b.mu_N = Nd + radius;
  b.nu_N = Nd - radius;
  b.lower = phi(n, b.mu_N);
  if (b.nu_N > 0.0) {
    b.upper = phi(n, b.nu_N);
  } else {
    // phi_n(0+) = 1.
    b.upper = 1.0;
    b.upper_at_zero = true;
  }
  b.slack_power = -m;
  return b;
}

ScaledCdf scaled_cdf(int N, double t, const PhiEvaluator& phi, int exact_limit) {
  if (N < 1) throw DomainError("scaled_cdf: N must be >= 1");
  if (!std::isfinite(t)) throw DomainError("scaled_cdf: t must be finite");
  ScaledCdf out;
  out.N = N;
  out.t = t;
  const double Nd = N;
  const double raw = std::floor(2.0 * std::sqrt(Nd) + t * std::pow(Nd, 1.0 / 6.0));
  if (raw < 1.0) {
    out.n = static_cast<int>(std::max(raw, -1e9));
    out.value = 0.0;
    out.path = "trivial";
    return out;
  }
  if (raw >= Nd) {
    out.n = static_cast<int>(std::min(raw, 1e9));
    out.value = 1.0;
    out.path = "trivial";
    return out;
  }
  out.n = static_cast<int>(raw);
  if (N <= exact_limit) {
    out.value = combinat::distribution_exact(N, out.n, exact_limit).to_double();
    out.path = "exact";
    return out;
  }
  const auto b = depoisson_bounds(out.n, N, 1.0, phi);
  out.value = 0.5 * (b.lower + b.upper);
  out.path = "poissonized";
  return out;
}

}  // namespace ulam::asymptotics
