#include "ulam/special_functions.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "ulam/errors.hpp"

namespace ulam {

double bessel_i(int order, double z) {
  if (!(z >= 0.0) || !std::isfinite(z)) throw DomainError("bessel_i: argument must be finite and >= 0");
  const long j = std::labs(order);
  if (j > 10000) throw DomainError("bessel_i: |order| exceeds 10000");
  if (z == 0.0) return j == 0 ? 1.0 : 0.0;

  // Leading factor (z/2)^j / j!, kept as mantissa and binary exponent so that
  // large orders neither overflow nor underflow before the final scaling.
  const long double half = static_cast<long double>(z) / 2.0L;
  long double mant = 1.0L;
  long exponent = 0;
  for (long i = 1; i <= j; ++i) {
    mant *= half / static_cast<long double>(i);
    int e = 0;
    mant = std::frexp(mant, &e);
    exponent += e;
  }

  const long double q = half * half;
  long double term = 1.0L;
  long double sum = 1.0L;
  long double carry = 0.0L;
  for (long m = 0;; ++m) {
    const long double ratio = q / (static_cast<long double>(m + 1) * static_cast<long double>(m + 1 + j));
    term *= ratio;
    const long double y = term - carry;
    const long double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
    if (ratio < 1.0L && term < 1e-18L * sum) break;
  }
  return static_cast<double>(std::ldexp(mant * sum, static_cast<int>(exponent)));
}

std::vector<mp::Real> bessel_i_sequence_mp(int max_order, double lambda, mpfr_prec_t bits) {
  if (max_order < 0) throw UsageError("bessel_i_sequence_mp: negative order");
  if (!(lambda >= 0.0)) throw DomainError("bessel_i_sequence_mp: lambda must be >= 0");
  const auto count = static_cast<std::size_t>(max_order) + 1;
  std::vector<mp::Real> out(count, mp::Real(bits));
  if (lambda == 0.0) {
    out[0] = 1.0;
    return out;
  }
  const double zd = 2.0 * std::sqrt(lambda);
  const double target = static_cast<double>(bits) * std::numbers::ln2 + 40.0;

  // Start index K with log(I_K / e^z) below the working precision, using the
  // leading series term as an estimate of I_K.
  long start = std::max<long>(max_order + 2, static_cast<long>(zd) + 2);
  const double log_half = std::log(zd / 2.0);
  while (start * log_half - std::lgamma(static_cast<double>(start) + 1.0) - zd > -target) ++start;

  mp::Real z = mp::sqrt(mp::Real(lambda, bits));
  z *= 2ul;
  mp::Real two_over_z(2.0, bits);
  two_over_z /= z;

  std::vector<mp::Real> vals(static_cast<std::size_t>(start) + 2, mp::Real(bits));
  vals[static_cast<std::size_t>(start)] = 1.0;
  mp::Real step(bits);
  for (long j = start; j >= 1; --j) {
    step = two_over_z;
    step *= static_cast<unsigned long>(j);
    step *= vals[static_cast<std::size_t>(j)];
    vals[static_cast<std::size_t>(j) - 1] = vals[static_cast<std::size_t>(j) + 1] + step;
  }
  mp::Real norm(bits);
  for (long j = start; j >= 1; --j) norm += vals[static_cast<std::size_t>(j)];
  norm *= 2ul;
  norm += vals[0];
  mp::Real scale = mp::exp(z) / norm;
  for (std::size_t j = 0; j < count; ++j) out[j] = vals[j] * scale;
  return out;
}

std::vector<mp::Real> bessel_i_sequence_mp_series(int max_order, double lambda, mpfr_prec_t bits) {
  if (max_order < 0) throw UsageError("bessel_i_sequence_mp_series: negative order");
  if (!(lambda >= 0.0)) throw DomainError("bessel_i_sequence_mp_series: lambda must be >= 0");
  const auto count = static_cast<std::size_t>(max_order) + 1;
  std::vector<mp::Real> out(count, mp::Real(bits));
  if (lambda == 0.0) {
    out[0] = 1.0;
    return out;
  }
  const mp::Real half = mp::sqrt(mp::Real(lambda, bits));  // z / 2
  const mp::Real q(lambda, bits);                           // (z/2)^2
  mp::Real eps(1.0, bits);
  mpfr_mul_2si(eps.get(), eps.get(), -static_cast<long>(bits) - 8, MPFR_RNDN);
  mp::Real lead(1.0, bits);
  mp::Real term(bits), sum(bits), cutoff(bits);
  const double peak = std::sqrt(lambda);
  for (std::size_t j = 0; j < count; ++j) {
    if (j > 0) {
      lead *= half;
      lead /= static_cast<unsigned long>(j);
    }
    term = 1.0;
    sum = 1.0;
    for (unsigned long m = 0;; ++m) {
      term *= q;
      term /= (m + 1) * (m + 1 + j);
      sum += term;
      cutoff = sum * eps;
      if (static_cast<double>(m) > peak && term < cutoff) break;
    }
    out[j] = lead * sum;
  }
  return out;
}

namespace {

constexpr double kSeam = 8.0;

// Coefficients u_k and v_k of the large-argument Airy expansions.
struct AsymptoticCoefficients {
  std::vector<double> u, v;
  explicit AsymptoticCoefficients(int n) : u(static_cast<std::size_t>(n)), v(static_cast<std::size_t>(n)) {
    u[0] = 1.0;
    v[0] = 1.0;
    for (int k = 1; k < n; ++k) {
      const double kk = k;
      u[k] = u[k - 1] * (6 * kk - 5) * (6 * kk - 3) * (6 * kk - 1) / ((2 * kk - 1) * 216.0 * kk);
      v[k] = -(6 * kk + 1) / (6 * kk - 1) * u[k];
    }
  }
};

const AsymptoticCoefficients& coefficients() {
  static const AsymptoticCoefficients c(60);
  return c;
}

// Sums sign_k * c_k / zeta^k over k in {first, first + 2, ...} (or every k
// when stride == 1), alternating when `alternate`, stopping at the smallest
// term.
double asymptotic_sum(const std::vector<double>& c, double zeta, int first, int stride, bool alternate) {
  double sum = 0.0;
  double previous = INFINITY;
  int sign = 1;
  for (int k = first; k < static_cast<int>(c.size()); k += stride) {
    const double term = c[static_cast<std::size_t>(k)] / std::pow(zeta, k);
    if (std::abs(term) > previous) break;
    sum += sign * term;
    previous = std::abs(term);
    if (previous < 1e-17 * std::abs(sum)) break;
    if (alternate) sign = -sign;
  }
  return sum;
}

}  // namespace

AiryValue airy_maclaurin(double x) {
  constexpr mpfr_prec_t bits = 256;
  AiryValue out;
  out.x = x;

  mp::Real c1(bits), c2(bits), tmp(bits);
  // c1 = Ai(0) = 3^(-2/3) / Gamma(2/3), c2 = -Ai'(0) = 3^(-1/3) / Gamma(1/3)
  mp::Real third(1.0, bits);
  third /= 3ul;
  mp::Real two_thirds = third + third;
  mpfr_gamma(tmp.get(), two_thirds.get(), MPFR_RNDN);
  mp::Real three(3.0, bits);
  mpfr_pow(c1.get(), three.get(), (-two_thirds).get(), MPFR_RNDN);
  c1 /= tmp;
  mpfr_gamma(tmp.get(), third.get(), MPFR_RNDN);
  mpfr_pow(c2.get(), three.get(), (-third).get(), MPFR_RNDN);
  c2 /= tmp;

  const mp::Real X(x, bits);
  const mp::Real x3 = X * X * X;
  mp::Real a(1.0, bits), f(1.0, bits);        // f(x) = sum a_k
  mp::Real da = X * X;                        // a'_1 = x^2 / 2
  da /= 2ul;
  mp::Real df(0.0, bits);
  mp::Real b = X, g = X;                      // g(x) = sum b_k
  mp::Real db(1.0, bits), dg(1.0, bits);

  mp::Real tol(1e-45, bits);
  mp::Real scale(bits);
  for (unsigned long k = 1; k < 400; ++k) {
    a *= x3;
    a /= (3 * k - 1) * (3 * k);
    f += a;
    if (k > 1) {
      da *= x3;
      da /= (3 * k - 1) * (3 * k - 3);
    }
    df += da;
    b *= x3;
    b /= (3 * k) * (3 * k + 1);
    g += b;
    db *= x3;
    db /= (3 * k) * (3 * k - 2);
    dg += db;

    scale = mp::abs(f) + mp::abs(g) + mp::abs(df) + mp::abs(dg);
    scale *= tol;
    if (k > 2 && mp::abs(a) < scale && mp::abs(b) < scale && mp::abs(da) < scale && mp::abs(db) < scale) break;
  }
  out.ai = (c1 * f - c2 * g).to_double();
  out.ai_prime = (c1 * df - c2 * dg).to_double();
  return out;
}

AiryValue airy_asymptotic(double x) {
  AiryValue out;
  out.x = x;
  const auto& c = coefficients();
  const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
  if (x > 0.0) {
    const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
    const double q = std::pow(x, 0.25);
    const double e = std::exp(-zeta);
    out.ai = e / (2.0 * q) * inv_sqrt_pi * asymptotic_sum(c.u, zeta, 0, 1, true);
    out.ai_prime = -q * e / 2.0 * inv_sqrt_pi * asymptotic_sum(c.v, zeta, 0, 1, true);
  } else {
    const double y = -x;
    const double zeta = 2.0 / 3.0 * y * std::sqrt(y);
    const double q = std::pow(y, 0.25);
    const double phase = zeta - std::numbers::pi / 4.0;
    const double cs = std::cos(phase), sn = std::sin(phase);
    const double ue = asymptotic_sum(c.u, zeta, 0, 2, true);
    const double uo = asymptotic_sum(c.u, zeta, 1, 2, true);
    const double ve = asymptotic_sum(c.v, zeta, 0, 2, true);
    const double vo = asymptotic_sum(c.v, zeta, 1, 2, true);
    out.ai = inv_sqrt_pi / q * (cs * ue + sn * uo);
    out.ai_prime = inv_sqrt_pi * q * (sn * ve - cs * vo);
  }
  return out;
}

AiryValue airy(double x) {
  if (!(x >= -15.0 && x <= 20.0)) throw DomainError("airy: argument outside [-15, 20]");
  if (std::abs(x) <= kSeam) return airy_maclaurin(x);
  return airy_asymptotic(x);
}

}  // namespace ulam
