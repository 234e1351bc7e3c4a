#include "ulam/toeplitz.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "ulam/combinat.hpp"
#include "ulam/errors.hpp"
#include "ulam/mp_real.hpp"
#include "ulam/special_functions.hpp"

namespace ulam::toeplitz {

namespace {

constexpr double kDoubleConditionLimit = 1e6;

void check_lambda(double lambda, const char* where) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError(std::string(where) + ": lambda must be finite and > 0");
  }
}

ToeplitzFactorization factor_double(int n, double lambda) {
  const double z = 2.0 * std::sqrt(lambda);
  std::vector<double> d(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) d[static_cast<std::size_t>(j)] = bessel_i(j, z);

  ToeplitzFactorization out;
  out.lambda = lambda;
  out.extended = false;
  out.digits = 16;
  out.log_pivots.resize(static_cast<std::size_t>(n));
  out.log_dets.resize(static_cast<std::size_t>(n));
  out.log_dets_minus_lambda.resize(static_cast<std::size_t>(n));

  // Row-oriented Cholesky; L is stored densely in row-major order.
  const auto un = static_cast<std::size_t>(n);
  std::vector<double> L(un * un, 0.0);
  double min_pivot = INFINITY;
  double log_det = 0.0;
  for (std::size_t i = 0; i < un; ++i) {
    double* Li = &L[i * un];
    for (std::size_t j = 0; j < i; ++j) {
      const double* Lj = &L[j * un];
      double s = d[i - j];
      for (std::size_t k = 0; k < j; ++k) s -= Li[k] * Lj[k];
      Li[j] = s / Lj[j];
    }
    double pivot = d[0];
    for (std::size_t k = 0; k < i; ++k) pivot -= Li[k] * Li[k];
    if (!(pivot > 0.0)) {
      const double estimate = std::isfinite(min_pivot) ? d[0] / min_pivot : INFINITY;
      throw ConditioningError("log_toeplitz_det: Cholesky breakdown at row " + std::to_string(i) + " for lambda = " +
                                  std::to_string(lambda),
                              estimate);
    }
    min_pivot = std::min(min_pivot, pivot);
    Li[i] = std::sqrt(pivot);
    out.log_pivots[i] = std::log(pivot);
    log_det += out.log_pivots[i];
    out.log_dets[i] = log_det;
    out.log_dets_minus_lambda[i] = log_det - lambda;
  }
  out.condition_estimate = d[0] / min_pivot;
  return out;
}

ToeplitzFactorization factor_extended(int n, double lambda, int extra_digits) {
  const double z = 2.0 * std::sqrt(lambda);
  const int digits = 30 + static_cast<int>(std::ceil(2.0 * z / std::numbers::ln10)) + std::max(0, extra_digits);
  const mpfr_prec_t bits = mp::bits_for_digits(digits);
  const auto c = bessel_i_sequence_mp(n - 1, lambda, bits);

  ToeplitzFactorization out;
  out.lambda = lambda;
  out.extended = true;
  out.digits = digits;
  out.log_pivots.resize(static_cast<std::size_t>(n));
  out.log_dets.resize(static_cast<std::size_t>(n));
  out.log_dets_minus_lambda.resize(static_cast<std::size_t>(n));

  // Levinson-Durbin: E_k is the prediction error of order k, which equals
  // the Cholesky pivot D_k / D_{k-1}.
  const mp::Real lam(lambda, bits);
  mp::Real E = c[0];
  mp::Real min_E = E;
  mp::Real log_det = mp::log(E);
  out.log_pivots[0] = log_det.to_double();
  out.log_dets[0] = log_det.to_double();
  out.log_dets_minus_lambda[0] = (log_det - lam).to_double();

  std::vector<mp::Real> a(static_cast<std::size_t>(n), mp::Real(bits));
  mp::Real acc(bits), refl(bits), t(bits), u(bits), factor(bits), log_pivot(bits);
  for (int k = 1; k < n; ++k) {
    acc = c[static_cast<std::size_t>(k)];
    for (int i = 1; i < k; ++i) {
      mpfr_mul(t.get(), a[static_cast<std::size_t>(i)].get(), c[static_cast<std::size_t>(k - i)].get(), MPFR_RNDN);
      mpfr_sub(acc.get(), acc.get(), t.get(), MPFR_RNDN);
    }
    mpfr_div(refl.get(), acc.get(), E.get(), MPFR_RNDN);
    for (int i = 1, j = k - 1; i <= j; ++i, --j) {
      auto& ai = a[static_cast<std::size_t>(i)];
      auto& aj = a[static_cast<std::size_t>(j)];
      if (i == j) {
        mpfr_mul(t.get(), refl.get(), ai.get(), MPFR_RNDN);
        mpfr_sub(ai.get(), ai.get(), t.get(), MPFR_RNDN);
      } else {
        mpfr_mul(t.get(), refl.get(), aj.get(), MPFR_RNDN);
        mpfr_mul(u.get(), refl.get(), ai.get(), MPFR_RNDN);
        mpfr_sub(ai.get(), ai.get(), t.get(), MPFR_RNDN);
        mpfr_sub(aj.get(), aj.get(), u.get(), MPFR_RNDN);
      }
    }
    a[static_cast<std::size_t>(k)] = refl;

    mpfr_sqr(factor.get(), refl.get(), MPFR_RNDN);
    mpfr_ui_sub(factor.get(), 1, factor.get(), MPFR_RNDN);
    if (factor.sign() <= 0) {
      throw ConditioningError("log_toeplitz_det: Levinson recursion lost positivity at order " + std::to_string(k),
                              INFINITY);
    }
    E *= factor;
    if (E < min_E) min_E = E;
    mpfr_log(log_pivot.get(), E.get(), MPFR_RNDN);
    log_det += log_pivot;
    const auto uk = static_cast<std::size_t>(k);
    out.log_pivots[uk] = log_pivot.to_double();
    out.log_dets[uk] = log_det.to_double();
    out.log_dets_minus_lambda[uk] = (log_det - lam).to_double();
  }
  out.condition_estimate = (c[0] / min_E).to_double();
  return out;
}

}  // namespace

ToeplitzFactorization factor_toeplitz(int max_size, double lambda, Precision precision, int extra_digits) {
  if (max_size < 1) throw DomainError("factor_toeplitz: size must be >= 1");
  check_lambda(lambda, "factor_toeplitz");
  if (precision == Precision::Automatic) {
    // exp(4 sqrt(lambda)) = max/min of the symbol bounds the condition number of every section.
    precision = std::exp(4.0 * std::sqrt(lambda)) <= kDoubleConditionLimit ? Precision::Double : Precision::Extended;
  }
  return precision == Precision::Double ? factor_double(max_size, lambda)
                                        : factor_extended(max_size, lambda, extra_digits);
}

LogDetResult log_toeplitz_det(int size, double lambda, Precision precision) {
  const auto f = factor_toeplitz(size, lambda, precision);
  LogDetResult r;
  r.dimension = size;
  r.lambda = lambda;
  r.log_value = f.log_dets.back();
  r.condition_estimate = f.condition_estimate;
  r.extended = f.extended;
  r.digits = f.digits;
  return r;
}

namespace {

PoissonizedPoint point_from(const ToeplitzFactorization& f, int n) {
  PoissonizedPoint p;
  p.n = n;
  p.lambda = f.lambda;
  const auto idx = static_cast<std::size_t>(n - 1);
  double log_phi = f.log_dets_minus_lambda[idx];
  if (log_phi > 0.0) {
    p.clamped = true;
    p.clamp_excess = std::expm1(log_phi);
    log_phi = 0.0;
  }
  p.log_phi = log_phi;
  p.phi = std::exp(log_phi);
  p.determinant.dimension = n;
  p.determinant.lambda = f.lambda;
  p.determinant.log_value = f.log_dets[idx];
  p.determinant.condition_estimate = f.condition_estimate;
  p.determinant.extended = f.extended;
  p.determinant.digits = f.digits;
  return p;
}

}  // namespace

PoissonizedPoint phi(int n, double lambda, Precision precision) {
  if (n < 1) throw DomainError("phi: n must be >= 1");
  return point_from(factor_toeplitz(n, lambda, precision), n);
}

std::vector<PoissonizedPoint> phi_range(int max_n, double lambda, Precision precision) {
  if (max_n < 1) throw DomainError("phi_range: n must be >= 1");
  const auto f = factor_toeplitz(max_n, lambda, precision);
  std::vector<PoissonizedPoint> out;
  out.reserve(static_cast<std::size_t>(max_n));
  for (int n = 1; n <= max_n; ++n) out.push_back(point_from(f, n));
  return out;
}

double kappa_sq(int k, double lambda, Precision precision) {
  if (k < 1) throw DomainError("kappa_sq: k must be >= 1");
  const auto f = factor_toeplitz(k + 1, lambda, precision);
  return std::exp(-f.log_pivots[static_cast<std::size_t>(k)]);
}

KappaProductResult phi_via_kappa(int n, double lambda, int k_max) {
  if (n < 1) throw DomainError("phi_via_kappa: n must be >= 1");
  if (k_max <= n) throw DomainError("phi_via_kappa: k_max must exceed n");
  check_lambda(lambda, "phi_via_kappa");
  constexpr double C = 0.25, c = 0.25;
  const double estimate = C * std::exp(-c * (k_max + 1)) / (1.0 - std::exp(-c));
  if (2.0 * std::sqrt(lambda) / k_max > 0.5) {
    throw TruncationError("phi_via_kappa: k_max too small, need 2 sqrt(lambda) / k_max <= 1/2", estimate);
  }
  // The pivots near 1 lose digits to cancellation in double precision.
  const auto f = factor_toeplitz(k_max + 1, lambda, Precision::Extended);
  double log_value = 0.0;
  for (int k = n; k <= k_max; ++k) log_value -= f.log_pivots[static_cast<std::size_t>(k)];
  KappaProductResult r;
  r.log_value = log_value;
  r.value = std::exp(log_value);
  r.truncation_estimate = estimate;
  r.k_max = k_max;
  return r;
}

double poisson_upper_tail(double lambda, int n_max) {
  if (!(lambda >= 0.0)) throw DomainError("poisson_upper_tail: lambda must be >= 0");
  if (n_max < 0) return 1.0;
  if (lambda == 0.0) return 0.0;
  double log_term = -lambda + (n_max + 1) * std::log(lambda) - std::lgamma(n_max + 2.0);
  double term = std::exp(log_term);
  double sum = 0.0;
  for (long N = n_max + 1;; ++N) {
    sum += term;
    const double ratio = lambda / static_cast<double>(N + 1);
    term *= ratio;
    if (ratio < 0.5 && term <= 1e-17 * sum) {
      // Remaining terms shrink at least geometrically.
      sum += term * ratio / (1.0 - ratio);
      break;
    }
    if (term == 0.0) break;
  }
  return std::min(sum, 1.0);
}

std::vector<SeriesResult> phi_via_series_range(int max_bound, double lambda, int n_max) {
  if (max_bound < 1) throw DomainError("phi_via_series: n must be >= 1");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("phi_via_series: lambda must be >= 0");
  if (n_max < 0) throw DomainError("phi_via_series: N_max must be >= 0");
  using boost::multiprecision::cpp_bin_float_50;
  std::vector<double> values(static_cast<std::size_t>(max_bound), 0.0);
  for (int N = 0; N <= n_max; ++N) {
    double weight;
    if (lambda == 0.0) {
      weight = N == 0 ? 1.0 : 0.0;
    } else {
      weight = std::exp(-lambda + N * std::log(lambda) - std::lgamma(N + 1.0));
    }
    if (weight == 0.0) continue;
    const auto sums = combinat::cumulative_square_sums(N, max_bound);
    const cpp_bin_float_50 total(combinat::factorial(N));
    for (int n = 1; n <= max_bound; ++n) {
      const double q = static_cast<double>(cpp_bin_float_50(sums[static_cast<std::size_t>(n - 1)]) / total);
      values[static_cast<std::size_t>(n - 1)] += weight * q;
    }
  }
  const double tail = poisson_upper_tail(lambda, n_max);
  std::vector<SeriesResult> out(static_cast<std::size_t>(max_bound));
  for (int n = 1; n <= max_bound; ++n) {
    auto& r = out[static_cast<std::size_t>(n - 1)];
    r.value = values[static_cast<std::size_t>(n - 1)];
    r.tail_bound = tail;
    r.n_max = n_max;
  }
  return out;
}

SeriesResult phi_via_series(int n, double lambda, int n_max) {
  if (n < 1) throw DomainError("phi_via_series: n must be >= 1");
  return phi_via_series_range(n, lambda, n_max).back();
}

namespace {

constexpr mpfr_prec_t kHankelBits = 256;

void check_hankel_args(int r, double lambda, const char* where) {
  if (r < 1 || r > 8) throw DomainError(std::string(where) + ": r must lie in [1, 8]");
  check_lambda(lambda, where);
}

int hankel_cap(int r, double lambda) {
  return std::max(4 * r, static_cast<int>(std::ceil(6.0 * std::sqrt(lambda))) + 20);
}

// det of the r x r Gram matrix sum_{m=1}^{support} q_j(m) q_k(m) lambda^m/(m!)^2.
double gram_determinant(int r, double lambda, int support) {
  if (support < r) return 0.0;
  const auto ur = static_cast<std::size_t>(r);
  std::vector<mp::Real> G(ur * ur, mp::Real(0.0, kHankelBits));
  const mp::Real lam(lambda, kHankelBits);
  mp::Real w(1.0, kHankelBits), t(kHankelBits);
  std::vector<double> q(ur);
  for (int m = 1; m <= support; ++m) {
    w *= lam;
    w /= static_cast<unsigned long>(m) * static_cast<unsigned long>(m);
    q[0] = 1.0;
    for (std::size_t j = 1; j < ur; ++j) q[j] = q[j - 1] * static_cast<double>(m - static_cast<int>(j) + 1);
    for (std::size_t j = 0; j < ur; ++j) {
      for (std::size_t k = 0; k <= j; ++k) {
        t = w;
        t *= q[j] * q[k];
        G[j * ur + k] += t;
      }
    }
  }
  // Cholesky; the determinant is the product of the pivots.
  mp::Real det(1.0, kHankelBits), s(kHankelBits);
  for (std::size_t i = 0; i < ur; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      s = G[i * ur + j];
      for (std::size_t k = 0; k < j; ++k) s -= G[i * ur + k] * G[j * ur + k];
      if (i == j) {
        if (s.sign() <= 0) return 0.0;
        det *= s;
        G[i * ur + i] = mp::sqrt(s);
      } else {
        G[i * ur + j] = s / G[j * ur + j];
      }
    }
  }
  return det.to_double();
}

// sum_{m >= from} m^{2(r-1)} lambda^m / (m!)^2, with a geometric remainder.
double weighted_moment_tail(int r, double lambda, int from) {
  const double power = 2.0 * (r - 1);
  auto log_term = [&](double m) { return power * std::log(m) + m * std::log(lambda) - 2.0 * std::lgamma(m + 1.0); };
  double sum = 0.0;
  for (int m = from;; ++m) {
    const double term = std::exp(log_term(m));
    sum += term;
    const double ratio = std::exp(log_term(m + 1.0) - log_term(m));
    // The ratio is decreasing in m once it drops below one.
    if (ratio < 0.5 && m > 2.0 * std::sqrt(lambda) + r) {
      const double next = term * ratio;
      if (next <= 1e-17 * sum || next == 0.0) {
        sum += next / (1.0 - ratio);
        break;
      }
    }
  }
  return sum;
}

double coulomb_sum(int r, double lambda, int support) {
  if (support < r) return 0.0;
  const auto us = static_cast<std::size_t>(support);
  std::vector<long double> w(us + 1);
  w[0] = 1.0L;
  for (std::size_t m = 1; m <= us; ++m) {
    w[m] = w[m - 1] * static_cast<long double>(lambda) / (static_cast<long double>(m) * static_cast<long double>(m));
  }
  std::vector<int> h(static_cast<std::size_t>(r));
  long double total = 0.0L;
  std::function<void(int, int, long double)> visit = [&](int depth, int start, long double acc) {
    if (depth == r) {
      total += acc;
      return;
    }
    for (int m = start; m <= support - (r - depth - 1); ++m) {
      long double next = acc * w[static_cast<std::size_t>(m)];
      for (int i = 0; i < depth; ++i) {
        const long double diff = static_cast<long double>(m - h[static_cast<std::size_t>(i)]);
        next *= diff * diff;
      }
      h[static_cast<std::size_t>(depth)] = m;
      visit(depth + 1, m + 1, next);
    }
  };
  visit(0, 1, 1.0L);
  return static_cast<double>(total);
}

double hankel_bound(int r, double lambda, int cap) {
  const double tail = weighted_moment_tail(r, lambda, cap + 1);
  const double whole = weighted_moment_tail(r, lambda, 1);
  // Delta(h)^2 <= prod h_j^{2(r-1)}; some coordinate exceeds cap.
  return static_cast<double>(r) * tail * std::pow(whole, r - 1) / std::tgamma(r + 1.0);
}

}  // namespace

HankelResult hankel_h(int r, double lambda) {
  check_hankel_args(r, lambda, "hankel_h");
  HankelResult out;
  out.cap = hankel_cap(r, lambda);
  out.value = gram_determinant(r, lambda, out.cap);
  out.truncation_bound = hankel_bound(r, lambda, out.cap);
  if (out.truncation_bound > 1e-10 * out.value) {
    throw TruncationError("hankel_h: cap " + std::to_string(out.cap) + " leaves a non-negligible tail",
                          out.truncation_bound);
  }
  return out;
}

HankelResult hankel_h_coulomb(int r, double lambda) {
  check_hankel_args(r, lambda, "hankel_h_coulomb");
  HankelResult out;
  out.cap = hankel_cap(r, lambda);
  out.value = coulomb_sum(r, lambda, out.cap);
  out.truncation_bound = hankel_bound(r, lambda, out.cap);
  return out;
}

double verify_hankel_toeplitz(int r, double lambda) {
  const double h = hankel_h(r, lambda).value;
  const auto f = factor_toeplitz(r, lambda, Precision::Extended);
  const auto ur = static_cast<std::size_t>(r);
  const double log_prev = r == 1 ? 0.0 : f.log_dets[ur - 2];
  const double difference = std::exp(log_prev) * std::expm1(f.log_pivots[ur - 1]);
  const double rhs = std::pow(lambda, 0.5 * r * (r - 1)) * difference;
  return std::abs(h - rhs) / rhs;
}

double hankel_h_truncated(int r, double lambda, int n) {
  check_hankel_args(r, lambda, "hankel_h_truncated");
  if (n < 0) throw DomainError("hankel_h_truncated: n must be >= 0");
  return gram_determinant(r, lambda, n + r - 1);
}

double hankel_h_truncated_coulomb(int r, double lambda, int n) {
  check_hankel_args(r, lambda, "hankel_h_truncated_coulomb");
  if (n < 0) throw DomainError("hankel_h_truncated_coulomb: n must be >= 0");
  return coulomb_sum(r, lambda, n + r - 1);
}

}  // namespace ulam::toeplitz
