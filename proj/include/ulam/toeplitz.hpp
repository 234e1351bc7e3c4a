#pragma once

#include <vector>

namespace ulam::toeplitz {

// Working precision for Toeplitz factorizations.
//  - Double: Cholesky factorization in double precision.
//  - Extended: Levinson-Durbin recursion in MPFR arithmetic with enough
//    digits to absorb the loss from the dynamic range of the symbol
//    exp(2 sqrt(lambda) cos theta), roughly 2 sqrt(lambda) / ln 10 digits.
//  - Automatic: Double while exp(4 sqrt(lambda)) <= 1e6 (lambda below about
//    11.9), Extended beyond.
enum class Precision { Automatic, Double, Extended };

// log det of the n x n section (d_{j-k}), d_j = I_j(2 sqrt(lambda)); this is
// log D_{n-1}(lambda) in the usual indexing.
struct LogDetResult {
  int dimension = 0;
  double lambda = 0.0;
  double log_value = 0.0;
  // d_0 over the smallest pivot: a lower estimate of the spectral condition
  // number of the section.
  double condition_estimate = 1.0;
  bool extended = false;
  int digits = 16;
};

// All leading sections of the moment matrix from a single factorization.
// Index k refers to the (k+1) x (k+1) section.
struct ToeplitzFactorization {
  double lambda = 0.0;
  std::vector<double> log_pivots;  // log(D_k / D_{k-1}), D_{-1} = 1
  std::vector<double> log_dets;    // log D_k
  std::vector<double> log_dets_minus_lambda;
  double condition_estimate = 1.0;
  bool extended = false;
  int digits = 16;

  int size() const { return static_cast<int>(log_pivots.size()); }
};

// Factor the sections up to max_size x max_size. `extra_digits` raises the
// working precision of the Extended path (used to validate it). Throws
// DomainError for lambda <= 0 or max_size < 1, ConditioningError when the
// double-precision factorization breaks down.
ToeplitzFactorization factor_toeplitz(int max_size, double lambda, Precision precision = Precision::Automatic,
                                      int extra_digits = 0);

LogDetResult log_toeplitz_det(int size, double lambda, Precision precision = Precision::Automatic);

// phi_n(lambda) = e^{-lambda} D_{n-1}(lambda) = P(L(lambda) <= n).
struct PoissonizedPoint {
  int n = 0;
  double lambda = 0.0;
  double phi = 0.0;
  double log_phi = 0.0;
  // Set when rounding pushed the value above 1 and it was clamped; the
  // excess is kept in `clamp_excess`.
  bool clamped = false;
  double clamp_excess = 0.0;
  LogDetResult determinant;
};

PoissonizedPoint phi(int n, double lambda, Precision precision = Precision::Automatic);

// phi_n(lambda) for n = 1..max_n from one factorization (index n - 1).
std::vector<PoissonizedPoint> phi_range(int max_n, double lambda, Precision precision = Precision::Automatic);

// kappa^2_k = D_{k-1} / D_k, the squared leading coefficient of the k-th
// orthonormal polynomial. Requires k >= 1.
double kappa_sq(int k, double lambda, Precision precision = Precision::Automatic);

// exp(sum_{k=n}^{k_max} log kappa^2_k), with a truncation estimate for the
// omitted k > k_max taken from an envelope C e^{-c k}, C = c = 1/4. The
// envelope is a heuristic report, not a proven bound.
struct KappaProductResult {
  double value = 0.0;
  double log_value = 0.0;
  double truncation_estimate = 0.0;
  int k_max = 0;
};

// Throws DomainError when n < 1 or k_max <= n, TruncationError when
// 2 sqrt(lambda) / k_max > 1/2.
KappaProductResult phi_via_kappa(int n, double lambda, int k_max);

// Partial Poisson sum sum_{N <= N_max} e^{-lambda} lambda^N / N! q_{n,N} with
// exact q from the hook formula; `tail_bound` = P(Poisson(lambda) > N_max)
// bounds the omitted mass since 0 <= q <= 1.
struct SeriesResult {
  double value = 0.0;
  double tail_bound = 0.0;
  int n_max = 0;
};

SeriesResult phi_via_series(int n, double lambda, int n_max);

// Same for every bound 1..max_bound (index n - 1), sharing the exact tables.
std::vector<SeriesResult> phi_via_series_range(int max_bound, double lambda, int n_max);

// P(Poisson(lambda) > n_max), summed directly over the tail.
double poisson_upper_tail(double lambda, int n_max);

// H_r(lambda) = (1/r!) sum_{h in Z_+^r} Delta(h)^2 prod lambda^{h_j} / (h_j!)^2.
struct HankelResult {
  double value = 0.0;
  // Rigorous bound on the omitted configurations with some h_j > cap.
  double truncation_bound = 0.0;
  int cap = 0;
};

// Determinant of the discrete moments sum_m q_j(m) q_k(m) lambda^m/(m!)^2 with
// falling-factorial q_j, over m = 1..cap, cap = max(4r, ceil(6 sqrt(lambda)) + 20).
// Requires 1 <= r <= 8 and lambda > 0. Throws TruncationError when the
// omitted tail is not negligible against the value.
HankelResult hankel_h(int r, double lambda);

// The same quantity summed directly over strictly increasing h in {1..cap}^r.
HankelResult hankel_h_coulomb(int r, double lambda);

// |H_r - lambda^{r(r-1)/2} (D_r - D_{r-1})| / (lambda^{r(r-1)/2} (D_r - D_{r-1}))
// where D_r here is the r x r section.
double verify_hankel_toeplitz(int r, double lambda);

// H_r(lambda; n): configurations restricted to h in {1..n+r-1}^r. Zero when
// that support holds fewer than r points.
double hankel_h_truncated(int r, double lambda, int n);

// Direct-sum counterpart of hankel_h_truncated.
double hankel_h_truncated_coulomb(int r, double lambda, int n);

}  // namespace ulam::toeplitz
