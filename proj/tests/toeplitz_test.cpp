#include <doctest.h>

#include <cmath>
#include <vector>

#include <boost/math/distributions/poisson.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "ulam/combinat.hpp"
#include "ulam/errors.hpp"
#include "ulam/special_functions.hpp"
#include "ulam/toeplitz.hpp"

using namespace ulam::toeplitz;
using boost::multiprecision::cpp_bin_float_50;

namespace {

// log det of the size x size section by Gaussian elimination with partial
// pivoting in 50 digits, entries from Boost's Bessel functions.
double log_det_oracle(int size, double lambda) {
  const cpp_bin_float_50 z = 2 * sqrt(cpp_bin_float_50(lambda));
  std::vector<cpp_bin_float_50> d(static_cast<std::size_t>(size));
  for (int j = 0; j < size; ++j) d[static_cast<std::size_t>(j)] = boost::math::cyl_bessel_i(j, z);
  std::vector<std::vector<cpp_bin_float_50>> a(static_cast<std::size_t>(size),
                                               std::vector<cpp_bin_float_50>(static_cast<std::size_t>(size)));
  for (int i = 0; i < size; ++i) {
    for (int k = 0; k < size; ++k) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = d[static_cast<std::size_t>(std::abs(i - k))];
  }
  cpp_bin_float_50 log_det = 0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < a.size(); ++r) {
      if (abs(a[r][c]) > abs(a[p][c])) p = r;
    }
    std::swap(a[c], a[p]);
    log_det += log(abs(a[c][c]));
    for (std::size_t r = c + 1; r < a.size(); ++r) {
      const cpp_bin_float_50 f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < a.size(); ++k) a[r][k] -= f * a[c][k];
    }
  }
  return static_cast<double>(log_det);
}

}  // namespace

TEST_CASE("log determinants match dense elimination") {
  for (double lambda : {0.5, 4.0, 30.0}) {
    const auto f = factor_toeplitz(12, lambda);
    for (int size = 1; size <= 12; ++size) {
      INFO("lambda = " << lambda << ", size = " << size);
      const double oracle = log_det_oracle(size, lambda);
      CHECK(f.log_dets[static_cast<std::size_t>(size - 1)] == doctest::Approx(oracle).epsilon(1e-12));
      CHECK(log_toeplitz_det(size, lambda, Precision::Extended).log_value == doctest::Approx(oracle).epsilon(1e-14));
    }
  }
}

TEST_CASE("kappa squared is a ratio of consecutive determinants") {
  const double lambda = 9.0;
  for (int k = 1; k <= 10; ++k) {
    const double oracle = std::exp(log_det_oracle(k, lambda) - log_det_oracle(k + 1, lambda));
    CHECK(kappa_sq(k, lambda) == doctest::Approx(oracle).epsilon(1e-12));
  }
  CHECK_THROWS_AS(kappa_sq(0, lambda), ulam::DomainError);
}

TEST_CASE("double and extended paths agree, and extra digits change nothing") {
  // Double loses about eps * exp(4 sqrt(lambda)).
  const auto d = factor_toeplitz(40, 4.0, Precision::Double);
  const auto e = factor_toeplitz(40, 4.0, Precision::Extended);
  CHECK_FALSE(d.extended);
  CHECK(e.extended);
  for (int k = 0; k < 40; ++k) CHECK(d.log_dets[static_cast<std::size_t>(k)] == doctest::Approx(e.log_dets[static_cast<std::size_t>(k)]).epsilon(1e-12));

  const auto base = factor_toeplitz(80, 900.0, Precision::Extended);
  const auto more = factor_toeplitz(80, 900.0, Precision::Extended, 30);
  CHECK(more.digits > base.digits);
  for (int k = 0; k < 80; ++k) {
    const auto i = static_cast<std::size_t>(k);
    CHECK(std::abs(base.log_dets_minus_lambda[i] - more.log_dets_minus_lambda[i]) < 1e-12 * std::max(1.0, std::abs(more.log_dets_minus_lambda[i])));
  }
}

TEST_CASE("automatic precision switches to extended for large lambda") {
  CHECK_FALSE(factor_toeplitz(5, 4.0).extended);
  CHECK(factor_toeplitz(5, 400.0).extended);
  CHECK(log_toeplitz_det(5, 400.0).digits > 16);
}

TEST_CASE("Szego limit: D_n -> e^lambda") {
  const auto f = factor_toeplitz(80, 16.0);
  CHECK(std::abs(f.log_dets_minus_lambda.back()) < 1e-12);
  const auto points = phi_range(60, 16.0);
  for (std::size_t i = 1; i < points.size(); ++i) CHECK(points[i].phi >= points[i - 1].phi);
  CHECK(points.back().phi == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("phi decreases in lambda") {
  double previous = 1.0;
  for (double lambda : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    const double p = phi(4, lambda).phi;
    CHECK(p < previous);
    previous = p;
  }
}

TEST_CASE("three routes to phi agree") {
  for (double lambda : {0.25, 1.0, 4.0}) {
    const auto det = phi_range(10, lambda);
    const auto series = phi_via_series_range(10, lambda, 45);
    for (int n = 1; n <= 10; ++n) {
      const auto i = static_cast<std::size_t>(n - 1);
      INFO("lambda = " << lambda << ", n = " << n);
      CHECK(std::abs(det[i].phi - series[i].value) <= series[i].tail_bound + 1e-9);
      CHECK(std::abs(det[i].phi - phi_via_kappa(n, lambda, 40).value) <= 1e-9);
    }
  }
  // The 1 x 1 section is the single entry I_0(2 sqrt(lambda)).
  CHECK(phi(1, 2.0).phi == doctest::Approx(std::exp(-2.0) * boost::math::cyl_bessel_i(0, 2.0 * std::sqrt(2.0))).epsilon(1e-14));
}

TEST_CASE("series at lambda = 0 is one") { CHECK(phi_via_series(3, 0.0, 10).value == 1.0); }

TEST_CASE("kappa product argument checks") {
  CHECK_THROWS_AS(phi_via_kappa(0, 1.0, 20), ulam::DomainError);
  CHECK_THROWS_AS(phi_via_kappa(5, 1.0, 5), ulam::DomainError);
  CHECK_THROWS_AS(phi_via_kappa(5, 100.0, 30), ulam::TruncationError);
  CHECK_THROWS_AS(factor_toeplitz(4, 0.0), ulam::DomainError);
  CHECK_THROWS_AS(phi(0, 1.0), ulam::DomainError);
}

TEST_CASE("Poisson upper tail matches boost") {
  for (double lambda : {0.3, 5.0, 40.0}) {
    for (int n : {0, 3, 20, 60}) {
      const double ref = cdf(complement(boost::math::poisson_distribution<double>(lambda), n));
      INFO("lambda = " << lambda << ", n = " << n);
      CHECK(poisson_upper_tail(lambda, n) == doctest::Approx(ref).epsilon(1e-12));
    }
  }
}

TEST_CASE("Hankel sums: determinant route matches direct summation") {
  for (int r = 1; r <= 4; ++r) {
    for (double lambda : {0.5, 1.0, 2.0}) {
      const auto h = hankel_h(r, lambda);
      const auto c = hankel_h_coulomb(r, lambda);
      INFO("r = " << r << ", lambda = " << lambda);
      CHECK(h.value == doctest::Approx(c.value).epsilon(1e-12));
      CHECK(h.truncation_bound < 1e-10 * h.value);
    }
  }
  // r = 1: sum_{h >= 1} lambda^h / (h!)^2.
  CHECK(hankel_h(1, 2.0).value == doctest::Approx(boost::math::cyl_bessel_i(0, 2.0 * std::sqrt(2.0)) - 1.0).epsilon(1e-13));
  CHECK_THROWS_AS(hankel_h(9, 1.0), ulam::DomainError);
}

TEST_CASE("Hankel and Toeplitz determinants are linked") {
  for (int r = 1; r <= 6; ++r) {
    for (double lambda : {0.5, 1.0, 2.0}) CHECK(verify_hankel_toeplitz(r, lambda) <= 1e-9);
  }
}

TEST_CASE("truncated Hankel sums") {
  CHECK(hankel_h_truncated(3, 1.0, 0) == 0.0);
  for (int n = 1; n <= 4; ++n) {
    CHECK(hankel_h_truncated(2, 1.5, n) == doctest::Approx(hankel_h_truncated_coulomb(2, 1.5, n)).epsilon(1e-12));
    CHECK(hankel_h_truncated(2, 1.5, n) <= hankel_h_truncated(2, 1.5, n + 1));
  }
  CHECK(hankel_h_truncated(2, 1.5, 40) == doctest::Approx(hankel_h(2, 1.5).value).epsilon(1e-12));
  CHECK_THROWS_AS(hankel_h_truncated(2, 1.5, -1), ulam::DomainError);
}
