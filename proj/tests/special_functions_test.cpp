#include <doctest.h>

#include <cmath>

#include <boost/math/special_functions/airy.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "ulam/errors.hpp"
#include "ulam/special_functions.hpp"

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("bessel_i matches boost") {
  for (double z : {0.0, 1e-3, 0.5, 1.0, 4.0, 8.0, 20.0, 60.0, 150.0}) {
    for (int j : {0, 1, 2, 5, 13, 40}) {
      const double ref = boost::math::cyl_bessel_i(j, z);
      if (ref < 1e-290) continue;
      INFO("z = " << z << ", j = " << j);
      CHECK(rel(ulam::bessel_i(j, z), ref) < 1e-13);
    }
  }
  CHECK(ulam::bessel_i(-3, 2.0) == ulam::bessel_i(3, 2.0));
  CHECK(ulam::bessel_i(0, 0.0) == 1.0);
  CHECK(ulam::bessel_i(4, 0.0) == 0.0);
  CHECK_THROWS_AS(ulam::bessel_i(0, -1.0), ulam::DomainError);
}

TEST_CASE("Miller recurrence agrees with the power series") {
  for (double lambda : {0.01, 1.0, 25.0, 400.0}) {
    const auto miller = ulam::bessel_i_sequence_mp(60, lambda, 256);
    const auto series = ulam::bessel_i_sequence_mp_series(60, lambda, 256);
    REQUIRE(miller.size() == 61);
    for (std::size_t j = 0; j < miller.size(); ++j) {
      const double a = miller[j].to_double(), b = series[j].to_double();
      INFO("lambda = " << lambda << ", j = " << j);
      CHECK(rel(a, b) < 1e-15);
    }
  }
}

TEST_CASE("airy matches boost on the supported range") {
  for (double x = -15.0; x <= 20.0; x += 0.37) {
    const auto v = ulam::airy(x);
    const double ai = boost::math::airy_ai(x), aip = boost::math::airy_ai_prime(x);
    INFO("x = " << x);
    // Absolute error near the zeros of the oscillatory side.
    CHECK(std::abs(v.ai - ai) <= 1e-13 * std::max(1.0, std::abs(ai)));
    CHECK(std::abs(v.ai_prime - aip) <= 1e-12 * std::max(1.0, std::abs(aip)));
    if (x > 0.0) {
      CHECK(rel(v.ai, ai) < 1e-12);
    }
  }
  CHECK_THROWS_AS(ulam::airy(-15.5), ulam::DomainError);
  CHECK_THROWS_AS(ulam::airy(20.5), ulam::DomainError);
}

TEST_CASE("airy branches agree at the seam") {
  for (double x : {-8.0, 8.0}) {
    const auto a = ulam::airy_maclaurin(x), b = ulam::airy_asymptotic(x);
    CHECK(std::abs(a.ai - b.ai) < 1e-12);
    CHECK(std::abs(a.ai_prime - b.ai_prime) < 1e-11);
  }
}
