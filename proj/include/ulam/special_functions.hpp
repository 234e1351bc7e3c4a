#pragma once

#include <vector>

#include "ulam/mp_real.hpp"

namespace ulam {

// Modified Bessel function I_j(z) for integer order, z >= 0, from the power
// series sum_m (z/2)^(2m+|j|) / (m! (m+|j|)!). Summation runs in extended
// precision with compensation and stops once the next term drops below
// 1e-18 of the running sum. Supported for |j| <= 10000; relative error is
// below 1e-13 for z <= 200. Throws DomainError for z < 0.
double bessel_i(int order, double z);

// I_0(z), ..., I_max_order(z) at z = 2 sqrt(lambda), in multiprecision.
// Miller's backward recurrence normalised by e^z = I_0 + 2 sum_{j>=1} I_j;
// all quantities carry `bits` of precision.
std::vector<mp::Real> bessel_i_sequence_mp(int max_order, double lambda, mpfr_prec_t bits);

// Same values from the power series, order by order. Slower; kept as an
// independent check of the recurrence.
std::vector<mp::Real> bessel_i_sequence_mp_series(int max_order, double lambda, mpfr_prec_t bits);

struct AiryValue {
  double x = 0.0;
  double ai = 0.0;
  double ai_prime = 0.0;
};

// Airy function Ai and its derivative on [-15, 20]. Uses the Maclaurin series
// (evaluated in multiprecision, since it cancels badly away from 0) for
// |x| <= 8 and the large-argument expansions beyond. Throws DomainError
// outside the supported range.
AiryValue airy(double x);

// The two branches, exposed so the seam at |x| = 8 can be cross-checked.
AiryValue airy_maclaurin(double x);
AiryValue airy_asymptotic(double x);

}  // namespace ulam
