#pragma once

#include <mpfr.h>

#include <string>

namespace ulam::mp {

// Converts a decimal digit count to an MPFR precision in bits.
mpfr_prec_t bits_for_digits(double digits);

// RAII wrapper around an mpfr_t. Every value carries its own precision, so
// nothing depends on process-wide defaults and values are safe to use from
// several threads. Compound operators keep the precision of the left operand;
// binary operators produce the larger of the two precisions.
class Real {
 public:
  explicit Real(mpfr_prec_t bits = 128);
  Real(double value, mpfr_prec_t bits);
  Real(long double value, mpfr_prec_t bits);
  Real(long value, mpfr_prec_t bits);
  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  Real& operator=(double value);
  ~Real();

  mpfr_prec_t precision() const { return mpfr_get_prec(value_); }
  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }

  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  long double to_long_double() const { return mpfr_get_ld(value_, MPFR_RNDN); }
  std::string to_string(int digits = 30) const;

  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  int sign() const { return mpfr_sgn(value_); }

  Real& operator+=(const Real& rhs);
  Real& operator-=(const Real& rhs);
  Real& operator*=(const Real& rhs);
  Real& operator/=(const Real& rhs);
  Real& operator*=(unsigned long rhs);
  Real& operator/=(unsigned long rhs);
  Real& operator*=(double rhs);

  Real operator-() const;

  friend Real operator+(const Real& a, const Real& b);
  friend Real operator-(const Real& a, const Real& b);
  friend Real operator*(const Real& a, const Real& b);
  friend Real operator/(const Real& a, const Real& b);

  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.value_, b.value_) != 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.value_, b.value_) != 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.value_, b.value_) != 0; }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.value_, b.value_) != 0; }

 private:
  mpfr_t value_;
};

Real sqrt(const Real& x);
Real log(const Real& x);
Real exp(const Real& x);
Real abs(const Real& x);
Real pow(const Real& x, unsigned long e);
Real pi(mpfr_prec_t bits);

}  // namespace ulam::mp
