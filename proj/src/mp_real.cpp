#include "ulam/mp_real.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace ulam::mp {

mpfr_prec_t bits_for_digits(double digits) {
  return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623)) + 8;
}

Real::Real(mpfr_prec_t bits) {
  mpfr_init2(value_, bits);
  mpfr_set_zero(value_, 1);
}

Real::Real(double value, mpfr_prec_t bits) {
  mpfr_init2(value_, bits);
  mpfr_set_d(value_, value, MPFR_RNDN);
}

Real::Real(long double value, mpfr_prec_t bits) {
  mpfr_init2(value_, bits);
  mpfr_set_ld(value_, value, MPFR_RNDN);
}

Real::Real(long value, mpfr_prec_t bits) {
  mpfr_init2(value_, bits);
  mpfr_set_si(value_, value, MPFR_RNDN);
}

Real::Real(const Real& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    if (precision() < other.precision()) mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

Real& Real::operator=(double value) {
  mpfr_set_d(value_, value, MPFR_RNDN);
  return *this;
}

Real::~Real() { mpfr_clear(value_); }

std::string Real::to_string(int digits) const {
  std::vector<char> buf(static_cast<std::size_t>(digits) + 32);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, value_);
  return std::string(buf.data());
}

Real& Real::operator+=(const Real& rhs) {
  mpfr_add(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}
Real& Real::operator-=(const Real& rhs) {
  mpfr_sub(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}
Real& Real::operator*=(const Real& rhs) {
  mpfr_mul(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}
Real& Real::operator/=(const Real& rhs) {
  mpfr_div(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}
Real& Real::operator*=(unsigned long rhs) {
  mpfr_mul_ui(value_, value_, rhs, MPFR_RNDN);
  return *this;
}
Real& Real::operator/=(unsigned long rhs) {
  mpfr_div_ui(value_, value_, rhs, MPFR_RNDN);
  return *this;
}
Real& Real::operator*=(double rhs) {
  mpfr_mul_d(value_, value_, rhs, MPFR_RNDN);
  return *this;
}

Real Real::operator-() const {
  Real r(precision());
  mpfr_neg(r.value_, value_, MPFR_RNDN);
  return r;
}

namespace {
mpfr_prec_t wider(const Real& a, const Real& b) { return std::max(a.precision(), b.precision()); }
}  // namespace

Real operator+(const Real& a, const Real& b) {
  Real r(wider(a, b));
  mpfr_add(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}
Real operator-(const Real& a, const Real& b) {
  Real r(wider(a, b));
  mpfr_sub(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}
Real operator*(const Real& a, const Real& b) {
  Real r(wider(a, b));
  mpfr_mul(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}
Real operator/(const Real& a, const Real& b) {
  Real r(wider(a, b));
  mpfr_div(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}

Real sqrt(const Real& x) {
  Real r(x.precision());
  mpfr_sqrt(r.get(), x.get(), MPFR_RNDN);
  return r;
}
Real log(const Real& x) {
  Real r(x.precision());
  mpfr_log(r.get(), x.get(), MPFR_RNDN);
  return r;
}
Real exp(const Real& x) {
  Real r(x.precision());
  mpfr_exp(r.get(), x.get(), MPFR_RNDN);
  return r;
}
Real abs(const Real& x) {
  Real r(x.precision());
  mpfr_abs(r.get(), x.get(), MPFR_RNDN);
  return r;
}
Real pow(const Real& x, unsigned long e) {
  Real r(x.precision());
  mpfr_pow_ui(r.get(), x.get(), e, MPFR_RNDN);
  return r;
}
Real pi(mpfr_prec_t bits) {
  Real r(bits);
  mpfr_const_pi(r.get(), MPFR_RNDN);
  return r;
}

}  // namespace ulam::mp
