#include "filterlab/dyadic.hpp"

#include <cmath>
#include <stdexcept>

namespace filterlab {

Dyadic::Dyadic(long value) : mantissa_(value) { normalize(); }

Dyadic::Dyadic(mpz_class mantissa, long exponent)
    : mantissa_(std::move(mantissa)), exponent_(exponent) {
  normalize();
}

void Dyadic::normalize() {
  if (mantissa_ == 0) {
    exponent_ = 0;
    return;
  }
  const mp_bitcnt_t zeros = mpz_scan1(mantissa_.get_mpz_t(), 0);
  if (zeros > 0) {
    mpz_tdiv_q_2exp(mantissa_.get_mpz_t(), mantissa_.get_mpz_t(), zeros);
    exponent_ += static_cast<long>(zeros);
  }
}

Dyadic Dyadic::pow2(long k) { return Dyadic(mpz_class(1), k); }

Dyadic Dyadic::from_double(double value) {
  if (!std::isfinite(value)) throw std::domain_error("Dyadic::from_double: non-finite value");
  if (value == 0.0) return {};
  int e = 0;
  const double frac = std::frexp(value, &e);
  // frac * 2^53 is an integer for every finite double (subnormals included).
  const double scaled = std::ldexp(frac, 53);
  mpz_class m;
  mpz_set_d(m.get_mpz_t(), scaled);
  return Dyadic(std::move(m), static_cast<long>(e) - 53);
}

bool Dyadic::is_power_of_two() const {
  return mantissa_ == 1;
}

Dyadic Dyadic::abs() const {
  Dyadic r = *this;
  mpz_abs(r.mantissa_.get_mpz_t(), r.mantissa_.get_mpz_t());
  return r;
}

Dyadic Dyadic::scaled(long k) const {
  if (is_zero()) return *this;
  Dyadic r = *this;
  r.exponent_ += k;
  return r;
}

Dyadic Dyadic::operator-() const {
  Dyadic r = *this;
  r.mantissa_ = -r.mantissa_;
  return r;
}

double Dyadic::to_double() const {
  if (is_zero()) return 0.0;
  long e = 0;
  const double d = mpz_get_d_2exp(&e, mantissa_.get_mpz_t());
  return std::ldexp(d, static_cast<int>(e + exponent_));
}

mpz_class Dyadic::to_integer() const {
  if (!is_integer()) throw std::domain_error("Dyadic::to_integer: value has a fractional part");
  mpz_class r = mantissa_;
  if (exponent_ > 0) mpz_mul_2exp(r.get_mpz_t(), r.get_mpz_t(), static_cast<mp_bitcnt_t>(exponent_));
  return r;
}

std::string Dyadic::to_string() const {
  if (is_integer()) return to_integer().get_str();
  return mantissa_.get_str() + "*2^" + std::to_string(exponent_);
}

namespace {

// Brings both mantissas to the smaller exponent.
void align(const Dyadic& a, const Dyadic& b, mpz_class& ma, mpz_class& mb, long& e) {
  e = std::min(a.exponent(), b.exponent());
  ma = a.mantissa();
  mb = b.mantissa();
  if (a.exponent() > e) mpz_mul_2exp(ma.get_mpz_t(), ma.get_mpz_t(), a.exponent() - e);
  if (b.exponent() > e) mpz_mul_2exp(mb.get_mpz_t(), mb.get_mpz_t(), b.exponent() - e);
}

}  // namespace

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  mpz_class ma, mb;
  long e = 0;
  align(a, b, ma, mb, e);
  return Dyadic(ma + mb, e);
}

Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }

Dyadic operator*(const Dyadic& a, const Dyadic& b) {
  if (a.is_zero() || b.is_zero()) return {};
  return Dyadic(a.mantissa_ * b.mantissa_, a.exponent_ + b.exponent_);
}

bool operator==(const Dyadic& a, const Dyadic& b) {
  return a.exponent_ == b.exponent_ && a.mantissa_ == b.mantissa_;
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  if (a.sign() != b.sign()) return a.sign() <=> b.sign();
  mpz_class ma, mb;
  long e = 0;
  align(a, b, ma, mb, e);
  const int c = cmp(ma, mb);
  return c <=> 0;
}

Dyadic pow2_ceil(const Dyadic& value) {
  if (value.sign() <= 0) throw std::domain_error("pow2_ceil: argument must be positive");
  if (value.is_power_of_two()) return value;
  // Odd mantissa m > 1 satisfies 2^(bits-1) < m < 2^bits.
  const auto bits = static_cast<long>(mpz_sizeinbase(value.mantissa().get_mpz_t(), 2));
  return Dyadic::pow2(value.exponent() + bits);
}

}  // namespace filterlab
