#pragma once

#include <compare>
#include <string>

#include <gmpxx.h>

namespace filterlab {

// Exact number of the form mantissa * 2^exponent.
//
// Kept normalized: the mantissa is odd, or the value is zero with exponent 0.
// Addition, subtraction and multiplication are exact; there is no division.
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(long value);  // NOLINT(google-explicit-constructor)
  Dyadic(mpz_class mantissa, long exponent);

  static Dyadic pow2(long k);
  // Exact conversion; throws std::domain_error for NaN or infinity.
  static Dyadic from_double(double value);

  const mpz_class& mantissa() const { return mantissa_; }
  long exponent() const { return exponent_; }

  int sign() const { return sgn(mantissa_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return exponent_ >= 0 || is_zero(); }
  bool is_power_of_two() const;

  Dyadic abs() const;
  // Multiplies by 2^k.
  Dyadic scaled(long k) const;

  // Truncated toward zero to 53 significant bits.
  double to_double() const;
  // The integer value; throws std::domain_error when not an integer.
  mpz_class to_integer() const;
  // "m*2^e" form, or a plain integer when the exponent is nonnegative.
  std::string to_string() const;

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b);
  Dyadic operator-() const;

  Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }
  Dyadic& operator*=(const Dyadic& o) { return *this = *this * o; }

  friend bool operator==(const Dyadic& a, const Dyadic& b);
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

 private:
  void normalize();

  mpz_class mantissa_{0};
  long exponent_ = 0;
};

// Smallest power of two >= value; value must be positive.
Dyadic pow2_ceil(const Dyadic& value);

inline const Dyadic& min(const Dyadic& a, const Dyadic& b) { return b < a ? b : a; }
inline const Dyadic& max(const Dyadic& a, const Dyadic& b) { return a < b ? b : a; }

}  // namespace filterlab
