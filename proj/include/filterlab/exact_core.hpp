#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace filterlab {

enum class Sign : int { Negative = -1, Zero = 0, Positive = 1 };

inline Sign sign_of(int s) { return s < 0 ? Sign::Negative : (s > 0 ? Sign::Positive : Sign::Zero); }
inline Sign sign_of(double v) { return v < 0 ? Sign::Negative : (v > 0 ? Sign::Positive : Sign::Zero); }
inline Sign operator-(Sign s) { return static_cast<Sign>(-static_cast<int>(s)); }
std::string to_string(Sign s);
std::ostream& operator<<(std::ostream& os, Sign s);

// Square matrix of arbitrary-precision integers, row-major.
class IntMatrix {
 public:
  IntMatrix() = default;
  explicit IntMatrix(int n);
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

  int size() const { return n_; }
  mpz_class& at(int r, int c) { return entries_[index(r, c)]; }
  const mpz_class& at(int r, int c) const { return entries_[index(r, c)]; }

  void swap_rows(int a, int b);
  mpz_class max_abs_entry() const;

 private:
  std::size_t index(int r, int c) const { return static_cast<std::size_t>(r) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(c); }

  int n_ = 0;
  std::vector<mpz_class> entries_;
};

// Fraction-free Bareiss elimination with row pivoting. For n <= 3 with
// entries small enough, a 128-bit cofactor expansion is used instead.
mpz_class exact_det_value(const IntMatrix& m);
Sign exact_det_sign(const IntMatrix& m);

// Reduced insphere matrix for delta+1 points: row i is
// (c_i1, ..., c_idelta, sum_j c_ij^2). Coordinates are integers meaning
// c / 2^scale_exponent and must satisfy |c| <= 2^scale_exponent. Throws
// std::invalid_argument on a wrong point count or out-of-range coordinate.
IntMatrix lift_insphere(std::span<const std::vector<std::int64_t>> points, int scale_exponent);

}  // namespace filterlab
