#include "filterlab/exact_core.hpp"

#include <cstdlib>
#include <stdexcept>

namespace filterlab {

std::string to_string(Sign s) {
  switch (s) {
    case Sign::Negative:
      return "negative";
    case Sign::Zero:
      return "zero";
    case Sign::Positive:
      return "positive";
  }
  return "?";
}

std::ostream& operator<<(std::ostream& os, Sign s) { return os << to_string(s); }

IntMatrix::IntMatrix(int n) : n_(n), entries_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
  if (n < 0) throw std::invalid_argument("IntMatrix: negative size");
}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows)
    : IntMatrix(static_cast<int>(rows.size())) {
  int r = 0;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != n_) throw std::invalid_argument("IntMatrix: matrix must be square");
    int c = 0;
    for (long v : row) at(r, c++) = v;
    ++r;
  }
}

void IntMatrix::swap_rows(int a, int b) {
  if (a == b) return;
  for (int c = 0; c < n_; ++c) std::swap(at(a, c), at(b, c));
}

mpz_class IntMatrix::max_abs_entry() const {
  mpz_class best = 0;
  for (const auto& e : entries_) {
    if (mpz_cmpabs(e.get_mpz_t(), best.get_mpz_t()) > 0) best = abs(e);
  }
  return best;
}

namespace {

using i128 = __int128;

bool fits_small(const IntMatrix& m, int limit_bits) {
  for (int r = 0; r < m.size(); ++r)
    for (int c = 0; c < m.size(); ++c)
      if (mpz_sizeinbase(m.at(r, c).get_mpz_t(), 2) > static_cast<std::size_t>(limit_bits)) return false;
  return true;
}

i128 small(const IntMatrix& m, int r, int c) { return static_cast<i128>(m.at(r, c).get_si()); }

mpz_class to_mpz(i128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  mpz_class hi(static_cast<unsigned long>(u >> 64));
  mpz_class lo(static_cast<unsigned long>(u & 0xFFFFFFFFFFFFFFFFull));
  mpz_class r = (hi << 64) + lo;
  return neg ? mpz_class(-r) : r;
}

// Expansion for n <= 3; callers guarantee entries below 2^40 (|det| < 6 * 2^120).
i128 small_det(const IntMatrix& m) {
  switch (m.size()) {
    case 0:
      return 1;
    case 1:
      return small(m, 0, 0);
    case 2:
      return small(m, 0, 0) * small(m, 1, 1) - small(m, 0, 1) * small(m, 1, 0);
    default:
      return small(m, 0, 0) * (small(m, 1, 1) * small(m, 2, 2) - small(m, 1, 2) * small(m, 2, 1)) -
             small(m, 0, 1) * (small(m, 1, 0) * small(m, 2, 2) - small(m, 1, 2) * small(m, 2, 0)) +
             small(m, 0, 2) * (small(m, 1, 0) * small(m, 2, 1) - small(m, 1, 1) * small(m, 2, 0));
  }
}

bool small_path(const IntMatrix& m) {
  if (m.size() <= 2) return fits_small(m, 60);
  if (m.size() == 3) return fits_small(m, 40);
  return false;
}

mpz_class bareiss(IntMatrix a) {
  const int n = a.size();
  if (n == 0) return 1;
  int sign = 1;
  mpz_class prev = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a.at(k, k) == 0) {
      int pivot = -1;
      for (int r = k + 1; r < n; ++r) {
        if (a.at(r, k) != 0) {
          pivot = r;
          break;
        }
      }
      if (pivot < 0) return 0;
      a.swap_rows(k, pivot);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        mpz_class& x = a.at(i, j);
        x = a.at(k, k) * x - a.at(i, k) * a.at(k, j);
        mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = a.at(k, k);
  }
  mpz_class det = a.at(n - 1, n - 1);
  return sign < 0 ? mpz_class(-det) : det;
}

}  // namespace

mpz_class exact_det_value(const IntMatrix& m) {
  if (small_path(m)) return to_mpz(small_det(m));
  return bareiss(m);
}

Sign exact_det_sign(const IntMatrix& m) {
  if (small_path(m)) {
    const i128 d = small_det(m);
    return d < 0 ? Sign::Negative : (d > 0 ? Sign::Positive : Sign::Zero);
  }
  return sign_of(sgn(bareiss(m)));
}

IntMatrix lift_insphere(std::span<const std::vector<std::int64_t>> points, int scale_exponent) {
  if (points.empty()) throw std::invalid_argument("lift_insphere: no points");
  const int rows = static_cast<int>(points.size());
  const int delta = rows - 1;
  if (delta < 1) throw std::invalid_argument("lift_insphere: need delta + 1 >= 2 points");
  if (scale_exponent < 0 || scale_exponent > 62) throw std::invalid_argument("lift_insphere: bad scale");
  const std::int64_t limit = std::int64_t{1} << scale_exponent;
  IntMatrix m(rows);
  for (int r = 0; r < rows; ++r) {
    const auto& p = points[static_cast<std::size_t>(r)];
    if (static_cast<int>(p.size()) != delta)
      throw std::invalid_argument("lift_insphere: expected " + std::to_string(rows) + " points of dimension " +
                                  std::to_string(delta));
    mpz_class norm = 0;
    for (int c = 0; c < delta; ++c) {
      const std::int64_t v = p[static_cast<std::size_t>(c)];
      if (v > limit || v < -limit) throw std::invalid_argument("lift_insphere: coordinate out of range");
      m.at(r, c) = static_cast<long>(v);
      norm += m.at(r, c) * m.at(r, c);
    }
    m.at(r, delta) = norm;
  }
  return m;
}

}  // namespace filterlab
