#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "filterlab/dyadic.hpp"
#include "filterlab/error_model.hpp"
#include "filterlab/exact_core.hpp"

namespace filterlab {

// Point whose coordinates are ticks[i] * 2^-frac_bits. On the b-bit grid
// frac_bits = b - 1 and |ticks| <= 2^(b-1), so every coordinate lies in [-1, 1]
// and is exactly representable with b mantissa bits.
struct GridPoint {
  int frac_bits = 0;
  std::vector<std::int64_t> ticks;

  int dimension() const { return static_cast<int>(ticks.size()); }
  double coord(int i) const;
};

using PointSet = std::vector<GridPoint>;

// Grid pitch 2^(1-b) of the b-bit grid over [-1, 1].
double grid_pitch(const PrecisionConfig& cfg);
// Throws std::invalid_argument if a coordinate is outside [-1, 1] or frac_bits is negative.
GridPoint make_grid_point(std::vector<std::int64_t> ticks, int frac_bits);

struct PredicateInstance {
  PredicateKind kind = PredicateKind::WhichSide;
  int delta = 0;
  // WhichSide: delta points. Insphere: delta + 1 points, the origin being
  // the implicit extra point.
  PointSet points;

  // Throws std::invalid_argument on a wrong point count or dimension.
  void validate() const;
};

// Round-to-nearest-even arithmetic with `bits` mantissa bits, 2 <= bits <= 53,
// on operands that are themselves representable with `bits` bits.
class RoundedArithmetic {
 public:
  explicit RoundedArithmetic(int bits);

  int bits() const { return bits_; }
  double add(double a, double b) const;
  double mul(double a, double b) const;
  // Rounds the exact value hi + lo (|lo| at most half an ulp of hi in double).
  double round(double hi, double lo = 0.0) const;
  bool representable(double x) const;

 private:
  int bits_;
};

// Forward evaluation of a scheme with b-bit rounding after every Add and Mul.
// Negation is exact. Slot values must be representable with b bits.
double eval_rounded(const EvalScheme& scheme, std::span<const double> slots, const PrecisionConfig& cfg);
double eval_rounded(const PredicateInstance& instance, const PrecisionConfig& cfg);

struct Certified {
  Sign sign = Sign::Zero;
  double value = 0.0;
};

struct Uncertain {
  double value = 0.0;
  Dyadic threshold;
};

using FilterVerdict = std::variant<Certified, Uncertain>;

// |value| >= threshold certifies the sign of value; comparison is exact.
FilterVerdict certify(double value, const Dyadic& threshold);
bool is_certified(const FilterVerdict& v);

// Integer matrix whose determinant has the sign of the instance's predicate:
// coordinates scaled by 2^frac_bits (the common maximum over all points).
IntMatrix exact_matrix(const PredicateInstance& instance);
Sign exact_sign(const PredicateInstance& instance);

struct CascadeResult {
  Sign sign = Sign::Zero;
  FilterVerdict verdict;
  bool exact_stage = false;
};

CascadeResult evaluate(const PredicateInstance& instance, const PrecisionConfig& cfg);
Sign whichside(const PointSet& points, const PrecisionConfig& cfg);
Sign insphere(const PointSet& points, const PrecisionConfig& cfg);

struct StageCosts {
  // Rounded-stage operations per trial (op count of the evaluated scheme).
  double rounded_ops = 0.0;
  // Fraction of trials that fell through to the exact stage.
  double exact_calls = 0.0;
};

struct FilterStats {
  std::int64_t trials = 0;
  std::int64_t uncertain = 0;
  double failure_rate = 0.0;
  // Wilson score interval at z = 3.
  double ci_low = 0.0;
  double ci_high = 0.0;
  StageCosts mean_costs;
};

class FilterStatsAccumulator {
 public:
  void add(const PredicateInstance& instance, const FilterVerdict& verdict);
  void merge(const FilterStatsAccumulator& other);
  // Throws std::invalid_argument when nothing was added.
  FilterStats result() const;

 private:
  std::int64_t trials_ = 0;
  std::int64_t uncertain_ = 0;
  std::int64_t rounded_ops_ = 0;
};

FilterStats filter_stats(std::span<const PredicateInstance> instances, const PrecisionConfig& cfg);

// Wilson score interval for hits / n at the given z.
std::pair<double, double> wilson_interval(std::int64_t hits, std::int64_t n, double z = 3.0);

}  // namespace filterlab
