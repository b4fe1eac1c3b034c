#include "filterlab/predicates.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace filterlab {

double GridPoint::coord(int i) const {
  return std::ldexp(static_cast<double>(ticks.at(static_cast<std::size_t>(i))), -frac_bits);
}

double grid_pitch(const PrecisionConfig& cfg) { return std::ldexp(1.0, 1 - cfg.bits); }

GridPoint make_grid_point(std::vector<std::int64_t> ticks, int frac_bits) {
  if (frac_bits < 0 || frac_bits > 62) throw std::invalid_argument("grid point: frac_bits must be in 0..62");
  const std::int64_t limit = std::int64_t{1} << frac_bits;
  for (std::int64_t t : ticks) {
    if (t > limit || t < -limit) throw std::invalid_argument("grid point: coordinate outside [-1, 1]");
  }
  return GridPoint{frac_bits, std::move(ticks)};
}

void PredicateInstance::validate() const {
  if (delta < 1) throw std::invalid_argument("predicate instance: delta must be >= 1");
  const std::size_t want = kind == PredicateKind::WhichSide ? static_cast<std::size_t>(delta)
                                                            : static_cast<std::size_t>(delta) + 1;
  if (points.size() != want)
    throw std::invalid_argument(to_string(kind) + ": expected " + std::to_string(want) + " points, got " +
                                std::to_string(points.size()));
  for (const GridPoint& p : points) {
    if (p.dimension() != delta)
      throw std::invalid_argument(to_string(kind) + ": point of dimension " + std::to_string(p.dimension()) +
                                  " in a delta=" + std::to_string(delta) + " instance");
  }
}

// RoundedArithmetic ----------------------------------------------------------

RoundedArithmetic::RoundedArithmetic(int bits) : bits_(bits) {
  if (bits < 2 || bits > 53) throw std::invalid_argument("rounded arithmetic supports 2..53 mantissa bits");
}

double RoundedArithmetic::round(double hi, double lo) const {
  if (bits_ == 53 || hi == 0.0 || !std::isfinite(hi)) return hi;
  int e = 0;
  std::frexp(hi, &e);
  const double scaled = std::ldexp(hi, bits_ - e);
  double r = std::nearbyint(scaled);
  const double floor_s = std::floor(scaled);
  if (lo != 0.0 && scaled - floor_s == 0.5) r = lo > 0.0 ? floor_s + 1.0 : floor_s;
  return std::ldexp(r, e - bits_);
}

double RoundedArithmetic::add(double a, double b) const {
  const double s = a + b;
  if (bits_ == 53) return s;
  const double bb = s - a;
  const double err = (a - (s - bb)) + (b - bb);
  return round(s, err);
}

double RoundedArithmetic::mul(double a, double b) const {
  const double p = a * b;
  if (bits_ == 53) return p;
  return round(p, std::fma(a, b, -p));
}

bool RoundedArithmetic::representable(double x) const { return round(x) == x; }

// Evaluation -----------------------------------------------------------------

double eval_rounded(const EvalScheme& scheme, std::span<const double> slots, const PrecisionConfig& cfg) {
  scheme.validate();
  if (static_cast<int>(slots.size()) != scheme.slot_count())
    throw std::invalid_argument("eval_rounded: slot count mismatch");
  const RoundedArithmetic arith(cfg.bits);
  for (double x : slots) {
    if (!arith.representable(x))
      throw std::invalid_argument("eval_rounded: input not representable with " + std::to_string(cfg.bits) +
                                  " bits");
  }
  const auto& nodes = scheme.nodes();
  std::vector<double> value(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const SchemeNode& n = nodes[i];
    double v = 0.0;
    switch (n.kind) {
      case NodeKind::Leaf:
        v = slots[static_cast<std::size_t>(n.slot)];
        break;
      case NodeKind::Add:
        v = arith.add(value[static_cast<std::size_t>(n.lhs)], value[static_cast<std::size_t>(n.rhs)]);
        break;
      case NodeKind::Mul:
        v = arith.mul(value[static_cast<std::size_t>(n.lhs)], value[static_cast<std::size_t>(n.rhs)]);
        break;
    }
    value[i] = n.negate ? -v : v;
  }
  return value[static_cast<std::size_t>(scheme.root())];
}

namespace {

std::vector<double> slot_values(const PredicateInstance& instance) {
  std::vector<double> slots;
  slots.reserve(instance.points.size() * static_cast<std::size_t>(instance.delta));
  for (const GridPoint& p : instance.points)
    for (int c = 0; c < instance.delta; ++c) slots.push_back(p.coord(c));
  return slots;
}

int common_frac_bits(const PointSet& points) {
  int s = 0;
  for (const GridPoint& p : points) s = std::max(s, p.frac_bits);
  return s;
}

std::vector<std::vector<std::int64_t>> common_ticks(const PointSet& points, int frac_bits) {
  std::vector<std::vector<std::int64_t>> out;
  out.reserve(points.size());
  for (const GridPoint& p : points) {
    std::vector<std::int64_t> row;
    row.reserve(p.ticks.size());
    for (std::int64_t t : p.ticks) row.push_back(t * (std::int64_t{1} << (frac_bits - p.frac_bits)));
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

double eval_rounded(const PredicateInstance& instance, const PrecisionConfig& cfg) {
  instance.validate();
  const auto slots = slot_values(instance);
  return eval_rounded(canonical_scheme(instance.kind, instance.delta), slots, cfg);
}

FilterVerdict certify(double value, const Dyadic& threshold) {
  if (threshold.sign() < 0) throw std::invalid_argument("certify: threshold must be >= 0");
  if (std::isnan(value)) return Uncertain{value, threshold};
  if (std::isinf(value) || Dyadic::from_double(std::fabs(value)) >= threshold) {
    if (value != 0.0) return Certified{sign_of(value), value};
  }
  return Uncertain{value, threshold};
}

bool is_certified(const FilterVerdict& v) { return std::holds_alternative<Certified>(v); }

IntMatrix exact_matrix(const PredicateInstance& instance) {
  instance.validate();
  const int s = common_frac_bits(instance.points);
  const auto ticks = common_ticks(instance.points, s);
  if (instance.kind == PredicateKind::Insphere) return lift_insphere(ticks, s);
  IntMatrix m(instance.delta);
  for (int r = 0; r < instance.delta; ++r)
    for (int c = 0; c < instance.delta; ++c)
      m.at(r, c) = static_cast<long>(ticks[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
  return m;
}

Sign exact_sign(const PredicateInstance& instance) { return exact_det_sign(exact_matrix(instance)); }

CascadeResult evaluate(const PredicateInstance& instance, const PrecisionConfig& cfg) {
  const double value = eval_rounded(instance, cfg);
  CascadeResult out;
  out.verdict = certify(value, filter_threshold(instance.kind, instance.delta, cfg));
  if (const auto* c = std::get_if<Certified>(&out.verdict)) {
    out.sign = c->sign;
  } else {
    out.sign = exact_sign(instance);
    out.exact_stage = true;
  }
  return out;
}

Sign whichside(const PointSet& points, const PrecisionConfig& cfg) {
  PredicateInstance inst{PredicateKind::WhichSide, static_cast<int>(points.size()), points};
  return evaluate(inst, cfg).sign;
}

Sign insphere(const PointSet& points, const PrecisionConfig& cfg) {
  if (points.empty()) throw std::invalid_argument("insphere: no points");
  PredicateInstance inst{PredicateKind::Insphere, static_cast<int>(points.size()) - 1, points};
  return evaluate(inst, cfg).sign;
}

// Statistics -----------------------------------------------------------------

std::pair<double, double> wilson_interval(std::int64_t hits, std::int64_t n, double z) {
  if (n <= 0) throw std::invalid_argument("wilson_interval: n must be positive");
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(hits) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  const double lo = hits == 0 ? 0.0 : std::max(0.0, centre - half);
  const double hi = hits == n ? 1.0 : std::min(1.0, centre + half);
  return {lo, hi};
}

namespace {

std::int64_t scheme_ops(PredicateKind kind, int delta) {
  static const auto table = [] {
    std::array<std::array<std::int64_t, 9>, 2> t{};
    for (int d = 1; d <= 8; ++d) t[0][static_cast<std::size_t>(d)] = canonical_scheme(PredicateKind::WhichSide, d).operation_count();
    for (int d = 1; d <= 7; ++d) t[1][static_cast<std::size_t>(d)] = canonical_scheme(PredicateKind::Insphere, d).operation_count();
    return t;
  }();
  return table[kind == PredicateKind::WhichSide ? 0 : 1].at(static_cast<std::size_t>(delta));
}

}  // namespace

void FilterStatsAccumulator::add(const PredicateInstance& instance, const FilterVerdict& verdict) {
  ++trials_;
  if (!is_certified(verdict)) ++uncertain_;
  rounded_ops_ += scheme_ops(instance.kind, instance.delta);
}

void FilterStatsAccumulator::merge(const FilterStatsAccumulator& other) {
  trials_ += other.trials_;
  uncertain_ += other.uncertain_;
  rounded_ops_ += other.rounded_ops_;
}

FilterStats FilterStatsAccumulator::result() const {
  if (trials_ == 0) throw std::invalid_argument("filter_stats: empty instance stream");
  FilterStats s;
  s.trials = trials_;
  s.uncertain = uncertain_;
  s.failure_rate = static_cast<double>(uncertain_) / static_cast<double>(trials_);
  std::tie(s.ci_low, s.ci_high) = wilson_interval(uncertain_, trials_);
  s.mean_costs.rounded_ops = static_cast<double>(rounded_ops_) / static_cast<double>(trials_);
  s.mean_costs.exact_calls = s.failure_rate;
  return s;
}

FilterStats filter_stats(std::span<const PredicateInstance> instances, const PrecisionConfig& cfg) {
  FilterStatsAccumulator acc;
  for (const PredicateInstance& inst : instances) {
    const double value = eval_rounded(inst, cfg);
    acc.add(inst, certify(value, filter_threshold(inst.kind, inst.delta, cfg)));
  }
  return acc.result();
}

}  // namespace filterlab
