#pragma once

// Static forward-error analysis of rounded b-bit evaluation.
//
// A RoundedBound (M, m) stands for the set of computed numbers whose absolute
// value is at most M and whose accumulated error is at most m. Additions and
// multiplications of such sets follow two rules; the analyzer folds them over
// an expression DAG. All quantities are exact dyadic rationals.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "filterlab/dyadic.hpp"

namespace filterlab {

enum class PredicateKind { WhichSide, Insphere };

std::string to_string(PredicateKind kind);
PredicateKind parse_predicate_kind(const std::string& text);

struct PrecisionConfig {
  int bits = 53;

  PrecisionConfig() = default;
  explicit PrecisionConfig(int mantissa_bits);

  // 2^(-bits-1): half a unit in the last place of a number in [1/2, 1).
  Dyadic half_ulp() const { return Dyadic::pow2(-bits - 1); }
  Dyadic unit() const { return Dyadic::pow2(-bits); }
};

struct RoundedBound {
  Dyadic magnitude;
  Dyadic error;

  friend bool operator==(const RoundedBound&, const RoundedBound&) = default;
};

// Throws std::invalid_argument if either field is negative.
void validate(const RoundedBound& bound);

// The rounding term of a node uses pow2_ceil of its magnitude. When `cap` is
// given, the magnitude is first replaced by min(magnitude, cap): the node is
// known to evaluate a quantity bounded by `cap`.
RoundedBound rb_add(const RoundedBound& a, const RoundedBound& b, const PrecisionConfig& cfg,
                    const std::optional<Dyadic>& cap = std::nullopt);
RoundedBound rb_mul(const RoundedBound& a, const RoundedBound& b, const PrecisionConfig& cfg,
                    const std::optional<Dyadic>& cap = std::nullopt);
RoundedBound rb_cap(const RoundedBound& a, const Dyadic& tighter_magnitude);

struct HadamardCap {
  Dyadic value;
  bool tabulated = true;
};

// Best known bound on |det| of a delta x delta matrix with entries in [-1, 1].
// Tabulated for delta in 1..8; otherwise ceil(sqrt(delta)^delta), flagged.
HadamardCap hadamard_cap(int delta);

enum class NodeKind { Leaf, Add, Mul };

struct SchemeNode {
  NodeKind kind = NodeKind::Leaf;
  int slot = -1;  // leaves only
  int lhs = -1;
  int rhs = -1;
  // The node's value is negated after evaluation; negation is exact.
  bool negate = false;
  std::optional<Dyadic> cap;
};

// Expression DAG over input slots. Nodes are stored children-first, so a
// forward pass over nodes() is a valid evaluation order. Shared subtrees
// (minors reused by several cofactors) are stored once.
class EvalScheme {
 public:
  explicit EvalScheme(int slot_count = 0, RoundedBound slot_bound = {Dyadic(1), Dyadic(0)});

  int leaf(int slot);
  int add(int lhs, int rhs, bool negate = false);
  int mul(int lhs, int rhs, bool negate = false);
  void set_cap(int node, Dyadic cap);
  void set_root(int node);

  int root() const { return root_; }
  int slot_count() const { return static_cast<int>(slot_bounds_.size()); }
  const std::vector<SchemeNode>& nodes() const { return nodes_; }
  const SchemeNode& node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }

  const RoundedBound& slot_bound(int slot) const;
  void set_slot_bound(int slot, RoundedBound bound);
  void set_all_slot_bounds(const RoundedBound& bound);

  // Number of Add and Mul nodes reachable from the root.
  std::int64_t operation_count() const;

  // Throws std::logic_error if the root is unset or a leaf slot is unbound.
  void validate() const;

 private:
  int push(SchemeNode node);
  static void validate_bound(const RoundedBound& bound);

  std::vector<SchemeNode> nodes_;
  std::vector<RoundedBound> slot_bounds_;
  std::vector<int> leaf_of_slot_;
  int root_ = -1;
};

// Balanced-sum grouping used at one expansion level with `terms` cofactor
// terms, written with letters a, b, c, ... for the terms in order:
//   2: (ab)   3: ((ab)c)   4: ((ab)(cd))   5: (((ab)c)(de))
//   6: (((ab)(cd))(ef))   7: (((ab)(cd))((ef)g))   8: (((ab)(cd))((ef)(gh)))
const std::string& summation_shape(int terms);

// Sums `terms` (node ids, in order) following summation_shape; `cap` goes on
// the final node.
int sum_by_shape(EvalScheme& scheme, const std::vector<int>& terms,
                 const std::optional<Dyadic>& cap = std::nullopt);

// Recursive last-column expansion of a delta x delta determinant. Slot
// r * delta + c is the entry at row r, column c. Every minor of size k >= 2 is
// capped with hadamard_cap(k). Requires 2 <= delta <= 8.
EvalScheme det_expansion_scheme(int delta, const RoundedBound& leaf = {Dyadic(1), Dyadic(0)});

// Lifted (delta+1) x (delta+1) insphere determinant for delta+1 points with
// the origin as implicit extra point. Slot r * delta + c is coordinate c of
// point r. The last column holds rounded squared norms ((x0^2 + x1^2) + ...).
// Requires 1 <= delta <= 7.
EvalScheme insphere_scheme(int delta);

// Shared, immutable schemes used by the predicates: which-side for delta in
// 1..8 (delta = 1 is a single leaf), insphere for delta in 1..7.
const EvalScheme& canonical_scheme(PredicateKind kind, int delta);

RoundedBound analyze(const EvalScheme& scheme, const PrecisionConfig& cfg);

// Every input slot carries an additional error eps_in. Throws
// std::domain_error when eps_in is large enough to push a node's magnitude
// into the next binade (checked at nodes whose magnitude is not itself a
// power of two), since the first-order rules no longer apply there.
RoundedBound analyze_inexact_inputs(const EvalScheme& scheme, const Dyadic& eps_in,
                                    const PrecisionConfig& cfg);

// (delta - 1)(2^delta - 1): Add/Mul count of the shared-minor expansion.
std::int64_t op_count(int delta);

struct ThresholdRow {
  int delta = 0;
  PredicateKind kind = PredicateKind::WhichSide;
  Dyadic magnitude;        // G: bound on the evaluated determinant
  Dyadic epsilon;          // at the configured precision
  Dyadic coefficient;      // epsilon / 2^-b
  std::int64_t ops = 0;
};

// Which-side rows are defined for 1 <= delta <= 8 (delta = 1 is exact), insphere
// rows for 1 <= delta <= 7. Throws std::invalid_argument otherwise.
ThresholdRow threshold_row(int delta, const PrecisionConfig& cfg,
                           PredicateKind kind = PredicateKind::WhichSide);

// Epsilon coefficient of 2^-b; independent of b. Memoized, thread-safe.
const Dyadic& threshold_coefficient(PredicateKind kind, int delta);

Dyadic filter_threshold(PredicateKind kind, int delta, const PrecisionConfig& cfg);

// CSV columns: delta,G,epsilon_coefficient,epsilon_at_b53,ops
std::string thresholds_to_csv(const std::vector<ThresholdRow>& rows);
std::string thresholds_to_json(const std::vector<ThresholdRow>& rows);

}  // namespace filterlab
