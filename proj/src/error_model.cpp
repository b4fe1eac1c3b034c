#include "filterlab/error_model.hpp"

#include <array>
#include <bit>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "filterlab/format.hpp"

namespace filterlab {

PrecisionConfig::PrecisionConfig(int mantissa_bits) : bits(mantissa_bits) {
  if (bits < 2) throw std::invalid_argument("PrecisionConfig: mantissa bits must be >= 2");
}

void validate(const RoundedBound& bound) {
  if (bound.magnitude.sign() < 0 || bound.error.sign() < 0)
    throw std::invalid_argument("RoundedBound: magnitude and error must be nonnegative");
}

namespace {

Dyadic rounding_term(const Dyadic& magnitude, const PrecisionConfig& cfg) {
  if (magnitude.is_zero()) return {};
  return cfg.half_ulp() * pow2_ceil(magnitude);
}

}  // namespace

RoundedBound rb_add(const RoundedBound& a, const RoundedBound& b, const PrecisionConfig& cfg,
                    const std::optional<Dyadic>& cap) {
  Dyadic magnitude = a.magnitude + b.magnitude;
  if (cap) magnitude = min(magnitude, *cap);
  Dyadic error = rounding_term(magnitude, cfg) + a.error + b.error;
  return {std::move(magnitude), std::move(error)};
}

RoundedBound rb_mul(const RoundedBound& a, const RoundedBound& b, const PrecisionConfig& cfg,
                    const std::optional<Dyadic>& cap) {
  Dyadic magnitude = a.magnitude * b.magnitude;
  if (cap) magnitude = min(magnitude, *cap);
  Dyadic error = rounding_term(magnitude, cfg) + a.error * b.magnitude + b.error * a.magnitude;
  return {std::move(magnitude), std::move(error)};
}

RoundedBound rb_cap(const RoundedBound& a, const Dyadic& tighter_magnitude) {
  if (tighter_magnitude.sign() <= 0) throw std::domain_error("rb_cap: cap must be positive");
  return {min(a.magnitude, tighter_magnitude), a.error};
}

HadamardCap hadamard_cap(int delta) {
  static const std::array<long, 9> table = {0, 1, 2, 4, 16, 48, 160, 576, 4096};
  if (delta >= 1 && delta <= 8) return {Dyadic(table[static_cast<std::size_t>(delta)]), true};
  if (delta < 1) throw std::invalid_argument("hadamard_cap: delta must be >= 1");
  // ceil(sqrt(delta^delta))
  mpz_class power;
  mpz_ui_pow_ui(power.get_mpz_t(), static_cast<unsigned long>(delta), static_cast<unsigned long>(delta));
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), power.get_mpz_t());
  if (root * root < power) ++root;
  return {Dyadic(root, 0), false};
}

// EvalScheme ----------------------------------------------------------------

EvalScheme::EvalScheme(int slot_count, RoundedBound slot_bound)
    : slot_bounds_(static_cast<std::size_t>(slot_count), slot_bound),
      leaf_of_slot_(static_cast<std::size_t>(slot_count), -1) {
  validate_bound(slot_bound);
}

int EvalScheme::push(SchemeNode node) {
  nodes_.push_back(std::move(node));
  return static_cast<int>(nodes_.size()) - 1;
}

int EvalScheme::leaf(int slot) {
  if (slot < 0 || slot >= slot_count()) throw std::out_of_range("EvalScheme::leaf: bad slot");
  int& id = leaf_of_slot_[static_cast<std::size_t>(slot)];
  if (id < 0) {
    SchemeNode n;
    n.kind = NodeKind::Leaf;
    n.slot = slot;
    id = push(std::move(n));
  }
  return id;
}

int EvalScheme::add(int lhs, int rhs, bool negate) {
  const int size = static_cast<int>(nodes_.size());
  if (lhs < 0 || rhs < 0 || lhs >= size || rhs >= size)
    throw std::out_of_range("EvalScheme::add: operand does not exist");
  SchemeNode n;
  n.kind = NodeKind::Add;
  n.lhs = lhs;
  n.rhs = rhs;
  n.negate = negate;
  return push(std::move(n));
}

int EvalScheme::mul(int lhs, int rhs, bool negate) {
  const int size = static_cast<int>(nodes_.size());
  if (lhs < 0 || rhs < 0 || lhs >= size || rhs >= size)
    throw std::out_of_range("EvalScheme::mul: operand does not exist");
  SchemeNode n;
  n.kind = NodeKind::Mul;
  n.lhs = lhs;
  n.rhs = rhs;
  n.negate = negate;
  return push(std::move(n));
}

void EvalScheme::set_cap(int node, Dyadic cap) {
  if (cap.sign() <= 0) throw std::domain_error("EvalScheme::set_cap: cap must be positive");
  nodes_.at(static_cast<std::size_t>(node)).cap = std::move(cap);
}

void EvalScheme::set_root(int node) {
  if (node < 0 || node >= static_cast<int>(nodes_.size()))
    throw std::out_of_range("EvalScheme::set_root: node does not exist");
  root_ = node;
}

const RoundedBound& EvalScheme::slot_bound(int slot) const {
  return slot_bounds_.at(static_cast<std::size_t>(slot));
}

void EvalScheme::set_slot_bound(int slot, RoundedBound bound) {
  validate_bound(bound);
  slot_bounds_.at(static_cast<std::size_t>(slot)) = std::move(bound);
}

void EvalScheme::set_all_slot_bounds(const RoundedBound& bound) {
  validate_bound(bound);
  for (auto& b : slot_bounds_) b = bound;
}

std::int64_t EvalScheme::operation_count() const {
  validate();
  std::vector<char> seen(nodes_.size(), 0);
  std::vector<int> stack{root_};
  std::int64_t count = 0;
  while (!stack.empty()) {
    const int id = stack.back();
    stack.pop_back();
    if (seen[static_cast<std::size_t>(id)]) continue;
    seen[static_cast<std::size_t>(id)] = 1;
    const SchemeNode& n = nodes_[static_cast<std::size_t>(id)];
    if (n.kind == NodeKind::Leaf) continue;
    ++count;
    stack.push_back(n.lhs);
    stack.push_back(n.rhs);
  }
  return count;
}

void EvalScheme::validate() const {
  if (root_ < 0) throw std::logic_error("EvalScheme: root not set");
  for (const SchemeNode& n : nodes_) {
    if (n.kind == NodeKind::Leaf && (n.slot < 0 || n.slot >= slot_count()))
      throw std::logic_error("EvalScheme: leaf refers to an unbound slot");
  }
}

void EvalScheme::validate_bound(const RoundedBound& bound) { filterlab::validate(bound); }

// Canned schemes -------------------------------------------------------------

const std::string& summation_shape(int terms) {
  static const std::array<std::string, 9> shapes = {
      "",
      "a",
      "(ab)",
      "((ab)c)",
      "((ab)(cd))",
      "(((ab)c)(de))",
      "(((ab)(cd))(ef))",
      "(((ab)(cd))((ef)g))",
      "(((ab)(cd))((ef)(gh)))",
  };
  if (terms < 1 || terms > 8) throw std::invalid_argument("summation_shape: 1..8 terms supported");
  return shapes[static_cast<std::size_t>(terms)];
}

namespace {

struct ShapeParser {
  EvalScheme& scheme;
  const std::vector<int>& terms;
  const std::string& text;
  std::size_t pos = 0;

  int parse() {
    const char c = text.at(pos++);
    if (c == '(') {
      const int lhs = parse();
      const int rhs = parse();
      if (text.at(pos++) != ')') throw std::logic_error("summation shape: expected ')'");
      return scheme.add(lhs, rhs);
    }
    return terms.at(static_cast<std::size_t>(c - 'a'));
  }
};

// Minors over a subset of rows, using the leading columns, expanded along
// their last column. Slot of (row, col) is row * width + col.
class MinorBuilder {
 public:
  MinorBuilder(EvalScheme& scheme, int width) : scheme_(scheme), width_(width) {}

  int minor(std::uint32_t rows) {
    const int k = std::popcount(rows);
    if (k == 1) return scheme_.leaf(slot(std::countr_zero(rows), 0));
    if (auto it = memo_.find(rows); it != memo_.end()) return it->second;
    std::vector<int> terms;
    int pos = 0;
    for (int r = 0; r < 32; ++r) {
      if (!(rows & (1u << r))) continue;
      const int entry = scheme_.leaf(slot(r, k - 1));
      const int sub = minor(rows & ~(1u << r));
      const bool negative = (pos + k - 1) % 2 == 1;
      terms.push_back(scheme_.mul(entry, sub, negative));
      ++pos;
    }
    const int id = sum_by_shape(scheme_, terms, hadamard_cap(k).value);
    memo_.emplace(rows, id);
    return id;
  }

 private:
  int slot(int row, int col) const { return row * width_ + col; }

  EvalScheme& scheme_;
  int width_;
  std::unordered_map<std::uint32_t, int> memo_;
};

EvalScheme build_whichside(int delta) {
  EvalScheme scheme(delta * delta);
  MinorBuilder builder(scheme, delta);
  scheme.set_root(builder.minor((1u << delta) - 1));
  return scheme;
}

EvalScheme build_insphere(int delta) {
  const int rows = delta + 1;
  EvalScheme scheme(rows * delta);
  MinorBuilder builder(scheme, delta);
  std::vector<int> lifts;
  for (int r = 0; r < rows; ++r) {
    int acc = -1;
    for (int c = 0; c < delta; ++c) {
      const int x = scheme.leaf(r * delta + c);
      const int sq = scheme.mul(x, x);
      acc = acc < 0 ? sq : scheme.add(acc, sq);
    }
    lifts.push_back(acc);
  }
  const std::uint32_t all = (1u << rows) - 1;
  std::vector<int> terms;
  for (int r = 0; r < rows; ++r) {
    const int sub = builder.minor(all & ~(1u << r));
    const bool negative = (r + delta) % 2 == 1;
    terms.push_back(scheme.mul(lifts[static_cast<std::size_t>(r)], sub, negative));
  }
  scheme.set_root(sum_by_shape(scheme, terms));
  return scheme;
}

struct SchemeLibrary {
  std::array<EvalScheme, 9> whichside;
  std::array<EvalScheme, 8> insphere;
  std::array<Dyadic, 9> whichside_coeff;
  std::array<Dyadic, 8> insphere_coeff;

  SchemeLibrary() {
    const PrecisionConfig probe(2);
    for (int d = 1; d <= 8; ++d) {
      auto& s = whichside[static_cast<std::size_t>(d)];
      s = build_whichside(d);
      whichside_coeff[static_cast<std::size_t>(d)] = analyze(s, probe).error.scaled(2);
    }
    for (int d = 1; d <= 7; ++d) {
      auto& s = insphere[static_cast<std::size_t>(d)];
      s = build_insphere(d);
      insphere_coeff[static_cast<std::size_t>(d)] = analyze(s, probe).error.scaled(2);
    }
  }
};

const SchemeLibrary& library() {
  static const SchemeLibrary lib;
  return lib;
}

void check_delta(PredicateKind kind, int delta) {
  const int hi = kind == PredicateKind::WhichSide ? 8 : 7;
  if (delta < 1 || delta > hi)
    throw std::invalid_argument(to_string(kind) + ": delta must be in 1.." + std::to_string(hi) +
                                ", got " + std::to_string(delta));
}

}  // namespace

int sum_by_shape(EvalScheme& scheme, const std::vector<int>& terms, const std::optional<Dyadic>& cap) {
  if (terms.empty()) throw std::invalid_argument("sum_by_shape: no terms");
  ShapeParser parser{scheme, terms, summation_shape(static_cast<int>(terms.size()))};
  const int id = parser.parse();
  if (cap && terms.size() > 1) scheme.set_cap(id, *cap);
  return id;
}

EvalScheme det_expansion_scheme(int delta, const RoundedBound& leaf) {
  if (delta < 2 || delta > 8)
    throw std::invalid_argument("det_expansion_scheme: delta must be in 2..8");
  EvalScheme scheme = build_whichside(delta);
  scheme.set_all_slot_bounds(leaf);
  return scheme;
}

EvalScheme insphere_scheme(int delta) {
  if (delta < 1 || delta > 7) throw std::invalid_argument("insphere_scheme: delta must be in 1..7");
  return build_insphere(delta);
}

const EvalScheme& canonical_scheme(PredicateKind kind, int delta) {
  check_delta(kind, delta);
  const auto i = static_cast<std::size_t>(delta);
  return kind == PredicateKind::WhichSide ? library().whichside[i] : library().insphere[i];
}

namespace {

std::vector<RoundedBound> fold(const EvalScheme& scheme, const PrecisionConfig& cfg) {
  scheme.validate();
  const auto& nodes = scheme.nodes();
  std::vector<RoundedBound> out(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const SchemeNode& n = nodes[i];
    switch (n.kind) {
      case NodeKind::Leaf:
        out[i] = scheme.slot_bound(n.slot);
        break;
      case NodeKind::Add:
        out[i] = rb_add(out[static_cast<std::size_t>(n.lhs)], out[static_cast<std::size_t>(n.rhs)], cfg, n.cap);
        break;
      case NodeKind::Mul:
        out[i] = rb_mul(out[static_cast<std::size_t>(n.lhs)], out[static_cast<std::size_t>(n.rhs)], cfg, n.cap);
        break;
    }
  }
  return out;
}

}  // namespace

RoundedBound analyze(const EvalScheme& scheme, const PrecisionConfig& cfg) {
  return fold(scheme, cfg)[static_cast<std::size_t>(scheme.root())];
}

RoundedBound analyze_inexact_inputs(const EvalScheme& scheme, const Dyadic& eps_in,
                                    const PrecisionConfig& cfg) {
  if (eps_in.sign() < 0) throw std::domain_error("analyze_inexact_inputs: eps_in must be >= 0");
  EvalScheme inexact = scheme;
  for (int s = 0; s < inexact.slot_count(); ++s) {
    RoundedBound b = inexact.slot_bound(s);
    b.error += eps_in;
    inexact.set_slot_bound(s, std::move(b));
  }
  const auto values = fold(inexact, cfg);
  for (const RoundedBound& v : values) {
    if (v.magnitude.is_zero() || v.magnitude.is_power_of_two()) continue;
    if (pow2_ceil(v.magnitude) != pow2_ceil(v.magnitude + v.error))
      throw std::domain_error("analyze_inexact_inputs: eps_in too large for first-order analysis");
  }
  return values[static_cast<std::size_t>(inexact.root())];
}

std::int64_t op_count(int delta) {
  if (delta < 1) throw std::invalid_argument("op_count: delta must be >= 1");
  if (delta > 62) throw std::overflow_error("op_count: delta too large");
  return static_cast<std::int64_t>(delta - 1) * ((std::int64_t{1} << delta) - 1);
}

std::string to_string(PredicateKind kind) {
  return kind == PredicateKind::WhichSide ? "whichside" : "insphere";
}

PredicateKind parse_predicate_kind(const std::string& text) {
  if (text == "whichside") return PredicateKind::WhichSide;
  if (text == "insphere") return PredicateKind::Insphere;
  throw std::invalid_argument("unknown predicate '" + text + "' (expected whichside|insphere)");
}

const Dyadic& threshold_coefficient(PredicateKind kind, int delta) {
  check_delta(kind, delta);
  const auto i = static_cast<std::size_t>(delta);
  return kind == PredicateKind::WhichSide ? library().whichside_coeff[i] : library().insphere_coeff[i];
}

Dyadic filter_threshold(PredicateKind kind, int delta, const PrecisionConfig& cfg) {
  return threshold_coefficient(kind, delta).scaled(-cfg.bits);
}

ThresholdRow threshold_row(int delta, const PrecisionConfig& cfg, PredicateKind kind) {
  const EvalScheme& scheme = canonical_scheme(kind, delta);
  const RoundedBound root = analyze(scheme, cfg);
  ThresholdRow row;
  row.delta = delta;
  row.kind = kind;
  row.magnitude = root.magnitude;
  row.epsilon = root.error;
  row.coefficient = root.error.scaled(cfg.bits);
  row.ops = scheme.operation_count();
  return row;
}

std::string thresholds_to_csv(const std::vector<ThresholdRow>& rows) {
  std::string out = "delta,G,epsilon_coefficient,epsilon_at_b53,ops\n";
  for (const ThresholdRow& r : rows) {
    out += std::to_string(r.delta) + ',' + r.magnitude.to_string() + ',' + r.coefficient.to_string() +
           ',' + format_significant(r.coefficient.scaled(-53).to_double()) + ',' + std::to_string(r.ops) +
           '\n';
  }
  return out;
}

std::string thresholds_to_json(const std::vector<ThresholdRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const ThresholdRow& r : rows) {
    arr.push_back({{"delta", r.delta},
                   {"predicate", to_string(r.kind)},
                   {"G", r.magnitude.to_string()},
                   {"epsilon_coefficient", r.coefficient.to_string()},
                   {"epsilon_at_b53", r.coefficient.scaled(-53).to_double()},
                   {"ops", r.ops}});
  }
  return arr.dump(2) + "\n";
}

}  // namespace filterlab
