#include <doctest.h>

#include <cmath>
#include <random>

#include "filterlab/error_model.hpp"
#include "filterlab/predicates.hpp"
#include "oracles.hpp"

using namespace filterlab;

namespace {

Dyadic u(int b) { return Dyadic::pow2(-b); }
Dyadic D(long v) { return Dyadic(v); }

}  // namespace

TEST_SUITE("error_model") {
  TEST_CASE("precision config") {
    CHECK_THROWS_AS(PrecisionConfig(1), std::invalid_argument);
    CHECK(PrecisionConfig(53).half_ulp() == Dyadic::pow2(-54));
  }

  TEST_CASE("rounded bound rules") {
    const PrecisionConfig cfg(20);
    const RoundedBound one{D(1), Dyadic::pow2(-21)};
    CHECK(rb_add(one, one, cfg) == RoundedBound{D(2), Dyadic::pow2(-19)});
    CHECK(rb_add({D(1), D(0)}, {D(0), D(0)}, cfg) == RoundedBound{D(1), Dyadic::pow2(-21)});
    CHECK(rb_mul({D(1), D(0)}, {D(1), D(0)}, cfg) == RoundedBound{D(1), Dyadic::pow2(-21)});
    // 2^-21 * 2 + 2^-19 * 1
    CHECK(rb_mul({D(1), D(0)}, {D(2), Dyadic::pow2(-19)}, cfg) == RoundedBound{D(2), D(3) * u(20)});
    CHECK(rb_mul({D(3), D(0)}, {D(1), D(0)}, cfg) == RoundedBound{D(3), Dyadic::pow2(-21) * D(4)});
    CHECK_THROWS_AS(validate({D(-1), D(0)}), std::invalid_argument);
  }

  TEST_CASE("cap replaces the magnitude before rounding") {
    const PrecisionConfig cfg(30);
    // three products P{2, 3u} summed as ((ab)c) with a final cap of 4
    const RoundedBound p{D(2), D(3) * u(30)};
    const RoundedBound ab = rb_add(p, p, cfg);
    CHECK(ab == RoundedBound{D(4), D(8) * u(30)});
    const RoundedBound root = rb_add(ab, p, cfg, D(4));
    CHECK(root == RoundedBound{D(4), D(13) * u(30)});
    CHECK(rb_add(ab, p, cfg).error == D(15) * u(30));
  }

  TEST_CASE("rb_cap") {
    const Dyadic e = u(10);
    CHECK(rb_cap({D(6), e}, D(4)) == RoundedBound{D(4), e});
    CHECK(rb_cap({D(2), e}, D(4)) == RoundedBound{D(2), e});
    CHECK(rb_cap({D(240), e}, D(160)) == RoundedBound{D(160), e});
    CHECK_THROWS_AS(rb_cap({D(2), e}, D(0)), std::domain_error);
  }

  TEST_CASE("hadamard caps") {
    const long expected[] = {1, 2, 4, 16, 48, 160, 576, 4096};
    for (int d = 1; d <= 8; ++d) {
      CHECK(hadamard_cap(d).value == D(expected[d - 1]));
      CHECK(hadamard_cap(d).tabulated);
    }
    const HadamardCap nine = hadamard_cap(9);
    CHECK_FALSE(nine.tabulated);
    CHECK(nine.value == D(19683));  // 3^9
    CHECK(hadamard_cap(10).value == D(100000));
  }

  TEST_CASE("summation shapes") {
    CHECK(summation_shape(5) == "(((ab)c)(de))");
    CHECK(summation_shape(8) == "(((ab)(cd))((ef)(gh)))");
    CHECK_THROWS(summation_shape(9));
  }

  TEST_CASE("expansion tree structure") {
    const EvalScheme s2 = det_expansion_scheme(2);
    const auto& root = s2.node(s2.root());
    CHECK(root.kind == NodeKind::Add);
    CHECK(s2.node(root.lhs).kind == NodeKind::Mul);
    CHECK(s2.node(root.rhs).kind == NodeKind::Mul);
    CHECK(s2.node(root.lhs).negate);
    CHECK_FALSE(s2.node(root.rhs).negate);
    CHECK_THROWS_AS(det_expansion_scheme(1), std::invalid_argument);
    CHECK_THROWS_AS(det_expansion_scheme(9), std::invalid_argument);
    // delta = 3: the left child of the root is an Add, the right a Mul
    const EvalScheme s3 = det_expansion_scheme(3);
    const auto& r3 = s3.node(s3.root());
    CHECK(s3.node(r3.lhs).kind == NodeKind::Add);
    CHECK(s3.node(r3.rhs).kind == NodeKind::Mul);
    CHECK(r3.cap == D(4));
  }

  TEST_CASE("operation counts") {
    const std::int64_t expected[] = {0, 3, 14, 45, 124, 315, 762, 1785};
    for (int d = 1; d <= 8; ++d) {
      CHECK(op_count(d) == expected[d - 1]);
      CHECK(canonical_scheme(PredicateKind::WhichSide, d).operation_count() == expected[d - 1]);
    }
    CHECK_THROWS(op_count(0));
  }

  TEST_CASE("threshold coefficients") {
    const long expected[] = {0, 2, 13, 76, 516, 3736, 29096, 247104};
    for (int d = 1; d <= 8; ++d) CHECK(threshold_coefficient(PredicateKind::WhichSide, d) == D(expected[d - 1]));
    for (int b : {8, 24, 53, 64}) {
      const RoundedBound r3 = analyze(det_expansion_scheme(3), PrecisionConfig(b));
      CHECK(r3.magnitude == D(4));
      CHECK(r3.error == D(13) * u(b));
      const RoundedBound r4 = analyze(det_expansion_scheme(4), PrecisionConfig(b));
      CHECK(r4 == RoundedBound{D(16), D(76) * u(b)});
      CHECK(analyze(det_expansion_scheme(2), PrecisionConfig(b)) == RoundedBound{D(2), Dyadic::pow2(1 - b)});
    }
    CHECK(analyze(det_expansion_scheme(8), PrecisionConfig(53)).magnitude == D(4096));
  }

  TEST_CASE("threshold rows and export") {
    const ThresholdRow row = threshold_row(3, PrecisionConfig(53));
    CHECK(row.magnitude == D(4));
    CHECK(row.coefficient == D(13));
    CHECK(row.ops == 14);
    CHECK(std::fabs(row.epsilon.to_double() - 1.4e-15) < 0.05e-15);
    const std::string csv = thresholds_to_csv({row});
    CHECK(csv == "delta,G,epsilon_coefficient,epsilon_at_b53,ops\n3,4,13,1.44e-15,14\n");
    const std::string json = thresholds_to_json({row});
    CHECK(json.find("\"epsilon_coefficient\": \"13\"") != std::string::npos);
    CHECK(filter_threshold(PredicateKind::WhichSide, 2, PrecisionConfig(24)) == D(2) * u(24));
    CHECK_THROWS_AS(threshold_row(9, PrecisionConfig(53)), std::invalid_argument);
    CHECK_THROWS_AS(threshold_row(8, PrecisionConfig(53), PredicateKind::Insphere), std::invalid_argument);
  }

  TEST_CASE("monotonicity") {
    const PrecisionConfig cfg(30);
    EvalScheme s = det_expansion_scheme(3);
    const Dyadic base = analyze(s, cfg).error;
    s.set_slot_bound(4, {D(1), u(40)});
    CHECK(analyze(s, cfg).error > base);
    for (int d = 2; d <= 8; ++d) {
      const auto lo = analyze(det_expansion_scheme(d), PrecisionConfig(20)).error;
      const auto hi = analyze(det_expansion_scheme(d), PrecisionConfig(21)).error;
      CHECK(hi < lo);
    }
  }

  TEST_CASE("inexact inputs propagate mechanically") {
    const PrecisionConfig cfg(53);
    const Dyadic e = Dyadic::pow2(-60);
    CHECK(analyze_inexact_inputs(det_expansion_scheme(3), D(0), cfg) == analyze(det_expansion_scheme(3), cfg));
    CHECK(analyze_inexact_inputs(det_expansion_scheme(2), e, cfg).error == Dyadic::pow2(-52) + D(4) * e);
    CHECK(analyze_inexact_inputs(det_expansion_scheme(3), e, cfg).error == D(13) * u(53) + D(18) * e);
    CHECK_NOTHROW(analyze_inexact_inputs(det_expansion_scheme(3), Dyadic(mpz_class(1), -3), cfg));
    const EvalScheme wide = det_expansion_scheme(2, RoundedBound{D(3), D(0)});
    CHECK_NOTHROW(analyze_inexact_inputs(wide, Dyadic(mpz_class(1), -3), cfg));
    CHECK_THROWS_AS(analyze_inexact_inputs(wide, D(2), cfg), std::domain_error);
  }

  TEST_CASE("a factorial-sized input allowance is too small") {
    // [[1, -1], [1, 1]] has det 2; moving every entry by eps toward zero changes it by 4 eps - 2 eps^2.
    const mpq_class eps(1, 1024);
    const mpq_class one(1);
    const mpq_class shrunk = one - eps;
    const std::vector<std::vector<mpq_class>> a = {{one, -one}, {one, one}};
    const std::vector<std::vector<mpq_class>> b = {{shrunk, -shrunk}, {shrunk, shrunk}};
    const mpq_class diff = abs(oracle::cofactor_det(a) - oracle::cofactor_det(b));
    CHECK(diff == 4 * eps - 2 * eps * eps);
    CHECK(diff > 2 * eps);
  }

  TEST_CASE("insphere thresholds are derived for delta 1..7") {
    for (int d = 1; d <= 7; ++d) {
      CHECK(threshold_coefficient(PredicateKind::Insphere, d).sign() > 0);
      CHECK(canonical_scheme(PredicateKind::Insphere, d).slot_count() == (d + 1) * d);
    }
    CHECK_THROWS(insphere_scheme(8));
  }

  TEST_CASE("soundness against exact evaluation at full precision") {
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    const PrecisionConfig cfg(53);
    for (int d = 2; d <= 4; ++d) {
      const EvalScheme& scheme = canonical_scheme(PredicateKind::WhichSide, d);
      const mpq_class eps = oracle::exact(filter_threshold(PredicateKind::WhichSide, d, cfg).to_double());
      int violations = 0;
      const int trials = d == 4 ? 20000 : 40000;  // 10^5 in total
      for (int t = 0; t < trials; ++t) {
        std::vector<double> slots(static_cast<std::size_t>(d * d));
        std::vector<std::vector<mpq_class>> m(static_cast<std::size_t>(d), std::vector<mpq_class>(static_cast<std::size_t>(d)));
        for (int r = 0; r < d; ++r)
          for (int c = 0; c < d; ++c) {
            const double x = unif(gen);
            slots[static_cast<std::size_t>(r * d + c)] = x;
            m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = oracle::exact(x);
          }
        const double rounded = eval_rounded(scheme, slots, cfg);
        if (abs(oracle::exact(rounded) - oracle::cofactor_det(m)) > eps) ++violations;
      }
      CHECK_MESSAGE(violations == 0, "delta=" << d);
    }
  }

  TEST_CASE("soundness at reduced precision") {
    std::mt19937_64 gen(77);
    for (int b : {12, 24}) {
      const PrecisionConfig cfg(b);
      const RoundedArithmetic arith(b);
      for (int d = 2; d <= 4; ++d) {
        const EvalScheme& scheme = canonical_scheme(PredicateKind::WhichSide, d);
        const mpq_class eps = oracle::exact(filter_threshold(PredicateKind::WhichSide, d, cfg).to_double());
        std::uniform_int_distribution<long> tick(-(1L << (b - 1)), 1L << (b - 1));
        int violations = 0;
        for (int t = 0; t < 5000; ++t) {
          std::vector<double> slots(static_cast<std::size_t>(d * d));
          std::vector<std::vector<mpq_class>> m(static_cast<std::size_t>(d), std::vector<mpq_class>(static_cast<std::size_t>(d)));
          for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) {
              const double x = std::ldexp(static_cast<double>(tick(gen)), 1 - b);
              slots[static_cast<std::size_t>(r * d + c)] = x;
              m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = oracle::exact(x);
            }
          const double rounded = eval_rounded(scheme, slots, cfg);
          if (abs(oracle::exact(rounded) - oracle::cofactor_det(m)) > eps) ++violations;
        }
        CHECK_MESSAGE(violations == 0, "b=" << b << " delta=" << d);
      }
    }
  }
}
