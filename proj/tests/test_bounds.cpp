#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "filterlab/bounds.hpp"

using namespace filterlab;
using std::numbers::pi;

namespace {

// P(r1 r2 |sin t| <= a) for r_i with density 2r on [0, 1] and t uniform.
double cdf2_quadrature(double a, int n = 1200) {
  double sum = 0.0;
  const double h = 1.0 / n;
  for (int i = 0; i < n; ++i) {
    const double r1 = (i + 0.5) * h;
    for (int j = 0; j < n; ++j) {
      const double r2 = (j + 0.5) * h;
      const double s = std::min(a / (r1 * r2), 1.0);
      sum += 4.0 * r1 * r2 * (2.0 / pi) * std::asin(s);
    }
  }
  return sum * h * h;
}

// P(|uv(v - u)| <= a) for u, v uniform in [-1, 1], midpoint counting.
double insphere1_quadrature(double a, int n = 1500) {
  long inside = 0;
  const double h = 2.0 / n;
  for (int i = 0; i < n; ++i) {
    const double u = -1.0 + (i + 0.5) * h;
    for (int j = 0; j < n; ++j) {
      const double v = -1.0 + (j + 0.5) * h;
      if (std::fabs(u * v * (v - u)) <= a) ++inside;
    }
  }
  return static_cast<double>(inside) / (static_cast<double>(n) * n);
}

}  // namespace

TEST_SUITE("bounds") {
  TEST_CASE("ball volumes and sigma") {
    CHECK(unit_ball_volume(0) == 1.0);
    CHECK(unit_ball_volume(1) == doctest::Approx(2.0));
    CHECK(unit_ball_volume(2) == doctest::Approx(pi));
    CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * pi / 3.0));
    CHECK(unit_ball_volume(4) == doctest::Approx(pi * pi / 2.0));
    CHECK(sigma(1) == doctest::Approx(1.0));
    CHECK(sigma(2) == doctest::Approx(8.0 / pi));
    CHECK(sigma(3) == doctest::Approx(27.0 * pi / 16.0));
    for (int d = 1; d <= 12; ++d) CHECK(sigma_from_k(d) == doctest::Approx(sigma(d)).epsilon(1e-12));
    CHECK(k_delta(0) == 1.0);
    CHECK_THROWS_AS(sigma(0), std::invalid_argument);
    CHECK_THROWS_AS(unit_ball_volume(-1), std::invalid_argument);
  }

  TEST_CASE("psi and alpha") {
    CHECK(psi(1) == doctest::Approx(1.0));
    CHECK(psi(2) == doctest::Approx(pi));
    CHECK(psi(3) == doctest::Approx(27.0 * std::pow(pi, 4) / 128.0));
    CHECK(alpha_grid(2) == doctest::Approx(2.0));
    CHECK(alpha_grid(3) == doctest::Approx(1.5 * std::pow(3.0, 1.5)));
    for (int d = 1; d <= 6; ++d)
      CHECK(psi(d) / sigma(d) == doctest::Approx(std::pow(unit_ball_volume(d), d) * std::pow(std::sqrt(d), d * (d - 1)) /
                                                 std::pow(2.0, d * d)).epsilon(1e-12));
    CHECK(whichside_grid_bound(2, 0.01, 1e-3).value == doctest::Approx(pi * (0.01 + 2e-3)));
  }

  TEST_CASE("delta 2 CDF matches quadrature") {
    CHECK(cdf2_exact(0.0) == 0.0);
    CHECK(cdf2_exact(1.0) == doctest::Approx(1.0));
    for (double a : {0.01, 0.05, 0.1, 0.3, 0.5, 0.8})
      CHECK(cdf2_exact(a) == doctest::Approx(cdf2_quadrature(a)).epsilon(2e-4));
    // slope at the origin is sigma_2
    CHECK(cdf2_exact(1e-7) / 1e-7 == doctest::Approx(sigma(2)).epsilon(1e-5));
    for (double a : {0.001, 0.01, 0.1, 0.5, 1.0}) CHECK(cdf2_exact(a) <= whichside_ball_bound(2, a).value);
    CHECK_THROWS_AS(cdf2_exact(1.5), std::domain_error);
    CHECK(cdf1(0.3) == 0.3);
    CHECK(cdf1(4.0) == 1.0);
  }

  TEST_CASE("delta 3 upper curve") {
    CHECK(cdf3_upper(0.0) == 0.0);
    CHECK(cdf3_upper(1e-8) / 1e-8 == doctest::Approx(sigma(3)).epsilon(1e-6));
    double prev = 0.0;
    for (int i = 1; i <= 100; ++i) {
      const double v = i / 100.0;
      const Band b = cdf3_band(v);
      CHECK(b.lower <= b.upper);
      CHECK(b.upper >= prev);
      prev = b.upper;
    }
    CHECK_THROWS_AS(cdf3_upper(-0.1), std::domain_error);
  }

  TEST_CASE("delta 1 insphere bound") {
    CHECK(insphere1_bound(0.0).value == 0.0);
    CHECK(insphere1_bound(0.25).value == doctest::Approx(0.875));
    CHECK(insphere1_alternate_high_branch(0.25) == doctest::Approx(0.5));
    const double left = insphere1_bound(std::nextafter(0.25, 0.0)).value;
    CHECK(left == doctest::Approx(insphere1_bound(0.25).value).epsilon(1e-9));
    const double peak_a = 2.0 * std::pow(5.0 / 6.0, 3.0);
    CHECK(insphere1_bound(2.0).value == doctest::Approx(insphere1_bound(peak_a).value));
    CHECK(insphere1_bound(2.0).value > 1.0);
    CHECK(insphere1_bound(1.5).regime == "A >= 1/4, held at peak");
    for (double a : {0.001, 0.01, 0.05, 0.1, 0.2, 0.25, 0.3, 0.4, 0.5}) {
      INFO("a = " << a);
      CHECK(insphere1_bound(a).value >= insphere1_quadrature(a) - 2e-3);
    }
    CHECK(insphere1_alternate_high_branch(0.3) < insphere1_quadrature(0.3));
    CHECK_THROWS_AS(insphere1_bound(2.5), std::domain_error);
  }

  TEST_CASE("product split") {
    const auto pa = [](double x) { return pi * x; };
    const auto pb = [](double x) { return pi * x / 2.0; };
    for (double v : {1e-4, 0.01, 0.3}) {
      const double alpha = std::sqrt(v / 2.0);
      CHECK(product_split_bound(pa, pb, v, alpha) == doctest::Approx(insphere2_bound(v).value));
      CHECK(product_split_bound(pa, pb, v, 2.0 * alpha) > insphere2_bound(v).value);
    }
    CHECK_THROWS_AS(product_split_bound(pa, pb, 0.1, 0.0), std::domain_error);
  }

  TEST_CASE("general insphere bound") {
    for (int d = 3; d <= 6; ++d) {
      const auto [tau, theta] = tau_theta(d);
      CHECK(phi(d) * phi(d) == doctest::Approx(psi(d) * (tau + theta)));
      const double w_star = psi(d) / (std::numbers::e * (tau + theta));
      const double peak = 2.0 * psi(d) / std::sqrt(std::numbers::e);
      if (d <= 4) {
        REQUIRE(w_star < 0.9);
        CHECK(insphere_d_bound(d, w_star).value == doctest::Approx(peak));
        CHECK(insphere_d_bound(d, 0.9).value == doctest::Approx(peak));
        CHECK(insphere_d_bound(d, 0.9).regime == "held at peak");
      } else {
        CHECK(w_star > 1.0);
        CHECK(insphere_d_bound(d, 0.9).regime == "W > 0.1");
      }
      double prev = 0.0;
      for (double w = 1e-12; w < 1.0; w *= 3.0) {
        const double value = insphere_d_bound(d, w).value;
        CHECK(value >= prev);
        prev = value;
      }
    }
    CHECK(insphere_bound(3, 0.0).value == 0.0);
    CHECK(insphere_bound(2, 0.02).value == doctest::Approx(pi * 0.2));
    CHECK_THROWS_AS(phi(2), std::invalid_argument);
    CHECK_THROWS_AS(insphere_d_bound(3, 1.0), std::domain_error);
  }

  TEST_CASE("grid insphere bound") {
    CHECK(beta_insphere(2) == doctest::Approx(3.0 * 6.0));
    CHECK(beta_insphere(3) == doctest::Approx(4.0 * std::sqrt(1.5) * std::pow(12.0, 1.5)));
    CHECK(insphere_grid_bound(2, 0.01, 0.0).value == doctest::Approx(insphere2_bound(0.01).value));
    CHECK(insphere_grid_bound(2, 0.01, 1e-6).value == doctest::Approx(insphere2_bound(0.01 + 18e-3).value));
    const ProbBound outside = insphere_grid_bound(3, 0.5, 0.01);
    CHECK(outside.value == 1.0);
    CHECK(outside.regime == "argument outside the bound's domain");
  }

  TEST_CASE("filter efficacy") {
    const double eta = std::ldexp(1.0, -52);
    CHECK(rho(3, 53, eta) == doctest::Approx(psi(3) * (13.0 * std::ldexp(1.0, -53) + alpha_grid(3) * eta)));
    CHECK(rho(3, 24, eta) > rho(3, 53, eta));
    CHECK(bound_table(3).rho(53, eta) == rho(3, 53, eta));
    CHECK(insphere_rho(2, 53, 0.0) ==
          doctest::Approx(insphere2_bound(filter_threshold(PredicateKind::Insphere, 2, PrecisionConfig(53)).to_double()).value));
    CHECK_THROWS_AS(rho_with_epsilon(2, -1.0, 0.0), std::domain_error);
  }

  TEST_CASE("constants table") {
    const BoundTable t2 = bound_table(2);
    CHECK_FALSE(t2.phi.has_value());
    REQUIRE(t2.chi.has_value());
    CHECK(*t2.chi == doctest::Approx(pi * std::sqrt(2.0)));
    const BoundTable t3 = bound_table(3);
    REQUIRE(t3.epsilon_coefficient.has_value());
    CHECK(*t3.epsilon_coefficient == Dyadic(13));
    CHECK(*t3.ops == 14);
    CHECK_FALSE(bound_table(9).epsilon_coefficient.has_value());

    const std::string csv = constants_to_csv({bound_table(1), bound_table(9)});
    std::istringstream in(csv);
    std::string header, first, second, extra;
    std::getline(in, header);
    std::getline(in, first);
    std::getline(in, second);
    CHECK(header == "delta,sigma,psi,k,tau,theta,phi,chi,alpha,beta,epsilon_coefficient,epsilon_at_b53,rho_at_b53,ops");
    CHECK(first.rfind("1,1,1,", 0) == 0);
    CHECK(second.find(",,,,") != std::string::npos);
    CHECK_FALSE(std::getline(in, extra));
    CHECK(constants_to_json({bound_table(3)}).find("\"delta\": 3") != std::string::npos);
  }
}
