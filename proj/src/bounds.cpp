#include "filterlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "filterlab/format.hpp"

namespace filterlab {

namespace {

constexpr double pi = std::numbers::pi;

void require_delta(int delta, const char* what) {
  if (delta < 1) throw std::invalid_argument(std::string(what) + ": delta must be >= 1");
}

void require_nonnegative(double x, const char* what) {
  if (!(x >= 0.0)) throw std::domain_error(std::string(what) + ": argument must be >= 0");
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double sqrt_pow(double x, int n) { return std::pow(x, n / 2) * (n % 2 ? std::sqrt(x) : 1.0); }

}  // namespace

ProbBound clamp(ProbBound b) {
  b.value = std::clamp(b.value, 0.0, 1.0);
  return b;
}

double unit_ball_volume(int i) {
  if (i < 0) throw std::invalid_argument("unit_ball_volume: dimension must be >= 0");
  if (i % 2 == 0) return std::pow(pi, i / 2) / factorial(i / 2);
  const int h = (i - 1) / 2;
  return std::pow(2.0, i) * std::pow(pi, h) * factorial(h) / factorial(i);
}

double k_delta(int delta) {
  if (delta < 0) throw std::invalid_argument("k_delta: delta must be >= 0");
  if (delta == 0) return 1.0;
  double prod = 1.0;
  for (int i = 0; i < delta; ++i) prod *= unit_ball_volume(i);
  return factorial(delta) * prod * prod / std::pow(unit_ball_volume(delta), delta - 1);
}

double sigma(int delta) {
  require_delta(delta, "sigma");
  return delta * std::pow(unit_ball_volume(delta - 1), delta) / std::pow(unit_ball_volume(delta), delta - 1);
}

double sigma_from_k(int delta) {
  require_delta(delta, "sigma_from_k");
  return k_delta(delta) / k_delta(delta - 1);
}

double cdf1(double r) {
  require_nonnegative(r, "cdf1");
  return std::min(r, 1.0);
}

double cdf2_exact(double a) {
  if (!(a >= 0.0 && a <= 1.0)) throw std::domain_error("cdf2_exact: A must be in [0, 1]");
  return 6.0 / pi * a * std::sqrt(1.0 - a * a) + 2.0 * std::asin(a) / pi - 4.0 / pi * a * a * std::acos(a);
}

double cdf3_upper(double v) {
  if (!(v >= 0.0 && v <= 1.0)) throw std::domain_error("cdf3_upper: V must be in [0, 1]");
  if (v == 0.0) return 0.0;
  const double v2 = v * v;
  const double v3 = v2 * v;
  return 27.0 * pi / 16.0 * v - 9.0 * pi / 4.0 * v3 * std::log(v) + 3.0 * pi / 4.0 * v3 -
         81.0 / 8.0 * v2 * std::sqrt(1.0 - v2) + 27.0 / 4.0 * v3 * std::acos(v) - 27.0 / 8.0 * v * std::asin(v);
}

Band cdf3_band(double v) {
  const double upper = cdf3_upper(v);
  return {std::max(0.0, upper - 27.0 * pi / 8.0 * v * v), upper};
}

ProbBound whichside_ball_bound(int delta, double v) {
  require_nonnegative(v, "whichside_ball_bound");
  return {sigma(delta) * v, {}};
}

double psi(int delta) {
  require_delta(delta, "psi");
  return delta * unit_ball_volume(delta) * std::pow(unit_ball_volume(delta - 1), delta) *
         sqrt_pow(delta, delta * (delta - 1)) / std::pow(2.0, delta * delta);
}

ProbBound whichside_cube_bound(int delta, double v) {
  require_nonnegative(v, "whichside_cube_bound");
  return {psi(delta) * v, {}};
}

double alpha_grid(int delta) {
  require_delta(delta, "alpha_grid");
  return delta * sqrt_pow(delta, delta) / 2.0;
}

ProbBound whichside_grid_bound(int delta, double v, double eta) {
  require_nonnegative(v, "whichside_grid_bound");
  require_nonnegative(eta, "whichside_grid_bound");
  return {psi(delta) * (v + alpha_grid(delta) * eta), {}};
}

ProbBound insphere1_bound(double a) {
  if (!(a >= 0.0 && a <= 2.0)) throw std::domain_error("insphere1_bound: A must be in [0, 2]");
  const double c = std::cbrt(2.0);
  if (a < 0.25) return {17.0 * c / 4.0 * std::pow(a, 2.0 / 3.0) - 5.0 * a, "A < 1/4"};
  // Turning point of 1/2 + (5/4) c a^(2/3) - a.
  const double peak = 2.0 * std::pow(5.0 / 6.0, 3.0);
  const double x = std::min(a, peak);
  return {0.5 + 1.25 * c * std::pow(x, 2.0 / 3.0) - x, a > peak ? "A >= 1/4, held at peak" : "A >= 1/4"};
}

double insphere1_alternate_high_branch(double a) {
  require_nonnegative(a, "insphere1_alternate_high_branch");
  return 3.0 * std::cbrt(2.0) * std::pow(a, 2.0 / 3.0) - 4.0 * a;
}

ProbBound insphere2_bound(double v) {
  require_nonnegative(v, "insphere2_bound");
  return {pi * std::sqrt(2.0 * v), {}};
}

double product_split_bound(const std::function<double(double)>& pa, const std::function<double(double)>& pb,
                           double v, double alpha) {
  if (!(alpha > 0.0)) throw std::domain_error("product_split_bound: alpha must be > 0");
  return pa(alpha) + pb(v / alpha);
}

TauTheta tau_theta(int delta) {
  require_delta(delta, "tau_theta");
  const double d2 = static_cast<double>(delta) * delta;
  return {8.0 * d2, 4.0 * d2 * std::log(delta) + 8.0 * d2 * std::log(2.0) + 8.0 * d2 + delta};
}

double phi(int delta) {
  if (delta < 3) throw std::invalid_argument("phi: defined for delta >= 3");
  const auto [tau, theta] = tau_theta(delta);
  return std::sqrt(psi(delta) * (tau + theta));
}

double chi(int delta) {
  if (delta < 3) throw std::invalid_argument("chi: defined for delta >= 3");
  const auto [tau, theta] = tau_theta(delta);
  return phi(delta) * (1.0 - std::log((tau + theta) / psi(delta)));
}

ProbBound insphere_d_bound(int delta, double w) {
  if (delta < 3) throw std::invalid_argument("insphere_d_bound: delta must be >= 3");
  if (!(w > 0.0 && w < 1.0)) throw std::domain_error("insphere_d_bound: W must be in (0, 1)");
  const auto [tau, theta] = tau_theta(delta);
  const double p = psi(delta);
  const double peak = p / (std::numbers::e * (tau + theta));
  const double x = std::min(w, peak);
  const double value = phi(delta) * std::sqrt(x) * std::log(1.0 / x) + chi(delta) * std::sqrt(x);
  std::string regime;
  if (w > peak)
    regime = "held at peak";
  else if (w > 0.1)
    regime = "W > 0.1";
  return {std::max(0.0, value), regime};
}

ProbBound insphere_bound(int delta, double w) {
  switch (delta) {
    case 1:
      return insphere1_bound(w);
    case 2:
      return insphere2_bound(w);
    default:
      if (w == 0.0) return {0.0, {}};
      return insphere_d_bound(delta, w);
  }
}

double beta_insphere(int delta) {
  require_delta(delta, "beta_insphere");
  return (delta + 1) * std::sqrt(delta / 2.0) * sqrt_pow(delta + static_cast<double>(delta) * delta, delta);
}

double insphere_grid_term(int delta, double eta) {
  require_nonnegative(eta, "insphere_grid_term");
  return beta_insphere(delta) * std::sqrt(eta);
}

ProbBound insphere_grid_bound(int delta, double w, double eta) {
  require_nonnegative(w, "insphere_grid_bound");
  const double x = w + insphere_grid_term(delta, eta);
  const double limit = delta == 1 ? 2.0 : (delta == 2 ? std::numeric_limits<double>::infinity() : 1.0);
  if (delta >= 3 ? x >= limit : x > limit) return {1.0, "argument outside the bound's domain"};
  return insphere_bound(delta, x);
}

double rho_with_epsilon(int delta, double epsilon, double eta) {
  require_nonnegative(epsilon, "rho");
  require_nonnegative(eta, "rho");
  return psi(delta) * (epsilon + alpha_grid(delta) * eta);
}

double rho(int delta, int bits, double eta) {
  const double eps = filter_threshold(PredicateKind::WhichSide, delta, PrecisionConfig(bits)).to_double();
  return rho_with_epsilon(delta, eps, eta);
}

double insphere_rho(int delta, int bits, double eta) {
  const double eps = filter_threshold(PredicateKind::Insphere, delta, PrecisionConfig(bits)).to_double();
  return insphere_grid_bound(delta, eps, eta).value;
}

double BoundTable::rho(int bits, double eta) const { return filterlab::rho(delta, bits, eta); }

BoundTable bound_table(int delta) {
  require_delta(delta, "bound_table");
  BoundTable t;
  t.delta = delta;
  t.sigma = sigma(delta);
  t.psi = psi(delta);
  t.k = k_delta(delta);
  if (delta >= 3) {
    const auto [tau, theta] = tau_theta(delta);
    t.tau = tau;
    t.theta = theta;
    t.phi = phi(delta);
    t.chi = chi(delta);
  } else if (delta == 2) {
    t.chi = pi * std::sqrt(2.0);
  }
  t.alpha_grid = alpha_grid(delta);
  t.beta_insphere = beta_insphere(delta);
  if (delta <= 8) {
    t.epsilon_coefficient = threshold_coefficient(PredicateKind::WhichSide, delta);
    t.ops = op_count(delta);
  }
  return t;
}

namespace {

std::string opt3(const std::optional<double>& v) { return v ? format_significant(*v) : std::string(); }

}  // namespace

std::string constants_to_csv(const std::vector<BoundTable>& rows) {
  const PrecisionConfig b53(53);
  const double eta = std::ldexp(1.0, -52);
  std::ostringstream out;
  out << "delta,sigma,psi,k,tau,theta,phi,chi,alpha,beta,epsilon_coefficient,epsilon_at_b53,rho_at_b53,ops\n";
  for (const BoundTable& t : rows) {
    out << t.delta << ',' << format_significant(t.sigma) << ',' << format_significant(t.psi) << ','
        << format_significant(t.k) << ',' << opt3(t.tau) << ',' << opt3(t.theta) << ',' << opt3(t.phi) << ','
        << opt3(t.chi) << ',' << format_significant(t.alpha_grid) << ',' << format_significant(t.beta_insphere)
        << ',';
    if (t.epsilon_coefficient) {
      out << t.epsilon_coefficient->to_string() << ','
          << format_significant(filter_threshold(PredicateKind::WhichSide, t.delta, b53).to_double()) << ','
          << format_significant(t.rho(53, eta)) << ',' << *t.ops;
    } else {
      out << ",,,";
    }
    out << '\n';
  }
  return out.str();
}

std::string constants_to_json(const std::vector<BoundTable>& rows) {
  const PrecisionConfig b53(53);
  const double eta = std::ldexp(1.0, -52);
  nlohmann::json arr = nlohmann::json::array();
  for (const BoundTable& t : rows) {
    nlohmann::json j;
    j["delta"] = t.delta;
    j["sigma"] = t.sigma;
    j["psi"] = t.psi;
    j["k"] = t.k;
    j["tau"] = t.tau ? nlohmann::json(*t.tau) : nlohmann::json(nullptr);
    j["theta"] = t.theta ? nlohmann::json(*t.theta) : nlohmann::json(nullptr);
    j["phi"] = t.phi ? nlohmann::json(*t.phi) : nlohmann::json(nullptr);
    j["chi"] = t.chi ? nlohmann::json(*t.chi) : nlohmann::json(nullptr);
    j["alpha"] = t.alpha_grid;
    j["beta"] = t.beta_insphere;
    if (t.epsilon_coefficient) {
      j["epsilon_coefficient"] = t.epsilon_coefficient->to_string();
      j["epsilon_at_b53"] = filter_threshold(PredicateKind::WhichSide, t.delta, b53).to_double();
      j["rho_at_b53"] = t.rho(53, eta);
      j["ops"] = *t.ops;
    } else {
      j["epsilon_coefficient"] = nullptr;
      j["epsilon_at_b53"] = nullptr;
      j["rho_at_b53"] = nullptr;
      j["ops"] = nullptr;
      j["note"] = "epsilon is tabulated for delta <= 8 only";
    }
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

}  // namespace filterlab
