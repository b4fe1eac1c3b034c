#pragma once

// Probability bounds on small determinant magnitudes for random inputs, and
// the per-dimension constants they are built from.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "filterlab/error_model.hpp"

namespace filterlab {

struct ProbBound {
  double value = 0.0;  // an upper bound; may exceed 1
  std::string regime;  // which branch or caveat applied, empty if none
};

ProbBound clamp(ProbBound b);

// Volume of the unit i-ball.
double unit_ball_volume(int i);

// k_delta = delta! (v_0 ... v_{delta-1})^2 / v_delta^(delta-1), with k_0 = 1.
double k_delta(int delta);
// sigma_delta = delta v_{delta-1}^delta / v_delta^(delta-1).
double sigma(int delta);
// The same constant as k_delta / k_{delta-1}.
double sigma_from_k(int delta);

// Determinant of points uniform in the unit ball: exact CDFs for delta = 1, 2
// and an upper bound for delta = 3.
double cdf1(double r);
double cdf2_exact(double a);
double cdf3_upper(double v);

struct Band {
  double lower = 0.0;
  double upper = 0.0;
};
// True delta = 3 CDF lies in [cdf3_upper(v) - 27 pi / 8 v^2, cdf3_upper(v)].
Band cdf3_band(double v);

ProbBound whichside_ball_bound(int delta, double v);
double psi(int delta);
ProbBound whichside_cube_bound(int delta, double v);
// alpha_delta = delta sqrt(delta)^delta / 2.
double alpha_grid(int delta);
ProbBound whichside_grid_bound(int delta, double v, double eta);

// delta = 1 insphere, |uv(v - u)| with u, v uniform in [-1, 1]; 0 <= a <= 2.
// Below 1/4: (17 cbrt(2) / 4) a^(2/3) - 5a. From 1/4: 1/2 + (5/4) cbrt(2) a^(2/3) - a,
// held at its maximum past the turning point.
ProbBound insphere1_bound(double a);
// 3 cbrt(2) a^(2/3) - 4a, kept for comparison; sampling shows it is not an upper bound.
double insphere1_alternate_high_branch(double a);
inline constexpr double insphere1_low_coefficient = 5.355;
inline constexpr double insphere1_high_coefficient = 3.78;

// delta = 2 insphere: pi sqrt(2V).
ProbBound insphere2_bound(double v);

// pa(alpha) + pb(v / alpha).
double product_split_bound(const std::function<double(double)>& pa, const std::function<double(double)>& pb,
                           double v, double alpha);

struct TauTheta {
  double tau = 0.0;
  double theta = 0.0;
};
TauTheta tau_theta(int delta);
double phi(int delta);
double chi(int delta);

// phi sqrt(W) ln(1/W) + chi sqrt(W) for delta >= 3 and 0 < W < 1. Past
// W* = psi / (e (tau + theta)) the expression turns down; the value is held at
// its peak 2 psi / sqrt(e) there. Floored at 0.
ProbBound insphere_d_bound(int delta, double w);
// Dispatches to the delta = 1, 2 and general bounds.
ProbBound insphere_bound(int delta, double w);

// beta_delta = (delta + 1) sqrt(delta / 2) sqrt(delta + delta^2)^delta.
double beta_insphere(int delta);
double insphere_grid_term(int delta, double eta);
// insphere_bound at W + beta sqrt(eta); 1 when that argument leaves the domain.
ProbBound insphere_grid_bound(int delta, double w, double eta);

// psi (epsilon(b) + alpha eta), epsilon from the rounded-evaluation analysis.
double rho(int delta, int bits, double eta);
double rho_with_epsilon(int delta, double epsilon, double eta);
// Insphere analogue: insphere_grid_bound at W = insphere epsilon(b).
double insphere_rho(int delta, int bits, double eta);

struct BoundTable {
  int delta = 0;
  double sigma = 0.0;
  double psi = 0.0;
  double k = 0.0;
  std::optional<double> tau;
  std::optional<double> theta;
  std::optional<double> phi;
  std::optional<double> chi;  // delta = 2 holds the pi sqrt(2) coefficient
  double alpha_grid = 0.0;
  double beta_insphere = 0.0;
  std::optional<Dyadic> epsilon_coefficient;  // which-side, delta <= 8
  std::optional<std::int64_t> ops;

  double rho(int bits, double eta) const;
};

BoundTable bound_table(int delta);

// One row per delta; rho and epsilon columns at b = 53 with eta = 2^-52.
std::string constants_to_csv(const std::vector<BoundTable>& rows);
std::string constants_to_json(const std::vector<BoundTable>& rows);

}  // namespace filterlab
