#pragma once

// Zero modes of alpha.p + Q on the exterior of the unit ball: the explicit
// Loss-Yau pair, residuals, weighted integrability tails and decay fits.

#include "diraclab/inversion.hpp"

#include <map>
#include <string>
#include <vector>

namespace diraclab {

struct LossYauMode {
  SpinorRule psi;
  PotentialSpec potential;
};

LossYauMode loss_yau_mode();

struct LossYauOracleReport {
  double magnitude_error = 0;        // max | |psi| - sqrt(2)/(1+r^2) | over the coarse grid
  std::vector<int> grid_points;      // refinement levels, box [-R, R]^3 on 1 < |x| < R
  std::vector<double> residuals;     // ||(alpha.p + Q) psi|| / ||psi|| per level (centered_fd4)
  double potential_ray_slope = 0;    // log-log slope of ||Q|| along a ray, r in [10, 100]
  double potential_decay_bound = 0;  // max ||Q(x)|| |x| over sampled |x| >= 1
  bool passed = false;
};

/// Finite-difference oracle accepting the Loss-Yau construction: the residual must
/// decrease under refinement and ||Q|| |x| must stay bounded.
LossYauOracleReport loss_yau_oracle(const std::vector<int>& grid_points = {32, 48}, double outer_radius = 6.0);

/// ||(alpha.p) psi + Q psi||_2 / ||psi||_2 on the field's mask with a 3h boundary layer removed.
double residual_norm(const SpinorField& psi, const PotentialSpec& q,
                     DerivativeMethod method = {DerivativeKind::centered_fd4});

struct TailReport {
  std::string integral;
  std::map<std::string, double> params;
  std::vector<double> radii;      // R_i
  std::vector<double> partial;    // I(R_i), integral over 1 < |x| < R_i
  std::vector<double> increments; // I(R_{i+1}) - I(R_i)
  double tail_fraction = 0;       // power-law tail beyond R_outer relative to the total (see tail_report)
  double density_slope = 0;       // fitted log-log slope of dI/dr over the last octave
  double geometric_tail_fraction = 0;  // tail from a geometric series of the last two increments
  bool increments_decreasing = false;
  std::vector<std::string> warnings;
};

struct RadialSample {
  double radius;        // exterior radius |x| the contribution belongs to
  double contribution;  // integrand times cell volume
};

/// Partial sums over |x| < R_i for R_i in {2, 4, 8, ..., R_outer}, with increments.
/// The tail beyond R_outer is extrapolated from a power law g(r) ~ r^sigma fitted to the
/// radial density dI/dr on 8 log shells of [R_outer/2, R_outer]: tail = R g(R) / (-sigma - 1).
/// The geometric-series estimate from the last two increments is also recorded; it is
/// biased high while the increment ratio is still pre-asymptotic.
TailReport tail_report(const std::string& integral, std::vector<RadialSample> samples, double outer_radius);

struct WeightedConditions {
  TailReport gradient;   // int |x|^2 |(alpha.p) psi|^2 dx over the annulus
  TailReport inverted;   // int |Psi(y)|^2 |y|^{-6} dy over 1/R_i < |y| < 1, indexed by R_i
};

WeightedConditions weighted_conditions(const SpinorField& psi, const GridSpec& ball,
                                       DerivativeMethod method = {DerivativeKind::centered_fd4});

/// phi = |x|^2 psi; partial integrals of |phi|^k |x|^{-6}. Requires k in [1, 10/3).
TailReport theorem3_check(const SpinorField& psi, double k);
/// phi = |x|^{2+t} psi; partial integrals of |phi|^s |x|^{-6}. Requires 0 < t < 11/10, s in [1, 4/3).
TailReport theorem4_check(const SpinorField& psi, double t, double s);

void validate_theorem3(double k);
void validate_theorem4(double t, double s);

struct ExponentCondition {
  bool holds = false;
  double lhs = 0;  // p ((1+t)/3 + 1/k)
};

/// p((1+t)/3 + 1/k) < 1.
ExponentCondition exponent_condition(double p, double t, double k);

enum class ShellStatistic { mean, max };

struct DecayFitReport {
  double slope = 0;
  double standard_error = 0;
  double r_min = 0, r_max = 0;
  ShellStatistic statistic = ShellStatistic::mean;
  int shells = 0;
};

/// OLS fit of log(statistic) against log(r) over bins with r_min <= r <= r_max.
DecayFitReport decay_fit(const RadialProfile& profile, double r_min, double r_max,
                         ShellStatistic statistic = ShellStatistic::mean);

/// int ||Q(x)||^3 dx over the mask, with Q regularized inside the unit ball.
double q_cubed_integral(const PotentialSpec& q, const DomainMask& region);

}  // namespace diraclab
