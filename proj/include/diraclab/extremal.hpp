#pragma once

// Dirac-Sobolev type inequalities on the unit ball, evaluated on cutoff-Gaussian
// trial spinors, and a seeded derivative-free search for their largest ratios.
//
//   dsineq: ||f||_{q,inf} <= C ||(alpha.p)f||_p^theta ||f||_{B^{theta/(theta-1)}}^{1-theta},  theta = p/q
//   cor1:   ||f||_k       <= C ||(alpha.p)f||_p^theta ||f||_r^{1-theta},   r = 3(q/p - 1) in [1, p]
//   cor2:   ||f||_k       <= C ||(alpha.p)f||_p,                          k in [1, p(p+3)/3)

#include "diraclab/norms.hpp"
#include "diraclab/parallel.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace diraclab {

struct Bump {
  Vec3 center = Vec3::Zero();
  double width = 1.0;  // a in exp(-a |x - c|^2)
  Spinor4c direction = Spinor4c::Unit(0);
  double amplitude = 1.0;
};

struct TrialParams {
  std::vector<Bump> bumps;
  double sharpness = 1.0;  // gamma in eta(r) = exp(-gamma / (1 - r^2))

  /// Flat real encoding used for lexicographic tie-breaks and the simplex search.
  std::vector<double> flatten() const;
};

/// Throws std::invalid_argument unless 1 <= m <= 4, |c_i| <= 0.9, a_i > 0, |u_i| = 1, gamma > 0.
void validate_trial(const TrialParams& params);

/// f(x) = sum_i b_i u_i exp(-a_i |x - c_i|^2) eta(|x|) on the unit_ball mask.
SpinorField build_trial(const TrialParams& params, const GridSpec& grid);

/// Seeded random trial: m in 1..4, a log-uniform in [1, 20], |c| <= 0.6, gamma in [0.5, 2].
TrialParams random_trial(std::uint64_t seed, std::uint64_t index);

enum class InequalityVariant { dsineq, cor1, cor2 };
std::string to_string(InequalityVariant v);
InequalityVariant parse_variant(const std::string& name);

struct InequalityParams {
  InequalityVariant variant = InequalityVariant::dsineq;
  double p = 2.0;
  double q = 4.0;  // unused by cor2
  double k = 2.0;  // unused by dsineq
};

/// Checks the variant's admissible range; messages quote the violated range.
void validate_inequality(const InequalityParams& params);

struct InequalityOptions {
  DerivativeMethod method{DerivativeKind::spectral_periodic};
  BesovOptions besov{1e-3, 1e1, 16};
};

struct InequalityRecord {
  InequalityVariant variant = InequalityVariant::dsineq;
  double p = 0, q = 0, k = 0, r = 0, theta = 0;
  double lhs = 0, rhs = 0, ratio = 0;
  int grid_points = 0;
  double half_width = 0;
  std::vector<std::string> warnings;
};

InequalityRecord inequality_ratio(const SpinorField& f, const InequalityParams& params,
                                  const InequalityOptions& options = {});

struct SearchTraceEntry {
  int evaluations = 0;
  double best_ratio = 0;
  std::string phase;  // "random" or "simplex"
};

struct SearchResult {
  TrialParams best_params;
  InequalityRecord best;
  std::vector<InequalityRecord> records;  // every evaluation, in evaluation order
  std::vector<SearchTraceEntry> trace;
};

struct SearchOptions {
  int budget = 200;
  std::uint64_t seed = 1;
  GridSpec grid{1.0, 32};
  InequalityOptions inequality;
  int random_batch = 60;  // random trials per cycle
  int refine_starts = 5;  // best starts refined per cycle
  int refine_evaluations = 40;
};

/// Cycles of seeded random trials followed by Nelder-Mead refinement of the best
/// starts. The evaluation sequence does not depend on the budget (it is truncated),
/// so the best ratio is nondecreasing in the budget, and it does not depend on the
/// thread count. The result is a lower bound on the best constant at this grid.
SearchResult maximize_ratio(const InequalityParams& params, const SearchOptions& options,
                            const WorkerPool& pool = WorkerPool(1));

/// Gaussian wave packets u exp(i k.x) exp(-|x|^2 / (2 sigma^2)), k log-spaced.
std::vector<SpinorField> wave_packet_suite(const GridSpec& grid, int count, double k_min, double k_max,
                                           std::uint64_t seed = 1);

struct LemmaFitReport {
  double p = 0;
  std::vector<double> t_grid;
  std::vector<double> difference_envelope;  // max_f ||f - P_t f||_p / ||(alpha.p) f||_p
  double difference_slope = 0;
  double fitted_constant = 0;               // max_{f,t} ||f - P_t f||_p / (sqrt(t) ||(alpha.p) f||_p)
  std::vector<double> s_grid;
  std::vector<double> smoothing_envelope;   // max_g ||(alpha.p) P_s g||_{p'} / ||g||_{p'}
  double smoothing_slope = 0;
};

/// Proof-quantity fits over a suite of full-box fields. (alpha.p) P_s g is evaluated as
/// P_s (alpha.p) g, which is exact for the whole-space semigroup.
LemmaFitReport lemma_constant_fit(const std::vector<SpinorField>& suite, double p, const std::vector<double>& t_grid,
                                  const std::vector<double>& s_grid, const WorkerPool& pool = WorkerPool(1));

/// n geometric points on [lo, hi].
std::vector<double> geometric_grid(double lo, double hi, int n);

/// OLS slope of log y against log x.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace diraclab
