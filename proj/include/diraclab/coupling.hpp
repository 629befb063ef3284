#pragma once

// Smallest singular values of the discretized H_t = alpha.p + t Q on a periodic box.
// alpha.p is applied spectrally with antiperiodic wavenumbers, so the free operator
// has the floor |k_min| = sqrt(3) pi / (2L) and no zero mode of its own.

#include "diraclab/parallel.hpp"
#include "diraclab/potential.hpp"
#include "diraclab/dirac_ops.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace diraclab {

struct ScanRecord {
  double t = 0;
  double sigma_min = 0;
  int iterations = 0;        // outer inverse-iteration steps
  int inner_iterations = 0;  // total preconditioned CG steps
  bool converged = false;
};

struct ScanOptions {
  GridSpec grid{6.0, 32};
  int max_outer = 40;
  int max_inner = 400;
  double outer_tolerance = 1e-5;  // relative change of the smallest Ritz values
  double inner_tolerance = 1e-2;  // relative CG residual of each inverse step
  double shift = 1e-6;            // mu in (H^dagger H + mu)
  int block = 1;                  // Ritz vectors refined per step; sigma_min is the smallest
  double preconditioner_shift = 0; // s in (|k|^2 + s)^{-1}; 0 selects |k_min|^2
  std::uint64_t seed = 1;
};

/// Matrix-free H_t with Q sampled once (regularized inside the unit ball).
class DiracOperator {
 public:
  DiracOperator(const GridSpec& grid, const PotentialSpec& q, double t);

  void apply(const SpinorValues& in, SpinorValues& out) const;
  void apply_adjoint(const SpinorValues& in, SpinorValues& out) const;
  /// out = (H^dagger H + shift) in.
  void apply_normal(const SpinorValues& in, SpinorValues& out, double shift) const;
  /// Fourier preconditioner (|k|^2 + s)^{-1}.
  void precondition(const SpinorValues& in, SpinorValues& out, double s) const;

  const GridSpec& grid() const { return grid_; }
  /// The free-operator floor |k_min|.
  double floor() const;

 private:
  GridSpec grid_;
  double t_;
  std::vector<Matrix4c> q_;
  SpectralDirac dirac_;
};

/// sigma_min(H_t) by inverse iteration on H^dagger H + mu with a preconditioned CG inner solve.
ScanRecord smallest_singular_value(const PotentialSpec& q, double t, const ScanOptions& options);

/// One record per t, in t-grid order. Each t is solved independently from a
/// seed-derived start, so the output does not depend on the thread count.
std::vector<ScanRecord> coupling_scan(const PotentialSpec& q, const std::vector<double>& t_grid,
                                      const ScanOptions& options, const WorkerPool& pool = WorkerPool(1));

struct ScanSummary {
  double floor = 0;                       // sigma_min for Q = 0 (exact |k_min| on this grid)
  std::vector<double> dips;               // t with sigma_min < floor / 2
  std::vector<std::pair<double, double>> runs;  // contiguous dip runs as (t_first, t_last)
  int unconverged = 0;
  double max_jump_excess = 0;             // max over steps of |dsigma| - ||Q||_inf |dt|
};

ScanSummary summarize_scan(const std::vector<ScanRecord>& records, const PotentialSpec& q, const ScanOptions& options);

struct NullityEstimate {
  int count = 0;
  std::vector<double> singular_values;  // Ritz estimates of the block, ascending
  double threshold = 0;
  bool saturated = false;               // every block vector fell below the threshold
};

/// Counts singular values of H_t below `threshold` with block inverse subspace iteration.
NullityEstimate nullity_estimate(const PotentialSpec& q, double t, double threshold, const ScanOptions& options,
                                 int block = 4);

/// max over the grid of ||Q_regularized(x)||.
double potential_sup(const PotentialSpec& q, const GridSpec& grid);

}  // namespace diraclab
