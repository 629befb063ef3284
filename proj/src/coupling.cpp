#include "diraclab/coupling.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>

namespace diraclab {

DiracOperator::DiracOperator(const GridSpec& grid, const PotentialSpec& q, double t)
    : grid_(grid), t_(t), q_(grid.cell_count()), dirac_(grid, true) {
  for (std::size_t c = 0; c < grid.cell_count(); ++c) q_[c] = q.regularized(grid.position(c));
}

void DiracOperator::apply(const SpinorValues& in, SpinorValues& out) const {
  dirac_.apply(in, out);
  if (t_ == 0.0) return;
  for (std::size_t c = 0; c < q_.size(); ++c) {
    const auto i = static_cast<Eigen::Index>(c);
    out.col(i) += t_ * (q_[c] * in.col(i));
  }
}

void DiracOperator::apply_adjoint(const SpinorValues& in, SpinorValues& out) const {
  dirac_.apply(in, out);
  if (t_ == 0.0) return;
  for (std::size_t c = 0; c < q_.size(); ++c) {
    const auto i = static_cast<Eigen::Index>(c);
    out.col(i) += t_ * (q_[c].adjoint() * in.col(i));
  }
}

void DiracOperator::apply_normal(const SpinorValues& in, SpinorValues& out, double shift) const {
  SpinorValues tmp;
  apply(in, tmp);
  apply_adjoint(tmp, out);
  if (shift != 0.0) out += shift * in;
}

void DiracOperator::precondition(const SpinorValues& in, SpinorValues& out, double s) const {
  dirac_.apply_resolvent(in, out, s);
}

double DiracOperator::floor() const { return dirac_.smallest_wavenumber(); }

namespace {

std::complex<double> dotc(const SpinorValues& a, const SpinorValues& b) {
  return (a.array().conjugate() * b.array()).sum();
}

double norm2(const SpinorValues& a) { return a.squaredNorm(); }

// Preconditioned CG for (H^dagger H + mu) x = b. Returns the iteration count; x holds the initial guess.
int pcg(const DiracOperator& op, double mu, double s, const SpinorValues& b, SpinorValues& x, double tol,
        int max_iter, bool& ok) {
  SpinorValues r, z, p, ap;
  op.apply_normal(x, ap, mu);
  r = b - ap;
  const double bnorm = std::sqrt(norm2(b));
  ok = true;
  if (std::sqrt(norm2(r)) <= tol * bnorm) return 0;
  op.precondition(r, z, s);
  p = z;
  std::complex<double> rz = dotc(r, z);
  for (int it = 1; it <= max_iter; ++it) {
    op.apply_normal(p, ap, mu);
    const std::complex<double> alpha = rz / dotc(p, ap);
    x += alpha * p;
    r -= alpha * ap;
    if (std::sqrt(norm2(r)) <= tol * bnorm) return it;
    op.precondition(r, z, s);
    const std::complex<double> rz_new = dotc(r, z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  ok = false;
  return max_iter;
}

void orthonormalize(std::vector<SpinorValues>& v) {
  for (int pass = 0; pass < 2; ++pass)
    for (std::size_t i = 0; i < v.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) v[i] -= dotc(v[j], v[i]) * v[j];
      v[i] /= std::sqrt(norm2(v[i]));
    }
}

struct BlockResult {
  std::vector<double> ritz;  // lowest `block` eigenvalues of V^dagger H^dagger H V, ascending
  int outer = 0;
  int inner = 0;
  bool converged = false;
};

// Inverse iteration on H^dagger H + mu, accelerated by Rayleigh-Ritz over the span of
// all inverse iterates kept so far (restarted from the current Ritz vectors when full).
BlockResult block_inverse_iteration(const DiracOperator& op, const ScanOptions& opt, int block) {
  const auto cols = static_cast<Eigen::Index>(op.grid().cell_count());
  const std::size_t max_basis = static_cast<std::size_t>(std::max(4 * block, block + 8));
  std::vector<SpinorValues> ritz(static_cast<std::size_t>(block));
  for (int b = 0; b < block; ++b) {
    std::mt19937_64 rng(opt.seed + static_cast<std::uint64_t>(b));
    std::normal_distribution<double> g;
    ritz[b].resize(4, cols);
    for (Eigen::Index i = 0; i < ritz[b].size(); ++i) ritz[b].data()[i] = {g(rng), g(rng)};
  }
  orthonormalize(ritz);
  const double s = opt.preconditioner_shift > 0 ? opt.preconditioner_shift : std::max(op.floor() * op.floor(), 1e-12);

  std::vector<SpinorValues> basis, hbasis;
  auto add_to_basis = [&](SpinorValues y) {
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& v : basis) y -= dotc(v, y) * v;
    const double n = std::sqrt(norm2(y));
    if (!(n > 1e-10)) return;
    y /= n;
    SpinorValues hy;
    op.apply(y, hy);
    basis.push_back(std::move(y));
    hbasis.push_back(std::move(hy));
  };

  BlockResult res;
  std::vector<double> theta(static_cast<std::size_t>(block), 0.0);
  bool first = true;
  for (int outer = 1; outer <= opt.max_outer; ++outer) {
    if (basis.size() + static_cast<std::size_t>(block) > max_basis) {
      basis.clear();
      hbasis.clear();
      for (auto& r : ritz) add_to_basis(r);
    }
    bool inner_ok = true;
    for (int b = 0; b < block; ++b) {
      SpinorValues y = ritz[b] / (theta[b] + opt.shift);
      bool ok;
      res.inner += pcg(op, opt.shift, s, ritz[b], y, opt.inner_tolerance, opt.max_inner, ok);
      inner_ok = inner_ok && ok;
      add_to_basis(std::move(y));
    }
    const auto m = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXcd gram(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = i; j < m; ++j) {
        gram(i, j) = dotc(hbasis[i], hbasis[j]);
        gram(j, i) = std::conj(gram(i, j));
      }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
    const int keep = static_cast<int>(std::min<Eigen::Index>(block, m));
    std::vector<double> next(static_cast<std::size_t>(block), theta.back());
    for (int b = 0; b < keep; ++b) {
      ritz[b].setZero(4, cols);
      for (Eigen::Index j = 0; j < m; ++j) ritz[b] += es.eigenvectors()(j, b) * basis[j];
      next[b] = std::max(es.eigenvalues()(b), 0.0);
    }
    res.outer = outer;
    double change = 0;
    for (int b = 0; b < block; ++b)
      change = std::max(change, std::abs(next[b] - theta[b]) / std::max(next[b], 1e-12));
    theta = next;
    if (!first && inner_ok && change <= opt.outer_tolerance) {
      res.converged = true;
      break;
    }
    first = false;
  }
  res.ritz = theta;
  return res;
}

}  // namespace

ScanRecord smallest_singular_value(const PotentialSpec& q, double t, const ScanOptions& options) {
  const DiracOperator op(options.grid, q, t);
  const BlockResult r = block_inverse_iteration(op, options, std::max(1, options.block));
  ScanRecord rec;
  rec.t = t;
  rec.sigma_min = std::sqrt(r.ritz.front());
  rec.iterations = r.outer;
  rec.inner_iterations = r.inner;
  rec.converged = r.converged;
  return rec;
}

std::vector<ScanRecord> coupling_scan(const PotentialSpec& q, const std::vector<double>& t_grid,
                                      const ScanOptions& options, const WorkerPool& pool) {
  std::vector<ScanRecord> out(t_grid.size());
  pool.parallel_for(t_grid.size(), [&](std::size_t i) { out[i] = smallest_singular_value(q, t_grid[i], options); });
  return out;
}

double potential_sup(const PotentialSpec& q, const GridSpec& grid) {
  double m = 0;
  for (std::size_t c = 0; c < grid.cell_count(); ++c) m = std::max(m, operator_norm(q.regularized(grid.position(c))));
  return m;
}

ScanSummary summarize_scan(const std::vector<ScanRecord>& records, const PotentialSpec& q, const ScanOptions& options) {
  ScanSummary s;
  s.floor = smallest_singular_value(PotentialSpec::zero(), 0.0, options).sigma_min;
  const double qmax = potential_sup(q, options.grid);
  bool in_run = false;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (!r.converged) ++s.unconverged;
    const bool dip = r.sigma_min < 0.5 * s.floor;
    if (dip) {
      s.dips.push_back(r.t);
      if (in_run)
        s.runs.back().second = r.t;
      else
        s.runs.emplace_back(r.t, r.t);
    }
    in_run = dip;
    if (i > 0) {
      const double excess = std::abs(r.sigma_min - records[i - 1].sigma_min) - qmax * std::abs(r.t - records[i - 1].t);
      s.max_jump_excess = std::max(s.max_jump_excess, excess);
    }
  }
  return s;
}

NullityEstimate nullity_estimate(const PotentialSpec& q, double t, double threshold, const ScanOptions& options,
                                 int block) {
  if (block < 1) throw std::invalid_argument("nullity block size must be positive");
  NullityEstimate n;
  n.threshold = threshold;
  const DiracOperator op(options.grid, q, t);
  const BlockResult r = block_inverse_iteration(op, options, block);
  for (double theta : r.ritz) {
    const double sv = std::sqrt(theta);
    n.singular_values.push_back(sv);
    if (sv < threshold) ++n.count;
  }
  n.saturated = n.count == block;
  return n;
}

}  // namespace diraclab
