#include "diraclab/coupling.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace diraclab;

namespace {

ScanOptions small_options() {
  ScanOptions o;
  o.grid = make_grid(6, 16);
  return o;
}

}  // namespace

TEST(CouplingScan, FreeOperatorFloor) {
  const ScanOptions o = small_options();
  const double floor = std::sqrt(3.0) * std::numbers::pi / (2 * o.grid.half_width);
  const ScanRecord r = smallest_singular_value(PotentialSpec::zero(), 0.0, o);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.sigma_min, floor, 1e-4 * floor);
  const DiracOperator op(o.grid, PotentialSpec::zero(), 0.0);
  EXPECT_NEAR(op.floor(), floor, 1e-14);
}

TEST(CouplingScan, OperatorAdjointPairing) {
  // <g, H f> = <H^dagger g, f> for the discretized H_t.
  const ScanOptions o = small_options();
  const DiracOperator op(o.grid, PotentialSpec::loss_yau(), 0.7);
  const auto n = static_cast<Eigen::Index>(o.grid.cell_count());
  const SpinorValues f = SpinorValues::Random(4, n), g = SpinorValues::Random(4, n);
  SpinorValues hf(4, n), hg(4, n);
  op.apply(f, hf);
  op.apply_adjoint(g, hg);
  const std::complex<double> a = g.conjugate().cwiseProduct(hf).sum(), b = hg.conjugate().cwiseProduct(f).sum();
  EXPECT_LE(std::abs(a - b), 1e-10 * std::abs(a));
}

TEST(CouplingScan, LossYauDipAndControl) {
  const ScanOptions o = small_options();
  const PotentialSpec q = PotentialSpec::loss_yau();
  const std::vector<double> ts{0.0, 0.25, 0.5, 1.0};
  const auto recs = coupling_scan(q, ts, o);
  ASSERT_EQ(recs.size(), ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    EXPECT_EQ(recs[i].t, ts[i]);
    EXPECT_TRUE(recs[i].converged);
    EXPECT_GE(recs[i].sigma_min, 0.0);
  }
  EXPECT_LE(recs[3].sigma_min, 0.1 * recs[2].sigma_min);
  const ScanSummary s = summarize_scan(recs, q, o);
  for (double t : s.dips) EXPECT_GT(t, 0.5);
  EXPECT_EQ(s.unconverged, 0);
  // Perturbation bound |d sigma| <= ||Q||_inf |dt| up to solver tolerance.
  EXPECT_LE(s.max_jump_excess, 1e-3);
}

TEST(CouplingScan, ThreadCountIndependent) {
  const ScanOptions o = small_options();
  const std::vector<double> ts{0.4, 0.9, 1.1};
  const auto a = coupling_scan(PotentialSpec::loss_yau(), ts, o, WorkerPool(1));
  const auto b = coupling_scan(PotentialSpec::loss_yau(), ts, o, WorkerPool(3));
  for (std::size_t i = 0; i < ts.size(); ++i) {
    EXPECT_EQ(a[i].sigma_min, b[i].sigma_min);
    EXPECT_EQ(a[i].iterations, b[i].iterations);
  }
}

TEST(Summary, RunsAndDips) {
  const ScanOptions o = small_options();
  const double floor = std::sqrt(3.0) * std::numbers::pi / (2 * o.grid.half_width);
  std::vector<ScanRecord> recs;
  for (int i = 0; i <= 8; ++i) {
    ScanRecord r;
    r.t = 0.25 * i;
    r.sigma_min = (i == 3 || i == 4 || i == 7) ? 0.1 * floor : floor;
    r.converged = i != 5;
    recs.push_back(r);
  }
  const ScanSummary s = summarize_scan(recs, PotentialSpec::zero(), o);
  EXPECT_NEAR(s.floor, floor, 1e-4 * floor);
  EXPECT_EQ(s.dips, (std::vector<double>{0.75, 1.0, 1.75}));
  ASSERT_EQ(s.runs.size(), 2u);
  EXPECT_EQ(s.runs[0], std::make_pair(0.75, 1.0));
  EXPECT_EQ(s.unconverged, 1);
}

TEST(Nullity, FreeOperatorAndZeroThreshold) {
  const ScanOptions o = small_options();
  const double floor = std::sqrt(3.0) * std::numbers::pi / (2 * o.grid.half_width);
  EXPECT_EQ(nullity_estimate(PotentialSpec::zero(), 1.0, 0.5 * floor, o, 2).count, 0);
  EXPECT_EQ(nullity_estimate(PotentialSpec::loss_yau(), 1.0, 0.0, o, 2).count, 0);
  EXPECT_THROW(nullity_estimate(PotentialSpec::zero(), 1.0, 0.1, o, 0), std::invalid_argument);
}

TEST(Nullity, LossYauZeroMode) {
  const ScanOptions o = small_options();
  const double floor = std::sqrt(3.0) * std::numbers::pi / (2 * o.grid.half_width);
  const NullityEstimate n = nullity_estimate(PotentialSpec::loss_yau(), 1.0, 0.5 * floor, o, 2);
  EXPECT_GE(n.count, 1);
  ASSERT_FALSE(n.singular_values.empty());
  for (std::size_t i = 1; i < n.singular_values.size(); ++i) EXPECT_GE(n.singular_values[i], n.singular_values[i - 1]);
}

TEST(Potential, RegularizedInsideBall) {
  const PotentialSpec c = PotentialSpec::coulomb_like(2.0, Matrix4c::Identity());
  const Vec3 inside(0.1, 0.2, -0.1);
  EXPECT_LE((c.regularized(inside) - c(Vec3(inside.normalized()))).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_NEAR(potential_sup(c, make_grid(3, 16)), 2.0, 1e-12);
  const PotentialSpec ly = PotentialSpec::loss_yau();
  EXPECT_EQ(ly.regularized(inside), ly(inside));
  EXPECT_THROW(parse_potential("nonsense"), std::invalid_argument);
}
