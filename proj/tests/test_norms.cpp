#include "diraclab/norms.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace diraclab;
using C = std::complex<double>;

namespace {

const double ball_volume = 4.0 * std::numbers::pi / 3.0;

SpinorField unit_on_ball(const GridSpec& g) {
  return sample_field(g, DomainMask::unit_ball(g), [](const Vec3&) -> Spinor4c { return Spinor4c::Unit(1); });
}

SpinorField bump(const GridSpec& g) {
  const Spinor4c u = Spinor4c(C(1, 0), C(0, 1), C(0, 0), C(0.5, 0)).normalized();
  return sample_field(g, DomainMask::unit_ball(g), [u](const Vec3& x) -> Spinor4c {
    return std::exp(-6 * (x - Vec3(0.2, -0.1, 0.05)).squaredNorm()) * (1 - x.squaredNorm()) * u;
  });
}

double discrete_volume(const SpinorField& f) { return f.mask().count() * f.grid().cell_volume(); }

}  // namespace

TEST(LpNorm, UnitBallConstant) {
  // Closed form on the discrete ball, and the continuum value within the boundary layer.
  for (int n : {32, 64}) {
    const SpinorField f = unit_on_ball(make_grid(1, n));
    const NormReport r = lp_norm(f, 2.0);
    EXPECT_NEAR(r.value, std::sqrt(discrete_volume(f)), 1e-12);
    EXPECT_NEAR(r.value, std::sqrt(ball_volume), 2.0466 * 2.0 / n);
    EXPECT_EQ(r.kind, "lp");
    EXPECT_EQ(r.grid_points, n);
  }
}

TEST(LpNorm, HomogeneityAndZero) {
  const SpinorField f = bump(make_grid(1, 24));
  for (double p : {1.0, 2.0, 3.5}) {
    const double base = lp_norm(f, p).value;
    EXPECT_NEAR(lp_norm(f.scaled(C(-3, 4)), p).value, 5 * base, 1e-12 * 5 * base);
  }
  EXPECT_EQ(lp_norm(SpinorField(f.mask()), 2.0).value, 0.0);
  EXPECT_THROW(lp_norm(f, 0.5), std::invalid_argument);
}

TEST(LpNorm, HolderOnFiniteMeasure) {
  // ||f||_p <= |Omega|^{1/p - 1/q} ||f||_q for p < q.
  const SpinorField f = bump(make_grid(1, 24));
  const double vol = discrete_volume(f);
  for (auto [p, q] : {std::pair{1.0, 2.0}, std::pair{2.0, 4.0}, std::pair{1.5, 3.0}})
    EXPECT_LE(lp_norm(f, p).value, std::pow(vol, 1 / p - 1 / q) * lp_norm(f, q).value * (1 + 1e-12));
}

TEST(DiracSobolev, ConstantOnFullBoxEqualsLp) {
  const GridSpec g = make_grid(1, 16);
  const SpinorField f = sample_field(g, DomainMask::full_box(g), [](const Vec3&) -> Spinor4c { return Spinor4c::Unit(0); });
  EXPECT_NEAR(dirac_sobolev_norm(f, 2.0).value, lp_norm(f, 2.0).value, 1e-12);
  EXPECT_THROW(dirac_sobolev_norm(f, 0.5), std::invalid_argument);
}

TEST(DiracSobolev, PlaneWave) {
  const GridSpec g = make_grid(1.5, 16);
  const Vec3 k = std::numbers::pi / g.half_width * Vec3(2, 0, -1);
  const Spinor4c u = Spinor4c(C(0.6, 0), C(0, 0.8), 0, 0);
  const SpinorField f = sample_field(g, DomainMask::full_box(g), [&](const Vec3& x) -> Spinor4c {
    return std::exp(C(0, k.dot(x))) * u;
  });
  const double vol = std::pow(2 * g.half_width, 3);
  EXPECT_NEAR(dirac_sobolev_norm(f, 2.0).value, std::sqrt((1 + k.squaredNorm()) * vol), 1e-10);
}

TEST(DiracSobolev, FiniteDifferenceWarnsAboutDroppedCells) {
  const SpinorField f = bump(make_grid(1, 16));
  const NormReport r = dirac_sobolev_norm(f, 2.0, {DerivativeKind::centered_fd2});
  EXPECT_FALSE(r.warnings.empty());
  EXPECT_TRUE(std::isfinite(r.value));
}

TEST(WeakLq, IndicatorOnUnitBall) {
  const SpinorField f = unit_on_ball(make_grid(1, 48));
  for (double q : {1.0, 2.0, 4.0}) {
    const double lit = weak_lq(f, q, WeakConvention::paper_literal).value;
    EXPECT_NEAR(lit, discrete_volume(f), 1e-12);
    EXPECT_NEAR(lit, ball_volume, 0.05 * ball_volume);
    EXPECT_NEAR(weak_lq(f, q).value, std::pow(lit, 1 / q), 1e-12);
  }
}

TEST(WeakLq, RootedHomogeneityAndZero) {
  const SpinorField f = bump(make_grid(1, 24));
  const double base = weak_lq(f, 4.0).value;
  EXPECT_NEAR(weak_lq(f.scaled(-2.5), 4.0).value, 2.5 * base, 1e-12 * base);
  EXPECT_EQ(weak_lq(SpinorField(f.mask()), 4.0).value, 0.0);
  EXPECT_THROW(weak_lq(f, 0.0), std::invalid_argument);
}

TEST(WeakLq, ChebyshevBound) {
  // u^q lambda(|f| >= u) <= ||f||_q^q for every u, so the weak quantity never exceeds the strong one.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uni(-1, 1);
  const GridSpec g = make_grid(1, 16);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec3 c(0.4 * uni(rng), 0.4 * uni(rng), 0.4 * uni(rng));
    const double a = 3 + 20 * (uni(rng) + 1);
    const SpinorField f = sample_field(g, DomainMask::unit_ball(g), [&](const Vec3& x) -> Spinor4c {
      return std::exp(-a * (x - c).squaredNorm()) * Spinor4c::Unit(trial % 4);
    });
    for (double q : {1.0, 2.0, 3.0}) {
      EXPECT_LE(weak_lq(f, q).value, lp_norm(f, q).value * (1 + 1e-12));
      for (double u : {0.1, 0.5, 0.9})
        EXPECT_LE(std::pow(u, q) * distribution_function(f, u), std::pow(lp_norm(f, q).value, q) * (1 + 1e-12));
    }
  }
}

TEST(DistributionFunction, StepValues) {
  const SpinorField f = unit_on_ball(make_grid(1, 16));
  EXPECT_DOUBLE_EQ(distribution_function(f, 0.5), discrete_volume(f));
  EXPECT_DOUBLE_EQ(distribution_function(f, 1.0), discrete_volume(f));
  EXPECT_EQ(distribution_function(f, 1.0 + 1e-12), 0.0);
}

TEST(Besov, ZeroAndHomogeneity) {
  const GridSpec g = make_grid(1, 16);
  const SpinorField f = bump(g);
  const BesovOptions opt{1e-3, 1.0, 16};
  EXPECT_EQ(besov_norm(SpinorField(f.mask()), -1.0, opt).value, 0.0);
  const double base = besov_norm(f, -1.0, opt).value;
  EXPECT_GT(base, 0.0);
  EXPECT_NEAR(besov_norm(f.scaled(C(0, -3)), -1.0, opt).value, 3 * base, 1e-12 * 3 * base);
  EXPECT_THROW(besov_norm(f, 0.5, opt), std::invalid_argument);
  EXPECT_THROW(besov_norm(f, -1.0, {1.0, 0.1, 16}), std::invalid_argument);
}

TEST(Besov, TGridSelfConvergence) {
  const SpinorField f = bump(make_grid(1, 16));
  const NormReport coarse = besov_norm(f, -3.0, {1e-4, 1e2, 32});
  const NormReport fine = besov_norm(f, -3.0, {1e-4, 1e2, 64});
  EXPECT_NEAR(coarse.value, fine.value, 0.05 * fine.value);
}

TEST(Besov, BoundaryArgmaxWarns) {
  const SpinorField f = bump(make_grid(1, 16));
  // alpha = -3 makes t^{3/2} sup |P_t f| increase towards its large-t limit, so the sup sits at t_max.
  const NormReport r = besov_norm(f, -3.0, {1e-3, 1e-1, 16});
  EXPECT_DOUBLE_EQ(r.params.at("argmax_t"), 1e-1);
  EXPECT_FALSE(r.warnings.empty());
  // alpha = -1 peaks inside the grid when the grid covers the bump's time scale.
  const NormReport inner = besov_norm(f, -1.0, {1e-4, 1e2, 32});
  EXPECT_GT(inner.params.at("argmax_t"), 1e-4);
  EXPECT_LT(inner.params.at("argmax_t"), 1e2);
}

TEST(Lorentz, UnitBallConstant) {
  const SpinorField f = unit_on_ball(make_grid(1, 48));
  const double v = discrete_volume(f);
  const NormReport r = lorentz_embedding_ratio(f, 2.0, 3.0);
  EXPECT_NEAR(r.value, std::sqrt(v) / std::cbrt(v), 1e-12);
  EXPECT_NEAR(r.value, std::sqrt(ball_volume) / std::cbrt(ball_volume), 0.02);
}

TEST(Lorentz, ScaleInvarianceAndZero) {
  const SpinorField f = bump(make_grid(1, 24));
  const double base = lorentz_embedding_ratio(f, 2.0, 4.0).value;
  EXPECT_NEAR(lorentz_embedding_ratio(f.scaled(7.0), 2.0, 4.0).value, base, 1e-12 * base);
  const NormReport z = lorentz_embedding_ratio(SpinorField(f.mask()), 2.0, 4.0);
  EXPECT_TRUE(std::isinf(z.value));
  EXPECT_FALSE(z.warnings.empty());
  EXPECT_THROW(lorentz_embedding_ratio(f, 4.0, 4.0), std::invalid_argument);
}

TEST(Lorentz, BoundedByMeasureFactor) {
  // ||f||_k <= (q/(q-k))^{1/k} |Omega|^{1/k - 1/q} ||f||_{q,inf}: the layer-cake bound on a finite-measure set.
  const SpinorField f = bump(make_grid(1, 24));
  const double vol = discrete_volume(f);
  for (auto [k, q] : {std::pair{1.0, 2.0}, std::pair{2.0, 4.0}, std::pair{3.0, 10.0 / 3.0}}) {
    const double bound = std::pow(q / (q - k), 1 / k) * std::pow(vol, 1 / k - 1 / q);
    EXPECT_LE(lorentz_embedding_ratio(f, k, q).value, bound * (1 + 1e-12));
  }
}
