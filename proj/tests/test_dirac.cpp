#include "diraclab/dirac_ops.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace diraclab;
using C = std::complex<double>;

namespace {

const Spinor4c u0 = Spinor4c(C(1, 0), C(0, 1), C(0.5, -0.5), C(0.25, 0)).normalized();

SpinorField plane_wave(const GridSpec& g, const Vec3& k) {
  return sample_field(g, DomainMask::full_box(g), [k](const Vec3& x) -> Spinor4c {
    return std::exp(C(0, k.dot(x))) * u0;
  });
}

SpinorField gaussian(const GridSpec& g, double s, const DomainMask& mask) {
  return sample_field(g, mask, [s](const Vec3& x) -> Spinor4c { return std::exp(-x.squaredNorm() / (4 * s)) * u0; });
}

double max_diff(const SpinorField& a, const SpinorField& b, const DomainMask& region) {
  double worst = 0;
  for (std::size_t c = 0; c < a.grid().cell_count(); ++c)
    if (region.contains(c)) worst = std::max(worst, (a.value(c) - b.value(c)).norm());
  return worst;
}

double l2(const SpinorValues& v) { return v.norm(); }

}  // namespace

TEST(Dirac, PlaneWaveIsEigenfunction) {
  const GridSpec g = make_grid(2, 16);
  const double dk = std::numbers::pi / g.half_width;
  const Vec3 k = dk * Vec3(1, -3, 2);
  const SpinorField f = plane_wave(g, k);
  const SpinorField df = apply_dirac(f, {DerivativeKind::spectral_periodic});
  const Matrix4c ak = alpha_dot(k);
  double worst = 0;
  for (std::size_t c = 0; c < g.cell_count(); ++c) worst = std::max(worst, (df.value(c) - ak * f.value(c)).norm());
  EXPECT_LE(worst, 1e-12 * k.norm());

  const SpinorField d2 = apply_dirac_squared(f, {DerivativeKind::spectral_periodic});
  EXPECT_LE(max_diff(d2, f.scaled(k.squaredNorm()), DomainMask::full_box(g)), 1e-12 * k.squaredNorm());
}

TEST(Dirac, ConstantFieldHasZeroDerivative) {
  const GridSpec g = make_grid(1, 16);
  const SpinorField f = sample_field(g, DomainMask::full_box(g), [](const Vec3&) { return u0; });
  for (auto kind : {DerivativeKind::spectral_periodic, DerivativeKind::centered_fd2, DerivativeKind::centered_fd4}) {
    const SpinorField df = apply_dirac(f, {kind});
    EXPECT_LE(df.values().cwiseAbs().maxCoeff(), 1e-12) << to_string(kind);
    EXPECT_LE(apply_dirac_squared(f, {kind}).values().cwiseAbs().maxCoeff(), 1e-10) << to_string(kind);
  }
}

TEST(Dirac, SpectralNeedsFullBox) {
  const GridSpec g = make_grid(1, 8);
  EXPECT_THROW(apply_dirac(SpinorField(DomainMask::unit_ball(g)), {DerivativeKind::spectral_periodic}),
               std::invalid_argument);
}

TEST(Dirac, FiniteDifferenceStencilShrinksMask) {
  const GridSpec g = make_grid(1, 16);
  const SpinorField f = gaussian(g, 0.1, DomainMask::full_box(g));
  EXPECT_EQ(apply_dirac(f, {DerivativeKind::centered_fd2}).mask().count(), 14u * 14u * 14u);
  EXPECT_EQ(apply_dirac(f, {DerivativeKind::centered_fd4}).mask().count(), 12u * 12u * 12u);
}

TEST(Dirac, SecondOrderAgainstSpectral) {
  const SpinorRule rule = [](const Vec3& x) -> Spinor4c { return x(0) * std::exp(-x.squaredNorm()) * Spinor4c::Unit(0); };
  // h = 5/16 is still pre-asymptotic for the x e^{-|x|^2} profile.
  std::vector<double> errs;
  for (int n : {64, 128}) {
    const GridSpec g = make_grid(5, n);
    const SpinorField f = sample_field(g, DomainMask::full_box(g), rule);
    const SpinorField fd = apply_dirac(f, {DerivativeKind::centered_fd2});
    const SpinorField sp = apply_dirac(f, {DerivativeKind::spectral_periodic});
    errs.push_back(max_diff(fd, sp, fd.mask()));
  }
  EXPECT_NEAR(errs[0] / errs[1], 4.0, 0.4);
}

TEST(Dirac, FourthOrderConverges) {
  const SpinorRule rule = [](const Vec3& x) -> Spinor4c { return x(1) * std::exp(-x.squaredNorm()) * u0; };
  std::vector<double> errs;
  for (int n : {32, 64}) {
    const GridSpec g = make_grid(5, n);
    const SpinorField f = sample_field(g, DomainMask::full_box(g), rule);
    const SpinorField fd = apply_dirac(f, {DerivativeKind::centered_fd4});
    errs.push_back(max_diff(fd, apply_dirac(f, {DerivativeKind::spectral_periodic}), fd.mask()));
  }
  EXPECT_GT(errs[0] / errs[1], 12.0);
}

TEST(Dirac, SquareIsNegativeLaplacian) {
  const GridSpec g = make_grid(5, 32);
  const SpinorField f = gaussian(g, 0.25, DomainMask::full_box(g));
  const DerivativeMethod sp{DerivativeKind::spectral_periodic};
  const SpinorField twice = apply_dirac(apply_dirac(f, sp), sp);
  EXPECT_LE(max_diff(twice, negative_laplacian(f, sp), DomainMask::full_box(g)), 1e-10);
  EXPECT_LE(max_diff(apply_dirac_squared(f, sp), negative_laplacian(f, sp), DomainMask::full_box(g)), 1e-10);
}

TEST(Dirac, AntiperiodicFloor) {
  const GridSpec g = make_grid(3, 16);
  const SpectralDirac d(g, true);
  EXPECT_NEAR(d.smallest_wavenumber(), std::sqrt(3.0) * std::numbers::pi / (2 * g.half_width), 1e-14);
  EXPECT_EQ(SpectralDirac(g, false).smallest_wavenumber(), 0.0);
}

TEST(Dirac, DirectionalSelfAdjointness) {
  // <g, (alpha.p) f> = <(alpha.p) g, f> for the spectral operator on the periodic box.
  const GridSpec g = make_grid(2, 16);
  const SpinorField f = sample_field(g, DomainMask::full_box(g), [](const Vec3& x) -> Spinor4c {
    return std::exp(-2 * x.squaredNorm()) * Spinor4c(C(1, x(0)), C(x(1), 0), C(0, x(2)), C(0.5, 0));
  });
  const SpinorField h = gaussian(g, 0.2, DomainMask::full_box(g));
  const DerivativeMethod sp{DerivativeKind::spectral_periodic};
  const C a = (h.values().conjugate().cwiseProduct(apply_dirac(f, sp).values())).sum();
  const C b = (apply_dirac(h, sp).values().conjugate().cwiseProduct(f.values())).sum();
  EXPECT_LE(std::abs(a - b), 1e-10 * std::abs(a));
}

TEST(SupNorm, Examples) {
  const GridSpec g = make_grid(1, 16);
  EXPECT_DOUBLE_EQ(sup_norm(sample_field(g, DomainMask::unit_ball(g), [](const Vec3&) { return 3.0 * u0; })), 3.0);
  const SpinorField gauss = sample_field(g, DomainMask::full_box(g), [](const Vec3& x) -> Spinor4c {
    return std::exp(-x.squaredNorm()) * Spinor4c::Unit(0);
  });
  const double c = g.center(g.points / 2);
  EXPECT_DOUBLE_EQ(sup_norm(gauss), std::exp(-3 * c * c));
  EXPECT_EQ(sup_norm(SpinorField(DomainMask::full_box(g))), 0.0);
  EXPECT_THROW(sup_norm(gauss, DomainMask::shell(g, 5, 6)), DomainError);
}

TEST(Heat, SmallTimeIsIdentity) {
  const GridSpec g = make_grid(2, 32);
  const SpinorField f = gaussian(g, 0.05, DomainMask::unit_ball(g));
  const HeatResult r = heat_semigroup(f, 1e-6);
  EXPECT_EQ(r.backend, HeatBackend::spectral_padded);
  EXPECT_LE(l2(r.field.values() - f.values()) / l2(f.values()), 1e-3);
}

TEST(Heat, GaussianOracle) {
  // e^{-|x|^2/4s} evolves to (s/(s+t))^{3/2} e^{-|x|^2/4(s+t)}.
  // The direct backend is only used for t >= 4h^2, where the kernel spans several cells.
  const GridSpec g = make_grid(3, 48);
  const double s = 0.05;
  const SpinorField f = gaussian(g, s, DomainMask::full_box(g));
  for (auto [t, backend] : {std::pair{0.005, HeatBackend::spectral_padded}, std::pair{0.005, HeatBackend::automatic},
                            std::pair{0.1, HeatBackend::direct_separable}, std::pair{0.1, HeatBackend::automatic}}) {
    const HeatResult r = heat_semigroup(f, t, backend);
    const SpinorField exact = gaussian(g, s + t, DomainMask::full_box(g)).scaled(std::pow(s / (s + t), 1.5));
    const double err = max_diff(r.field, exact, DomainMask::full_box(g)) / sup_norm(exact);
    EXPECT_LE(err, 1e-6) << "t = " << t << " backend " << static_cast<int>(backend);
  }
}

TEST(Heat, BackendChoice) {
  const GridSpec g = make_grid(1, 16);
  const SpinorField f = gaussian(g, 0.05, DomainMask::unit_ball(g));
  const double h2 = g.spacing() * g.spacing();
  EXPECT_EQ(heat_semigroup(f, 3.9 * h2).backend, HeatBackend::spectral_padded);
  EXPECT_EQ(heat_semigroup(f, 4.1 * h2).backend, HeatBackend::direct_separable);
  EXPECT_THROW(heat_semigroup(f, 0.0), std::invalid_argument);
}

TEST(Heat, MassConservation) {
  // A resolved, untruncated bump: under-resolved input rings into the padding and is cropped away.
  // L = 4 keeps the mass that physically diffuses past the box below 1e-12.
  const GridSpec g = make_grid(4, 64);
  const SpinorField f = gaussian(g, 0.05, DomainMask::full_box(g));
  for (double t : {0.001, 0.01, 0.05, 0.1}) {
    const SpinorField pf = heat_semigroup(f, t).field;
    for (int comp = 0; comp < 4; ++comp) {
      const C before = f.values().row(comp).sum(), after = pf.values().row(comp).sum();
      if (std::abs(before) == 0) continue;
      EXPECT_LE(std::abs(after - before) / std::abs(before), 1e-8) << "t = " << t << " component " << comp;
    }
  }
}

TEST(Heat, SemigroupProperty) {
  const GridSpec g = make_grid(3, 32);
  const SpinorField f = gaussian(g, 0.03, DomainMask::unit_ball(g));
  const SpinorField once = heat_semigroup(f, 0.06).field;
  const SpinorField twice = heat_semigroup(heat_semigroup(f, 0.02).field, 0.04).field;
  EXPECT_LE(max_diff(once, twice, DomainMask::full_box(g)) / sup_norm(once), 1e-6);
}

TEST(Heat, CommutesWithDirac) {
  // Needs negligible content at the Nyquist wavenumber, where the periodic derivative is zeroed.
  const GridSpec g = make_grid(3, 48);
  const SpinorField f = gaussian(g, 0.05, DomainMask::full_box(g));
  const DerivativeMethod sp{DerivativeKind::spectral_periodic};
  const SpinorField a = apply_dirac(heat_semigroup(f, 0.01).field, sp);
  const SpinorField b = heat_semigroup(apply_dirac(f, sp), 0.01).field;
  EXPECT_LE(max_diff(a, b, DomainMask::full_box(g)) / sup_norm(a), 1e-8);
}

TEST(Heat, SupContraction) {
  const GridSpec g = make_grid(1, 16);
  const SpinorField f = sample_field(g, DomainMask::unit_ball(g), [](const Vec3& x) -> Spinor4c {
    return std::cos(5 * x(0)) * u0 + x(1) * Spinor4c::Unit(2);
  });
  for (double t : {1e-4, 1e-2, 1.0, 100.0})
    EXPECT_LE(sup_norm(heat_semigroup(f, t).field), sup_norm(f) * (1 + 1e-12)) << "t = " << t;
}
