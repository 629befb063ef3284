#include "diraclab/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace diraclab {

Matrix4c y_matrix_fd(const Vec3& y, double step) {
  detail::check_nonzero(y);
  const Matrix4c x_inv = x_matrix(y).adjoint();
  const std::complex<double> minus_i(0, -1);
  Matrix4c out = Matrix4c::Zero();
  for (int k = 0; k < 3; ++k) {
    const Vec3 e = step * Vec3::Unit(k);
    const Matrix4c dx = (x_matrix(Vec3(y + e)) - x_matrix(Vec3(y - e))) / (2.0 * step);
    out += alpha(k + 1) * x_inv * (minus_i * dx);
  }
  return out;
}

namespace {

void check_inside_ball(const Vec3& y) {
  detail::check_nonzero(y);
  if (!(y.norm() < 1.0))
    throw std::invalid_argument("Z(y) needs 0 < |y| < 1; Q is only specified outside the unit ball");
}

}  // namespace

Matrix4c z_matrix(const Vec3& y, const PotentialSpec& q) {
  check_inside_ball(y);
  const double r2 = y.squaredNorm();
  const Matrix4c x = x_matrix(y);
  return y_matrix(y) - (1.0 / r2) * x.adjoint() * q(y / r2) * x;
}

Matrix4c z1_matrix(const Vec3& y, const PotentialSpec& q) {
  const Matrix4c z = z_matrix(y, q);
  return z - std::complex<double>(0, 2.0 / y.squaredNorm()) * alpha_dot(y);
}

InversionFrame InversionFrame::at(const Vec3& y) {
  detail::check_nonzero(y);
  InversionFrame f;
  f.y = y;
  f.omega = y / y.norm();
  for (int k = 0; k < 3; ++k) f.beta[k] = beta_matrix(k + 1, y);
  f.x = x_matrix(y);
  f.y_field = y_matrix(y);
  return f;
}

double verify_diagonalization(const Vec3& y) {
  const InversionFrame f = InversionFrame::at(y);
  double worst = 0;
  for (int k = 0; k < 3; ++k)
    worst = std::max(worst, operator_norm(f.x.adjoint() * f.beta[k] * f.x + alpha(k + 1)));
  return worst;
}

double verify_beta_clifford(const Vec3& y) {
  const InversionFrame f = InversionFrame::at(y);
  double worst = 0;
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      const Matrix4c target = (j == k ? 2.0 : 0.0) * Matrix4c::Identity();
      worst = std::max(worst, operator_norm(anticommutator(f.beta[j], f.beta[k]) - target));
    }
  return worst;
}

FrameSweepReport verify_frames(std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  FrameSweepReport r;
  r.samples = samples;
  for (std::size_t n = 0; n < samples; ++n) {
    Vec3 y;
    do {
      y = Vec3(coord(rng), coord(rng), coord(rng));
    } while (y.norm() < 0.05);
    const InversionFrame f = InversionFrame::at(y);
    const InversionFrame g = InversionFrame::at(Vec3(2.0 * y));
    r.unitarity = std::max(r.unitarity, operator_norm(f.x.adjoint() * f.x - Matrix4c::Identity()));
    r.diagonalization = std::max(r.diagonalization, verify_diagonalization(y));
    r.beta_clifford = std::max(r.beta_clifford, verify_beta_clifford(y));
    for (int k = 0; k < 3; ++k) {
      r.beta_hermitian = std::max(r.beta_hermitian, operator_norm(f.beta[k] - f.beta[k].adjoint()));
      r.scale_invariance = std::max(r.scale_invariance, operator_norm(g.beta[k] - f.beta[k]));
    }
    r.scale_invariance = std::max(r.scale_invariance, operator_norm(g.x - f.x));
    for (double lambda : {0.5, 2.0, 10.0})
      r.y_homogeneity =
          std::max(r.y_homogeneity, operator_norm(y_matrix(Vec3(lambda * y)) - f.y_field / lambda));
    r.y_fd_relative =
        std::max(r.y_fd_relative, operator_norm(f.y_field - y_matrix_fd(y)) / operator_norm(f.y_field));
  }
  return r;
}

SpinorRule pullback_rule(const SpinorRule& psi) {
  return [psi](const Vec3& y) -> Spinor4c { return -(x_matrix(y).adjoint() * psi(y / y.squaredNorm())); };
}

ResampleResult transform_field(const SpinorField& psi, const GridSpec& target) {
  if (psi.mask().kind() != MaskKind::exterior_annulus)
    throw std::invalid_argument("transform_field needs a field on exterior_annulus(R)");
  ResampleResult r = invert_resample(psi, target);
  r.field = multiply_pointwise(r.field, [](const Vec3& y) { return Matrix4c(-x_matrix(y).adjoint()); });
  return r;
}

TransformIdentityOptions TransformIdentityOptions::at_resolution(int points, double outer_radius) {
  TransformIdentityOptions o;
  o.exterior = make_grid(outer_radius, points);
  o.ball = make_grid(1.0 + 8.0 / points, points);
  o.outer_radius = outer_radius;
  return o;
}

namespace {

std::string layer_description(double inner, double outer, double width) {
  std::ostringstream s;
  s << "excluded " << inner << " < |y| < " << inner + width << " and " << outer - width << " < |y| < " << outer
    << " (width " << width << ")";
  return s.str();
}

}  // namespace

IdentityReport verify_transform_identity(const SpinorRule& psi, const TransformIdentityOptions& opt) {
  const double R = opt.outer_radius;
  const double hx = opt.exterior.spacing();
  const double hy = opt.ball.spacing();
  const int rad = std::max(1, opt.method.stencil_radius());

  // LHS: (alpha.p) psi on the exterior grid, restricted to the annulus and pulled back.
  const DomainMask wide = DomainMask::shell(opt.exterior, 1.0 - (rad + 1) * hx, R + (rad + 1) * hx);
  const SpinorField dpsi = dirac_on_domain(sample_field(opt.exterior, wide, psi), opt.method);
  const DomainMask annulus = DomainMask::exterior_annulus(opt.exterior, R);
  std::vector<std::uint8_t> cells(opt.exterior.cell_count(), 0);
  for (std::size_t c = 0; c < cells.size(); ++c) cells[c] = dpsi.mask().contains(c) && annulus.contains(c);
  const SpinorField dpsi_annulus(DomainMask::from_cells(opt.exterior, std::move(cells), MaskKind::exterior_annulus, R),
                                 dpsi.values());
  const SpinorField lhs = invert_resample(dpsi_annulus, opt.ball).field;

  // RHS: |y|^2 X {(alpha.p) Psi + Y Psi} with Psi from the exact pullback.
  const SpinorRule big_psi = pullback_rule(psi);
  const DomainMask ball_wide = DomainMask::shell(opt.ball, 1.0 / R - (rad + 1) * hy, 1.0 + (rad + 1) * hy);
  const SpinorField psi_ball = sample_field(opt.ball, ball_wide, big_psi);
  const SpinorField dbig = dirac_on_domain(psi_ball, opt.method);
  const SpinorField ybig = multiply_pointwise(psi_ball, [](const Vec3& y) { return y_matrix(y); });

  const double width = opt.layer_cells * hy;
  const DomainMask safe = DomainMask::shell(opt.ball, 1.0 / R + width, 1.0 - width)
                              .intersect(lhs.mask())
                              .intersect(dbig.mask());
  if (safe.count() < 8) throw DomainError("transform identity: safe sub-mask is degenerate");

  IdentityReport rep;
  rep.identity = "M{(alpha.p)psi} = |y|^2 X {(alpha.p)Psi + Y Psi}";
  rep.excluded_layer = layer_description(1.0 / R, 1.0, width);
  double num = 0, den = 0, sum = 0;
  for (std::size_t c = 0; c < opt.ball.cell_count(); ++c) {
    if (!safe.contains(c)) continue;
    const Vec3 y = opt.ball.position(c);
    const Spinor4c rhs = y.squaredNorm() * (x_matrix(y) * (dbig.value(c) + ybig.value(c)));
    const double e = (lhs.value(c) - rhs).norm();
    num += e * e;
    den += lhs.value(c).squaredNorm();
    sum += e;
    rep.max_error = std::max(rep.max_error, e);
    ++rep.samples;
  }
  if (!(den > 0)) throw DomainError("transform identity: left-hand side vanishes on the safe sub-mask");
  rep.relative_error = std::sqrt(num / den);
  rep.mean_error = sum / static_cast<double>(rep.samples);
  return rep;
}

std::pair<double, double> jacobian_check(const SpinorField& psi, const GridSpec& ball, double p) {
  const double exterior = quadrature(psi, p);
  const SpinorField tilde = invert_resample(psi, ball).field;
  return {exterior, quadrature(tilde, p, -6.0)};
}

namespace {

// Smooth compactly supported bump: u exp(-1/(1 - |y-c|^2/rho^2)).
struct TestSpinor {
  Vec3 center;
  double radius;
  Spinor4c direction;

  Spinor4c operator()(const Vec3& y) const {
    const double s = (y - center).squaredNorm() / (radius * radius);
    if (s >= 1.0) return Spinor4c::Zero();
    return std::exp(-1.0 / (1.0 - s)) * direction;
  }
};

}  // namespace

WeakEquationReport verify_weak_equation(const SpinorField& big_psi, const PotentialSpec& q, int test_functions,
                                        std::uint64_t seed, int layer_cells, DerivativeMethod method) {
  if (test_functions < 0) throw std::invalid_argument("test function count must be nonnegative");
  const GridSpec& grid = big_psi.grid();
  const double h = grid.spacing();
  const double eps = big_psi.mask().kind() == MaskKind::punctured_ball ? big_psi.mask().parameter() : 0.0;
  const double width = layer_cells * h;
  const double norm_psi = std::sqrt(quadrature(big_psi, 2.0));
  if (!(norm_psi > 0)) throw std::invalid_argument("verify_weak_equation needs a nonzero field");

  const SpinorField dpsi = dirac_on_domain(big_psi, method);
  const DomainMask safe = DomainMask::shell(grid, eps + width, 1.0 - width).intersect(dpsi.mask());
  if (safe.count() < 8) throw DomainError("weak equation: safe sub-mask is degenerate");

  WeakEquationReport rep;
  rep.excluded_layer = layer_description(eps, 1.0, width);
  SpinorValues residual = SpinorValues::Zero(4, static_cast<Eigen::Index>(grid.cell_count()));
  std::vector<Matrix4c> zs(grid.cell_count());
  double num = 0, den = 0;
  for (std::size_t c = 0; c < grid.cell_count(); ++c) {
    if (!safe.contains(c)) continue;
    zs[c] = z_matrix(grid.position(c), q);
    const Spinor4c res = dpsi.value(c) + zs[c] * big_psi.value(c);
    residual.col(static_cast<Eigen::Index>(c)) = res;
    num += res.squaredNorm();
    den += big_psi.value(c).squaredNorm();
    ++rep.samples;
  }
  rep.strong_residual = std::sqrt(num / den);

  // Weak form: <Psi, (alpha.p) Phi + Z^dagger Phi> with the derivative moved onto Phi.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss;
  const double lo = eps + width, hi = 1.0 - width;
  for (int i = 0; i < test_functions; ++i) {
    TestSpinor phi;
    phi.radius = std::min(0.25, 0.45 * (hi - lo));
    Vec3 dir(gauss(rng), gauss(rng), gauss(rng));
    dir.normalize();
    const double rc = lo + phi.radius + unit(rng) * (hi - lo - 2.0 * phi.radius);
    phi.center = rc * dir;
    for (int a = 0; a < 4; ++a) phi.direction(a) = {gauss(rng), gauss(rng)};
    phi.direction.normalize();
    const SpinorField sampled = sample_field(grid, DomainMask::full_box(grid), phi);
    const SpinorField dphi = apply_dirac(sampled, method);
    std::complex<double> pairing = 0;
    double phi_sq = 0;
    for (std::size_t c = 0; c < grid.cell_count(); ++c) {
      if (!safe.contains(c)) continue;
      const Spinor4c v = dphi.value(c) + zs[c].adjoint() * sampled.value(c);
      pairing += big_psi.value(c).dot(v);
      phi_sq += sampled.value(c).squaredNorm();
    }
    const double vol = grid.cell_volume();
    rep.weak_pairings.push_back(std::abs(pairing) * vol / (std::sqrt(phi_sq * vol) * norm_psi));
  }
  return rep;
}

}  // namespace diraclab
