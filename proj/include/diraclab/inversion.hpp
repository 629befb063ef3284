#pragma once

// Inversion in the unit sphere, y = x/|x|^2, and the matrix fields that carry
// (alpha.p + Q) psi = 0 on |x| > 1 to (alpha.p + Z(y)) Psi = 0 on 0 < |y| < 1:
//
//   beta_k(y) = sum_j alpha_j (delta_jk - 2 w_j w_k),   w = y/|y|
//   X(y)      = diag(X2, X2),  X2 = [ i w3, w2 + i w1 ; -w2 + i w1, -i w3 ] = i sigma.w
//   Y(y)      = sum_k alpha_k X^{-1} (-i d_k X)
//   Z(y)      = Y - |y|^{-2} X^{-1} Q(y/|y|^2) X
//   Z1(y)     = Z - 2i |y|^{-2} (alpha.y)
//
// with psi~(y) = psi(y/|y|^2) = -X(y) Psi(y).

#include "diraclab/dirac_ops.hpp"
#include "diraclab/potential.hpp"

#include <array>
#include <cstdint>
#include <string>

namespace diraclab {

namespace detail {
template <typename Real>
void check_nonzero(const Vector3<Real>& y) {
  if (!(y.norm() > Real(0))) throw std::invalid_argument("inversion frame undefined at y = 0");
}

/// The 2x2 block formula, linear in v: [ i v3, v2 + i v1 ; -v2 + i v1, -i v3 ].
template <typename Real>
Matrix2<Real> x2_block(const Vector3<Real>& v) {
  using C = std::complex<Real>;
  Matrix2<Real> m;
  m(0, 0) = C(0, v(2));
  m(0, 1) = C(v(1), v(0));
  m(1, 0) = C(-v(1), v(0));
  m(1, 1) = C(0, -v(2));
  return m;
}

template <typename Real>
Matrix4<Real> block_diag(const Matrix2<Real>& b) {
  const Matrix2<Real> z = Matrix2<Real>::Zero();
  return from_blocks<Real>(b, z, z, b);
}
}  // namespace detail

/// beta_k(y), k = 1..3.
template <typename Real = double>
Matrix4<Real> beta_matrix(int k, const Vector3<Real>& y) {
  detail::check_index(k);
  detail::check_nonzero(y);
  const Vector3<Real> w = y / y.norm();
  Matrix4<Real> b = Matrix4<Real>::Zero();
  for (int j = 1; j <= 3; ++j) {
    const Real coeff = (j == k ? Real(1) : Real(0)) - Real(2) * w(k - 1) * w(j - 1);
    b += std::complex<Real>(coeff) * alpha<Real>(j);
  }
  return b;
}

template <typename Real = double>
Matrix4<Real> x_matrix(const Vector3<Real>& y) {
  detail::check_nonzero(y);
  return detail::block_diag<Real>(detail::x2_block<Real>(Vector3<Real>(y / y.norm())));
}

/// Y(y) from the analytic derivative d_k w_j = (delta_jk - w_j w_k)/|y| of the X entries.
template <typename Real = double>
Matrix4<Real> y_matrix(const Vector3<Real>& y) {
  detail::check_nonzero(y);
  const Real r = y.norm();
  const Vector3<Real> w = y / r;
  const Matrix4<Real> x_inv = x_matrix<Real>(y).adjoint();
  const std::complex<Real> minus_i(0, -1);
  Matrix4<Real> out = Matrix4<Real>::Zero();
  for (int k = 0; k < 3; ++k) {
    const Vector3<Real> dw = (Vector3<Real>::Unit(k) - w(k) * w) / r;
    const Matrix4<Real> dx = detail::block_diag<Real>(detail::x2_block<Real>(dw));
    out += alpha<Real>(k + 1) * x_inv * (minus_i * dx);
  }
  return out;
}

/// Y(y) with central differences of x_matrix (independent cross-check).
Matrix4c y_matrix_fd(const Vec3& y, double step = 1e-5);

/// Z(y) for 0 < |y| < 1.
Matrix4c z_matrix(const Vec3& y, const PotentialSpec& q);
/// Z^{(1)}(y) = Z(y) - 2i |y|^{-2} (alpha.y), for 0 < |y| < 1.
Matrix4c z1_matrix(const Vec3& y, const PotentialSpec& q);

struct InversionFrame {
  Vec3 y;
  Vec3 omega;
  std::array<Matrix4c, 3> beta;
  Matrix4c x;
  Matrix4c y_field;

  static InversionFrame at(const Vec3& y);
};

/// max_k || X^{-1} beta_k X + alpha_k || (spectral norm).
double verify_diagonalization(const Vec3& y);
/// max_{j,k} || {beta_j, beta_k} - 2 delta_jk I ||.
double verify_beta_clifford(const Vec3& y);

struct FrameSweepReport {
  std::size_t samples = 0;
  double unitarity = 0;          // max ||X^dagger X - I||
  double diagonalization = 0;    // max verify_diagonalization
  double beta_clifford = 0;      // max verify_beta_clifford
  double beta_hermitian = 0;     // max ||beta_k - beta_k^dagger||
  double scale_invariance = 0;   // max over beta, X of ||M(2y) - M(y)||
  double y_homogeneity = 0;      // max over lambda in {0.5, 2, 10} of ||Y(lambda y) - Y(y)/lambda||
  double y_fd_relative = 0;      // max ||Y - Y_fd|| / ||Y||
};

/// Seeded sweep over random y in [-1,1]^3 \ {|y| < 0.05}.
FrameSweepReport verify_frames(std::size_t samples, std::uint64_t seed);

/// Psi(y) = -X(y)^{-1} psi(y/|y|^2), evaluated exactly from a closed-form psi.
SpinorRule pullback_rule(const SpinorRule& psi);

/// Psi = -X^{-1} (invert_resample psi) for a sampled psi on exterior_annulus(R).
ResampleResult transform_field(const SpinorField& psi, const GridSpec& target);

struct IdentityReport {
  std::string identity;
  double relative_error = 0;  // ||LHS - RHS||_2 / ||LHS||_2 on the safe sub-mask
  double max_error = 0;
  double mean_error = 0;
  std::size_t samples = 0;
  std::string excluded_layer;
};

struct TransformIdentityOptions {
  GridSpec exterior{4.0, 64};
  GridSpec ball{1.125, 64};  // a little wider than B_1 so stencils reach |y| = 1
  double outer_radius = 4.0;
  DerivativeMethod method{DerivativeKind::centered_fd4};
  int layer_cells = 3;  // excluded layer width in ball-grid cells at |y| = 1/R and |y| = 1

  /// Both grids at N points, ball half-width 1 + 8/N, exterior box [-R, R]^3.
  static TransformIdentityOptions at_resolution(int points, double outer_radius = 4.0);
};

/// Checks M{(alpha.p) psi}(y) = |y|^2 X(y) { (alpha.p) Psi + Y Psi }.
/// LHS: alpha.p of psi on the exterior grid, resampled by inversion.
/// RHS: Psi from the closed-form pullback, differentiated on the ball grid.
IdentityReport verify_transform_identity(const SpinorRule& psi, const TransformIdentityOptions& options = {});

/// (int_{annulus} |psi|^p dx, int_{ball shell} |psi~|^p |y|^{-6} dy).
std::pair<double, double> jacobian_check(const SpinorField& psi, const GridSpec& ball, double p);

struct WeakEquationReport {
  double strong_residual = 0;            // ||(alpha.p)Psi + Z Psi|| / ||Psi|| on the safe sub-mask
  std::vector<double> weak_pairings;     // |<residual, Phi_i>| / (||Phi_i|| ||Psi||)
  std::size_t samples = 0;
  std::string excluded_layer;
};

/// Strong and weak residuals of (alpha.p + Z) Psi = 0 on a punctured-ball field.
WeakEquationReport verify_weak_equation(const SpinorField& big_psi, const PotentialSpec& q, int test_functions,
                                        std::uint64_t seed = 1, int layer_cells = 3,
                                        DerivativeMethod method = {DerivativeKind::centered_fd4});

}  // namespace diraclab
