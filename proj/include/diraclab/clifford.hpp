#pragma once

// Pauli and Dirac matrices in the standard (chiral off-diagonal) representation
//
//   alpha_j = [ 0     sigma_j ]
//             [ sigma_j  0    ]
//
// All builders are templated on the real scalar; the aliases at the bottom fix
// double precision, which is what the rest of the library uses.

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace diraclab {

template <typename Real>
using Matrix2 = Eigen::Matrix<std::complex<Real>, 2, 2>;
template <typename Real>
using Matrix4 = Eigen::Matrix<std::complex<Real>, 4, 4>;
template <typename Real>
using Spinor = Eigen::Matrix<std::complex<Real>, 4, 1>;
template <typename Real>
using Vector3 = Eigen::Matrix<Real, 3, 1>;

using Matrix2c = Matrix2<double>;
using Matrix4c = Matrix4<double>;
using Spinor4c = Spinor<double>;
using Vec3 = Vector3<double>;

namespace detail {
inline void check_index(int j) {
  if (j < 1 || j > 3)
    throw std::invalid_argument("Clifford index must be in {1,2,3}, got " + std::to_string(j));
}
}  // namespace detail

/// sigma_j, j = 1..3. Entries are exactly 0, +-1, +-i.
template <typename Real = double>
Matrix2<Real> pauli(int j) {
  detail::check_index(j);
  using C = std::complex<Real>;
  Matrix2<Real> s = Matrix2<Real>::Zero();
  switch (j) {
    case 1:
      s(0, 1) = C(1, 0);
      s(1, 0) = C(1, 0);
      break;
    case 2:
      s(0, 1) = C(0, -1);
      s(1, 0) = C(0, 1);
      break;
    default:
      s(0, 0) = C(1, 0);
      s(1, 1) = C(-1, 0);
      break;
  }
  return s;
}

/// Assemble a 4x4 matrix from its four 2x2 blocks (row-major block order).
template <typename Real>
Matrix4<Real> from_blocks(const Matrix2<Real>& b11, const Matrix2<Real>& b12,
                          const Matrix2<Real>& b21, const Matrix2<Real>& b22) {
  Matrix4<Real> m;
  m.template block<2, 2>(0, 0) = b11;
  m.template block<2, 2>(0, 2) = b12;
  m.template block<2, 2>(2, 0) = b21;
  m.template block<2, 2>(2, 2) = b22;
  return m;
}

/// The 2x2 block at 1-based block position (row, col).
template <typename Real>
Matrix2<Real> block_of(const Matrix4<Real>& m, int row, int col) {
  if (row < 1 || row > 2 || col < 1 || col > 2)
    throw std::invalid_argument("block position must be in {1,2}x{1,2}");
  return m.template block<2, 2>(2 * (row - 1), 2 * (col - 1));
}

template <typename Real = double>
Matrix4<Real> alpha(int j) {
  const Matrix2<Real> s = pauli<Real>(j);
  const Matrix2<Real> z = Matrix2<Real>::Zero();
  return from_blocks<Real>(z, s, s, z);
}

/// Sum_j v_j alpha_j for a real or complex 3-vector.
template <typename Derived>
auto alpha_dot(const Eigen::MatrixBase<Derived>& v) {
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  Matrix4<Real> m = Matrix4<Real>::Zero();
  for (int j = 0; j < 3; ++j) m += std::complex<Real>(v(j)) * alpha<Real>(j + 1);
  return m;
}

/// Sum_j v_j sigma_j.
template <typename Derived>
auto sigma_dot(const Eigen::MatrixBase<Derived>& v) {
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  Matrix2<Real> m = Matrix2<Real>::Zero();
  for (int j = 0; j < 3; ++j) m += std::complex<Real>(v(j)) * pauli<Real>(j + 1);
  return m;
}

/// AB + BA.
template <typename DerivedA, typename DerivedB>
auto anticommutator(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Plain = typename DerivedA::PlainObject;
  Plain r = a * b + b * a;
  return r;
}

/// Spectral norm (largest singular value). Throws on non-finite input.
double operator_norm(const Matrix4c& m);

/// Entrywise max |A - B|; used for all identity checks.
template <typename DerivedA, typename DerivedB>
double max_entry_error(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

struct CliffordReport {
  double anticommutator_error = 0;  // max_jk |{a_j,a_k} - 2 delta_jk I|
  double hermitian_error = 0;
  double unitary_error = 0;
};

/// Checks the anticommutation, Hermiticity and unitarity of alpha_1..3.
CliffordReport verify_clifford();

}  // namespace diraclab
