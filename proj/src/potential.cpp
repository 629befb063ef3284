#include "diraclab/potential.hpp"

#include <stdexcept>

namespace diraclab {

namespace {

Eigen::Vector2cd loss_yau_half(const Vec3& x) {
  Eigen::Vector2cd u0(1.0, 0.0);
  const Matrix2c m = Matrix2c::Identity() + std::complex<double>(0, 1) * sigma_dot(x);
  return m * u0;
}

}  // namespace

Spinor4c loss_yau_spinor(const Vec3& x) {
  const double r2 = x.squaredNorm();
  const Eigen::Vector2cd w = loss_yau_half(x) * std::pow(1.0 + r2, -1.5);
  Spinor4c psi;
  psi << w, w;
  return psi;
}

Vec3 loss_yau_vector_potential(const Vec3& x) {
  const Eigen::Vector2cd w = loss_yau_half(x);
  const double w2 = w.squaredNorm();
  Vec3 v;
  for (int j = 0; j < 3; ++j) v(j) = (w.adjoint() * pauli(j + 1) * w)(0).real();
  return (-3.0 / ((1.0 + x.squaredNorm()) * w2)) * v;
}

Matrix4c loss_yau_potential(const Vec3& x) {
  const Matrix2c s = sigma_dot(loss_yau_vector_potential(x));
  const Matrix2c z = Matrix2c::Zero();
  return from_blocks<double>(s, z, z, s);
}

PotentialSpec PotentialSpec::zero() {
  return {Kind::custom, "zero", [](const Vec3&) { return Matrix4c::Zero().eval(); }, true};
}

PotentialSpec PotentialSpec::loss_yau() { return {Kind::loss_yau, "loss_yau", loss_yau_potential, true}; }

PotentialSpec PotentialSpec::coulomb_like(double c, const Matrix4c& m) {
  const bool herm = (m - m.adjoint()).cwiseAbs().maxCoeff() == 0.0;
  return {Kind::coulomb_like, "coulomb_like", [c, m](const Vec3& x) { return ((c / x.norm()) * m).eval(); }, herm};
}

PotentialSpec PotentialSpec::custom(std::string name, std::function<Matrix4c(const Vec3&)> q, bool hermitian) {
  return {Kind::custom, std::move(name), std::move(q), hermitian};
}

Matrix4c PotentialSpec::regularized(const Vec3& x) const {
  if (kind_ == Kind::loss_yau) return (*this)(x);
  const double r = x.norm();
  return r < 1.0 ? (*this)(x / r) : (*this)(x);
}

PotentialSpec PotentialSpec::scaled(double s) const {
  PotentialSpec p = *this;
  p.scale_ *= s;
  return p;
}

PotentialSpec parse_potential(const std::string& name) {
  if (name == "loss_yau") return PotentialSpec::loss_yau();
  if (name == "zero") return PotentialSpec::zero();
  if (name == "coulomb") return PotentialSpec::coulomb_like(1.0, Matrix4c::Identity());
  throw std::invalid_argument("unknown potential '" + name + "' (expected loss_yau, coulomb or zero)");
}

}  // namespace diraclab
