#pragma once

#include "diraclab/clifford.hpp"

#include <functional>
#include <string>

namespace diraclab {

/// A 4x4 matrix potential Q(x), specified on the exterior of the unit ball.
class PotentialSpec {
 public:
  enum class Kind { loss_yau, coulomb_like, custom };

  static PotentialSpec zero();
  /// The magnetic potential carrying the explicit zero mode (see zero_mode.hpp).
  static PotentialSpec loss_yau();
  /// (c/|x|) M.
  static PotentialSpec coulomb_like(double c, const Matrix4c& m);
  static PotentialSpec custom(std::string name, std::function<Matrix4c(const Vec3&)> q, bool hermitian);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  bool hermitian() const { return hermitian_; }

  /// Q(x). Coulomb-like potentials are singular at the origin.
  Matrix4c operator()(const Vec3& x) const { return scale_ * q_(x); }
  /// Bounded extension into the unit ball: Q(x/|x|) for |x| < 1. The Loss-Yau
  /// potential is smooth everywhere and is returned unchanged.
  Matrix4c regularized(const Vec3& x) const;

  /// s Q.
  PotentialSpec scaled(double s) const;

 private:
  PotentialSpec(Kind kind, std::string name, std::function<Matrix4c(const Vec3&)> q, bool hermitian)
      : kind_(kind), name_(std::move(name)), q_(std::move(q)), hermitian_(hermitian) {}

  Kind kind_;
  std::string name_;
  std::function<Matrix4c(const Vec3&)> q_;
  bool hermitian_;
  double scale_ = 1.0;
};

PotentialSpec parse_potential(const std::string& name);

/// psi(x) = (1+|x|^2)^{-3/2} (w, w),  w = (I + i sigma.x) (1,0)^T.
Spinor4c loss_yau_spinor(const Vec3& x);
/// A(x) = -3 (1+|x|^2)^{-1} v / |w|^2 with v_j = w^dagger sigma_j w; (sigma.p + sigma.A) w-form vanishes.
Vec3 loss_yau_vector_potential(const Vec3& x);
/// diag(sigma.A, sigma.A).
Matrix4c loss_yau_potential(const Vec3& x);

}  // namespace diraclab
