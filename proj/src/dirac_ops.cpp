#include "diraclab/dirac_ops.hpp"

#include <cmath>
#include <numbers>

namespace diraclab {

std::string to_string(DerivativeKind kind) {
  switch (kind) {
    case DerivativeKind::spectral_periodic: return "spectral_periodic";
    case DerivativeKind::spectral_antiperiodic: return "spectral_antiperiodic";
    case DerivativeKind::centered_fd2: return "centered_fd2";
    case DerivativeKind::centered_fd4: return "centered_fd4";
  }
  return "unknown";
}

DerivativeKind parse_derivative_kind(const std::string& name) {
  for (auto k : {DerivativeKind::spectral_periodic, DerivativeKind::spectral_antiperiodic,
                 DerivativeKind::centered_fd2, DerivativeKind::centered_fd4})
    if (to_string(k) == name) return k;
  throw std::invalid_argument("unknown derivative method '" + name + "'");
}

SpectralDirac::SpectralDirac(const GridSpec& grid, bool antiperiodic)
    : grid_(grid), antiperiodic_(antiperiodic), fft_(grid.points, 4), k_(grid.points) {
  const int n = grid.points;
  const double base = std::numbers::pi / grid.half_width;
  for (int i = 0; i < n; ++i) {
    const int m = fft_mode(i, n);
    if (antiperiodic)
      k_[i] = base * (m + 0.5);
    else
      k_[i] = (m == -n / 2) ? 0.0 : base * m;
  }
  if (antiperiodic) {
    const double kappa = 0.5 * base;
    phase_.resize(static_cast<Eigen::Index>(grid.cell_count()));
    for (std::size_t c = 0; c < grid.cell_count(); ++c) {
      const Vec3 x = grid.position(c);
      phase_(static_cast<Eigen::Index>(c)) = std::polar(1.0, kappa * (x(0) + x(1) + x(2)));
    }
  }
}

double SpectralDirac::smallest_wavenumber() const {
  if (!antiperiodic_) return 0.0;
  return std::sqrt(3.0) * 0.5 * std::numbers::pi / grid_.half_width;
}

template <typename ModeOp>
void SpectralDirac::transform(const SpinorValues& in, SpinorValues& out, ModeOp op) const {
  const int n = grid_.points;
  const auto cells = static_cast<Eigen::Index>(grid_.cell_count());
  out = in;
  if (antiperiodic_)
    for (Eigen::Index c = 0; c < cells; ++c) out.col(c) *= std::conj(phase_(c));
  fft_.forward(out.data());
  const double norm = 1.0 / static_cast<double>(cells);
  for (int kz = 0; kz < n; ++kz)
    for (int ky = 0; ky < n; ++ky)
      for (int kx = 0; kx < n; ++kx) {
        const auto c = static_cast<Eigen::Index>(grid_.index(kx, ky, kz));
        const Vec3 kvec(k_[kx], k_[ky], k_[kz]);
        Spinor4c v = out.col(c);
        out.col(c) = norm * op(kvec, v);
      }
  fft_.backward(out.data());
  if (antiperiodic_)
    for (Eigen::Index c = 0; c < cells; ++c) out.col(c) *= phase_(c);
}

void SpectralDirac::apply(const SpinorValues& in, SpinorValues& out) const {
  // (alpha.k) u = [ (sigma.k) u_lower ; (sigma.k) u_upper ]
  transform(in, out, [](const Vec3& k, const Spinor4c& u) {
    const std::complex<double> kp(k(0), k(1)), km(k(0), -k(1));
    Spinor4c r;
    r(0) = k(2) * u(2) + km * u(3);
    r(1) = kp * u(2) - k(2) * u(3);
    r(2) = k(2) * u(0) + km * u(1);
    r(3) = kp * u(0) - k(2) * u(1);
    return r;
  });
}

void SpectralDirac::apply_negative_laplacian(const SpinorValues& in, SpinorValues& out) const {
  transform(in, out, [](const Vec3& k, const Spinor4c& u) -> Spinor4c { return k.squaredNorm() * u; });
}

void SpectralDirac::apply_resolvent(const SpinorValues& in, SpinorValues& out, double s) const {
  if (!(s > 0)) throw std::invalid_argument("resolvent shift must be positive");
  transform(in, out, [s](const Vec3& k, const Spinor4c& u) -> Spinor4c { return u / (k.squaredNorm() + s); });
}

namespace {

void require_spectral_domain(const SpinorField& f) {
  if (f.mask().kind() != MaskKind::full_box && f.mask().count() != f.grid().cell_count())
    throw std::invalid_argument("spectral differentiation requires a full_box mask");
}

// Coefficients c_1..c_r of the centered first derivative: sum_m c_m (f(x+mh) - f(x-mh)) / h.
const std::vector<double>& first_derivative_weights(int radius) {
  static const std::vector<double> fd2{0.5}, fd4{2.0 / 3.0, -1.0 / 12.0};
  return radius == 1 ? fd2 : fd4;
}

// c_0 and c_1..c_r of the centered second derivative.
const std::vector<double>& second_derivative_weights(int radius) {
  static const std::vector<double> fd2{-2.0, 1.0}, fd4{-30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0};
  return radius == 1 ? fd2 : fd4;
}

DomainMask stencil_mask(const DomainMask& mask, int radius) {
  const auto& grid = mask.grid();
  const int n = grid.points;
  std::vector<std::uint8_t> out(grid.cell_count(), 0);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const std::size_t c = grid.index(i, j, k);
        if (!mask.contains(c)) continue;
        if (i < radius || j < radius || k < radius || i >= n - radius || j >= n - radius || k >= n - radius)
          continue;
        bool ok = true;
        for (int m = 1; m <= radius && ok; ++m)
          ok = mask.contains(grid.index(i + m, j, k)) && mask.contains(grid.index(i - m, j, k)) &&
               mask.contains(grid.index(i, j + m, k)) && mask.contains(grid.index(i, j - m, k)) &&
               mask.contains(grid.index(i, j, k + m)) && mask.contains(grid.index(i, j, k - m));
        out[c] = ok ? 1 : 0;
      }
  return DomainMask::from_cells(grid, std::move(out));
}

SpinorField fd_dirac(const SpinorField& f, int radius) {
  const auto& grid = f.grid();
  const DomainMask out_mask = stencil_mask(f.mask(), radius);
  const auto& w = first_derivative_weights(radius);
  const double inv_h = 1.0 / grid.spacing();
  const std::size_t stride[3] = {1, static_cast<std::size_t>(grid.points),
                                 static_cast<std::size_t>(grid.points) * grid.points};
  const std::complex<double> minus_i(0, -1);
  Matrix4c alphas[3] = {alpha(1), alpha(2), alpha(3)};
  SpinorValues out = SpinorValues::Zero(4, f.values().cols());
  for (std::size_t c = 0; c < grid.cell_count(); ++c) {
    if (!out_mask.contains(c)) continue;
    Spinor4c acc = Spinor4c::Zero();
    for (int a = 0; a < 3; ++a) {
      Spinor4c d = Spinor4c::Zero();
      for (int m = 1; m <= radius; ++m)
        d += w[m - 1] * (f.value(c + m * stride[a]) - f.value(c - m * stride[a]));
      acc += alphas[a] * d;
    }
    out.col(static_cast<Eigen::Index>(c)) = minus_i * inv_h * acc;
  }
  return SpinorField(out_mask, std::move(out));
}

SpinorField fd_negative_laplacian(const SpinorField& f, int radius) {
  const auto& grid = f.grid();
  const DomainMask out_mask = stencil_mask(f.mask(), radius);
  const auto& w = second_derivative_weights(radius);
  const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
  const std::size_t stride[3] = {1, static_cast<std::size_t>(grid.points),
                                 static_cast<std::size_t>(grid.points) * grid.points};
  SpinorValues out = SpinorValues::Zero(4, f.values().cols());
  for (std::size_t c = 0; c < grid.cell_count(); ++c) {
    if (!out_mask.contains(c)) continue;
    Spinor4c acc = 3.0 * w[0] * f.value(c);
    for (int a = 0; a < 3; ++a)
      for (int m = 1; m <= radius; ++m) acc += w[m] * (f.value(c + m * stride[a]) + f.value(c - m * stride[a]));
    out.col(static_cast<Eigen::Index>(c)) = -inv_h2 * acc;
  }
  return SpinorField(out_mask, std::move(out));
}

}  // namespace

SpinorField apply_dirac(const SpinorField& field, DerivativeMethod method) {
  if (!method.spectral()) return fd_dirac(field, method.stencil_radius());
  require_spectral_domain(field);
  SpectralDirac op(field.grid(), method.kind == DerivativeKind::spectral_antiperiodic);
  SpinorValues out;
  op.apply(field.values(), out);
  return SpinorField(field.mask(), std::move(out));
}

SpinorField apply_dirac_squared(const SpinorField& field, DerivativeMethod method) {
  return apply_dirac(apply_dirac(field, method), method);
}

SpinorField negative_laplacian(const SpinorField& field, DerivativeMethod method) {
  if (!method.spectral()) return fd_negative_laplacian(field, method.stencil_radius());
  require_spectral_domain(field);
  SpectralDirac op(field.grid(), method.kind == DerivativeKind::spectral_antiperiodic);
  SpinorValues out;
  op.apply_negative_laplacian(field.values(), out);
  return SpinorField(field.mask(), std::move(out));
}

SpinorField dirac_on_domain(const SpinorField& field, DerivativeMethod method) {
  if (!method.spectral()) return apply_dirac(field, method);
  return apply_dirac(field.zero_extended(), method).restricted(field.mask());
}

double sup_norm(const SpinorField& field, const DomainMask& region) {
  const auto& grid = field.grid();
  double m = 0;
  std::size_t used = 0;
  for (std::size_t c = 0; c < grid.cell_count(); ++c) {
    if (!field.mask().contains(c) || !region.contains(c)) continue;
    ++used;
    m = std::max(m, field.magnitude(c));
  }
  if (used == 0) throw DomainError("sup_norm over an empty mask");
  return m;
}

double sup_norm(const SpinorField& field) { return sup_norm(field, field.mask()); }

}  // namespace diraclab
