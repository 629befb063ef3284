#pragma once

// The free Dirac operator alpha.p = sum_j alpha_j (-i d/dx_j), its square,
// the heat semigroup P_t = exp(-t (alpha.p)^2), and the sup norm used by the
// Besov-type functional.

#include "diraclab/fft.hpp"
#include "diraclab/spinor_field.hpp"

#include <optional>
#include <string>
#include <vector>

namespace diraclab {

enum class DerivativeKind {
  spectral_periodic,      // k = (pi/L) m, m in [-N/2, N/2); the Nyquist derivative is zeroed
  spectral_antiperiodic,  // k = (pi/L)(m + 1/2); no zero mode, used by the coupling scan
  centered_fd2,
  centered_fd4,
};

struct DerivativeMethod {
  DerivativeKind kind = DerivativeKind::spectral_periodic;

  bool spectral() const {
    return kind == DerivativeKind::spectral_periodic || kind == DerivativeKind::spectral_antiperiodic;
  }
  int stencil_radius() const {
    return kind == DerivativeKind::centered_fd2 ? 1 : (kind == DerivativeKind::centered_fd4 ? 2 : 0);
  }
};

std::string to_string(DerivativeKind kind);
DerivativeKind parse_derivative_kind(const std::string& name);

/// Matrix-free spectral alpha.p on a full grid. Reusable across calls.
class SpectralDirac {
 public:
  SpectralDirac(const GridSpec& grid, bool antiperiodic);

  void apply(const SpinorValues& in, SpinorValues& out) const;
  /// Componentwise |k|^2 multiplication with the same wavenumber convention.
  void apply_negative_laplacian(const SpinorValues& in, SpinorValues& out) const;
  /// Componentwise (|k|^2 + s)^{-1}, s > 0.
  void apply_resolvent(const SpinorValues& in, SpinorValues& out, double s) const;

  /// Smallest |k| over the wavenumber lattice (0 for periodic).
  double smallest_wavenumber() const;
  const GridSpec& grid() const { return grid_; }

 private:
  template <typename ModeOp>
  void transform(const SpinorValues& in, SpinorValues& out, ModeOp op) const;

  GridSpec grid_;
  bool antiperiodic_;
  Fft3 fft_;
  std::vector<double> k_;  // per-axis wavenumbers indexed by DFT bin
  Eigen::VectorXcd phase_; // e^{i kappa (x+y+z)} for the antiperiodic twist
};

/// sum_j alpha_j (-i d_j f).
/// Spectral methods require a full_box mask. Finite differences shrink the output
/// mask to cells whose whole stencil lies in the input mask.
SpinorField apply_dirac(const SpinorField& field, DerivativeMethod method);
SpinorField apply_dirac_squared(const SpinorField& field, DerivativeMethod method);
/// Componentwise -Laplacian (second-difference stencils, or |k|^2 for spectral).
SpinorField negative_laplacian(const SpinorField& field, DerivativeMethod method);

/// alpha.p applied to f regarded as zero outside its mask (spectral: zero-extend
/// to the box first), returned on f's own mask (fd: on the stencil-valid part of it).
SpinorField dirac_on_domain(const SpinorField& field, DerivativeMethod method);

/// max over mask cells of |f|. Throws DomainError on an empty mask.
double sup_norm(const SpinorField& field);
double sup_norm(const SpinorField& field, const DomainMask& region);

enum class HeatBackend {
  automatic,         // spectral for t < 4 h^2, direct otherwise
  spectral_padded,   // zero-pad to twice the box, multiply modes by exp(-t|k|^2), crop
  direct_separable,  // midpoint quadrature of the Gaussian kernel, one axis at a time
};

struct HeatResult {
  SpinorField field;  // on the full box of the input grid
  HeatBackend backend = HeatBackend::automatic;
  std::vector<std::string> warnings;
};

/// P_t f for f zero-extended outside its mask, evaluated at every cell of the box.
HeatResult heat_semigroup(const SpinorField& field, double t, HeatBackend backend = HeatBackend::automatic);

}  // namespace diraclab
