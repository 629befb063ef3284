#pragma once

#include "diraclab/grid.hpp"

#include <functional>
#include <stdexcept>
#include <vector>

namespace diraclab {

/// Raised when an operation needs a nonempty region (empty mask, too few shells, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a sampling rule produces a non-finite value inside the mask.
class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using SpinorRule = std::function<Spinor4c(const Vec3&)>;
using SpinorValues = Eigen::Matrix<std::complex<double>, 4, Eigen::Dynamic>;

/// A C^4-valued function sampled at the cell centers of a grid.
/// Values are stored for every cell; cells outside the mask are held at zero.
class SpinorField {
 public:
  SpinorField(DomainMask mask, SpinorValues values);
  explicit SpinorField(DomainMask mask);  // zero field

  const GridSpec& grid() const { return mask_.grid(); }
  const DomainMask& mask() const { return mask_; }
  const SpinorValues& values() const { return values_; }
  Spinor4c value(std::size_t c) const { return values_.col(static_cast<Eigen::Index>(c)); }
  double magnitude(std::size_t c) const { return values_.col(static_cast<Eigen::Index>(c)).norm(); }

  /// Same samples, new mask; values outside the new mask are zeroed.
  SpinorField restricted(const DomainMask& mask) const;
  /// Zero-extension to the full box.
  SpinorField zero_extended() const { return restricted(DomainMask::full_box(grid())); }

  SpinorField scaled(std::complex<double> c) const;
  SpinorField operator+(const SpinorField& o) const;
  SpinorField operator-(const SpinorField& o) const;

 private:
  DomainMask mask_;
  SpinorValues values_;
};

/// Pointwise product M(x) f(x) over the field's mask.
SpinorField multiply_pointwise(const SpinorField& f, const std::function<Matrix4c(const Vec3&)>& m);
/// Pointwise product w(x) f(x) with a scalar weight.
SpinorField weight_pointwise(const SpinorField& f, const std::function<double(const Vec3&)>& w);

SpinorField sample_field(const GridSpec& grid, const DomainMask& mask, const SpinorRule& rule);

/// Neumaier-compensated sum over mask cells of |f|^p |x|^w h^3 (the integral before the root).
double quadrature(const SpinorField& field, double p, double weight_exponent = 0.0);
/// Same, restricted to `region` (intersected with the field's mask).
double quadrature(const SpinorField& field, const DomainMask& region, double p, double weight_exponent = 0.0);

struct RadialBin {
  double radius = 0;  // geometric midpoint of the log-r bin
  double mean = 0;
  double max = 0;
  std::size_t count = 0;
};

struct RadialProfile {
  std::vector<RadialBin> bins;  // nonempty bins only, radii increasing
};

/// Equal-width bins in log r over the radial range of the field's mask.
RadialProfile radial_profile(const SpinorField& field, int n_bins);

struct ResampleResult {
  SpinorField field;
  std::size_t target_cells = 0;    // cells of the target domain on the target grid
  std::size_t uncovered_cells = 0; // masked off because the preimage had no source data
};

/// Composes a field with the inversion y = x/|x|^2.
/// exterior_annulus(R) -> punctured_ball(1/R), and punctured_ball(eps) -> exterior_annulus(1/eps).
/// value(y) = trilinear interpolation of the source at y/|y|^2, with weights
/// renormalized over in-mask corners. Uncovered target cells are dropped from the mask
/// (the mask keeps its kind and parameter) and counted.
ResampleResult invert_resample(const SpinorField& source, const GridSpec& target);

/// Trilinear interpolation of a field at an arbitrary point, using only in-mask corners.
/// Returns false if no corner carries data.
bool interpolate(const SpinorField& field, const Vec3& x, Spinor4c& out);

}  // namespace diraclab
