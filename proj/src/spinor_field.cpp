#include "diraclab/spinor_field.hpp"

#include <cmath>
#include <sstream>

namespace diraclab {

namespace {

struct NeumaierSum {
  double sum = 0, comp = 0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

}  // namespace

SpinorField::SpinorField(DomainMask mask, SpinorValues values) : mask_(std::move(mask)), values_(std::move(values)) {
  if (values_.cols() != static_cast<Eigen::Index>(mask_.grid().cell_count()))
    throw std::invalid_argument("field values do not match grid size");
  for (std::size_t c = 0; c < mask_.grid().cell_count(); ++c)
    if (!mask_.contains(c)) values_.col(static_cast<Eigen::Index>(c)).setZero();
}

SpinorField::SpinorField(DomainMask mask)
    : mask_(std::move(mask)), values_(SpinorValues::Zero(4, static_cast<Eigen::Index>(mask_.grid().cell_count()))) {}

SpinorField SpinorField::restricted(const DomainMask& mask) const {
  if (!(mask.grid() == grid())) throw std::invalid_argument("restriction mask lives on a different grid");
  return SpinorField(mask, values_);
}

SpinorField SpinorField::scaled(std::complex<double> c) const { return SpinorField(mask_, values_ * c); }

SpinorField SpinorField::operator+(const SpinorField& o) const {
  if (!(o.mask_ == mask_)) throw std::invalid_argument("fields must share grid and mask");
  return SpinorField(mask_, values_ + o.values_);
}

SpinorField SpinorField::operator-(const SpinorField& o) const {
  if (!(o.mask_ == mask_)) throw std::invalid_argument("fields must share grid and mask");
  return SpinorField(mask_, values_ - o.values_);
}

SpinorField multiply_pointwise(const SpinorField& f, const std::function<Matrix4c(const Vec3&)>& m) {
  SpinorValues out = SpinorValues::Zero(4, f.values().cols());
  const auto& grid = f.grid();
  for (std::size_t c = 0; c < grid.cell_count(); ++c)
    if (f.mask().contains(c)) out.col(static_cast<Eigen::Index>(c)) = m(grid.position(c)) * f.value(c);
  return SpinorField(f.mask(), std::move(out));
}

SpinorField weight_pointwise(const SpinorField& f, const std::function<double(const Vec3&)>& w) {
  SpinorValues out = f.values();
  const auto& grid = f.grid();
  for (std::size_t c = 0; c < grid.cell_count(); ++c)
    if (f.mask().contains(c)) out.col(static_cast<Eigen::Index>(c)) *= w(grid.position(c));
  return SpinorField(f.mask(), std::move(out));
}

SpinorField sample_field(const GridSpec& grid, const DomainMask& mask, const SpinorRule& rule) {
  if (!(mask.grid() == grid)) throw std::invalid_argument("mask is not defined on this grid");
  SpinorValues values = SpinorValues::Zero(4, static_cast<Eigen::Index>(grid.cell_count()));
  for (std::size_t c = 0; c < grid.cell_count(); ++c) {
    if (!mask.contains(c)) continue;
    const Vec3 x = grid.position(c);
    const Spinor4c v = rule(x);
    if (!v.allFinite()) {
      int i, j, k;
      grid.unpack(c, i, j, k);
      std::ostringstream msg;
      msg << "sampling rule is not finite at cell (" << i << "," << j << "," << k << ") x = (" << x(0) << ", "
          << x(1) << ", " << x(2) << ")";
      throw SamplingError(msg.str());
    }
    values.col(static_cast<Eigen::Index>(c)) = v;
  }
  return SpinorField(mask, std::move(values));
}

double quadrature(const SpinorField& field, const DomainMask& region, double p, double weight_exponent) {
  if (!(p >= 1.0)) throw std::invalid_argument("quadrature needs p >= 1");
  const auto& grid = field.grid();
  if (!(region.grid() == grid)) throw std::invalid_argument("quadrature region lives on a different grid");
  NeumaierSum acc;
  std::size_t used = 0;
  for (std::size_t c = 0; c < grid.cell_count(); ++c) {
    if (!field.mask().contains(c) || !region.contains(c)) continue;
    ++used;
    const double m = field.magnitude(c);
    if (m == 0.0) continue;
    double v = p == 1.0 ? m : (p == 2.0 ? m * m : std::pow(m, p));
    if (weight_exponent != 0.0) v *= std::pow(grid.position(c).norm(), weight_exponent);
    acc.add(v);
  }
  if (used == 0) throw DomainError("quadrature over an empty mask");
  return acc.value() * grid.cell_volume();
}

double quadrature(const SpinorField& field, double p, double weight_exponent) {
  return quadrature(field, field.mask(), p, weight_exponent);
}

RadialProfile radial_profile(const SpinorField& field, int n_bins) {
  if (n_bins < 4) throw std::invalid_argument("radial_profile needs at least 4 bins");
  const auto& grid = field.grid();
  double r_min = INFINITY, r_max = 0;
  for (std::size_t c = 0; c < grid.cell_count(); ++c) {
    if (!field.mask().contains(c)) continue;
    const double r = grid.position(c).norm();
    r_min = std::min(r_min, r);
    r_max = std::max(r_max, r);
  }
  if (!(r_max > r_min)) throw DomainError("radial_profile: mask has no radial extent");
  const double lo = std::log(r_min), width = (std::log(r_max) - lo) / n_bins;
  std::vector<double> sum(n_bins, 0.0), mx(n_bins, 0.0);
  std::vector<std::size_t> cnt(n_bins, 0);
  for (std::size_t c = 0; c < grid.cell_count(); ++c) {
    if (!field.mask().contains(c)) continue;
    const double r = grid.position(c).norm();
    int b = static_cast<int>((std::log(r) - lo) / width);
    b = std::clamp(b, 0, n_bins - 1);
    const double m = field.magnitude(c);
    sum[b] += m;
    mx[b] = std::max(mx[b], m);
    ++cnt[b];
  }
  RadialProfile prof;
  for (int b = 0; b < n_bins; ++b) {
    if (cnt[b] == 0) continue;
    prof.bins.push_back({std::exp(lo + (b + 0.5) * width), sum[b] / cnt[b], mx[b], cnt[b]});
  }
  if (prof.bins.size() < 4) throw DomainError("radial_profile: fewer than 4 nonempty bins");
  return prof;
}

bool interpolate(const SpinorField& field, const Vec3& x, Spinor4c& out) {
  const auto& grid = field.grid();
  const double h = grid.spacing();
  const int n = grid.points;
  int base[3];
  double frac[3];
  for (int a = 0; a < 3; ++a) {
    const double s = (x(a) + grid.half_width) / h - 0.5;
    base[a] = static_cast<int>(std::floor(s));
    frac[a] = s - base[a];
  }
  out.setZero();
  double wsum = 0;
  for (int corner = 0; corner < 8; ++corner) {
    int idx[3];
    double w = 1;
    bool inside = true;
    for (int a = 0; a < 3; ++a) {
      const int bit = (corner >> a) & 1;
      idx[a] = base[a] + bit;
      w *= bit ? frac[a] : 1.0 - frac[a];
      if (idx[a] < 0 || idx[a] >= n) inside = false;
    }
    if (!inside || w == 0.0) continue;
    const std::size_t c = grid.index(idx[0], idx[1], idx[2]);
    if (!field.mask().contains(c)) continue;
    out += w * field.value(c);
    wsum += w;
  }
  if (wsum <= 0) return false;
  out /= wsum;
  return true;
}

ResampleResult invert_resample(const SpinorField& source, const GridSpec& target) {
  const MaskKind kind = source.mask().kind();
  const double param = source.mask().parameter();
  double lo, hi;  // admissible preimage radii
  MaskKind target_kind;
  double target_param;
  if (kind == MaskKind::exterior_annulus) {
    lo = 1.0, hi = param;
    target_kind = MaskKind::punctured_ball, target_param = 1.0 / param;
  } else if (kind == MaskKind::punctured_ball) {
    lo = param, hi = 1.0;
    target_kind = MaskKind::exterior_annulus, target_param = 1.0 / param;
  } else {
    throw std::invalid_argument("invert_resample needs a source on exterior_annulus(R) or punctured_ball(eps)");
  }
  const DomainMask domain = target_kind == MaskKind::punctured_ball ? DomainMask::punctured_ball(target, target_param)
                                                                     : DomainMask::exterior_annulus(target, target_param);
  std::vector<std::uint8_t> covered(target.cell_count(), 0);
  SpinorValues values = SpinorValues::Zero(4, static_cast<Eigen::Index>(target.cell_count()));
  std::size_t uncovered = 0;
  for (std::size_t c = 0; c < target.cell_count(); ++c) {
    if (!domain.contains(c)) continue;
    const Vec3 y = target.position(c);
    const Vec3 x = y / y.squaredNorm();
    const double r = x.norm();
    Spinor4c v;
    if (r > lo && r < hi && interpolate(source, x, v)) {
      covered[c] = 1;
      values.col(static_cast<Eigen::Index>(c)) = v;
    } else {
      ++uncovered;
    }
  }
  return {SpinorField(DomainMask::from_cells(target, std::move(covered), target_kind, target_param), std::move(values)),
          domain.count(), uncovered};
}

}  // namespace diraclab
