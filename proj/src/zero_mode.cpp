#include "diraclab/zero_mode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace diraclab {

LossYauMode loss_yau_mode() { return {loss_yau_spinor, PotentialSpec::loss_yau()}; }

namespace {

double ray_slope(const std::function<double(double)>& f, double r0, double r1, int samples) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < samples; ++i) {
    const double lr = std::log(r0) + (std::log(r1) - std::log(r0)) * i / (samples - 1);
    const double ly = std::log(f(std::exp(lr)));
    sx += lr, sy += ly, sxx += lr * lr, sxy += lr * ly;
  }
  return (samples * sxy - sx * sy) / (samples * sxx - sx * sx);
}

}  // namespace

LossYauOracleReport loss_yau_oracle(const std::vector<int>& grid_points, double outer_radius) {
  if (grid_points.size() < 2) throw std::invalid_argument("the oracle needs at least two refinement levels");
  const LossYauMode mode = loss_yau_mode();
  LossYauOracleReport r;
  r.grid_points = grid_points;
  for (std::size_t level = 0; level < grid_points.size(); ++level) {
    const GridSpec grid = make_grid(outer_radius, grid_points[level]);
    const SpinorField psi = sample_field(grid, DomainMask::exterior_annulus(grid, outer_radius), mode.psi);
    if (level == 0) {
      for (std::size_t c = 0; c < grid.cell_count(); ++c) {
        const double r2 = grid.position(c).squaredNorm();
        const Spinor4c v = mode.psi(grid.position(c));
        r.magnitude_error = std::max(r.magnitude_error, std::abs(v.norm() - std::sqrt(2.0) / (1.0 + r2)));
      }
    }
    r.residuals.push_back(residual_norm(psi, mode.potential));
  }
  const Vec3 ray = Vec3(1.0, -2.0, 0.5).normalized();
  auto qnorm = [&](double radius) { return operator_norm(mode.potential(Vec3(radius * ray))); };
  r.potential_ray_slope = ray_slope(qnorm, 10.0, 100.0, 16);
  for (int i = 0; i <= 200; ++i) {
    const double radius = std::pow(100.0, i / 200.0);
    r.potential_decay_bound = std::max(r.potential_decay_bound, qnorm(radius) * radius);
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < r.residuals.size(); ++i) decreasing = decreasing && r.residuals[i] < r.residuals[i - 1];
  r.passed = r.magnitude_error <= 1e-12 && decreasing && r.residuals.back() < 0.1 &&
             std::abs(r.potential_ray_slope + 2.0) <= 0.05 && std::isfinite(r.potential_decay_bound);
  return r;
}

double residual_norm(const SpinorField& psi, const PotentialSpec& q, DerivativeMethod method) {
  const SpinorField d = dirac_on_domain(psi, method);
  const DomainMask safe = psi.mask().eroded(3).intersect(d.mask());
  if (safe.empty()) throw DomainError("residual_norm: interior sub-mask is empty");
  const GridSpec& grid = psi.grid();
  double num = 0, den = 0;
  for (std::size_t c = 0; c < grid.cell_count(); ++c) {
    if (!safe.contains(c)) continue;
    const Spinor4c v = psi.value(c);
    num += (d.value(c) + q.regularized(grid.position(c)) * v).squaredNorm();
    den += v.squaredNorm();
  }
  if (!(den > 0)) throw std::invalid_argument("residual_norm needs a field with nonzero norm");
  return std::sqrt(num / den);
}

TailReport tail_report(const std::string& integral, std::vector<RadialSample> samples, double outer_radius) {
  if (!(outer_radius > 2.0)) throw std::invalid_argument("tail report needs R_outer > 2");
  TailReport t;
  t.integral = integral;
  for (double R = 2.0; R < outer_radius; R *= 2.0) t.radii.push_back(R);
  t.radii.push_back(outer_radius);
  std::sort(samples.begin(), samples.end(), [](const RadialSample& a, const RadialSample& b) {
    return a.radius < b.radius || (a.radius == b.radius && a.contribution < b.contribution);
  });
  // Compensated running sum in ascending radius order.
  double sum = 0, comp = 0;
  std::size_t next = 0;
  for (double R : t.radii) {
    for (; next < samples.size() && samples[next].radius < R; ++next) {
      const double v = samples[next].contribution;
      const double s = sum + v;
      comp += std::abs(sum) >= std::abs(v) ? (sum - s) + v : (v - s) + sum;
      sum = s;
    }
    t.partial.push_back(sum + comp);
  }
  for (std::size_t i = 1; i < t.partial.size(); ++i) t.increments.push_back(t.partial[i] - t.partial[i - 1]);

  t.increments_decreasing = !t.increments.empty();
  for (std::size_t i = 1; i < t.increments.size(); ++i)
    t.increments_decreasing = t.increments_decreasing && t.increments[i] < t.increments[i - 1];
  const double total = t.partial.back();
  if (total == 0.0) {
    t.tail_fraction = 0.0;
    return t;
  }
  if (t.increments.size() < 2) {
    t.tail_fraction = 1.0;
    t.warnings.push_back("fewer than two increments; tail cannot be extrapolated");
    return t;
  }
  const std::size_t n = t.increments.size();
  const double ratio = t.increments[n - 1] / t.increments[n - 2];
  if (ratio >= 0.0 && ratio < 1.0) {
    const double tail = t.increments[n - 1] * ratio / (1.0 - ratio);
    t.geometric_tail_fraction = tail / (total + tail);
  } else {
    t.geometric_tail_fraction = 1.0;
  }

  // Power-law fit of the radial density over the last octave.
  constexpr int shells = 8;
  const double R = outer_radius, r0 = 0.5 * outer_radius;
  std::vector<double> xs, ys;
  for (int i = 0; i < shells; ++i) {
    const double a = r0 * std::pow(2.0, static_cast<double>(i) / shells);
    const double b = r0 * std::pow(2.0, static_cast<double>(i + 1) / shells);
    double mass = 0;
    for (const auto& smp : samples)
      if (smp.radius >= a && smp.radius < b) mass += smp.contribution;
    if (mass > 0) {
      xs.push_back(0.5 * (std::log(a) + std::log(b)));
      ys.push_back(std::log(mass / (b - a)));
    }
  }
  if (xs.size() < shells) {
    t.tail_fraction = 1.0;
    t.warnings.push_back("empty shells in the last octave; tail cannot be extrapolated");
    return t;
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
  mx /= static_cast<double>(xs.size()), my /= static_cast<double>(xs.size());
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) sxx += (xs[i] - mx) * (xs[i] - mx), sxy += (xs[i] - mx) * (ys[i] - my);
  const double sigma = sxy / sxx;
  t.density_slope = sigma;
  if (!(sigma < -1.0)) {
    t.tail_fraction = 1.0;
    t.warnings.push_back("radial density decays no faster than 1/r; the integral shows no sign of converging");
    return t;
  }
  const double g_at_r = std::exp(my + sigma * (std::log(R) - mx));
  const double tail = R * g_at_r / (-sigma - 1.0);
  t.tail_fraction = tail / (total + tail);
  return t;
}

namespace {

void require_exterior(const SpinorField& psi, const char* what) {
  if (psi.mask().kind() != MaskKind::exterior_annulus)
    throw std::invalid_argument(std::string(what) + " needs a field on exterior_annulus(R)");
}

TailReport weighted_power_tail(const std::string& name, const SpinorField& psi, double weight_power, double power) {
  const GridSpec& grid = psi.grid();
  const double vol = grid.cell_volume();
  std::vector<RadialSample> samples;
  samples.reserve(psi.mask().count());
  for (std::size_t c = 0; c < grid.cell_count(); ++c) {
    if (!psi.mask().contains(c)) continue;
    const double r = grid.position(c).norm();
    const double phi = std::pow(r, weight_power) * psi.magnitude(c);
    samples.push_back({r, std::pow(phi, power) * std::pow(r, -6.0) * vol});
  }
  return tail_report(name, std::move(samples), psi.mask().parameter());
}

}  // namespace

WeightedConditions weighted_conditions(const SpinorField& psi, const GridSpec& ball, DerivativeMethod method) {
  require_exterior(psi, "weighted_conditions");
  const double R = psi.mask().parameter();
  WeightedConditions w;

  const SpinorField d = dirac_on_domain(psi, method);
  const double vol = psi.grid().cell_volume();
  std::vector<RadialSample> grad;
  for (std::size_t c = 0; c < psi.grid().cell_count(); ++c) {
    if (!d.mask().contains(c)) continue;
    const double r = psi.grid().position(c).norm();
    grad.push_back({r, r * r * d.value(c).squaredNorm() * vol});
  }
  w.gradient = tail_report("int |x|^2 |(alpha.p)psi|^2 dx", std::move(grad), R);
  if (d.mask().count() < psi.mask().count())
    w.gradient.warnings.push_back(to_string(method.kind) + " stencil dropped boundary cells of the annulus");

  const ResampleResult big = transform_field(psi, ball);
  const double vol_y = ball.cell_volume();
  std::vector<RadialSample> inv;
  for (std::size_t c = 0; c < ball.cell_count(); ++c) {
    if (!big.field.mask().contains(c)) continue;
    const double ry = ball.position(c).norm();
    inv.push_back({1.0 / ry, big.field.value(c).squaredNorm() * std::pow(ry, -6.0) * vol_y});
  }
  w.inverted = tail_report("int |Psi(y)|^2 |y|^-6 dy", std::move(inv), R);
  if (big.uncovered_cells > 0)
    w.inverted.warnings.push_back(std::to_string(big.uncovered_cells) + " ball cells had no source data");
  return w;
}

void validate_theorem3(double k) {
  if (!(k >= 1.0 && k < 10.0 / 3.0)) {
    std::ostringstream s;
    s << "k = " << k << " is outside the admissible range k ∈ [1,10/3)";
    throw std::invalid_argument(s.str());
  }
}

void validate_theorem4(double t, double s) {
  if (!(t > 0.0 && t < 1.1)) {
    std::ostringstream m;
    m << "t = " << t << " is outside the admissible range 0 < t < 11/10";
    throw std::invalid_argument(m.str());
  }
  if (!(s >= 1.0 && s < 4.0 / 3.0)) {
    std::ostringstream m;
    m << "s = " << s << " is outside the admissible range s ∈ [1,4/3)";
    throw std::invalid_argument(m.str());
  }
}

TailReport theorem3_check(const SpinorField& psi, double k) {
  validate_theorem3(k);
  require_exterior(psi, "theorem3_check");
  TailReport t = weighted_power_tail("int |phi|^k |x|^-6 dx, phi = |x|^2 psi", psi, 2.0, k);
  t.params["k"] = k;
  return t;
}

TailReport theorem4_check(const SpinorField& psi, double t, double s) {
  validate_theorem4(t, s);
  require_exterior(psi, "theorem4_check");
  TailReport r = weighted_power_tail("int |phi|^s |x|^-6 dx, phi = |x|^(2+t) psi", psi, 2.0 + t, s);
  r.params["t"] = t;
  r.params["s"] = s;
  return r;
}

ExponentCondition exponent_condition(double p, double t, double k) {
  ExponentCondition e;
  e.lhs = p * ((1.0 + t) / 3.0 + 1.0 / k);
  e.holds = e.lhs < 1.0;
  return e;
}

DecayFitReport decay_fit(const RadialProfile& profile, double r_min, double r_max, ShellStatistic statistic) {
  std::vector<double> xs, ys;
  for (const auto& b : profile.bins) {
    if (b.radius < r_min || b.radius > r_max) continue;
    const double v = statistic == ShellStatistic::mean ? b.mean : b.max;
    if (!(v > 0)) throw DomainError("decay fit: nonpositive shell statistic at r = " + std::to_string(b.radius));
    xs.push_back(std::log(b.radius));
    ys.push_back(std::log(v));
  }
  const auto n = static_cast<double>(xs.size());
  if (xs.size() < 6) throw DomainError("decay fit needs at least 6 shells in range, found " + std::to_string(xs.size()));
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
  mx /= n, my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  DecayFitReport r;
  r.slope = sxy / sxx;
  double ssr = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - my - r.slope * (xs[i] - mx);
    ssr += e * e;
  }
  r.standard_error = std::sqrt(ssr / (n - 2.0) / sxx);
  r.r_min = r_min;
  r.r_max = r_max;
  r.statistic = statistic;
  r.shells = static_cast<int>(xs.size());
  return r;
}

double q_cubed_integral(const PotentialSpec& q, const DomainMask& region) {
  const GridSpec& grid = region.grid();
  double sum = 0, comp = 0;
  for (std::size_t c = 0; c < grid.cell_count(); ++c) {
    if (!region.contains(c)) continue;
    const double n = operator_norm(q.regularized(grid.position(c)));
    const double v = n * n * n;
    const double s = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - s) + v : (v - s) + sum;
    sum = s;
  }
  return (sum + comp) * grid.cell_volume();
}

}  // namespace diraclab
