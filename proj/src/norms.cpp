#include "diraclab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace diraclab {

namespace {

NormReport base_report(const std::string& kind, const SpinorField& f) {
  NormReport r;
  r.kind = kind;
  r.grid_points = f.grid().points;
  r.half_width = f.grid().half_width;
  r.mask = to_string(f.mask().kind());
  return r;
}

std::vector<double> sorted_magnitudes(const SpinorField& f) {
  std::vector<double> mags;
  mags.reserve(f.mask().count());
  for (std::size_t c = 0; c < f.grid().cell_count(); ++c)
    if (f.mask().contains(c)) mags.push_back(f.magnitude(c));
  std::sort(mags.begin(), mags.end(), std::greater<>());
  return mags;
}

}  // namespace

NormReport lp_norm(const SpinorField& field, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm needs p >= 1");
  NormReport r = base_report("lp", field);
  r.params["p"] = p;
  r.value = std::pow(quadrature(field, p), 1.0 / p);
  return r;
}

NormReport dirac_sobolev_norm(const SpinorField& field, double p, DerivativeMethod method) {
  if (!(p >= 1.0)) throw std::invalid_argument("dirac_sobolev_norm needs p >= 1");
  const SpinorField df = dirac_on_domain(field, method);
  NormReport r = base_report("dirac_sobolev", field);
  r.params["p"] = p;
  const double derivative = quadrature(df, p);
  const double plain = quadrature(field, df.mask(), p);
  r.value = std::pow(derivative + plain, 1.0 / p);
  if (df.mask().count() < field.mask().count()) {
    std::ostringstream msg;
    msg << to_string(method.kind) << " stencil dropped " << field.mask().count() - df.mask().count()
        << " boundary cells";
    r.warnings.push_back(msg.str());
  }
  return r;
}

double distribution_function(const SpinorField& field, double u) {
  std::size_t count = 0;
  for (std::size_t c = 0; c < field.grid().cell_count(); ++c)
    if (field.mask().contains(c) && field.magnitude(c) >= u) ++count;
  return static_cast<double>(count) * field.grid().cell_volume();
}

NormReport weak_lq(const SpinorField& field, double q, WeakConvention convention) {
  if (!(q > 0)) throw std::invalid_argument("weak_lq needs q > 0");
  if (field.mask().empty()) throw DomainError("weak_lq over an empty mask");
  NormReport r = base_report(convention == WeakConvention::paper_literal ? "weak_lq_literal" : "weak_lq", field);
  r.params["q"] = q;
  const auto mags = sorted_magnitudes(field);
  const double vol = field.grid().cell_volume();
  double best = 0, argmax = 0;
  // For a run of equal magnitudes the measure counts the whole run.
  for (std::size_t i = 0; i < mags.size();) {
    std::size_t j = i;
    while (j + 1 < mags.size() && mags[j + 1] == mags[i]) ++j;
    const double u = mags[i];
    if (u > 0) {
      const double v = std::pow(u, q) * static_cast<double>(j + 1) * vol;
      if (v > best) best = v, argmax = u;
    }
    i = j + 1;
  }
  r.params["argmax_u"] = argmax;
  r.value = convention == WeakConvention::paper_literal ? best : std::pow(best, 1.0 / q);
  return r;
}

NormReport besov_norm(const SpinorField& field, double alpha, const BesovOptions& opt) {
  if (!(opt.t_min > 0) || !(opt.t_max > opt.t_min) || opt.n_t < 16)
    throw std::invalid_argument("besov_norm needs 0 < t_min < t_max and n_t >= 16");
  if (!(alpha < 0)) throw std::invalid_argument("besov_norm needs alpha < 0");
  NormReport r = base_report("besov", field);
  r.params["alpha"] = alpha;
  r.params["t_min"] = opt.t_min;
  r.params["t_max"] = opt.t_max;
  r.params["n_t"] = opt.n_t;
  const double ratio = std::log(opt.t_max / opt.t_min) / (opt.n_t - 1);
  double best = 0, argmax = opt.t_min;
  int best_i = 0;
  bool zero = field.values().isZero(0.0);
  if (!zero) {
    for (int i = 0; i < opt.n_t; ++i) {
      const double t = opt.t_min * std::exp(ratio * i);
      HeatResult pt = heat_semigroup(field, t);
      for (auto& w : pt.warnings) r.warnings.push_back(w);
      const double v = std::pow(t, -alpha / 2.0) * sup_norm(pt.field, field.mask());
      if (v > best) best = v, argmax = t, best_i = i;
    }
  }
  r.value = best;
  r.params["argmax_t"] = argmax;
  const double l1 = zero ? 0.0 : quadrature(field, 1.0);
  const double tail_exponent = -alpha / 2.0 - 1.5;
  r.params["tail_exponent"] = tail_exponent;
  r.params["tail_asymptote_at_t_max"] =
      std::pow(4.0 * std::numbers::pi * opt.t_max, -1.5) * l1 * std::pow(opt.t_max, -alpha / 2.0);
  if (!zero && (best_i == 0 || best_i == opt.n_t - 1))
    r.warnings.push_back("sup attained at the t-grid boundary (t = " + std::to_string(argmax) + ")");
  if (!zero && tail_exponent > 0) r.warnings.push_back("large-t asymptote grows; the sup over t > 0 is infinite");
  return r;
}

NormReport lorentz_embedding_ratio(const SpinorField& field, double k, double q) {
  if (!(k > 0) || !(k < q)) throw std::invalid_argument("lorentz_embedding_ratio needs 0 < k < q");
  NormReport r = base_report("lorentz_ratio", field);
  r.params["k"] = k;
  r.params["q"] = q;
  const double weak = weak_lq(field, q).value;
  if (weak == 0) {
    r.value = std::numeric_limits<double>::infinity();
    r.warnings.push_back("zero field: weak-L^q denominator vanishes");
    return r;
  }
  // k may be below 1 here; integrate |f|^k directly.
  double sum = 0;
  for (std::size_t c = 0; c < field.grid().cell_count(); ++c)
    if (field.mask().contains(c)) sum += std::pow(field.magnitude(c), k);
  r.value = std::pow(sum * field.grid().cell_volume(), 1.0 / k) / weak;
  return r;
}

}  // namespace diraclab
