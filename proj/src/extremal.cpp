#include "diraclab/extremal.hpp"

#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace diraclab {

std::vector<double> TrialParams::flatten() const {
  std::vector<double> v;
  v.push_back(static_cast<double>(bumps.size()));
  for (const auto& b : bumps) {
    for (int j = 0; j < 3; ++j) v.push_back(b.center(j));
    v.push_back(b.width);
    v.push_back(b.amplitude);
    for (int j = 0; j < 4; ++j) {
      v.push_back(b.direction(j).real());
      v.push_back(b.direction(j).imag());
    }
  }
  v.push_back(sharpness);
  return v;
}

void validate_trial(const TrialParams& params) {
  if (params.bumps.empty() || params.bumps.size() > 4) throw std::invalid_argument("trial needs 1 to 4 bump terms");
  if (!(params.sharpness > 0)) throw std::invalid_argument("cutoff sharpness gamma must be positive");
  for (const auto& b : params.bumps) {
    if (!(b.center.norm() <= 0.9)) throw std::invalid_argument("bump centers must satisfy |c| <= 0.9");
    if (!(b.width > 0)) throw std::invalid_argument("bump widths must be positive");
    if (!(std::abs(b.direction.norm() - 1.0) <= 1e-9)) throw std::invalid_argument("bump directions must be unit spinors");
    if (!std::isfinite(b.amplitude)) throw std::invalid_argument("bump amplitudes must be finite");
  }
}

SpinorField build_trial(const TrialParams& params, const GridSpec& grid) {
  validate_trial(params);
  const auto rule = [&params](const Vec3& x) -> Spinor4c {
    const double r2 = x.squaredNorm();
    if (r2 >= 1.0) return Spinor4c::Zero();
    const double eta = std::exp(-params.sharpness / (1.0 - r2));
    Spinor4c v = Spinor4c::Zero();
    for (const auto& b : params.bumps) v += b.amplitude * std::exp(-b.width * (x - b.center).squaredNorm()) * b.direction;
    return eta * v;
  };
  return sample_field(grid, DomainMask::unit_ball(grid), rule);
}

namespace {

std::mt19937_64 indexed_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

Spinor4c random_unit_spinor(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Spinor4c u;
  for (int j = 0; j < 4; ++j) u(j) = {g(rng), g(rng)};
  return u.normalized();
}

}  // namespace

TrialParams random_trial(std::uint64_t seed, std::uint64_t index) {
  auto rng = indexed_rng(seed, index);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> g;
  TrialParams t;
  const int m = 1 + static_cast<int>(unit(rng) * 4.0);
  for (int i = 0; i < std::min(m, 4); ++i) {
    Bump b;
    Vec3 dir(g(rng), g(rng), g(rng));
    dir.normalize();
    b.center = 0.6 * std::cbrt(unit(rng)) * dir;
    b.width = std::exp(std::log(20.0) * unit(rng));
    b.direction = random_unit_spinor(rng);
    b.amplitude = (0.2 + 0.8 * unit(rng)) * (unit(rng) < 0.5 ? -1.0 : 1.0);
    t.bumps.push_back(b);
  }
  t.sharpness = 0.5 + 1.5 * unit(rng);
  return t;
}

std::string to_string(InequalityVariant v) {
  switch (v) {
    case InequalityVariant::dsineq: return "dsineq";
    case InequalityVariant::cor1: return "cor1";
    case InequalityVariant::cor2: return "cor2";
  }
  return "unknown";
}

InequalityVariant parse_variant(const std::string& name) {
  for (auto v : {InequalityVariant::dsineq, InequalityVariant::cor1, InequalityVariant::cor2})
    if (to_string(v) == name) return v;
  throw std::invalid_argument("unknown inequality variant '" + name + "' (expected dsineq, cor1 or cor2)");
}

namespace {

constexpr double kRangeSlack = 1e-12;

double cor1_r(double p, double q) { return 3.0 * (q / p - 1.0); }

std::string fmt(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

}  // namespace

void validate_inequality(const InequalityParams& ip) {
  switch (ip.variant) {
    case InequalityVariant::dsineq:
      if (!(ip.p >= 1.0 && ip.p < ip.q))
        throw std::invalid_argument("dsineq needs 1 <= p < q (p = " + fmt(ip.p) + ", q = " + fmt(ip.q) + ")");
      return;
    case InequalityVariant::cor1: {
      if (!(ip.p >= 1.0)) throw std::invalid_argument("cor1 needs p >= 1");
      const double r = cor1_r(ip.p, ip.q);
      if (!(r >= 1.0 - kRangeSlack && r <= ip.p + kRangeSlack))
        throw std::invalid_argument("cor1: r := 3(q/p-1) = " + fmt(r) + " is outside r ∈ [1, p] with p = " + fmt(ip.p));
      if (!(ip.k > 0 && ip.k < ip.q))
        throw std::invalid_argument("cor1 needs k ∈ (0, q) (k = " + fmt(ip.k) + ", q = " + fmt(ip.q) + ")");
      return;
    }
    case InequalityVariant::cor2: {
      if (!(ip.p >= 1.0)) throw std::invalid_argument("cor2 needs p >= 1");
      const double bound = ip.p * (ip.p + 3.0) / 3.0;
      if (!(ip.k >= 1.0 && ip.k < bound))
        throw std::invalid_argument("cor2 needs k ∈ [1, p(p+3)/3) = [1, " + fmt(bound) + "), got k = " + fmt(ip.k));
      return;
    }
  }
}

namespace {

// (sum |f|^k h^3)^{1/k} over the mask; k may lie below 1.
double power_norm(const SpinorField& f, double k) {
  if (k >= 1.0) return std::pow(quadrature(f, k), 1.0 / k);
  double sum = 0;
  for (std::size_t c = 0; c < f.grid().cell_count(); ++c)
    if (f.mask().contains(c)) sum += std::pow(f.magnitude(c), k);
  return std::pow(sum * f.grid().cell_volume(), 1.0 / k);
}

}  // namespace

InequalityRecord inequality_ratio(const SpinorField& f, const InequalityParams& ip, const InequalityOptions& opt) {
  validate_inequality(ip);
  if (f.values().isZero(0.0)) throw std::invalid_argument("inequality ratio of the zero field is undefined");
  InequalityRecord rec;
  rec.variant = ip.variant;
  rec.p = ip.p;
  rec.grid_points = f.grid().points;
  rec.half_width = f.grid().half_width;
  const SpinorField df = dirac_on_domain(f, opt.method);
  const double dnorm = std::pow(quadrature(df, ip.p), 1.0 / ip.p);
  switch (ip.variant) {
    case InequalityVariant::dsineq: {
      rec.q = ip.q;
      rec.theta = ip.p / ip.q;
      const double alpha = rec.theta / (rec.theta - 1.0);
      rec.lhs = weak_lq(f, ip.q).value;
      const NormReport b = besov_norm(f, alpha, opt.besov);
      rec.warnings = b.warnings;
      rec.rhs = std::pow(dnorm, rec.theta) * std::pow(b.value, 1.0 - rec.theta);
      break;
    }
    case InequalityVariant::cor1:
      rec.q = ip.q;
      rec.k = ip.k;
      rec.theta = ip.p / ip.q;
      rec.r = cor1_r(ip.p, ip.q);
      rec.lhs = power_norm(f, ip.k);
      rec.rhs = std::pow(dnorm, rec.theta) * std::pow(power_norm(f, rec.r), 1.0 - rec.theta);
      break;
    case InequalityVariant::cor2:
      rec.k = ip.k;
      rec.q = ip.p * (ip.k + 3.0) / 3.0;
      rec.theta = ip.p / rec.q;
      rec.lhs = power_norm(f, ip.k);
      rec.rhs = dnorm;
      break;
  }
  rec.ratio = rec.lhs / rec.rhs;
  return rec;
}

namespace {

struct Candidate {
  double ratio;
  std::vector<double> key;
  TrialParams params;
};

bool better(const Candidate& a, const Candidate& b) {
  if (a.ratio != b.ratio) return a.ratio > b.ratio;
  return a.key < b.key;
}

// Simplex coordinates: per bump c (3), log a, b, Re/Im u (8); then log gamma.
std::vector<double> encode(const TrialParams& t) {
  std::vector<double> v;
  for (const auto& b : t.bumps) {
    for (int j = 0; j < 3; ++j) v.push_back(b.center(j));
    v.push_back(std::log(b.width));
    v.push_back(b.amplitude);
    for (int j = 0; j < 4; ++j) {
      v.push_back(b.direction(j).real());
      v.push_back(b.direction(j).imag());
    }
  }
  v.push_back(std::log(t.sharpness));
  return v;
}

std::vector<double> encode_steps(const TrialParams& t) {
  std::vector<double> v;
  for (std::size_t i = 0; i < t.bumps.size(); ++i) {
    for (int j = 0; j < 3; ++j) v.push_back(0.1);
    v.push_back(0.3);
    v.push_back(0.2);
    for (int j = 0; j < 8; ++j) v.push_back(0.2);
  }
  v.push_back(0.3);
  return v;
}

TrialParams decode(const double* v, std::size_t bumps) {
  TrialParams t;
  std::size_t i = 0;
  for (std::size_t n = 0; n < bumps; ++n) {
    Bump b;
    b.center = Vec3(v[i], v[i + 1], v[i + 2]);
    if (b.center.norm() > 0.9) b.center *= 0.9 / b.center.norm();
    b.width = std::exp(std::clamp(v[i + 3], std::log(0.05), std::log(500.0)));
    b.amplitude = v[i + 4];
    for (int j = 0; j < 4; ++j) b.direction(j) = {v[i + 5 + 2 * j], v[i + 6 + 2 * j]};
    const double n2 = b.direction.norm();
    b.direction = n2 > 1e-12 ? Spinor4c(b.direction / n2) : Spinor4c(Spinor4c::Unit(0));
    i += 13;
    t.bumps.push_back(b);
  }
  t.sharpness = std::exp(std::clamp(v[i], std::log(0.05), std::log(20.0)));
  return t;
}

struct Evaluator {
  const InequalityParams& ip;
  const SearchOptions& opt;

  bool operator()(const TrialParams& t, InequalityRecord& rec) const {
    const SpinorField f = build_trial(t, opt.grid);
    if (f.values().isZero(0.0)) return false;
    rec = inequality_ratio(f, ip, opt.inequality);
    return std::isfinite(rec.ratio);
  }
};

struct SimplexRun {
  const Evaluator* eval;
  std::size_t bumps;
  int quota;
  std::vector<Candidate> found;
  std::vector<InequalityRecord> records;
};

double simplex_objective(const gsl_vector* x, void* data) {
  auto* run = static_cast<SimplexRun*>(data);
  if (static_cast<int>(run->records.size()) >= run->quota) return std::numeric_limits<double>::max();
  const TrialParams t = decode(x->data, run->bumps);
  InequalityRecord rec;
  if (!(*run->eval)(t, rec)) return std::numeric_limits<double>::max();
  run->records.push_back(rec);
  run->found.push_back({rec.ratio, t.flatten(), t});
  return -rec.ratio;
}

void refine(SimplexRun& run, const TrialParams& start) {
  if (run.quota <= 0) return;
  const std::vector<double> x0 = encode(start), steps = encode_steps(start);
  const std::size_t n = x0.size();
  gsl_vector* x = gsl_vector_alloc(n);
  gsl_vector* ss = gsl_vector_alloc(n);
  for (std::size_t i = 0; i < n; ++i) {
    gsl_vector_set(x, i, x0[i]);
    gsl_vector_set(ss, i, steps[i]);
  }
  gsl_multimin_function fn{simplex_objective, n, &run};
  gsl_multimin_fminimizer* m = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
  gsl_multimin_fminimizer_set(m, &fn, x, ss);
  for (int iter = 0; iter < 10 * run.quota && static_cast<int>(run.records.size()) < run.quota; ++iter) {
    if (gsl_multimin_fminimizer_iterate(m) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(m), 1e-6) == GSL_SUCCESS) break;
  }
  gsl_multimin_fminimizer_free(m);
  gsl_vector_free(ss);
  gsl_vector_free(x);
}

}  // namespace

SearchResult maximize_ratio(const InequalityParams& ip, const SearchOptions& opt, const WorkerPool& pool) {
  validate_inequality(ip);
  if (opt.budget < 100) throw std::invalid_argument("maximize_ratio needs a budget of at least 100 evaluations");
  const Evaluator eval{ip, opt};
  SearchResult out;
  std::vector<Candidate> pool_of_starts;
  Candidate best{-1.0, {}, {}};
  int used = 0;
  std::uint64_t next_index = 0;

  auto note = [&](const Candidate& c, const InequalityRecord& rec) {
    if (best.ratio < 0 || better(c, best)) {
      best = c;
      out.best = rec;
    }
  };

  while (used < opt.budget) {
    // Random phase.
    const int n = std::min(opt.random_batch, opt.budget - used);
    std::vector<TrialParams> trials(static_cast<std::size_t>(n));
    std::vector<InequalityRecord> recs(static_cast<std::size_t>(n));
    std::vector<char> ok(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) trials[i] = random_trial(opt.seed, next_index + static_cast<std::uint64_t>(i));
    next_index += static_cast<std::uint64_t>(n);
    pool.parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) { ok[i] = eval(trials[i], recs[i]); });
    for (int i = 0; i < n; ++i) {
      if (!ok[i]) continue;
      Candidate c{recs[i].ratio, trials[i].flatten(), trials[i]};
      out.records.push_back(recs[i]);
      pool_of_starts.push_back(c);
      note(c, recs[i]);
    }
    used += n;
    out.trace.push_back({used, best.ratio, "random"});
    if (used >= opt.budget) break;

    // Simplex phase from the best distinct starts so far.
    std::sort(pool_of_starts.begin(), pool_of_starts.end(), better);
    pool_of_starts.erase(std::unique(pool_of_starts.begin(), pool_of_starts.end(),
                                     [](const Candidate& a, const Candidate& b) { return a.key == b.key; }),
                         pool_of_starts.end());
    const int starts = std::min<int>(opt.refine_starts, static_cast<int>(pool_of_starts.size()));
    std::vector<SimplexRun> runs(static_cast<std::size_t>(starts));
    for (int j = 0; j < starts; ++j) {
      runs[j].eval = &eval;
      runs[j].bumps = pool_of_starts[j].params.bumps.size();
      runs[j].quota = std::clamp(opt.budget - used - j * opt.refine_evaluations, 0, opt.refine_evaluations);
    }
    pool.parallel_for(static_cast<std::size_t>(starts), [&](std::size_t j) { refine(runs[j], pool_of_starts[j].params); });
    for (auto& run : runs) {
      for (std::size_t i = 0; i < run.records.size(); ++i) {
        out.records.push_back(run.records[i]);
        pool_of_starts.push_back(run.found[i]);
        note(run.found[i], run.records[i]);
      }
      used += static_cast<int>(run.records.size());
    }
    out.trace.push_back({used, best.ratio, "simplex"});
    if (starts == 0) break;
    // A run can end early when its simplex collapses; unspent quota goes to the next random batch.
  }
  out.best_params = best.params;
  return out;
}

std::vector<SpinorField> wave_packet_suite(const GridSpec& grid, int count, double k_min, double k_max,
                                           std::uint64_t seed) {
  if (count < 2 || !(k_min > 0) || !(k_max > k_min)) throw std::invalid_argument("wave packet suite needs count >= 2 and 0 < k_min < k_max");
  std::vector<SpinorField> suite;
  for (int i = 0; i < count; ++i) {
    auto rng = indexed_rng(seed, static_cast<std::uint64_t>(i));
    std::normal_distribution<double> g;
    const double k = k_min * std::pow(k_max / k_min, static_cast<double>(i) / (count - 1));
    const double sigma = std::min(2.5 / k, 0.2);
    Vec3 dir(g(rng), g(rng), g(rng));
    dir.normalize();
    const Vec3 kv = k * dir;
    const Spinor4c u = random_unit_spinor(rng);
    suite.push_back(sample_field(grid, DomainMask::full_box(grid), [&](const Vec3& x) -> Spinor4c {
      return std::polar(std::exp(-x.squaredNorm() / (2.0 * sigma * sigma)), kv.dot(x)) * u;
    }));
  }
  return suite;
}

std::vector<double> geometric_grid(double lo, double hi, int n) {
  if (!(lo > 0) || !(hi > lo) || n < 2) throw std::invalid_argument("geometric grid needs 0 < lo < hi and n >= 2");
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return g;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope fit needs matching samples, at least 2");
  double mx = 0, my = 0;
  const auto n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) throw DomainError("log-log fit needs positive samples");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n, my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
  }
  return sxy / sxx;
}

namespace {

double field_norm(const SpinorField& f, double p) {
  if (std::isinf(p)) return sup_norm(f);
  return std::pow(quadrature(f, p), 1.0 / p);
}

}  // namespace

LemmaFitReport lemma_constant_fit(const std::vector<SpinorField>& suite, double p, const std::vector<double>& t_grid,
                                  const std::vector<double>& s_grid, const WorkerPool& pool) {
  if (suite.empty()) throw std::invalid_argument("lemma fit needs a nonempty suite");
  if (!(p >= 1.0)) throw std::invalid_argument("lemma fit needs p >= 1");
  if (t_grid.size() < 2 || s_grid.size() < 2) throw std::invalid_argument("lemma fit needs at least two t and s values");
  const double p_dual = p == 1.0 ? std::numeric_limits<double>::infinity() : p / (p - 1.0);
  const std::size_t nt = t_grid.size(), ns = s_grid.size();
  std::vector<std::vector<double>> diff(suite.size(), std::vector<double>(nt)), smooth(suite.size(), std::vector<double>(ns));
  std::vector<double> consts(suite.size(), 0.0);
  std::vector<char> degenerate(suite.size(), 0);
  pool.parallel_for(suite.size(), [&](std::size_t i) {
    const SpinorField f = suite[i].zero_extended();
    const SpinorField df = apply_dirac(f, {DerivativeKind::spectral_periodic});
    const double dnorm = field_norm(df, p);
    const double gnorm = field_norm(f, p_dual);
    if (!(dnorm > 0) || !(gnorm > 0)) {
      degenerate[i] = 1;
      return;
    }
    for (std::size_t j = 0; j < nt; ++j) {
      const SpinorField pt = heat_semigroup(f, t_grid[j]).field;
      diff[i][j] = field_norm(f - pt, p) / dnorm;
      consts[i] = std::max(consts[i], diff[i][j] / std::sqrt(t_grid[j]));
    }
    for (std::size_t j = 0; j < ns; ++j) smooth[i][j] = field_norm(heat_semigroup(df, s_grid[j]).field, p_dual) / gnorm;
  });
  if (std::any_of(degenerate.begin(), degenerate.end(), [](char d) { return d != 0; }))
    throw std::invalid_argument("lemma fit suite contains a field with vanishing norm or derivative");
  LemmaFitReport r;
  r.p = p;
  r.t_grid = t_grid;
  r.s_grid = s_grid;
  r.difference_envelope.assign(nt, 0.0);
  r.smoothing_envelope.assign(ns, 0.0);
  for (std::size_t i = 0; i < suite.size(); ++i) {
    for (std::size_t j = 0; j < nt; ++j) r.difference_envelope[j] = std::max(r.difference_envelope[j], diff[i][j]);
    for (std::size_t j = 0; j < ns; ++j) r.smoothing_envelope[j] = std::max(r.smoothing_envelope[j], smooth[i][j]);
    r.fitted_constant = std::max(r.fitted_constant, consts[i]);
  }
  r.difference_slope = log_log_slope(t_grid, r.difference_envelope);
  r.smoothing_slope = log_log_slope(s_grid, r.smoothing_envelope);
  return r;
}

}  // namespace diraclab
