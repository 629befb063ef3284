#include "commands.hpp"

#include "diraclab/field_io.hpp"
#include "diraclab/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#ifndef DIRACLAB_VERSION
#define DIRACLAB_VERSION "unknown"
#endif

namespace diraclab::cli {

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"algebra-verify", "inversion-verify", "norms",        "inequality-check",
                                                 "extremal-search", "zero-mode",        "coupling-scan"};
  return names;
}

namespace {

const std::vector<std::string> kZeroModeChecks = {"all", "oracle", "theorem3", "theorem4", "residual", "decay", "weighted"};

// Rethrows argument errors from library validation as configuration errors naming the key.
template <typename F>
void as_config(const std::string& key, F&& f) {
  try {
    f();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("key '" + key + "': " + e.what());
  }
}

GridSpec grid_from(const RunConfig& cfg, double default_l, long long default_n) {
  const double l = cfg.real("grid_l", default_l);
  const long long n = cfg.integer("grid_n", default_n);
  if (n < 8 || n > 512 || n % 2 != 0) throw ConfigError("key 'grid_n': expected an even integer in [8, 512], got " + std::to_string(n));
  if (!(l > 0)) throw ConfigError("key 'grid_l': expected a positive half-width");
  return make_grid(l, static_cast<int>(n));
}

int even_points(const RunConfig& cfg, const std::string& key, long long fallback) {
  const long long n = cfg.integer(key, fallback);
  if (n < 8 || n > 512 || n % 2 != 0) throw ConfigError("key '" + key + "': expected an even integer in [8, 512], got " + std::to_string(n));
  return static_cast<int>(n);
}

long long positive(const RunConfig& cfg, const std::string& key, long long fallback) {
  const long long v = cfg.integer(key, fallback);
  if (v < 1) throw ConfigError("key '" + key + "': expected a positive integer, got " + std::to_string(v));
  return v;
}

std::uint64_t seed_of(const RunConfig& cfg) {
  const long long s = cfg.integer("seed", 1);
  if (s < 0) throw ConfigError("key 'seed': expected a nonnegative integer");
  return static_cast<std::uint64_t>(s);
}

InequalityParams inequality_from(const RunConfig& cfg) {
  InequalityParams ip;
  as_config("variant", [&] { ip.variant = parse_variant(cfg.text("variant", "dsineq")); });
  switch (ip.variant) {
    case InequalityVariant::dsineq:
      ip.p = cfg.real("p", 2.0), ip.q = cfg.real("q", 4.0), ip.k = cfg.real("k", 2.0);
      break;
    case InequalityVariant::cor1:
      ip.p = cfg.real("p", 2.0), ip.q = cfg.real("q", 10.0 / 3.0), ip.k = cfg.real("k", 3.0);
      break;
    case InequalityVariant::cor2:
      ip.p = cfg.real("p", 2.0), ip.q = cfg.real("q", 4.0), ip.k = cfg.real("k", 2.0);
      break;
  }
  as_config(ip.variant == InequalityVariant::cor1 ? "q" : (ip.variant == InequalityVariant::cor2 ? "k" : "p"),
            [&] { validate_inequality(ip); });
  return ip;
}

std::vector<double> linear_grid(double lo, double hi, long long count) {
  std::vector<double> g(static_cast<std::size_t>(count));
  for (long long i = 0; i < count; ++i) g[i] = count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (count - 1);
  return g;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << v;
  return s.str();
}

class Outputs {
 public:
  explicit Outputs(std::filesystem::path dir) : dir_(std::move(dir)) {}
  void json(const std::string& name, const Json& j) { text(name, dump_json(j)); }
  void text(const std::string& name, const std::string& content) {
    write_text_file((dir_ / name).string(), content);
    names_.push_back(name);
  }
  void field(const std::string& name, const SpinorField& f) {
    export_field(f, (dir_ / name).string());
    names_.push_back(name);
    names_.push_back(name + ".json");
  }
  std::vector<std::string> names() const {
    auto n = names_;
    std::sort(n.begin(), n.end());
    return n;
  }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> names_;
};

struct Context {
  const Invocation& inv;
  const RunConfig& cfg;
  Outputs& out;
  const WorkerPool& pool;
  std::ostream& log;
};

Json gate(bool passed, double value, double tolerance) {
  return {{"passed", passed}, {"value", std::isfinite(value) ? Json(value) : Json(format_number(value))}, {"tolerance", tolerance}};
}

// ---------------------------------------------------------------- algebra-verify

bool algebra_verify(Context& c) {
  const double tol = c.cfg.real("tol_clifford", 1e-13);
  const CliffordReport r = verify_clifford();
  const double worst = std::max({r.anticommutator_error, r.hermitian_error, r.unitary_error});
  const bool ok = worst <= tol;
  c.out.json("clifford.json", {{"report", to_json(r)}, {"check", gate(ok, worst, tol)}});
  c.log << "clifford max error " << worst << (ok ? " ok" : " FAIL") << "\n";
  return ok;
}

// ---------------------------------------------------------------- inversion-verify

Spinor4c gaussian_e1(const Vec3& x) { return std::exp(-x.squaredNorm()) * Spinor4c::Unit(0); }

bool inversion_verify(Context& c) {
  const RunConfig& cfg = c.cfg;
  bool all = true;

  const double tol_frames = cfg.real("tol_frames", 1e-12);
  const FrameSweepReport fr = verify_frames(static_cast<std::size_t>(positive(cfg, "samples", 10000)), seed_of(cfg));
  const double frame_worst = std::max({fr.unitarity, fr.diagonalization, fr.beta_clifford, fr.y_homogeneity});
  const bool frames_ok = frame_worst <= tol_frames;
  c.out.json("frames.json", {{"report", to_json(fr)}, {"check", gate(frames_ok, frame_worst, tol_frames)}});
  c.log << "frames max error " << frame_worst << (frames_ok ? " ok" : " FAIL") << "\n";
  all = all && frames_ok;

  const double tol_identity = cfg.real("tol_identity", 0.05);
  const IdentityReport id = verify_transform_identity(
      gaussian_e1, TransformIdentityOptions::at_resolution(even_points(cfg, "identity_n", 64), 4.0));
  const bool id_ok = id.relative_error <= tol_identity;
  c.out.json("transform_identity.json", {{"report", to_json(id)}, {"check", gate(id_ok, id.relative_error, tol_identity)}});
  c.log << "transform identity relative error " << id.relative_error << (id_ok ? " ok" : " FAIL") << "\n";
  all = all && id_ok;

  // psi = |x|^{-4} e1 on 1 < |x| < R: int |psi| dx = 4 pi (1 - 1/R).
  const double tol_jac = cfg.real("tol_jacobian", 0.02);
  const double r_outer = cfg.real("r_outer", 8.0);
  if (!(r_outer > 2.0)) throw ConfigError("key 'r_outer': expected a radius above 2");
  const int nj = even_points(cfg, "jacobian_n", 96);
  const GridSpec ext = make_grid(r_outer, nj);
  const SpinorField psi = sample_field(ext, DomainMask::exterior_annulus(ext, r_outer),
                                       [](const Vec3& x) -> Spinor4c { return std::pow(x.squaredNorm(), -2.0) * Spinor4c::Unit(0); });
  const auto [lhs, rhs] = jacobian_check(psi, make_grid(1.0, nj), 1.0);
  const double exact = 4.0 * std::numbers::pi * (1.0 - 1.0 / r_outer);
  const double gap = std::max(std::abs(lhs - exact), std::abs(rhs - exact)) / exact;
  const bool jac_ok = gap <= tol_jac;
  c.out.json("jacobian.json", {{"exterior_integral", lhs},
                               {"ball_integral", rhs},
                               {"exact", exact},
                               {"grid_points", nj},
                               {"check", gate(jac_ok, gap, tol_jac)}});
  c.log << "jacobian gap " << gap << (jac_ok ? " ok" : " FAIL") << "\n";
  all = all && jac_ok;

  // The transformed Loss-Yau mode must solve (alpha.p + Z) Psi = 0 inside the ball.
  const double tol_weak = cfg.real("tol_weak", 1e-2);
  const int nw = even_points(cfg, "identity_n", 64);
  const GridSpec ball = make_grid(1.0 + 8.0 / nw, nw);
  const double eps = 1.0 / cfg.real("r_outer", 8.0);
  const SpinorField big = sample_field(ball, DomainMask::punctured_ball(ball, eps), pullback_rule(loss_yau_spinor));
  const WeakEquationReport we = verify_weak_equation(big, PotentialSpec::loss_yau(),
                                                     static_cast<int>(positive(cfg, "test_functions", 16)), seed_of(cfg));
  double worst_pairing = 0;
  for (double w : we.weak_pairings) worst_pairing = std::max(worst_pairing, w);
  const bool weak_ok = worst_pairing <= tol_weak;
  c.out.json("weak_equation.json", {{"report", to_json(we)}, {"check", gate(weak_ok, worst_pairing, tol_weak)}});
  c.log << "weak equation max pairing " << worst_pairing << " (strong residual " << we.strong_residual << ")"
        << (weak_ok ? " ok" : " FAIL") << "\n";
  return all && weak_ok;
}

// ---------------------------------------------------------------- norms

SpinorField builtin_sample(const GridSpec& grid) {
  const Spinor4c u = Spinor4c(1.0, std::complex<double>(0, 1), 0.0, 0.0) / std::sqrt(2.0);
  return sample_field(grid, DomainMask::unit_ball(grid), [u](const Vec3& x) -> Spinor4c {
    return std::exp(-4.0 * (x - Vec3(0.1, 0.0, -0.05)).squaredNorm()) * u;
  });
}

bool norms(Context& c) {
  const RunConfig& cfg = c.cfg;
  const std::string path = cfg.text("field", "");
  SpinorField f = path.empty() ? builtin_sample(grid_from(cfg, 1.0, 32)) : [&] {
    try {
      return read_field(path);
    } catch (const std::runtime_error& e) {
      throw ConfigError("key 'field': " + std::string(e.what()));
    }
  }();
  if (path.empty()) c.out.field("sample_field.dlsf", f);
  const double p = cfg.real("p", 2.0), q = cfg.real("q", 4.0), k = cfg.real("k", 2.0), alpha = cfg.real("alpha", -1.0);
  Json reports = Json::array();
  reports.push_back(to_json(lp_norm(f, p)));
  reports.push_back(to_json(dirac_sobolev_norm(f, p)));
  reports.push_back(to_json(weak_lq(f, q)));
  reports.push_back(to_json(besov_norm(f, alpha)));
  reports.push_back(to_json(lorentz_embedding_ratio(f, k, q)));
  bool finite = true;
  for (const auto& r : reports) finite = finite && r["value"].is_number();
  c.out.json("norms.json", {{"field", Json::parse(field_sidecar_json(f))},
                            {"source", path.empty() ? "built-in sample" : path},
                            {"reports", reports},
                            {"passed", finite}});
  for (const auto& r : reports) c.log << r["kind"].get<std::string>() << " = " << r["value"].dump() << "\n";
  return finite;
}

// ---------------------------------------------------------------- inequality-check

Json params_json(const InequalityParams& ip) {
  return {{"variant", to_string(ip.variant)}, {"p", ip.p}, {"q", ip.q}, {"k", ip.k}};
}

bool inequality_trials(Context& c, const InequalityParams& ip) {
  const RunConfig& cfg = c.cfg;
  const GridSpec grid = grid_from(cfg, 1.0, 32);
  const auto trials = static_cast<std::size_t>(positive(cfg, "trials", 200));
  const std::uint64_t seed = seed_of(cfg);
  const double tol_scale = cfg.real("tol_scale", 1e-10);
  const std::size_t scale_checks = std::min<std::size_t>(trials, 8);
  std::vector<InequalityRecord> recs(trials);
  std::vector<double> scale_err(scale_checks, 0.0);
  c.pool.parallel_for(trials, [&](std::size_t i) {
    const SpinorField f = build_trial(random_trial(seed, i), grid);
    recs[i] = inequality_ratio(f, ip);
    if (i < scale_checks) {
      const double scaled = inequality_ratio(f.scaled({-2.5, 0.75}), ip).ratio;
      scale_err[i] = std::abs(scaled - recs[i].ratio) / recs[i].ratio;
    }
  });
  bool finite = true;
  std::size_t best = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    finite = finite && std::isfinite(recs[i].ratio) && recs[i].ratio > 0;
    if (recs[i].ratio > recs[best].ratio) best = i;
  }
  const double scale_worst = *std::max_element(scale_err.begin(), scale_err.end());
  const bool scale_ok = scale_worst <= tol_scale;
  c.out.text("inequality_records.csv", inequality_table(recs).str());
  c.out.json("inequality_summary.json",
             {{"params", params_json(ip)},
              {"trials", trials},
              {"grid_points", grid.points},
              {"half_width", grid.half_width},
              {"max_ratio", recs[best].ratio},
              {"argmax_trial", best},
              {"argmax_params", to_json(random_trial(seed, best))},
              {"all_finite", finite},
              {"scale_invariance", gate(scale_ok, scale_worst, tol_scale)},
              {"note", "verified on the cutoff-Gaussian trial family only"},
              {"passed", finite && scale_ok}});
  c.log << to_string(ip.variant) << ": max ratio " << recs[best].ratio << " over " << trials << " trials\n";
  return finite && scale_ok;
}

bool lemma_fit(Context& c) {
  const RunConfig& cfg = c.cfg;
  const GridSpec grid = grid_from(cfg, 1.0, 64);
  const double p = cfg.real("p", 2.0);
  if (!(p >= 1.0)) throw ConfigError("key 'p': the lemma fit needs p >= 1");
  const double tol = cfg.real("tol_lemma_slope", 0.1);
  const auto suite = wave_packet_suite(grid, 8, 3.0, 80.0, seed_of(cfg));
  const LemmaFitReport r =
      lemma_constant_fit(suite, p, geometric_grid(1e-4, 1e-1, 7), geometric_grid(1e-4, 1e-2, 5), c.pool);
  const double d1 = std::abs(r.difference_slope - 0.5), d2 = std::abs(r.smoothing_slope + 0.5);
  const bool ok = d1 <= tol && d2 <= tol;
  c.out.json("lemma_fit.json", {{"report", to_json(r)},
                                {"suite", {{"kind", "wave packets"}, {"count", 8}, {"k_min", 3.0}, {"k_max", 80.0}}},
                                {"difference_slope_check", gate(d1 <= tol, r.difference_slope, tol)},
                                {"smoothing_slope_check", gate(d2 <= tol, r.smoothing_slope, tol)},
                                {"passed", ok}});
  c.log << "difference slope " << r.difference_slope << ", smoothing slope " << r.smoothing_slope << ", C "
        << r.fitted_constant << (ok ? " ok" : " FAIL") << "\n";
  return ok;
}

bool inequality_check(Context& c) {
  const std::string campaign = c.cfg.text("campaign", "trials");
  if (campaign == "lemma") return lemma_fit(c);
  return inequality_trials(c, inequality_from(c.cfg));
}

// ---------------------------------------------------------------- extremal-search

bool extremal_search(Context& c) {
  const RunConfig& cfg = c.cfg;
  const InequalityParams ip = inequality_from(cfg);
  SearchOptions opt;
  opt.budget = static_cast<int>(cfg.integer("budget", 200));
  opt.seed = seed_of(cfg);
  opt.grid = grid_from(cfg, 1.0, 32);
  const SearchResult r = maximize_ratio(ip, opt, c.pool);
  const bool ok = std::isfinite(r.best.ratio) && r.best.ratio > 0;
  Json j = to_json(r);
  j["params"] = params_json(ip);
  j["budget"] = opt.budget;
  j["passed"] = ok;
  c.out.json("search.json", j);
  c.out.text("search_records.csv", inequality_table(r.records).str());
  c.log << to_string(ip.variant) << ": best ratio " << r.best.ratio << " after " << r.records.size() << " evaluations\n";
  return ok;
}

// ---------------------------------------------------------------- zero-mode

bool zero_mode(Context& c) {
  const RunConfig& cfg = c.cfg;
  const std::string check = c.inv.check.empty() ? "all" : c.inv.check;
  auto wants = [&](const char* name) { return check == "all" || check == name; };

  // The Loss-Yau pair is accepted only after its own oracle passes.
  const LossYauOracleReport oracle = loss_yau_oracle();
  c.out.json("oracle.json", to_json(oracle));
  c.log << "Loss-Yau oracle " << (oracle.passed ? "ok" : "FAIL") << "\n";
  if (!oracle.passed) return false;
  if (check == "oracle") return true;

  const double r_outer = cfg.real("r_outer", 8.0);
  if (!(r_outer > 2.0)) throw ConfigError("key 'r_outer': expected a radius above 2");
  const int n = even_points(cfg, "grid_n", 64);
  const GridSpec grid = make_grid(r_outer, n);
  const SpinorField psi = sample_field(grid, DomainMask::exterior_annulus(grid, r_outer), loss_yau_spinor);
  const double tol_tail = cfg.real("tol_tail", 0.05);
  bool all = true;

  auto tail_gate = [&](const std::string& name, const TailReport& t) {
    const bool ok = t.increments_decreasing && t.tail_fraction < tol_tail;
    c.out.json(name + ".json", {{"report", to_json(t)}, {"check", gate(ok, t.tail_fraction, tol_tail)}});
    c.log << name << ": tail fraction " << t.tail_fraction << (t.increments_decreasing ? "" : ", increments not decreasing")
          << (ok ? " ok" : " FAIL") << "\n";
    all = all && ok;
  };
  if (wants("theorem3")) tail_gate("theorem3", theorem3_check(psi, cfg.real("k", 3.0)));
  if (wants("theorem4")) tail_gate("theorem4", theorem4_check(psi, cfg.real("t", 1.0), cfg.real("s", 1.3)));
  if (wants("residual")) {
    const double tol = cfg.real("tol_residual", 1e-2);
    const double res = residual_norm(psi, PotentialSpec::loss_yau());
    const bool ok = res <= tol;
    c.out.json("residual.json", {{"grid_points", n}, {"outer_radius", r_outer}, {"method", "centered_fd4"},
                                 {"check", gate(ok, res, tol)}});
    c.log << "residual " << res << (ok ? " ok" : " FAIL") << "\n";
    all = all && ok;
  }
  if (wants("decay")) {
    const double tol = cfg.real("tol_slope", 0.05);
    const DecayFitReport fit = decay_fit(radial_profile(psi, static_cast<int>(positive(cfg, "bins", 24))),
                                         cfg.real("r_fit_min", 2.0), cfg.real("r_fit_max", r_outer));
    const bool ok = std::abs(fit.slope + 2.0) <= tol;
    c.out.json("decay.json", {{"report", to_json(fit)}, {"target", -2.0}, {"check", gate(ok, fit.slope, tol)}});
    c.log << "decay slope " << fit.slope << (ok ? " ok" : " FAIL (target -2)") << "\n";
    all = all && ok;
  }
  if (wants("weighted")) {
    // Finiteness only: decaying increments and a radial density integrable at infinity.
    const WeightedConditions w = weighted_conditions(psi, make_grid(1.0 + 8.0 / n, n));
    for (const auto& [name, t] : {std::pair{"weighted_gradient", &w.gradient}, std::pair{"weighted_inverted", &w.inverted}}) {
      const bool ok = t->increments_decreasing && t->density_slope < -1.0;
      c.out.json(std::string(name) + ".json", {{"report", to_json(*t)}, {"check", gate(ok, t->density_slope, -1.0)}});
      c.log << name << ": density slope " << t->density_slope << (ok ? " ok" : " FAIL") << "\n";
      all = all && ok;
    }
  }
  return all;
}

// ---------------------------------------------------------------- coupling-scan

bool coupling_scan_cmd(Context& c) {
  const RunConfig& cfg = c.cfg;
  PotentialSpec q = PotentialSpec::zero();
  as_config("potential", [&] { q = parse_potential(cfg.text("potential", "loss_yau")); });
  ScanOptions opt;
  opt.grid = grid_from(cfg, 6.0, 32);
  opt.seed = seed_of(cfg);
  const double t_min = cfg.real("t_min", 0.0), t_max = cfg.real("t_max", 2.0);
  const long long count = positive(cfg, "t_count", 41);
  if (!(t_max >= t_min)) throw ConfigError("key 't_max': must not be below t_min");
  const std::vector<ScanRecord> recs = coupling_scan(q, linear_grid(t_min, t_max, count), opt, c.pool);
  const ScanSummary s = summarize_scan(recs, q, opt);
  bool early_dip = false;
  for (double t : s.dips) early_dip = early_dip || t <= 0.5;
  const bool ok = s.unconverged == 0 && s.runs.size() <= 2 && !early_dip;
  Json records = Json::array();
  for (const auto& r : recs) records.push_back(to_json(r));
  c.out.text("scan.csv", scan_table(recs).str());
  c.out.json("scan_summary.json", {{"potential", q.name()},
                                   {"grid_points", opt.grid.points},
                                   {"half_width", opt.grid.half_width},
                                   {"summary", to_json(s)},
                                   {"records", records},
                                   {"checks",
                                    {{"all_converged", s.unconverged == 0},
                                     {"at_most_two_runs", s.runs.size() <= 2},
                                     {"no_dip_up_to_half", !early_dip}}},
                                   {"passed", ok}});
  c.log << "scan: floor " << s.floor << ", " << s.dips.size() << " dip points in " << s.runs.size() << " runs"
        << (ok ? " ok" : " FAIL") << "\n";
  return ok;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

void validate(const Invocation& inv) {
  const auto& names = command_names();
  if (std::find(names.begin(), names.end(), inv.command) == names.end()) {
    std::string list;
    for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
    throw ConfigError("unknown command '" + inv.command + "' (expected one of " + list + ")");
  }
  const RunConfig& cfg = inv.config;
  if (!inv.check.empty() && inv.command != "zero-mode")
    throw ConfigError("command '" + inv.command + "' takes no sub-check, got '" + inv.check + "'");
  positive(cfg, "threads", 1);
  seed_of(cfg);
  if (inv.command == "zero-mode") {
    const std::string check = inv.check.empty() ? "all" : inv.check;
    if (std::find(kZeroModeChecks.begin(), kZeroModeChecks.end(), check) == kZeroModeChecks.end())
      throw ConfigError("unknown zero-mode check '" + check +
                        "' (expected all, oracle, theorem3, theorem4, residual, decay or weighted)");
    if (check == "all" || check == "theorem3") as_config("k", [&] { validate_theorem3(cfg.real("k", 3.0)); });
    if (check == "all" || check == "theorem4")
      as_config(cfg.has("s") && !cfg.has("t") ? "s" : "t", [&] { validate_theorem4(cfg.real("t", 1.0), cfg.real("s", 1.3)); });
  }
  if (inv.command == "extremal-search") {
    inequality_from(cfg);
    if (cfg.integer("budget", 200) < 100) throw ConfigError("key 'budget': the search needs at least 100 evaluations");
  }
  if (inv.command == "inequality-check") {
    const std::string campaign = cfg.text("campaign", "trials");
    if (campaign != "trials" && campaign != "lemma")
      throw ConfigError("key 'campaign': expected trials or lemma, got '" + campaign + "'");
    if (campaign == "trials") inequality_from(cfg);
  }
  if (inv.command == "norms") {
    const double p = cfg.real("p", 2.0), q = cfg.real("q", 4.0), k = cfg.real("k", 2.0), alpha = cfg.real("alpha", -1.0);
    if (!(p >= 1.0)) throw ConfigError("key 'p': norms need p >= 1");
    if (!(q > 0)) throw ConfigError("key 'q': expected q > 0");
    if (!(k > 0 && k < q)) throw ConfigError("key 'k': the Lorentz embedding needs 0 < k < q");
    if (!(alpha < 0)) throw ConfigError("key 'alpha': the Besov exponent must be negative");
  }
}

int run(const Invocation& inv, std::ostream& log) {
  validate(inv);
  const auto started = std::chrono::steady_clock::now();
  const std::string started_utc = utc_now();
  const std::filesystem::path dir = inv.config.text("out", "diraclab_out");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("key 'out': cannot create '" + dir.string() + "': " + ec.message());

  Outputs out(dir);
  const WorkerPool pool(static_cast<int>(inv.config.integer("threads", 1)));
  Context c{inv, inv.config, out, pool, log};
  bool passed = false;
  if (inv.command == "algebra-verify") passed = algebra_verify(c);
  else if (inv.command == "inversion-verify") passed = inversion_verify(c);
  else if (inv.command == "norms") passed = norms(c);
  else if (inv.command == "inequality-check") passed = inequality_check(c);
  else if (inv.command == "extremal-search") passed = extremal_search(c);
  else if (inv.command == "zero-mode") passed = zero_mode(c);
  else if (inv.command == "coupling-scan") passed = coupling_scan_cmd(c);

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  write_text_file((dir / "run_metadata.json").string(),
                  dump_json({{"started_utc", started_utc}, {"finished_utc", utc_now()}, {"wall_seconds", wall}}));
  std::vector<std::string> files = out.names();
  files.push_back("run_metadata.json");
  std::sort(files.begin(), files.end());
  Json config = Json::object();
  for (const auto& [k, v] : inv.config.values())
    if (k != "out") config[k] = v;
  write_text_file((dir / "manifest.json").string(),
                  dump_json({{"command", inv.command},
                             {"check", inv.check},
                             {"config", config},
                             {"config_hash", hex64(config_hash(inv.command + (inv.check.empty() ? "" : " " + inv.check), inv.config))},
                             {"code_version", DIRACLAB_VERSION},
                             {"outputs", files},
                             {"passed", passed}}));
  log << (passed ? "PASS" : "FAIL") << " " << inv.command << " (" << out.dir().string() << ")\n";
  return passed ? exit_pass : exit_fail;
}

}  // namespace diraclab::cli
