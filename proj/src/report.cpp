#include "diraclab/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace diraclab {

namespace {

// nlohmann writes non-finite doubles as null; keep them visible as strings.
Json number(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

Json numbers(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

Json params_json(const std::map<std::string, double>& m) {
  Json j = Json::object();
  for (const auto& [k, v] : m) j[k] = number(v);
  return j;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Json to_json(const CliffordReport& r) {
  return {{"anticommutator_error", number(r.anticommutator_error)},
          {"hermitian_error", number(r.hermitian_error)},
          {"unitary_error", number(r.unitary_error)}};
}

Json to_json(const NormReport& r) {
  return {{"kind", r.kind},
          {"value", number(r.value)},
          {"params", params_json(r.params)},
          {"grid_points", r.grid_points},
          {"half_width", number(r.half_width)},
          {"mask", r.mask},
          {"warnings", r.warnings}};
}

Json to_json(const FrameSweepReport& r) {
  return {{"samples", r.samples},
          {"unitarity", number(r.unitarity)},
          {"diagonalization", number(r.diagonalization)},
          {"beta_clifford", number(r.beta_clifford)},
          {"beta_hermitian", number(r.beta_hermitian)},
          {"scale_invariance", number(r.scale_invariance)},
          {"y_homogeneity", number(r.y_homogeneity)},
          {"y_fd_relative", number(r.y_fd_relative)}};
}

Json to_json(const IdentityReport& r) {
  return {{"identity", r.identity},
          {"relative_error", number(r.relative_error)},
          {"max_error", number(r.max_error)},
          {"mean_error", number(r.mean_error)},
          {"samples", r.samples},
          {"excluded_layer", r.excluded_layer}};
}

Json to_json(const WeakEquationReport& r) {
  return {{"strong_residual", number(r.strong_residual)},
          {"weak_pairings", numbers(r.weak_pairings)},
          {"samples", r.samples},
          {"excluded_layer", r.excluded_layer}};
}

Json to_json(const LossYauOracleReport& r) {
  return {{"magnitude_error", number(r.magnitude_error)},
          {"grid_points", r.grid_points},
          {"residuals", numbers(r.residuals)},
          {"potential_ray_slope", number(r.potential_ray_slope)},
          {"potential_decay_bound", number(r.potential_decay_bound)},
          {"passed", r.passed}};
}

Json to_json(const TailReport& r) {
  return {{"integral", r.integral},
          {"params", params_json(r.params)},
          {"radii", numbers(r.radii)},
          {"partial", numbers(r.partial)},
          {"increments", numbers(r.increments)},
          {"tail_fraction", number(r.tail_fraction)},
          {"density_slope", number(r.density_slope)},
          {"geometric_tail_fraction", number(r.geometric_tail_fraction)},
          {"increments_decreasing", r.increments_decreasing},
          {"warnings", r.warnings}};
}

Json to_json(const DecayFitReport& r) {
  return {{"slope", number(r.slope)},
          {"standard_error", number(r.standard_error)},
          {"r_min", number(r.r_min)},
          {"r_max", number(r.r_max)},
          {"statistic", r.statistic == ShellStatistic::mean ? "mean" : "max"},
          {"shells", r.shells}};
}

Json to_json(const ScanRecord& r) {
  return {{"t", number(r.t)},
          {"sigma_min", number(r.sigma_min)},
          {"iterations", r.iterations},
          {"inner_iterations", r.inner_iterations},
          {"converged", r.converged}};
}

Json to_json(const ScanSummary& r) {
  Json runs = Json::array();
  for (const auto& [a, b] : r.runs) runs.push_back({number(a), number(b)});
  return {{"floor", number(r.floor)},
          {"dips", numbers(r.dips)},
          {"runs", runs},
          {"unconverged", r.unconverged},
          {"max_jump_excess", number(r.max_jump_excess)}};
}

Json to_json(const NullityEstimate& r) {
  return {{"count", r.count},
          {"singular_values", numbers(r.singular_values)},
          {"threshold", number(r.threshold)},
          {"saturated", r.saturated}};
}

Json to_json(const InequalityRecord& r) {
  return {{"variant", to_string(r.variant)},
          {"p", number(r.p)},
          {"q", number(r.q)},
          {"k", number(r.k)},
          {"r", number(r.r)},
          {"theta", number(r.theta)},
          {"lhs", number(r.lhs)},
          {"rhs", number(r.rhs)},
          {"ratio", number(r.ratio)},
          {"grid_points", r.grid_points},
          {"half_width", number(r.half_width)},
          {"warnings", r.warnings}};
}

Json to_json(const TrialParams& p) {
  Json bumps = Json::array();
  for (const auto& b : p.bumps) {
    Json dir = Json::array();
    for (int j = 0; j < 4; ++j) dir.push_back({number(b.direction(j).real()), number(b.direction(j).imag())});
    bumps.push_back({{"center", {number(b.center(0)), number(b.center(1)), number(b.center(2))}},
                     {"width", number(b.width)},
                     {"amplitude", number(b.amplitude)},
                     {"direction", dir}});
  }
  return {{"bumps", bumps}, {"sharpness", number(p.sharpness)}};
}

Json to_json(const SearchResult& r) {
  Json trace = Json::array();
  for (const auto& t : r.trace)
    trace.push_back({{"evaluations", t.evaluations}, {"best_ratio", number(t.best_ratio)}, {"phase", t.phase}});
  return {{"best_params", to_json(r.best_params)},
          {"best", to_json(r.best)},
          {"evaluations", r.records.size()},
          {"trace", trace},
          {"note", "largest ratio over the evaluated trial family: a lower bound for the best constant at this grid"}};
}

Json to_json(const LemmaFitReport& r) {
  return {{"p", number(r.p)},
          {"t_grid", numbers(r.t_grid)},
          {"difference_envelope", numbers(r.difference_envelope)},
          {"difference_slope", number(r.difference_slope)},
          {"fitted_constant", number(r.fitted_constant)},
          {"s_grid", numbers(r.s_grid)},
          {"smoothing_envelope", numbers(r.smoothing_envelope)},
          {"smoothing_slope", number(r.smoothing_slope)}};
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string join_warnings(const std::vector<std::string>& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "; " : "") + w[i];
  return s;
}

}  // namespace

std::string CsvTable::str() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) out += (i ? "," : "") + csv_field(fields[i]);
    out += "\r\n";
  };
  line(header);
  for (const auto& r : rows) {
    if (r.size() != header.size()) throw std::logic_error("CSV row width does not match the header");
    line(r);
  }
  return out;
}

CsvTable scan_table(const std::vector<ScanRecord>& records) {
  CsvTable t{{"t", "sigma_min", "iterations", "converged"}, {}};
  for (const auto& r : records)
    t.rows.push_back({format_number(r.t), format_number(r.sigma_min), std::to_string(r.iterations),
                      r.converged ? "true" : "false"});
  return t;
}

CsvTable inequality_table(const std::vector<InequalityRecord>& records) {
  CsvTable t{{"index", "variant", "p", "q", "k", "r", "theta", "lhs", "rhs", "ratio", "grid_points", "warnings"}, {}};
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    t.rows.push_back({std::to_string(i), to_string(r.variant), format_number(r.p), format_number(r.q),
                      format_number(r.k), format_number(r.r), format_number(r.theta), format_number(r.lhs),
                      format_number(r.rhs), format_number(r.ratio), std::to_string(r.grid_points),
                      join_warnings(r.warnings)});
  }
  return t;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  os << content;
  if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace diraclab
