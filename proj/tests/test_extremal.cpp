#include "diraclab/extremal.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace diraclab;
using C = std::complex<double>;

namespace {

TrialParams centered_bump(double width, double amplitude, double gamma = 1.0) {
  TrialParams t;
  Bump b;
  b.width = width;
  b.amplitude = amplitude;
  b.direction = Spinor4c(C(0, 1), 1, 0, 0).normalized();
  t.bumps.push_back(b);
  t.sharpness = gamma;
  return t;
}

std::string message_of(const InequalityParams& ip) {
  try {
    validate_inequality(ip);
  } catch (const std::invalid_argument& e) {
    return e.what();
  }
  return "";
}

const InequalityParams dsineq_24{InequalityVariant::dsineq, 2, 4, 2};
const InequalityParams cor1_case{InequalityVariant::cor1, 2, 10.0 / 3.0, 3};
const InequalityParams cor2_22{InequalityVariant::cor2, 2, 4, 2};

}  // namespace

TEST(BuildTrial, ZeroAmplitudeGivesZeroField) {
  const SpinorField f = build_trial(centered_bump(4, 0), make_grid(1, 16));
  EXPECT_TRUE(f.values().isZero(0.0));
}

TEST(BuildTrial, SupportedInUnitBall) {
  const GridSpec g = make_grid(1.5, 24);
  const SpinorField f = build_trial(random_trial(3, 5), g);
  for (std::size_t c = 0; c < g.cell_count(); ++c)
    if (g.position(c).norm() >= 1) {
      EXPECT_EQ(f.value(c), Spinor4c::Zero());
    }
  EXPECT_EQ(f.mask().kind(), MaskKind::unit_ball);
}

TEST(BuildTrial, CenterValueMatchesClosedForm) {
  const GridSpec g = make_grid(1, 16);
  const TrialParams t = centered_bump(4, 1.0, 1.0);
  const SpinorField f = build_trial(t, g);
  double best = 0;
  std::size_t arg = 0;
  for (std::size_t c = 0; c < g.cell_count(); ++c)
    if (f.magnitude(c) > best) best = f.magnitude(c), arg = c;
  const Vec3 x = g.position(arg);
  EXPECT_NEAR(x.norm(), std::sqrt(3.0) * g.spacing() / 2, 1e-15);
  const double r2 = x.squaredNorm();
  const Spinor4c exact = std::exp(-4 * r2) * std::exp(-1.0 / (1 - r2)) * t.bumps[0].direction;
  EXPECT_LE((f.value(arg) - exact).norm(), 1e-12);
}

TEST(BuildTrial, RejectsInvalidParams) {
  TrialParams t = centered_bump(4, 1);
  t.bumps[0].center = Vec3(0.95, 0, 0);
  EXPECT_THROW(build_trial(t, make_grid(1, 8)), std::invalid_argument);
  t = centered_bump(-1, 1);
  EXPECT_THROW(validate_trial(t), std::invalid_argument);
  t = centered_bump(4, 1, 0);
  EXPECT_THROW(validate_trial(t), std::invalid_argument);
  t = centered_bump(4, 1);
  t.bumps[0].direction *= 2.0;
  EXPECT_THROW(validate_trial(t), std::invalid_argument);
  t = centered_bump(4, 1);
  t.bumps.resize(5, t.bumps[0]);
  EXPECT_THROW(validate_trial(t), std::invalid_argument);
}

TEST(RandomTrial, SeededAndValid) {
  for (std::uint64_t i = 0; i < 200; ++i) {
    const TrialParams t = random_trial(9, i);
    EXPECT_NO_THROW(validate_trial(t));
    EXPECT_EQ(t.flatten(), random_trial(9, i).flatten());
    for (const auto& b : t.bumps) {
      EXPECT_LE(b.center.norm(), 0.6);
      EXPECT_GE(b.width, 1.0);
      EXPECT_LE(b.width, 20.0);
    }
  }
  EXPECT_NE(random_trial(9, 0).flatten(), random_trial(10, 0).flatten());
}

TEST(InequalityParams, RangeChecks) {
  EXPECT_EQ(message_of(dsineq_24), "");
  EXPECT_EQ(message_of(cor1_case), "");
  EXPECT_EQ(message_of(cor2_22), "");
  EXPECT_NE(message_of({InequalityVariant::cor1, 2, 2, 1}).find("r ∈ [1, p]"), std::string::npos);
  EXPECT_NE(message_of({InequalityVariant::cor2, 2, 4, 10.0 / 3.0}).find("p(p+3)/3"), std::string::npos);
  EXPECT_NE(message_of({InequalityVariant::dsineq, 2, 2, 1}), "");
  EXPECT_NE(message_of({InequalityVariant::dsineq, 0.5, 2, 1}), "");
  EXPECT_NE(message_of({InequalityVariant::cor1, 2, 10.0 / 3.0, 4}), "");
  EXPECT_NE(message_of({InequalityVariant::cor2, 2, 4, 0.5}), "");
  EXPECT_EQ(parse_variant("cor2"), InequalityVariant::cor2);
  EXPECT_THROW(parse_variant("cor3"), std::invalid_argument);
}

TEST(InequalityRatio, RecordsParameters) {
  const SpinorField f = build_trial(random_trial(1, 0), make_grid(1, 16));
  const InequalityRecord a = inequality_ratio(f, cor1_case);
  EXPECT_NEAR(a.r, 2.0, 1e-12);
  EXPECT_NEAR(a.theta, 0.6, 1e-15);
  const InequalityRecord b = inequality_ratio(f, cor2_22);
  EXPECT_NEAR(b.q, 10.0 / 3.0, 1e-15);
  EXPECT_NEAR(b.theta, 0.6, 1e-15);
  const InequalityRecord c = inequality_ratio(f, dsineq_24);
  EXPECT_DOUBLE_EQ(c.theta, 0.5);
  for (const auto& rec : {a, b, c}) {
    EXPECT_TRUE(std::isfinite(rec.ratio));
    EXPECT_GT(rec.ratio, 0.0);
    EXPECT_DOUBLE_EQ(rec.ratio, rec.lhs / rec.rhs);
    EXPECT_EQ(rec.grid_points, 16);
  }
  EXPECT_THROW(inequality_ratio(SpinorField(f.mask()), cor2_22), std::invalid_argument);
}

TEST(InequalityRatio, ScaleInvariance) {
  const GridSpec g = make_grid(1, 16);
  for (std::uint64_t i = 0; i < 6; ++i) {
    const SpinorField f = build_trial(random_trial(4, i), g);
    for (const auto& ip : {dsineq_24, cor1_case, cor2_22}) {
      const double base = inequality_ratio(f, ip).ratio;
      for (C c : {C(3, 0), C(-0.01, 0), C(0, 2), C(1e3, -7e2)})
        EXPECT_NEAR(inequality_ratio(f.scaled(c), ip).ratio, base, 1e-10 * base) << to_string(ip.variant);
    }
  }
}

TEST(InequalityRatio, Cor1ReproducesCor2) {
  // q = p(k+3)/3 and r = k turn the cor1 ratio into the cor2 ratio raised to theta.
  const double p = 2, k = 1.5;
  const InequalityParams c1{InequalityVariant::cor1, p, p * (k + 3) / 3, k};
  const InequalityParams c2{InequalityVariant::cor2, p, 4, k};
  const GridSpec g = make_grid(1, 16);
  for (std::uint64_t i = 0; i < 5; ++i) {
    const SpinorField f = build_trial(random_trial(6, i), g);
    const InequalityRecord a = inequality_ratio(f, c1), b = inequality_ratio(f, c2);
    EXPECT_NEAR(a.r, k, 1e-12);
    EXPECT_NEAR(a.theta, b.theta, 1e-15);
    EXPECT_NEAR(a.ratio, std::pow(b.ratio, a.theta), 1e-12 * a.ratio);
  }
}

TEST(MaximizeRatio, MonotoneInBudget) {
  SearchOptions opt;
  opt.grid = make_grid(1, 12);
  opt.seed = 3;
  opt.budget = 100;
  const SearchResult small = maximize_ratio(dsineq_24, opt);
  opt.budget = 1000;
  const SearchResult large = maximize_ratio(dsineq_24, opt);
  EXPECT_EQ(small.records.size(), 100u);
  EXPECT_EQ(large.records.size(), 1000u);
  EXPECT_GE(large.best.ratio, small.best.ratio);
  // The budget truncates one fixed evaluation sequence.
  for (std::size_t i = 0; i < small.records.size(); ++i) EXPECT_EQ(small.records[i].ratio, large.records[i].ratio);
  for (std::size_t i = 1; i < large.trace.size(); ++i) EXPECT_GE(large.trace[i].best_ratio, large.trace[i - 1].best_ratio);
}

TEST(MaximizeRatio, Deterministic) {
  SearchOptions opt;
  opt.grid = make_grid(1, 12);
  opt.budget = 150;
  opt.seed = 11;
  const SearchResult a = maximize_ratio(cor2_22, opt);
  const SearchResult b = maximize_ratio(cor2_22, opt);
  const SearchResult c = maximize_ratio(cor2_22, opt, WorkerPool(3));
  EXPECT_EQ(a.best_params.flatten(), b.best_params.flatten());
  EXPECT_EQ(a.best.ratio, b.best.ratio);
  EXPECT_EQ(a.best_params.flatten(), c.best_params.flatten());
  EXPECT_EQ(a.best.ratio, c.best.ratio);
  opt.budget = 99;
  EXPECT_THROW(maximize_ratio(cor2_22, opt), std::invalid_argument);
}

TEST(MaximizeRatio, BestIsLargestRecord) {
  SearchOptions opt;
  opt.grid = make_grid(1, 12);
  opt.budget = 120;
  const SearchResult r = maximize_ratio(cor1_case, opt);
  double best = 0;
  for (const auto& rec : r.records) best = std::max(best, rec.ratio);
  EXPECT_EQ(r.best.ratio, best);
  EXPECT_NO_THROW(validate_trial(r.best_params));
}

TEST(LemmaFit, SlopesAndStableConstant) {
  const GridSpec g = make_grid(1, 48);
  const auto suite = wave_packet_suite(g, 6, 3.0, 40.0);
  const auto t_grid = geometric_grid(1e-4, 1e-1, 7), s_grid = geometric_grid(1e-4, 1e-2, 5);
  const LemmaFitReport two = lemma_constant_fit(suite, 2.0, t_grid, s_grid);
  const LemmaFitReport one = lemma_constant_fit(suite, 1.0, t_grid, s_grid);
  EXPECT_NEAR(two.difference_slope, 0.5, 0.1);
  EXPECT_NEAR(two.smoothing_slope, -0.5, 0.1);
  EXPECT_NEAR(one.fitted_constant, two.fitted_constant, 0.15 * two.fitted_constant);
  EXPECT_EQ(two.difference_envelope.size(), t_grid.size());
  EXPECT_EQ(two.smoothing_envelope.size(), s_grid.size());
}

TEST(LemmaFit, Errors) {
  const GridSpec g = make_grid(1, 16);
  const auto t_grid = geometric_grid(1e-3, 1e-1, 3);
  EXPECT_THROW(lemma_constant_fit({}, 2.0, t_grid, t_grid), std::invalid_argument);
  EXPECT_THROW(lemma_constant_fit({SpinorField(DomainMask::full_box(g))}, 2.0, t_grid, t_grid), std::invalid_argument);
  EXPECT_THROW(wave_packet_suite(g, 1, 3, 10), std::invalid_argument);
  EXPECT_THROW(geometric_grid(0, 1, 4), std::invalid_argument);
}

TEST(Fits, LogLogSlope) {
  const auto x = geometric_grid(1e-3, 1.0, 9);
  EXPECT_NEAR(x.front(), 1e-3, 1e-18);
  EXPECT_NEAR(x.back(), 1.0, 1e-15);
  std::vector<double> y;
  for (double v : x) y.push_back(3 * std::pow(v, 0.75));
  EXPECT_NEAR(log_log_slope(x, y), 0.75, 1e-12);
  y[2] = 0;
  EXPECT_THROW(log_log_slope(x, y), DomainError);
}
