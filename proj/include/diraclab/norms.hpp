#pragma once

#include "diraclab/dirac_ops.hpp"

#include <map>
#include <string>
#include <vector>

namespace diraclab {

struct NormReport {
  std::string kind;
  double value = 0;
  std::map<std::string, double> params;  // p, q, alpha, t_min, t_max, argmax_t, ...
  int grid_points = 0;
  double half_width = 0;
  std::string mask;
  std::vector<std::string> warnings;
};

NormReport lp_norm(const SpinorField& field, double p);

/// (int |(alpha.p) f|^p + |f|^p)^{1/p} over the field's mask, f zero outside it.
NormReport dirac_sobolev_norm(const SpinorField& field, double p,
                              DerivativeMethod method = {DerivativeKind::spectral_periodic});

enum class WeakConvention {
  paper_literal,     // sup_u u^q lambda(|f| >= u)
  homogeneous_root,  // (sup_u u^q lambda(|f| >= u))^{1/q}
};

/// Distribution function of |f| at u: measure of {x in mask : |f(x)| >= u}.
double distribution_function(const SpinorField& field, double u);

/// Weak-L^q quantity. The sup over u is attained at a sampled magnitude, so one
/// descending sort of the magnitudes is exact for the sampled step distribution.
NormReport weak_lq(const SpinorField& field, double q, WeakConvention convention = WeakConvention::homogeneous_root);

struct BesovOptions {
  double t_min = 1e-4;
  double t_max = 1e2;
  int n_t = 64;
};

/// sup_t t^{-alpha/2} sup_{x in mask} |P_t f(x)| over a geometric t-grid, alpha < 0.
/// Records the argmax and warns when it sits on the grid boundary. Also records the
/// large-t asymptote (4 pi t)^{-3/2} ||f||_1 t^{-alpha/2} at t_max.
NormReport besov_norm(const SpinorField& field, double alpha, const BesovOptions& options = {});

/// ||f||_k / ||f||_{q,infty} (rooted). +infinity with a warning when f = 0.
NormReport lorentz_embedding_ratio(const SpinorField& field, double k, double q);

}  // namespace diraclab
