#include "diraclab/clifford.hpp"

#include <algorithm>

namespace diraclab {

double operator_norm(const Matrix4c& m) {
  if (!m.allFinite()) throw std::invalid_argument("operator_norm: matrix has non-finite entries");
  Eigen::JacobiSVD<Matrix4c> svd(m);
  return svd.singularValues()(0);
}

CliffordReport verify_clifford() {
  CliffordReport r;
  const Matrix4c id = Matrix4c::Identity();
  for (int j = 1; j <= 3; ++j) {
    const Matrix4c aj = alpha(j);
    r.hermitian_error = std::max(r.hermitian_error, max_entry_error(aj, aj.adjoint()));
    r.unitary_error = std::max(r.unitary_error, max_entry_error(aj.adjoint() * aj, id));
    for (int k = 1; k <= 3; ++k) {
      const Matrix4c expected = (j == k ? 2.0 : 0.0) * id;
      r.anticommutator_error =
          std::max(r.anticommutator_error, max_entry_error(anticommutator(aj, alpha(k)), expected));
    }
  }
  return r;
}

}  // namespace diraclab
