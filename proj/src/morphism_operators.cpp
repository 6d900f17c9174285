#include "crm/morphism_operators.hpp"

#include <cmath>

namespace crm {

MapBetween diamond(const MapBetween& T, const SubspaceBasis& H,
                   const TolerancePolicy& tol) {
  tol.validate();
  const MetricSvd svd = metric_svd(T);
  const int rank = numerical_rank(svd.singular_values, tol);
  const Index n = T.domain.dim();
  const Index m = T.codomain.dim();
  const int nullity = static_cast<int>(n) - rank;

  // H ⊕ ker(T) = domain: right count and joint full rank.
  if (H.count() != rank ||
      (H.count() > 0 && H.space_dim() != n)) {
    throw std::invalid_argument("diamond: H is not a complement of ker(T)");
  }
  if (rank > 0) {
    Matrix stacked(n, n);
    stacked.leftCols(rank) = H.vectors;
    stacked.rightCols(nullity) = svd.right_vectors.rightCols(nullity);
    Eigen::JacobiSVD<Matrix> joint(T.domain.whiten(stacked));
    if (numerical_rank(joint.singularValues(), tol) < n) {
      throw std::invalid_argument("diamond: H is not a complement of ker(T)");
    }
  }

  if (rank == 0) {
    return MapBetween(Matrix::Zero(n, m), T.codomain, T.domain);
  }

  // On range(T): solve the adjoint contract of T|_H against a metric-
  // orthonormal range basis; on range(T)⊥ the operator is zero. With Wr the
  // range basis, the metric projection onto the range is Wr Wrᵀ G_W.
  const Matrix& hm = H.vectors;
  const Matrix h_gram = hm.transpose() * T.domain.gram() * hm;
  const Matrix wr = svd.left_vectors.leftCols(rank);
  const Matrix th = T.matrix * hm;
  const Matrix coords =
      h_gram.ldlt().solve(th.transpose() * T.codomain.gram() * wr);
  Matrix d = hm * coords * (wr.transpose() * T.codomain.gram());
  return MapBetween(std::move(d), T.codomain, T.domain);
}

MapBetween p_operator(const MapBetween& T, const SubspaceBasis& H,
                      const TolerancePolicy& tol) {
  const MapBetween dia = diamond(T, H, tol);
  return MapBetween(dia.matrix * T.matrix, T.domain, T.domain);
}

MapBetween q_operator(const MapBetween& T, const SubspaceBasis& H,
                      const TolerancePolicy& tol) {
  const MapBetween dia = diamond(T, H, tol);
  return MapBetween(T.matrix * dia.matrix, T.codomain, T.codomain);
}

namespace {

OperatorCheck check_idempotent_identity(const char* name, const MapBetween& op,
                                        double lambda,
                                        const TolerancePolicy& tol) {
  const MapBetween defect(op.matrix * op.matrix - lambda * op.matrix, op.domain,
                          op.codomain);
  OperatorCheck check;
  check.operator_name = name;
  check.lambda = lambda;
  check.residual = frobenius_norm(defect);
  check.passes =
      check.residual < tol.residual_tol * std::max(1.0, frobenius_norm(op));
  return check;
}

}  // namespace

std::pair<OperatorCheck, OperatorCheck> check_characterization(
    const MapBetween& T, const SubspaceBasis& H, double lambda,
    const TolerancePolicy& tol) {
  const MapBetween dia = diamond(T, H, tol);
  const MapBetween p(dia.matrix * T.matrix, T.domain, T.domain);
  const MapBetween q(T.matrix * dia.matrix, T.codomain, T.codomain);
  return {check_idempotent_identity("P", p, lambda, tol),
          check_idempotent_identity("Q", q, lambda, tol)};
}

}  // namespace crm
