#include "crm/metric_linalg.hpp"

#include <cmath>

namespace crm {

void TolerancePolicy::validate() const {
  if (!(rank_rel_tol > 0) || !(cluster_rel_tol > 0) || !(residual_tol > 0)) {
    throw std::invalid_argument("TolerancePolicy: tolerances must be positive");
  }
  if (cluster_rel_tol < rank_rel_tol) {
    throw std::invalid_argument(
        "TolerancePolicy: cluster_rel_tol must be >= rank_rel_tol");
  }
}

InnerSpace::InnerSpace(Matrix gram, double residual_tol) {
  if (gram.rows() == 0 || gram.rows() != gram.cols()) {
    throw std::invalid_argument("InnerSpace: Gram matrix must be square and nonempty");
  }
  const double scale = std::max(1.0, gram.cwiseAbs().maxCoeff());
  if ((gram - gram.transpose()).cwiseAbs().maxCoeff() > residual_tol * scale) {
    throw std::invalid_argument("InnerSpace: Gram matrix is not symmetric");
  }
  gram_ = 0.5 * (gram + gram.transpose());
  Eigen::LLT<Matrix> llt(gram_);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("InnerSpace: Gram matrix is not positive definite");
  }
  chol_ = llt.matrixU();
}

InnerSpace InnerSpace::euclidean(Index dim) {
  return InnerSpace(Matrix::Identity(dim, dim));
}

Matrix InnerSpace::whiten(const Matrix& columns) const {
  return chol_ * columns;
}

Matrix InnerSpace::unwhiten(const Matrix& columns) const {
  return chol_.triangularView<Eigen::Upper>().solve(columns);
}

double InnerSpace::inner(const Vector& u, const Vector& v) const {
  return u.dot(gram_ * v);
}

double InnerSpace::norm(const Vector& u) const {
  return std::sqrt(std::max(0.0, inner(u, u)));
}

MapBetween::MapBetween(Matrix m, InnerSpace dom, InnerSpace cod)
    : matrix(std::move(m)), domain(std::move(dom)), codomain(std::move(cod)) {
  if (matrix.rows() != codomain.dim() || matrix.cols() != domain.dim()) {
    throw std::invalid_argument("MapBetween: matrix shape does not match the spaces");
  }
}

MapBetween metric_adjoint(const MapBetween& T) {
  // ⟨T u, w⟩_W = ⟨u, T* w⟩_V  ⟹  T* = G_V⁻¹ Aᵀ G_W
  const Matrix rhs = T.matrix.transpose() * T.codomain.gram();
  const Matrix& r = T.domain.cholesky_upper();
  Matrix adj = r.triangularView<Eigen::Upper>().solve(
      r.transpose().triangularView<Eigen::Lower>().solve(rhs));
  return MapBetween(std::move(adj), T.codomain, T.domain);
}

MetricSvd metric_svd(const MapBetween& T) {
  // Whitened operator B = R_W A R_V⁻¹; its ordinary SVD gives metric-
  // orthonormal singular vector bases after unwhitening.
  const Matrix& rv = T.domain.cholesky_upper();
  const Matrix a_rv_inv = rv.transpose()
                              .triangularView<Eigen::Lower>()
                              .solve(T.matrix.transpose())
                              .transpose();
  const Matrix b = T.codomain.cholesky_upper() * a_rv_inv;
  Eigen::JacobiSVD<Matrix> svd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
  MetricSvd out;
  out.singular_values = svd.singularValues();
  out.right_vectors = T.domain.unwhiten(svd.matrixV());
  out.left_vectors = T.codomain.unwhiten(svd.matrixU());
  return out;
}

int numerical_rank(const Vector& singular_values, const TolerancePolicy& tol) {
  if (singular_values.size() == 0) return 0;
  const double sigma_max = singular_values(0);
  if (sigma_max <= 0) return 0;
  int rank = 0;
  for (Index i = 0; i < singular_values.size(); ++i) {
    if (singular_values(i) > tol.rank_rel_tol * sigma_max) ++rank;
  }
  return rank;
}

int numerical_rank(const MapBetween& T, const TolerancePolicy& tol) {
  return numerical_rank(metric_svd(T).singular_values, tol);
}

SubspaceBasis kernel_basis(const MapBetween& T, const TolerancePolicy& tol) {
  const MetricSvd svd = metric_svd(T);
  const int rank = numerical_rank(svd.singular_values, tol);
  const Index n = T.domain.dim();
  return SubspaceBasis(svd.right_vectors.rightCols(n - rank));
}

double frobenius_norm(const MapBetween& T) {
  const MapBetween adj = metric_adjoint(T);
  const double trace = (adj.matrix * T.matrix).trace();
  return std::sqrt(std::max(0.0, trace));
}

SubspaceBasis orthogonal_complement(const SubspaceBasis& basis,
                                    const InnerSpace& space,
                                    const TolerancePolicy& tol) {
  const Index n = space.dim();
  if (basis.count() == 0) {
    return SubspaceBasis(space.unwhiten(Matrix::Identity(n, n)));
  }
  if (basis.space_dim() != n) {
    throw std::invalid_argument("orthogonal_complement: basis dimension mismatch");
  }
  const Matrix whitened = space.whiten(basis.vectors);
  Eigen::JacobiSVD<Matrix> svd(whitened, Eigen::ComputeFullU);
  const int rank = numerical_rank(svd.singularValues(), tol);
  if (rank < basis.count()) {
    throw std::invalid_argument("orthogonal_complement: input basis is dependent");
  }
  return SubspaceBasis(space.unwhiten(svd.matrixU().rightCols(n - rank)));
}

}  // namespace crm
