#pragma once

#include <Eigen/Dense>
#include <stdexcept>

// Metric-aware linear algebra on finite-dimensional real inner-product
// spaces. A space is described by an SPD Gram matrix; every adjoint,
// singular value, rank, kernel and norm below is taken with respect to
// the Gram metrics, not the raw Euclidean ones.

namespace crm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

struct TolerancePolicy {
  double rank_rel_tol = 1e-10;     // sigma > rank_rel_tol * sigma_max counts
  double cluster_rel_tol = 1e-8;   // relative gap that separates sigma clusters
  double residual_tol = 1e-8;      // generic identity / contract residual

  void validate() const;
};

/// Finite-dimensional real inner-product space, ⟨u,v⟩ = uᵀ G v.
/// The Gram matrix is symmetrized on input and must be positive definite
/// (Cholesky is the validity test). The upper factor R with G = RᵀR is
/// cached; whitening by R turns metric geometry into Euclidean geometry.
class InnerSpace {
 public:
  explicit InnerSpace(Matrix gram, double residual_tol = 1e-8);
  static InnerSpace euclidean(Index dim);

  Index dim() const { return gram_.rows(); }
  const Matrix& gram() const { return gram_; }
  const Matrix& cholesky_upper() const { return chol_; }

  // columns -> R * columns
  Matrix whiten(const Matrix& columns) const;
  // columns -> R⁻¹ * columns
  Matrix unwhiten(const Matrix& columns) const;

  double inner(const Vector& u, const Vector& v) const;
  double norm(const Vector& u) const;

 private:
  Matrix gram_;
  Matrix chol_;  // upper triangular, gram = cholᵀ chol
};

/// Linear map between two inner-product spaces, stored as a matrix in the
/// given bases (codomain.dim × domain.dim).
struct MapBetween {
  Matrix matrix;
  InnerSpace domain;
  InnerSpace codomain;

  MapBetween(Matrix m, InnerSpace dom, InnerSpace cod);
};

/// Columns are vectors of one space; possibly zero of them.
struct SubspaceBasis {
  Matrix vectors;

  SubspaceBasis() = default;
  explicit SubspaceBasis(Matrix v) : vectors(std::move(v)) {}
  Index count() const { return vectors.cols(); }
  Index space_dim() const { return vectors.rows(); }
};

/// Metric SVD of T: T(v_i) = sigma_i w_i with {v_i} orthonormal in the
/// domain metric and {w_i} orthonormal in the codomain metric. Both vector
/// sets are full bases (right: domain.dim columns, left: codomain.dim);
/// singular_values has min(m,n) entries, descending.
struct MetricSvd {
  Vector singular_values;
  Matrix right_vectors;
  Matrix left_vectors;
};

MapBetween metric_adjoint(const MapBetween& T);
MetricSvd metric_svd(const MapBetween& T);

int numerical_rank(const Vector& singular_values, const TolerancePolicy& tol);
int numerical_rank(const MapBetween& T, const TolerancePolicy& tol);

SubspaceBasis kernel_basis(const MapBetween& T, const TolerancePolicy& tol);

/// √trace(T*∘T) with the metric adjoint; equals √(Σ sigma_i²).
double frobenius_norm(const MapBetween& T);

/// Metric-orthogonal complement of span(basis); the union of input and
/// output spans the whole space. Throws on a dependent input basis.
SubspaceBasis orthogonal_complement(const SubspaceBasis& basis,
                                    const InnerSpace& space,
                                    const TolerancePolicy& tol);

}  // namespace crm
