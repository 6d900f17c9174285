#include "crm/geometric_analyzer.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace crm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Size of the smallest cluster of the counted (nonzero) singular values.
// A new cluster starts wherever the descending gap exceeds
// cluster_rel_tol * sigma_max.
int min_cluster_size(const Vector& sv, int rank, double cluster_rel_tol) {
  const double gap = cluster_rel_tol * sv(0);
  int size = 1;
  for (int i = rank - 1; i > 0; --i) {
    if (sv(i - 1) - sv(i) > gap) break;
    ++size;
  }
  return size;
}

}  // namespace

bool FactorSet::contains(double r, double rel_tol) const {
  if (!(r > 0)) return false;
  switch (kind) {
    case FactorSetKind::empty:
      return false;
    case FactorSetKind::point:
      return std::abs(r - upper) <= rel_tol * upper;
    case FactorSetKind::half_open_interval:
      return upper == kInf || r <= upper * (1.0 + rel_tol);
  }
  return false;
}

GeometricAnalysis analyze(const MapBetween& T, const TolerancePolicy& tol) {
  tol.validate();
  const MetricSvd svd = metric_svd(T);
  GeometricAnalysis out;
  out.singular_values = svd.singular_values;
  out.rank = numerical_rank(svd.singular_values, tol);
  out.nullity = static_cast<int>(T.domain.dim()) - out.rank;
  out.kernel = SubspaceBasis(svd.right_vectors.rightCols(out.nullity));

  if (out.rank == 0) {
    out.is_geometric = true;
    out.sigma_min_multiplicity = 0;
    out.factors = {FactorSetKind::half_open_interval, kInf, 1.0};
    return out;
  }

  out.sigma_min_multiplicity =
      min_cluster_size(svd.singular_values, out.rank, tol.cluster_rel_tol);
  const int above_min = out.rank - out.sigma_min_multiplicity;
  const double sigma_min = svd.singular_values(out.rank - 1);
  const double s2 = sigma_min * sigma_min;

  if (out.rank <= out.nullity) {
    out.is_geometric = true;
    out.factors = {FactorSetKind::half_open_interval, s2, s2};
  } else if (above_min <= out.nullity) {
    out.is_geometric = true;
    out.factors = {FactorSetKind::point, s2, s2};
  } else {
    out.is_geometric = false;
    out.factors = {FactorSetKind::empty, 0.0, 0.0};
  }
  if (out.is_geometric) {
    out.conf_basis = construct_conf_subspace(T, out.factors.canonical, tol);
  }
  return out;
}

SubspaceBasis construct_conf_subspace(const MapBetween& T, double r,
                                      const TolerancePolicy& tol) {
  tol.validate();
  const MetricSvd svd = metric_svd(T);
  const int rank = numerical_rank(svd.singular_values, tol);
  const Index n = T.domain.dim();
  const int nullity = static_cast<int>(n) - rank;
  if (rank == 0) {
    throw std::domain_error("construct_conf_subspace: map has rank 0");
  }

  // Recheck admissibility of r against the factor set.
  {
    const int mult = min_cluster_size(svd.singular_values, rank, tol.cluster_rel_tol);
    const double s2 = svd.singular_values(rank - 1) * svd.singular_values(rank - 1);
    FactorSet factors;
    if (rank <= nullity) {
      factors = {FactorSetKind::half_open_interval, s2, s2};
    } else if (rank - mult <= nullity) {
      factors = {FactorSetKind::point, s2, s2};
    }
    if (!factors.contains(r, tol.cluster_rel_tol)) {
      throw std::domain_error("construct_conf_subspace: factor r is not admissible");
    }
  }

  // Section of T onto ker⊥ sends the range vector w_j to v_j / sigma_j, so
  // its Gram is diag(1/sigma_j²). The deficit (1/r)I − diag(1/sigma_j²) is
  // realized as a map into the kernel, one metric-orthonormal kernel vector
  // per strictly positive entry.
  Matrix conf(n, rank);
  int kernel_used = 0;
  for (int j = 0; j < rank; ++j) {
    const double sigma = svd.singular_values(j);
    Vector c = svd.right_vectors.col(j) / sigma;
    double deficit = 1.0 / r - 1.0 / (sigma * sigma);
    if (deficit <= tol.cluster_rel_tol / r) deficit = 0.0;
    if (deficit > 0.0) {
      if (kernel_used >= nullity) {
        throw std::domain_error(
            "construct_conf_subspace: factor r is not admissible (kernel too small)");
      }
      c += std::sqrt(deficit) * svd.right_vectors.col(rank + kernel_used);
      ++kernel_used;
    }
    conf.col(j) = std::sqrt(r) * c;
  }
  return SubspaceBasis(std::move(conf));
}

OracleResult oracle_is_geometric(const MapBetween& T, const TolerancePolicy& tol,
                                 int budget, std::uint64_t seed) {
  tol.validate();
  const MetricSvd svd = metric_svd(T);
  const int rank = numerical_rank(svd.singular_values, tol);
  if (rank == 0) return {true, 0.0};

  const int q = rank;
  const int k = static_cast<int>(T.domain.dim()) - rank;

  // Pulled-back range Gram over a metric-orthonormal basis of ker⊥.
  const Matrix b = svd.right_vectors.leftCols(q);
  const Matrix tb = T.matrix * b;
  const Matrix s = tb.transpose() * T.codomain.gram() * tb;
  const double s_scale = std::max(1.0, s.norm());
  const Matrix identity = Matrix::Identity(q, q);

  if (k == 0) {
    const double r = std::max(s.trace() / q, std::numeric_limits<double>::min());
    const double residual = (s - r * identity).norm() / s_scale;
    return {residual < tol.residual_tol, residual};
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(s);  // ascending eigenvalues

  double best = kInf;
  const int restarts = std::max(1, budget);
  for (int restart = 0; restart < restarts && best > 1e-14; ++restart) {
    Matrix x(k, q);
    if (restart == 0) {
      // Warm start: graph map whose Gram matches the deficit of S at the
      // smallest eigenvalue, truncated to the k largest positive modes.
      const double r0 = std::max(eig.eigenvalues()(0),
                                 std::numeric_limits<double>::min());
      x.setZero();
      int row = 0;
      for (int i = q - 1; i >= 0 && row < k; --i) {
        const double c = eig.eigenvalues()(i) / r0 - 1.0;
        if (c <= 0) break;
        x.row(row++) = std::sqrt(c) * eig.eigenvectors().col(i).transpose();
      }
    } else {
      const double scale = (restart % 2 == 0) ? 1.0 : 0.1;
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < q; ++j) x(i, j) = scale * gauss(rng);
    }

    double step = 1e-2;
    double f = kInf;
    for (int iter = 0; iter < 400; ++iter) {
      const Matrix p = identity + x.transpose() * x;
      const double r = std::max((s.cwiseProduct(p)).sum() / p.squaredNorm(),
                                std::numeric_limits<double>::min());
      const Matrix e = s - r * p;
      f = e.squaredNorm();
      if (std::sqrt(f) / s_scale < 1e-14) break;
      const Matrix grad = -4.0 * r * (x * e);
      const double gnorm = grad.norm();
      if (gnorm < 1e-16) break;

      bool moved = false;
      for (int bt = 0; bt < 30; ++bt) {
        const Matrix x_new = x - step * grad;
        const Matrix p_new = identity + x_new.transpose() * x_new;
        const double r_new =
            std::max((s.cwiseProduct(p_new)).sum() / p_new.squaredNorm(),
                     std::numeric_limits<double>::min());
        const double f_new = (s - r_new * p_new).squaredNorm();
        if (f_new < f) {
          x = x_new;
          f = f_new;
          step *= 2.0;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
    }
    best = std::min(best, std::sqrt(f) / s_scale);
  }
  return {best < tol.residual_tol, best};
}

}  // namespace crm
