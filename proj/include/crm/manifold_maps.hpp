#pragma once

#include <functional>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

#include "crm/geometric_analyzer.hpp"
#include "crm/metric_linalg.hpp"

// Pointwise and sampled classification of smooth maps between single-chart
// Riemannian manifolds: morphism taxonomy, factor sets, gradients, pullback
// metrics, the eikonal inequality, and rank-constancy scans over sample sets.

namespace crm {

/// Single chart of a Riemannian manifold: a metric field over R^dim and an
/// optional axis-aligned sampling box.
struct ChartManifold {
  int dim = 0;
  std::function<Matrix(const Vector&)> metric_field;
  std::optional<std::vector<std::pair<double, double>>> domain_box;

  static ChartManifold euclidean(int dim);
  InnerSpace space_at(const Vector& x) const;
};

/// Smooth map between chart domains. When the analytic Jacobian is absent,
/// central differences with step fd_step are used.
struct SmoothMapSpec {
  std::function<Vector(const Vector&)> map;
  std::function<Matrix(const Vector&)> jacobian;  // may be empty
  double fd_step = 1e-5;
};

struct EikonalRecord {
  double lhs = 0.0;  // canonical factor · rank
  double rhs = 0.0;  // ‖df‖²_F
  bool holds = false;
  bool equality = false;
};

struct PointClassification {
  Vector point;
  int rank = 0;
  int nullity = 0;
  GeometricAnalysis analysis;
  struct Flags {
    bool immersion = false;
    bool submersion = false;
    bool geometric = false;
    bool conformal_riemannian_map = false;
    bool riemannian_map = false;
    bool isometric_immersion = false;
    bool conformal_immersion = false;
  } flags;
  EikonalRecord eikonal;  // meaningful when flags.geometric
};

/// Sample points plus the adjacency that defines connected components
/// (grid axis-neighbors, or consecutive points along a path).
struct SampleSet {
  std::vector<Vector> points;
  std::vector<std::pair<int, int>> edges;
};

struct GridAxis {
  double min = 0.0;
  double max = 0.0;
  int count = 0;
};

SampleSet grid_samples(const std::vector<GridAxis>& axes);
SampleSet path_samples(std::vector<Vector> points);

struct RankScanReport {
  std::vector<Vector> points;
  std::vector<int> ranks;
  std::vector<double> canonical_factors;  // NaN where not geometric
  bool locally_constant = false;          // per connected component
  std::set<int> distinct_ranks;
  double min_factor = 0.0;  // infimum of canonical factors over geometric samples
  bool all_geometric = false;
  int component_count = 0;
};

struct ScalarMorphismReport {
  bool is_morphism = false;
  bool constant_branch = false;  // all sampled gradients vanish
  std::vector<double> gradient_norms;
  std::vector<double> factors;  // ‖grad‖² per sample
};

MapBetween jacobian_at(const SmoothMapSpec& spec, const Vector& x,
                       const ChartManifold& chart_m, const ChartManifold& chart_n);

PointClassification classify_point(const SmoothMapSpec& spec, const Vector& x,
                                   const ChartManifold& chart_m,
                                   const ChartManifold& chart_n,
                                   const TolerancePolicy& tol);

/// Gradient of a scalar field: G(x)⁻¹ (df_x)ᵀ, the metric dual of df_x.
Vector gradient(const SmoothMapSpec& scalar_spec, const Vector& x,
                const ChartManifold& chart_m);

ScalarMorphismReport scalar_morphism_check(const SmoothMapSpec& scalar_spec,
                                           const std::vector<Vector>& samples,
                                           const ChartManifold& chart_m,
                                           const TolerancePolicy& tol);

/// Pullback tensor Jᵀ G_N(f(x)) J; positive definite exactly at immersion
/// points.
Matrix pullback_metric(const SmoothMapSpec& spec, const Vector& x,
                       const ChartManifold& chart_m, const ChartManifold& chart_n);

RankScanReport rank_scan(const SmoothMapSpec& spec, const SampleSet& samples,
                         const ChartManifold& chart_m, const ChartManifold& chart_n,
                         const TolerancePolicy& tol);

/// Λ_canonical · rank ≤ ‖df‖²_F at a geometric point; throws
/// std::domain_error at non-geometric points.
EikonalRecord eikonal_check(const SmoothMapSpec& spec, const Vector& x,
                            const ChartManifold& chart_m,
                            const ChartManifold& chart_n,
                            const TolerancePolicy& tol);

}  // namespace crm
