#include "crm/manifold_maps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace crm {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void check_in_box(const ChartManifold& chart, const Vector& x) {
  if (!chart.domain_box) return;
  const auto& box = *chart.domain_box;
  for (size_t i = 0; i < box.size(); ++i) {
    const double pad = 1e-12 * std::max(1.0, std::abs(box[i].second));
    if (x(static_cast<Index>(i)) < box[i].first - pad ||
        x(static_cast<Index>(i)) > box[i].second + pad) {
      throw std::domain_error("point outside the chart's domain box");
    }
  }
}

Matrix fd_jacobian(const SmoothMapSpec& spec, const Vector& x, int codim) {
  const double h = spec.fd_step;
  Matrix jac(codim, x.size());
  Vector xp = x, xm = x;
  for (Index j = 0; j < x.size(); ++j) {
    xp(j) = x(j) + h;
    xm(j) = x(j) - h;
    jac.col(j) = (spec.map(xp) - spec.map(xm)) / (2.0 * h);
    xp(j) = x(j);
    xm(j) = x(j);
  }
  return jac;
}

// Union-find over sample indices.
struct Components {
  std::vector<int> parent;
  explicit Components(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void join(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

ChartManifold ChartManifold::euclidean(int dim) {
  ChartManifold chart;
  chart.dim = dim;
  chart.metric_field = [dim](const Vector&) { return Matrix::Identity(dim, dim); };
  return chart;
}

InnerSpace ChartManifold::space_at(const Vector& x) const {
  return InnerSpace(metric_field(x));
}

SampleSet grid_samples(const std::vector<GridAxis>& axes) {
  if (axes.empty()) throw std::invalid_argument("grid_samples: no axes");
  std::vector<double> steps(axes.size());
  long total = 1;
  for (size_t a = 0; a < axes.size(); ++a) {
    if (axes[a].count < 2) {
      throw std::invalid_argument("grid_samples: each axis needs count >= 2");
    }
    steps[a] = (axes[a].max - axes[a].min) / (axes[a].count - 1);
    total *= axes[a].count;
  }

  SampleSet set;
  set.points.reserve(total);
  std::vector<int> idx(axes.size(), 0);
  std::vector<long> stride(axes.size());
  long acc = 1;
  for (size_t a = axes.size(); a-- > 0;) {
    stride[a] = acc;
    acc *= axes[a].count;
  }
  for (long flat = 0; flat < total; ++flat) {
    Vector p(static_cast<Index>(axes.size()));
    long rem = flat;
    for (size_t a = 0; a < axes.size(); ++a) {
      idx[a] = static_cast<int>(rem / stride[a]);
      rem %= stride[a];
      p(static_cast<Index>(a)) = axes[a].min + steps[a] * idx[a];
    }
    set.points.push_back(std::move(p));
    for (size_t a = 0; a < axes.size(); ++a) {
      if (idx[a] + 1 < axes[a].count) {
        set.edges.emplace_back(static_cast<int>(flat),
                               static_cast<int>(flat + stride[a]));
      }
    }
  }
  return set;
}

SampleSet path_samples(std::vector<Vector> points) {
  SampleSet set;
  set.points = std::move(points);
  for (int i = 0; i + 1 < static_cast<int>(set.points.size()); ++i) {
    set.edges.emplace_back(i, i + 1);
  }
  return set;
}

MapBetween jacobian_at(const SmoothMapSpec& spec, const Vector& x,
                       const ChartManifold& chart_m, const ChartManifold& chart_n) {
  check_in_box(chart_m, x);
  const Vector fx = spec.map(x);
  if (fx.size() != chart_n.dim) {
    throw std::invalid_argument("jacobian_at: map output dimension mismatch");
  }
  Matrix jac = spec.jacobian ? spec.jacobian(x) : fd_jacobian(spec, x, chart_n.dim);
  if (jac.rows() != chart_n.dim || jac.cols() != chart_m.dim) {
    throw std::invalid_argument("jacobian_at: Jacobian dimension mismatch");
  }
  return MapBetween(std::move(jac), chart_m.space_at(x),
                    InnerSpace(chart_n.metric_field(fx)));
}

PointClassification classify_point(const SmoothMapSpec& spec, const Vector& x,
                                   const ChartManifold& chart_m,
                                   const ChartManifold& chart_n,
                                   const TolerancePolicy& tol) {
  const MapBetween df = jacobian_at(spec, x, chart_m, chart_n);
  PointClassification out;
  out.point = x;
  out.analysis = analyze(df, tol);
  out.rank = out.analysis.rank;
  out.nullity = out.analysis.nullity;

  auto& flags = out.flags;
  flags.immersion = out.nullity == 0;
  flags.submersion = out.rank == chart_n.dim;
  flags.geometric = out.analysis.is_geometric;

  // Conformal Riemannian map: geometric with the whole nonzero spectrum in
  // one cluster (Conf subspace may be taken as ker⊥).
  flags.conformal_riemannian_map =
      flags.geometric && out.analysis.sigma_min_multiplicity == out.rank;
  flags.riemannian_map =
      flags.conformal_riemannian_map &&
      std::abs(out.analysis.factors.canonical - 1.0) <= tol.cluster_rel_tol;
  flags.isometric_immersion = flags.immersion && flags.riemannian_map;
  flags.conformal_immersion = flags.immersion && flags.geometric;

  if (flags.geometric) {
    out.eikonal.lhs = out.analysis.factors.canonical * out.rank;
    const double fnorm = frobenius_norm(df);
    out.eikonal.rhs = fnorm * fnorm;
    out.eikonal.holds = out.eikonal.lhs <= out.eikonal.rhs + tol.residual_tol;
    out.eikonal.equality = std::abs(out.eikonal.rhs - out.eikonal.lhs) <=
                           tol.residual_tol * std::max(1.0, out.eikonal.rhs);
  }
  return out;
}

Vector gradient(const SmoothMapSpec& scalar_spec, const Vector& x,
                const ChartManifold& chart_m) {
  ChartManifold line = ChartManifold::euclidean(1);
  const MapBetween df = jacobian_at(scalar_spec, x, chart_m, line);
  return df.domain.gram().ldlt().solve(df.matrix.transpose());
}

ScalarMorphismReport scalar_morphism_check(const SmoothMapSpec& scalar_spec,
                                           const std::vector<Vector>& samples,
                                           const ChartManifold& chart_m,
                                           const TolerancePolicy& tol) {
  ScalarMorphismReport report;
  report.gradient_norms.reserve(samples.size());
  report.factors.reserve(samples.size());
  for (const Vector& x : samples) {
    const Vector g = gradient(scalar_spec, x, chart_m);
    const InnerSpace space = chart_m.space_at(x);
    const double norm = space.norm(g);
    report.gradient_norms.push_back(norm);
    report.factors.push_back(norm * norm);
  }
  const double max_norm =
      report.gradient_norms.empty()
          ? 0.0
          : *std::max_element(report.gradient_norms.begin(),
                              report.gradient_norms.end());
  const double vanish_tol = tol.residual_tol * std::max(1.0, max_norm);
  bool any_zero = false, all_zero = true;
  for (double norm : report.gradient_norms) {
    if (norm <= vanish_tol) {
      any_zero = true;
    } else {
      all_zero = false;
    }
  }
  report.constant_branch = all_zero;
  report.is_morphism = all_zero || !any_zero;
  return report;
}

Matrix pullback_metric(const SmoothMapSpec& spec, const Vector& x,
                       const ChartManifold& chart_m, const ChartManifold& chart_n) {
  const MapBetween df = jacobian_at(spec, x, chart_m, chart_n);
  return df.matrix.transpose() * df.codomain.gram() * df.matrix;
}

RankScanReport rank_scan(const SmoothMapSpec& spec, const SampleSet& samples,
                         const ChartManifold& chart_m, const ChartManifold& chart_n,
                         const TolerancePolicy& tol) {
  RankScanReport report;
  report.points = samples.points;
  report.all_geometric = true;
  report.min_factor = kNan;
  for (const Vector& x : samples.points) {
    const GeometricAnalysis a = analyze(jacobian_at(spec, x, chart_m, chart_n), tol);
    report.ranks.push_back(a.rank);
    report.distinct_ranks.insert(a.rank);
    if (a.is_geometric) {
      const double f = a.factors.canonical;
      report.canonical_factors.push_back(f);
      if (std::isnan(report.min_factor) || f < report.min_factor) {
        report.min_factor = f;
      }
    } else {
      report.canonical_factors.push_back(kNan);
      report.all_geometric = false;
    }
  }

  const int n = static_cast<int>(samples.points.size());
  Components comp(n);
  for (const auto& [a, b] : samples.edges) comp.join(a, b);
  std::map<int, int> component_rank;
  report.locally_constant = true;
  for (int i = 0; i < n; ++i) {
    const int root = comp.find(i);
    auto [it, inserted] = component_rank.emplace(root, report.ranks[i]);
    if (!inserted && it->second != report.ranks[i]) {
      report.locally_constant = false;
    }
  }
  report.component_count = static_cast<int>(component_rank.size());
  return report;
}

EikonalRecord eikonal_check(const SmoothMapSpec& spec, const Vector& x,
                            const ChartManifold& chart_m,
                            const ChartManifold& chart_n,
                            const TolerancePolicy& tol) {
  const PointClassification cls = classify_point(spec, x, chart_m, chart_n, tol);
  if (!cls.flags.geometric) {
    throw std::domain_error("eikonal_check: point is not geometric");
  }
  return cls.eikonal;
}

}  // namespace crm
