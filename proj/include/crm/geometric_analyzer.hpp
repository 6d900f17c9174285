#pragma once

#include <cstdint>
#include <optional>

#include "crm/metric_linalg.hpp"

// Decides whether a linear map between inner-product spaces is a geometric
// function: whether some complement C of the kernel exists on which the map
// is a scaled isometry onto its range. Spectral criterion: with the nonzero
// singular values clustered, the map is geometric iff rank = 0 or the number
// of singular values lying strictly above the smallest nonzero cluster is at
// most the nullity. Admissible conformality factors r then form either the
// point {sigma_min²} or the half-open interval (0, sigma_min²].

namespace crm {

enum class FactorSetKind { empty, point, half_open_interval };

/// Set of admissible conformality factors. `upper` is sigma_min² of the
/// nonzero spectrum (+inf for the zero map); `canonical` is the factor used
/// in reports: the maximal admissible one, or 1 for the zero map.
struct FactorSet {
  FactorSetKind kind = FactorSetKind::empty;
  double upper = 0.0;
  double canonical = 0.0;

  bool contains(double r, double rel_tol = 1e-8) const;
};

struct GeometricAnalysis {
  bool is_geometric = false;
  int rank = 0;
  int nullity = 0;
  Vector singular_values;          // descending, min(m,n) entries
  int sigma_min_multiplicity = 0;  // size of the smallest nonzero cluster
  FactorSet factors;
  std::optional<SubspaceBasis> conf_basis;
  SubspaceBasis kernel;
};

GeometricAnalysis analyze(const MapBetween& T, const TolerancePolicy& tol);

/// Explicit Conf subspace for an admissible factor r: a complement C of the
/// kernel with ⟨T u, T v⟩_W = r ⟨u, v⟩_V for u, v in C. Requires rank > 0
/// and r inside analyze(T).factors; throws std::domain_error otherwise.
SubspaceBasis construct_conf_subspace(const MapBetween& T, double r,
                                      const TolerancePolicy& tol);

/// Independent search-based check of the geometric-function property.
/// Complements of the kernel are parametrized as graphs over ker⊥; the
/// residual ‖S − r(I + XᵀX)‖_F / max(1, ‖S‖_F) is minimized over the graph
/// map X and r > 0 by random restarts with local refinement. A positive
/// verdict is a certificate (an explicit near-witness was found); a negative
/// verdict is evidence only. Intended for test-scale dimensions (≤ 5).
struct OracleResult {
  bool verdict = false;
  double residual = 0.0;
};

OracleResult oracle_is_geometric(const MapBetween& T, const TolerancePolicy& tol,
                                 int budget, std::uint64_t seed);

}  // namespace crm
