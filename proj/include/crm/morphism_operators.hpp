#pragma once

#include <string>
#include <utility>

#include "crm/metric_linalg.hpp"

// Generalized adjoint of a map restricted to a complement H of its kernel,
// and the two compositions P = ⋄∘T (domain endomorphism) and Q = T∘⋄
// (codomain endomorphism). A triple (T, H, λ) witnesses a conformal-morphism
// structure exactly when P∘P = λP, equivalently Q∘Q = λQ.

namespace crm {

struct OperatorCheck {
  std::string operator_name;  // "P" or "Q"
  double lambda = 0.0;
  double residual = 0.0;      // ‖Op∘Op − λ·Op‖_F, metric Frobenius
  bool passes = false;        // residual < residual_tol · max(1, ‖Op‖_F)
};

/// ((T)|_H)* on range(T), zero on the metric complement of range(T).
/// H must be a genuine complement of ker(T); otherwise throws.
MapBetween diamond(const MapBetween& T, const SubspaceBasis& H,
                   const TolerancePolicy& tol);

MapBetween p_operator(const MapBetween& T, const SubspaceBasis& H,
                      const TolerancePolicy& tol);

MapBetween q_operator(const MapBetween& T, const SubspaceBasis& H,
                      const TolerancePolicy& tol);

std::pair<OperatorCheck, OperatorCheck> check_characterization(
    const MapBetween& T, const SubspaceBasis& H, double lambda,
    const TolerancePolicy& tol);

}  // namespace crm
