#include "crm/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace crm {

namespace {

Json finite_or_null(double v) {
  return std::isfinite(v) ? Json(v) : Json(nullptr);
}

Json matrix_rows(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_list(const Vector& v) {
  Json list = Json::array();
  for (Index i = 0; i < v.size(); ++i) list.push_back(v(i));
  return list;
}

const char* kind_name(FactorSetKind kind) {
  switch (kind) {
    case FactorSetKind::empty:
      return "empty";
    case FactorSetKind::point:
      return "point";
    case FactorSetKind::half_open_interval:
      return "half_open_interval";
  }
  return "empty";
}

}  // namespace

Json to_json(const FactorSet& factors) {
  return Json{{"kind", kind_name(factors.kind)},
              {"upper", finite_or_null(factors.upper)},
              {"canonical", factors.canonical}};
}

Json to_json(const GeometricAnalysis& analysis) {
  Json j{{"is_geometric", analysis.is_geometric},
         {"rank", analysis.rank},
         {"nullity", analysis.nullity},
         {"singular_values", vector_list(analysis.singular_values)},
         {"sigma_min_multiplicity", analysis.sigma_min_multiplicity},
         {"factors", to_json(analysis.factors)},
         {"kernel", matrix_rows(analysis.kernel.vectors)}};
  j["conf_basis"] = analysis.conf_basis
                        ? matrix_rows(analysis.conf_basis->vectors)
                        : Json(nullptr);
  return j;
}

Json to_json(const OperatorCheck& check) {
  return Json{{"operator", check.operator_name},
              {"lambda", check.lambda},
              {"residual", check.residual},
              {"passes", check.passes}};
}

Json to_json(const PointClassification& cls) {
  Json j{{"point", vector_list(cls.point)},
         {"rank", cls.rank},
         {"nullity", cls.nullity},
         {"analysis", to_json(cls.analysis)},
         {"flags",
          Json{{"immersion", cls.flags.immersion},
               {"submersion", cls.flags.submersion},
               {"geometric", cls.flags.geometric},
               {"conformal_riemannian_map", cls.flags.conformal_riemannian_map},
               {"riemannian_map", cls.flags.riemannian_map},
               {"isometric_immersion", cls.flags.isometric_immersion},
               {"conformal_immersion", cls.flags.conformal_immersion}}}};
  if (cls.flags.geometric) {
    j["eikonal"] = Json{{"lhs", cls.eikonal.lhs},
                        {"rhs", cls.eikonal.rhs},
                        {"holds", cls.eikonal.holds},
                        {"equality", cls.eikonal.equality}};
  } else {
    j["eikonal"] = nullptr;
  }
  return j;
}

Json to_json(const RankScanReport& report) {
  Json samples = Json::array();
  for (size_t i = 0; i < report.points.size(); ++i) {
    samples.push_back(Json{{"point", vector_list(report.points[i])},
                           {"rank", report.ranks[i]},
                           {"factor", finite_or_null(report.canonical_factors[i])}});
  }
  return Json{{"samples", std::move(samples)},
              {"locally_constant", report.locally_constant},
              {"distinct_ranks", report.distinct_ranks},
              {"min_factor", finite_or_null(report.min_factor)},
              {"all_geometric", report.all_geometric},
              {"component_count", report.component_count}};
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("rows") || !j["rows"].is_array() ||
      j["rows"].empty()) {
    throw std::invalid_argument("matrix JSON must be {\"rows\": [[...], ...]}");
  }
  const auto& rows = j["rows"];
  const size_t cols = rows[0].size();
  if (cols == 0) throw std::invalid_argument("matrix JSON has an empty row");
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(cols));
  for (size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].is_array() || rows[i].size() != cols) {
      throw std::invalid_argument("matrix JSON rows have inconsistent lengths");
    }
    for (size_t c = 0; c < cols; ++c) {
      if (!rows[i][c].is_number()) {
        throw std::invalid_argument("matrix JSON entries must be numbers");
      }
      m(static_cast<Index>(i), static_cast<Index>(c)) = rows[i][c].get<double>();
    }
  }
  return m;
}

InnerSpace space_from_json(const Json& j, Index expected_dim) {
  if (j.is_null() || (j.is_string() && j.get<std::string>() == "euclidean")) {
    return InnerSpace::euclidean(expected_dim);
  }
  if (!j.is_object()) {
    throw std::invalid_argument("space JSON must be \"euclidean\" or an object");
  }
  Index dim = expected_dim;
  if (j.contains("dim")) dim = j["dim"].get<Index>();
  if (dim != expected_dim) {
    throw std::invalid_argument("space dimension does not match the matrix shape");
  }
  if (!j.contains("gram") || (j["gram"].is_string() &&
                              j["gram"].get<std::string>() == "euclidean")) {
    return InnerSpace::euclidean(dim);
  }
  Matrix gram = matrix_from_json(Json{{"rows", j["gram"]}});
  if (gram.rows() != dim) {
    throw std::invalid_argument("Gram matrix size does not match the space dimension");
  }
  return InnerSpace(std::move(gram));
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string classification_csv(const std::vector<PointClassification>& rows) {
  std::ostringstream out;
  const Index dim = rows.empty() ? 0 : rows.front().point.size();
  out << "index";
  for (Index i = 0; i < dim; ++i) out << ",x" << i;
  out << ",rank,nullity,geometric,immersion,submersion,conformal_riemannian_map,"
         "riemannian_map,isometric_immersion,conformal_immersion,"
         "factor_kind,factor_upper,factor_canonical,"
         "eikonal_lhs,eikonal_rhs,eikonal_holds,eikonal_equality\n";
  for (size_t r = 0; r < rows.size(); ++r) {
    const PointClassification& cls = rows[r];
    out << r;
    for (Index i = 0; i < dim; ++i) out << ',' << format_double(cls.point(i));
    out << ',' << cls.rank << ',' << cls.nullity << ',' << cls.flags.geometric
        << ',' << cls.flags.immersion << ',' << cls.flags.submersion << ','
        << cls.flags.conformal_riemannian_map << ',' << cls.flags.riemannian_map
        << ',' << cls.flags.isometric_immersion << ','
        << cls.flags.conformal_immersion << ','
        << kind_name(cls.analysis.factors.kind) << ','
        << (std::isfinite(cls.analysis.factors.upper)
                ? format_double(cls.analysis.factors.upper)
                : "")
        << ',' << format_double(cls.analysis.factors.canonical);
    if (cls.flags.geometric) {
      out << ',' << format_double(cls.eikonal.lhs) << ','
          << format_double(cls.eikonal.rhs) << ',' << cls.eikonal.holds << ','
          << cls.eikonal.equality;
    } else {
      out << ",,,,";
    }
    out << '\n';
  }
  return out.str();
}

std::string scan_csv(const RankScanReport& report) {
  std::ostringstream out;
  const Index dim = report.points.empty() ? 0 : report.points.front().size();
  out << "index";
  for (Index i = 0; i < dim; ++i) out << ",x" << i;
  out << ",rank,factor\n";
  for (size_t r = 0; r < report.points.size(); ++r) {
    out << r;
    for (Index i = 0; i < dim; ++i) {
      out << ',' << format_double(report.points[r](i));
    }
    out << ',' << report.ranks[r] << ',';
    if (std::isfinite(report.canonical_factors[r])) {
      out << format_double(report.canonical_factors[r]);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace crm
