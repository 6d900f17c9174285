#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "crm/geometric_analyzer.hpp"
#include "crm/manifold_maps.hpp"
#include "crm/morphism_operators.hpp"

// JSON and CSV views of the analysis types. The CLI owns the input schema:
// matrices as {"rows": [[...], ...]}, spaces as {"dim": n, "gram": rows} or
// "euclidean". CSV numbers are printed with 17 significant digits so they
// agree with the JSON values.

namespace crm {

using Json = nlohmann::json;

Json to_json(const FactorSet& factors);
Json to_json(const GeometricAnalysis& analysis);
Json to_json(const OperatorCheck& check);
Json to_json(const PointClassification& cls);
Json to_json(const RankScanReport& report);

Matrix matrix_from_json(const Json& j);
InnerSpace space_from_json(const Json& j, Index expected_dim);

std::string format_double(double v);
std::string classification_csv(const std::vector<PointClassification>& rows);
std::string scan_csv(const RankScanReport& report);

}  // namespace crm
