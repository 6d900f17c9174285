#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "crm/expression.hpp"
#include "crm/gallery.hpp"
#include "crm/serialize.hpp"

namespace {

using crm::Json;

constexpr int kSchemaVersion = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

struct RunConfig {
  std::string input_path;
  std::string gallery_name;
  std::string expression;
  std::string grid_text;
  std::string output_format = "json";
  std::string out_path;
  crm::TolerancePolicy tolerances;
  double fd_step = 1e-5;
  std::uint64_t seed = 1;
  bool with_oracle = false;
  int oracle_budget = 30;
};

void add_common_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--tol-rank", cfg.tolerances.rank_rel_tol, "relative rank tolerance");
  cmd->add_option("--tol-cluster", cfg.tolerances.cluster_rel_tol,
                  "relative singular-value cluster tolerance");
  cmd->add_option("--tol-residual", cfg.tolerances.residual_tol,
                  "identity / contract residual tolerance");
  cmd->add_option("--format", cfg.output_format, "output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", cfg.out_path, "write the report to this path");
  cmd->add_option("--seed", cfg.seed, "seed for the search oracle");
}

void add_map_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--gallery", cfg.gallery_name, "built-in gallery map name");
  cmd->add_option("--expr", cfg.expression,
                  "expression map, e.g. \"f(x,y)=(2x,3y)\"");
  cmd->add_option("--grid", cfg.grid_text,
                  "sample grid \"axis:min:max:count;...\"");
  cmd->add_option("--fd-step", cfg.fd_step, "finite-difference step");
}

std::vector<crm::GridAxis> parse_grid(const std::string& text, int dim) {
  std::vector<crm::GridAxis> axes(dim);
  std::vector<bool> seen(dim, false);
  std::istringstream in(text);
  std::string chunk;
  while (std::getline(in, chunk, ';')) {
    if (chunk.empty()) continue;
    int axis = -1, count = 0;
    double lo = 0, hi = 0;
    char c1, c2, c3;
    std::istringstream fields(chunk);
    if (!(fields >> axis >> c1 >> lo >> c2 >> hi >> c3 >> count) || c1 != ':' ||
        c2 != ':' || c3 != ':') {
      throw std::invalid_argument("bad --grid chunk \"" + chunk +
                                  "\" (want axis:min:max:count)");
    }
    if (axis < 0 || axis >= dim) {
      throw std::invalid_argument("--grid axis index out of range");
    }
    if (count < 2) throw std::invalid_argument("--grid counts must be >= 2");
    axes[axis] = {lo, hi, count};
    seen[axis] = true;
  }
  for (int a = 0; a < dim; ++a) {
    if (!seen[a]) {
      throw std::invalid_argument("--grid must cover every axis of the domain");
    }
  }
  return axes;
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    std::ofstream out(cfg.out_path);
    if (!out) throw std::invalid_argument("cannot open output path " + cfg.out_path);
    out << text;
  }
}

Json read_input_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open input file " + path);
  Json j;
  in >> j;
  return j;
}

// Map selected by --gallery or --expr, with its charts and sample grid.
struct MapSelection {
  crm::SmoothMapSpec spec;
  crm::ChartManifold domain_chart;
  crm::ChartManifold codomain_chart;
  std::vector<crm::GridAxis> grid;
};

MapSelection select_map(const RunConfig& cfg) {
  if (cfg.gallery_name.empty() == cfg.expression.empty()) {
    throw std::invalid_argument("give exactly one of --gallery or --expr");
  }
  MapSelection sel;
  if (!cfg.gallery_name.empty()) {
    const crm::GalleryEntry& entry = crm::gallery_entry(cfg.gallery_name);
    sel.spec = entry.spec;
    sel.spec.fd_step = cfg.fd_step;
    sel.domain_chart = entry.domain_chart;
    sel.codomain_chart = entry.codomain_chart;
    sel.grid = cfg.grid_text.empty() ? entry.default_grid
                                     : parse_grid(cfg.grid_text, entry.domain_chart.dim);
  } else {
    crm::ParsedMap parsed = crm::parse_map_expression(cfg.expression, cfg.fd_step);
    sel.spec = parsed.spec;
    sel.domain_chart =
        crm::ChartManifold::euclidean(static_cast<int>(parsed.variables.size()));
    sel.codomain_chart = crm::ChartManifold::euclidean(parsed.codomain_dim);
    if (cfg.grid_text.empty()) {
      throw std::invalid_argument("--grid is required with --expr");
    }
    sel.grid = parse_grid(cfg.grid_text, sel.domain_chart.dim);
  }
  return sel;
}

int cmd_analyze(const RunConfig& cfg) {
  const Json input = read_input_json(cfg.input_path);
  const Json& matrix_json = input.contains("matrix") ? input["matrix"] : input;
  crm::Matrix a = crm::matrix_from_json(matrix_json);
  crm::InnerSpace domain = crm::space_from_json(
      input.contains("domain") ? input["domain"] : Json(), a.cols());
  crm::InnerSpace codomain = crm::space_from_json(
      input.contains("codomain") ? input["codomain"] : Json(), a.rows());
  const crm::MapBetween map(std::move(a), std::move(domain), std::move(codomain));

  const crm::GeometricAnalysis analysis = crm::analyze(map, cfg.tolerances);
  const crm::MapBetween adjoint = crm::metric_adjoint(map);
  const double fnorm = crm::frobenius_norm(map);

  Json report{{"schema_version", kSchemaVersion},
              {"command", "analyze"},
              {"analysis", crm::to_json(analysis)},
              {"frobenius_norm", fnorm}};
  {
    Json rows = Json::array();
    for (crm::Index i = 0; i < adjoint.matrix.rows(); ++i) {
      Json row = Json::array();
      for (crm::Index j = 0; j < adjoint.matrix.cols(); ++j) {
        row.push_back(adjoint.matrix(i, j));
      }
      rows.push_back(std::move(row));
    }
    report["adjoint"] = Json{{"rows", std::move(rows)}};
  }

  if (cfg.with_oracle) {
    const crm::OracleResult oracle =
        crm::oracle_is_geometric(map, cfg.tolerances, cfg.oracle_budget, cfg.seed);
    report["oracle"] = Json{{"verdict", oracle.verdict}, {"residual", oracle.residual}};
  }

  // Optional witness check: H given as rows (one domain vector per row).
  if (input.contains("H")) {
    crm::SubspaceBasis h(crm::matrix_from_json(input["H"]).transpose());
    const double lambda = input.contains("lambda")
                              ? input["lambda"].get<double>()
                              : analysis.factors.canonical;
    const auto [p_check, q_check] =
        crm::check_characterization(map, h, lambda, cfg.tolerances);
    report["operator_checks"] = Json::array({crm::to_json(p_check), crm::to_json(q_check)});
  }

  if (cfg.output_format == "csv") {
    std::ostringstream csv;
    csv << "is_geometric,rank,nullity,factor_kind,factor_upper,factor_canonical,"
           "frobenius_norm,sigma_values\n";
    csv << analysis.is_geometric << ',' << analysis.rank << ',' << analysis.nullity
        << ',' << report["analysis"]["factors"]["kind"].get<std::string>() << ','
        << (std::isfinite(analysis.factors.upper)
                ? crm::format_double(analysis.factors.upper)
                : "")
        << ',' << crm::format_double(analysis.factors.canonical) << ','
        << crm::format_double(fnorm) << ',';
    for (crm::Index i = 0; i < analysis.singular_values.size(); ++i) {
      if (i) csv << ';';
      csv << crm::format_double(analysis.singular_values(i));
    }
    csv << '\n';
    emit(cfg, csv.str());
  } else {
    emit(cfg, report.dump(2));
  }
  return 0;
}

int cmd_classify(const RunConfig& cfg) {
  const MapSelection sel = select_map(cfg);
  const crm::SampleSet samples = crm::grid_samples(sel.grid);
  std::vector<crm::PointClassification> rows;
  rows.reserve(samples.points.size());
  for (const crm::Vector& x : samples.points) {
    rows.push_back(crm::classify_point(sel.spec, x, sel.domain_chart,
                                       sel.codomain_chart, cfg.tolerances));
  }
  if (cfg.output_format == "csv") {
    emit(cfg, crm::classification_csv(rows));
  } else {
    Json records = Json::array();
    for (const auto& row : rows) records.push_back(crm::to_json(row));
    emit(cfg, Json{{"schema_version", kSchemaVersion},
                   {"command", "classify"},
                   {"records", std::move(records)}}
                  .dump(2));
  }
  return 0;
}

int cmd_scan(const RunConfig& cfg) {
  const MapSelection sel = select_map(cfg);
  const crm::SampleSet samples = crm::grid_samples(sel.grid);
  const crm::RankScanReport report = crm::rank_scan(
      sel.spec, samples, sel.domain_chart, sel.codomain_chart, cfg.tolerances);

  if (cfg.output_format == "csv") {
    emit(cfg, crm::scan_csv(report));
  } else {
    Json j = crm::to_json(report);
    j["schema_version"] = kSchemaVersion;
    j["command"] = "scan";
    emit(cfg, j.dump(2));
  }
  std::cout << "rank locally constant: " << (report.locally_constant ? "yes" : "no")
            << "; min canonical factor: "
            << (std::isfinite(report.min_factor)
                    ? crm::format_double(report.min_factor)
                    : "n/a")
            << '\n';
  return 0;
}

int cmd_gallery(const RunConfig& cfg) {
  if (cfg.output_format == "csv") {
    std::ostringstream csv;
    csv << "name,domain_dim,codomain_dim,description\n";
    for (const crm::GalleryEntry& e : crm::gallery()) {
      csv << e.name << ',' << e.domain_chart.dim << ',' << e.codomain_chart.dim
          << ",\"" << e.description << "\"\n";
    }
    emit(cfg, csv.str());
  } else {
    Json list = Json::array();
    for (const crm::GalleryEntry& e : crm::gallery()) {
      list.push_back(Json{{"name", e.name},
                          {"description", e.description},
                          {"domain_dim", e.domain_chart.dim},
                          {"codomain_dim", e.codomain_chart.dim}});
    }
    emit(cfg, Json{{"schema_version", kSchemaVersion},
                   {"command", "gallery"},
                   {"maps", std::move(list)}}
                  .dump(2));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conformal Riemannian morphism analyzer"};
  app.require_subcommand(1);
  RunConfig cfg;

  CLI::App* analyze = app.add_subcommand(
      "analyze", "decide geometric-function structure of a matrix");
  analyze->add_option("input", cfg.input_path, "input JSON file")->required();
  analyze->add_flag("--oracle", cfg.with_oracle, "also run the search oracle");
  analyze->add_option("--oracle-budget", cfg.oracle_budget, "oracle restarts");
  add_common_flags(analyze, cfg);

  CLI::App* classify =
      app.add_subcommand("classify", "classify a smooth map over a sample grid");
  add_map_flags(classify, cfg);
  add_common_flags(classify, cfg);

  CLI::App* scan =
      app.add_subcommand("scan", "rank-constancy scan over a sample grid");
  add_map_flags(scan, cfg);
  add_common_flags(scan, cfg);

  CLI::App* gallery_cmd = app.add_subcommand("gallery", "list built-in maps");
  add_common_flags(gallery_cmd, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    cfg.tolerances.validate();
    if (analyze->parsed()) return cmd_analyze(cfg);
    if (classify->parsed()) return cmd_classify(cfg);
    if (scan->parsed()) return cmd_scan(cfg);
    if (gallery_cmd->parsed()) return cmd_gallery(cfg);
  } catch (const Json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
