#include "immersion/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "immersion/ambient.hpp"
#include "immersion/catalog.hpp"
#include "immersion/error.hpp"
#include "immersion/io.hpp"
#include "immersion/reconstruct.hpp"
#include "immersion/structure.hpp"

namespace immersion {

namespace {

using nlohmann::json;

json to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json to_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(to_json(Vector(m.row(r).transpose())));
  return out;
}

std::string number(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", v);
  return buffer;
}

// Collects one report: JSONL records, or CSV rows plus a trailing summary comment.
class Report {
 public:
  explicit Report(const RunConfig& config) : csv_(config.format == "csv") {}

  bool csv() const { return csv_; }
  void record(const json& r) { body_ << r.dump() << '\n'; }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) body_ << (i ? "," : "") << cells[i];
    body_ << '\n';
  }
  void summary(const json& s) {
    if (csv_) {
      body_ << "# summary " << s.dump() << '\n';
    } else {
      body_ << s.dump() << '\n';
    }
  }
  std::string str() const { return body_.str(); }

 private:
  bool csv_;
  std::ostringstream body_;
};

void emit(const RunConfig& config, const Report& report, std::ostream& out) {
  if (config.output.empty()) {
    out << report.str();
    out.flush();
  } else {
    write_atomically(config.output, report.str());
  }
}

std::vector<std::string> coordinate_header(const Chart& chart) { return chart.coords; }

void append(std::vector<std::string>& cells, const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) cells.push_back(number(v(i)));
}

void apply_base_override(const RunConfig& config, InputDocument& doc) {
  if (!config.base) return;
  Chart& chart = doc.chart();
  if (config.base->size() != chart.dim()) {
    throw SchemaError("--base needs " + std::to_string(chart.dim()) + " coordinates");
  }
  chart.base_point = Eigen::Map<const Vector>(config.base->data(), static_cast<Eigen::Index>(config.base->size()));
  chart.validate();
}

StructureSpec structure_of(const InputDocument& doc, const SampleGrid& grid) {
  if (doc.structure) return *doc.structure;
  return extract_structure(*doc.hypersurface, grid);
}

const ParametrizedHypersurface& require_hypersurface(const InputDocument& doc, const std::string& command) {
  if (!doc.hypersurface) throw SchemaError(command + " needs a hypersurface document");
  return *doc.hypersurface;
}

ValidationOptions validation_options(const RunConfig& config) {
  ValidationOptions options;
  options.transport.step = config.step;
  options.admission_tolerance = config.tolerance;
  return options;
}

json sample_json(const ImmersionSample& s) {
  return {{"point", to_json(s.point)}, {"psi", to_json(s.position)}, {"N", to_json(s.normal)}};
}

int cmd_check(const RunConfig& config, InputDocument doc, std::ostream& out, std::ostream& err) {
  const SampleGrid grid = uniform_grid(doc.chart(), config.grid);
  const StructureSpec spec = structure_of(doc, grid);
  const CompatibilityReport report = admit(spec, grid, config.tolerance);

  Report r(config);
  if (r.csv()) {
    auto header = coordinate_header(spec.chart);
    header.push_back("evaluated");
    for (std::size_t e = 0; e + 1 < kEquationCount; ++e) header.emplace_back(equation_name(static_cast<Equation>(e)));
    header.push_back("k_estimate");
    r.row(header);
  }
  for (std::size_t idx = 0; idx < report.points.size(); ++idx) {
    const PointReport& p = report.points[idx];
    if (r.csv()) {
      std::vector<std::string> cells;
      append(cells, p.point);
      cells.push_back(p.evaluated ? "1" : "0");
      for (std::size_t e = 0; e + 1 < kEquationCount; ++e) cells.push_back(number(p.residual(static_cast<Equation>(e))));
      cells.push_back(number(p.k_estimate));
      r.row(cells);
      continue;
    }
    json rec = {{"record", "point"}, {"index", idx}, {"point", to_json(p.point)}, {"evaluated", p.evaluated}};
    if (p.evaluated) {
      for (std::size_t e = 0; e + 1 < kEquationCount; ++e) {
        rec[std::string(equation_name(static_cast<Equation>(e)))] = p.residual(static_cast<Equation>(e));
      }
      rec["k_estimate"] = p.k_estimate;
    } else {
      rec["diagnostic"] = p.diagnostic;
    }
    r.record(rec);
  }
  json residuals = json::object();
  for (std::size_t e = 0; e < kEquationCount; ++e) {
    const auto& s = report.equations[e];
    residuals[std::string(equation_name(static_cast<Equation>(e)))] = {
        {"sup", s.sup}, {"worst_point", to_json(report.points.empty() ? Vector() : report.points[s.worst_index].point)}};
  }
  json summary = {{"record", "summary"},
                  {"command", "check"},
                  {"structure", spec.name},
                  {"admissible", report.admissible},
                  {"tolerance", report.tolerance},
                  {"grid_points", report.points.size()},
                  {"residuals", residuals},
                  {"trace_spread", report.trace_spread},
                  {"reasons", report.reasons}};
  summary["k"] = report.k ? json(*report.k) : json(nullptr);
  r.summary(summary);
  emit(config, r, out);
  if (!report.admissible) {
    for (const auto& reason : report.reasons) err << "inadmissible: " << reason << '\n';
    return kExitRejected;
  }
  return kExitOk;
}

int cmd_reconstruct(const RunConfig& config, InputDocument doc, std::ostream& out, std::ostream& err) {
  const SampleGrid grid = uniform_grid(doc.chart(), config.grid);
  const StructureSpec spec = structure_of(doc, grid);
  const TheoremReport report = reconstruct(spec, grid, validation_options(config));
  const std::size_t n = spec.dim();

  static const char* kColumns[] = {"quadric", "isometry", "normal", "shape", "product", "pushforward_fd",
                                   "gram_drift", "eigen_drift"};
  auto residual_values = [](const PointValidation& v) {
    return std::vector<double>{v.quadric, v.isometry, v.normal, v.shape, v.product, v.pushforward_fd,
                               v.gram_drift, v.eigen_drift};
  };
  Report r(config);
  if (r.csv()) {
    auto header = coordinate_header(spec.chart);
    for (std::size_t c = 1; c <= n + 3; ++c) header.push_back("psi" + std::to_string(c));
    for (std::size_t c = 1; c <= n + 3; ++c) header.push_back("N" + std::to_string(c));
    for (const char* name : kColumns) header.emplace_back(name);
    r.row(header);
  }
  for (std::size_t idx = 0; idx < report.samples.size(); ++idx) {
    const ImmersionSample& s = report.samples[idx];
    const auto values = residual_values(report.points[idx]);
    if (r.csv()) {
      std::vector<std::string> cells;
      append(cells, s.point);
      append(cells, s.position);
      append(cells, s.normal);
      for (double v : values) cells.push_back(number(v));
      r.row(cells);
      continue;
    }
    json rec = sample_json(s);
    rec["record"] = "point";
    rec["index"] = idx;
    json res = json::object();
    for (std::size_t c = 0; c < values.size(); ++c) res[kColumns[c]] = values[c];
    rec["residuals"] = res;
    r.record(rec);
  }
  json checks = json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"sup", c.sup},
                      {"tolerance", c.tolerance},
                      {"passed", c.passed},
                      {"worst_point", to_json(report.samples[c.worst_index].point)}});
  }
  r.summary({{"record", "summary"},
             {"command", "reconstruct"},
             {"structure", spec.name},
             {"k", report.k},
             {"base_point", to_json(spec.chart.base_point)},
             {"step", config.step},
             {"passed", report.passed},
             {"checks", checks},
             {"failures", report.failures}});
  emit(config, r, out);
  if (!report.passed) {
    for (const auto& f : report.failures) err << "validation failed: " << f << '\n';
    return kExitRejected;
  }
  return kExitOk;
}

int cmd_extract(const RunConfig& config, InputDocument doc, std::ostream& out, std::ostream&) {
  const ParametrizedHypersurface& h = require_hypersurface(doc, "extract");
  const SampleGrid grid = uniform_grid(h.chart, config.grid);
  const StructureSpec spec = extract_structure(h, grid);
  const HypersurfaceFields fields(h);
  const std::size_t n = h.dim();

  Report r(config);
  if (r.csv()) {
    auto header = coordinate_header(h.chart);
    for (const char* name : {"g", "S", "f"}) {
      for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j <= n; ++j) header.push_back(std::string(name) + std::to_string(i) + std::to_string(j));
      }
    }
    for (std::size_t i = 1; i <= n; ++i) header.push_back("U" + std::to_string(i));
    header.push_back("lambda");
    r.row(header);
  }
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const Vector p = grid.point(idx);
    const FieldJet jet = spec.jet(p, JetOrder::kValues);
    if (r.csv()) {
      std::vector<std::string> cells;
      append(cells, p);
      for (const Matrix* m : {&jet.metric.g, &jet.S, &jet.f}) {
        for (Eigen::Index i = 0; i < m->rows(); ++i) append(cells, Vector(m->row(i).transpose()));
      }
      append(cells, jet.U);
      cells.push_back(number(jet.lambda));
      r.row(cells);
      continue;
    }
    const HypersurfacePoint hp = fields.geometry(p);
    r.record({{"record", "point"},
              {"index", idx},
              {"point", to_json(p)},
              {"g", to_json(jet.metric.g)},
              {"S", to_json(jet.S)},
              {"f", to_json(jet.f)},
              {"U", to_json(jet.U)},
              {"lambda", jet.lambda},
              {"x", to_json(hp.position)},
              {"normal", to_json(hp.normal)}});
  }
  r.summary({{"record", "summary"},
             {"command", "extract"},
             {"hypersurface", h.name},
             {"n", n},
             {"k", h.k},
             {"grid_points", grid.size()}});
  emit(config, r, out);
  return kExitOk;
}

int cmd_roundtrip(const RunConfig& config, InputDocument doc, std::ostream& out, std::ostream& err) {
  const ParametrizedHypersurface& h = require_hypersurface(doc, "roundtrip");
  const SampleGrid grid = uniform_grid(h.chart, config.grid);
  const StructureSpec spec = extract_structure(h, grid);
  const TheoremReport theorem = reconstruct(spec, grid, validation_options(config));
  const std::vector<ImmersionSample> original = hypersurface_samples(h, grid);
  const std::size_t base = nearest_sample(grid, h.chart.base_point);
  const Congruence c = solve_congruence(h.model(), theorem.samples, original, base, config.congruence_tolerance);

  Report r(config);
  const std::size_t n = h.dim();
  if (r.csv()) {
    auto header = coordinate_header(h.chart);
    for (std::size_t i = 1; i <= n + 3; ++i) header.push_back("psi" + std::to_string(i));
    for (std::size_t i = 1; i <= n + 3; ++i) header.push_back("x" + std::to_string(i));
    header.push_back("distance");
    r.row(header);
  }
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const Vector mapped = c.phi * theorem.samples[idx].position;
    const double distance = (mapped - original[idx].position).norm();
    if (r.csv()) {
      std::vector<std::string> cells;
      append(cells, theorem.samples[idx].point);
      append(cells, theorem.samples[idx].position);
      append(cells, original[idx].position);
      cells.push_back(number(distance));
      r.row(cells);
      continue;
    }
    r.record({{"record", "point"},
              {"index", idx},
              {"point", to_json(theorem.samples[idx].point)},
              {"psi", to_json(theorem.samples[idx].position)},
              {"x", to_json(original[idx].position)},
              {"distance", distance}});
  }
  r.summary({{"record", "summary"},
             {"command", "roundtrip"},
             {"hypersurface", h.name},
             {"k", theorem.k},
             {"congruent", c.congruent},
             {"sup_distance", c.sup_distance},
             {"tolerance", c.tolerance},
             {"block_defect", c.block_defect},
             {"orthogonality", c.orthogonality},
             {"lorentz", c.lorentz},
             {"upper_sheet", c.upper_sheet},
             {"phi", to_json(c.phi)},
             {"theorem_passed", theorem.passed},
             {"theorem_failures", theorem.failures},
             {"diagnostic", c.diagnostic}});
  emit(config, r, out);
  if (!c.congruent) {
    err << c.diagnostic << '\n';
    return kExitRejected;
  }
  return kExitOk;
}

int cmd_audit(const RunConfig& config, InputDocument doc, std::ostream& out, std::ostream&) {
  const ParametrizedHypersurface& h = require_hypersurface(doc, "audit");
  const SampleGrid grid = uniform_grid(h.chart, config.grid);
  const AuditReport a = audit_equations(h, grid, config.tolerance);
  Report r(config);
  if (r.csv()) r.row({"label", "family", "residual", "holds"});
  const std::pair<const AuditVariant*, const char*> variants[] = {
      {&a.gauss_composed, "gauss"}, {&a.gauss_wedged, "gauss"}, {&a.codazzi_plus, "codazzi"},
      {&a.codazzi_minus, "codazzi"}};
  for (const auto& [v, family] : variants) {
    if (r.csv()) {
      r.row({v->label, family, number(v->residual), v->holds ? "1" : "0"});
      continue;
    }
    r.record({{"record", "variant"},
              {"family", family},
              {"label", v->label},
              {"formula", v->formula},
              {"residual", v->residual},
              {"holds", v->holds}});
  }
  r.summary({{"record", "summary"},
             {"command", "audit"},
             {"hypersurface", h.name},
             {"tolerance", a.tolerance},
             {"statements", a.statements}});
  emit(config, r, out);
  return kExitOk;
}

int cmd_catalog(const RunConfig& config, std::ostream& out) {
  Report r(config);
  if (!config.input.empty()) {
    const CatalogEntry* entry = find_catalog_entry(config.input);
    if (!entry) throw SchemaError("unknown catalog entry '" + config.input + "'");
    out << entry->document << '\n';
    return kExitOk;
  }
  if (r.csv()) r.row({"name", "description"});
  for (const auto& e : catalog()) {
    if (r.csv()) {
      r.row({std::string(e.name), "\"" + std::string(e.description) + "\""});
    } else {
      r.record({{"record", "entry"}, {"name", e.name}, {"description", e.description}});
    }
  }
  emit(config, r, out);
  return kExitOk;
}

constexpr const char* kFooter = R"(
Input: a JSON file or catalog:NAME (see `catalog`).
Exit codes: 0 success; 1 inadmissible structure, failed validation or no congruence;
2 parse/schema error or hypersurface not on the model.
Reports are JSON lines (one record per grid point, then a summary record) or CSV.
CSV column order:
  check:       coordinates, evaluated, C1_algebraic, C2_gauss, C3_codazzi, C4_grad_f, C5_grad_U,
               C6_grad_lambda, k_estimate
  reconstruct: coordinates, psi1..psi(n+3), N1..N(n+3), quadric, isometry, normal, shape, product,
               pushforward_fd, gram_drift, eigen_drift
  extract:     coordinates, g11..gnn, S11..Snn, f11..fnn, U1..Un, lambda
  roundtrip:   coordinates, psi1..psi(n+3), x1..x(n+3), distance
  audit:       label, family, residual, holds
CSV output ends with a "# summary {json}" line.
IMMERSION_FORGE_THREADS caps the number of worker threads.)";

}  // namespace

void RunConfig::validate() const {
  if (!(tolerance > 0.0)) throw SchemaError("--tol must be positive");
  if (grid < 2) throw SchemaError("--grid must be at least 2");
  if (!(step > 0.0 && step <= 0.1)) throw SchemaError("--step must lie in (0, 0.1]");
  if (!(congruence_tolerance > 0.0)) throw SchemaError("--congruence-tol must be positive");
  if (format != "json" && format != "csv") throw SchemaError("--format must be json or csv");
}

int run_command(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
    if (config.command == "catalog") return cmd_catalog(config, out);
    InputDocument doc = load_document(config.input);
    apply_base_override(config, doc);
    if (config.command == "check") return cmd_check(config, std::move(doc), out, err);
    if (config.command == "reconstruct") return cmd_reconstruct(config, std::move(doc), out, err);
    if (config.command == "extract") return cmd_extract(config, std::move(doc), out, err);
    if (config.command == "roundtrip") return cmd_roundtrip(config, std::move(doc), out, err);
    if (config.command == "audit") return cmd_audit(config, std::move(doc), out, err);
    throw SchemaError("unknown command '" + config.command + "'");
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const SchemaError& e) {
    err << "schema error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const ModelError& e) {
    err << "not on model: " << e.what() << '\n';
    return kExitInputError;
  } catch (const AdmissionError& e) {
    err << e.what() << '\n';
    return kExitRejected;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRejected;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Compatibility checks and immersion reconstruction for hypersurfaces of S^k x H^(n-k+1)",
               "immersion-forge"};
  app.footer(kFooter);
  app.require_subcommand(1);
  RunConfig config;
  std::vector<double> base;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tol", config.tolerance, "compatibility tolerance (default 1e-8)");
    sub->add_option("--grid", config.grid, "grid points per axis (default 8)");
    sub->add_option("--step", config.step, "RK4 step in path parameter (default 1e-3)");
    sub->add_option("--base", base, "base point override, comma separated")->delimiter(',');
    sub->add_option("--out", config.output, "output file (written atomically; default stdout)");
    sub->add_option("--format", config.format, "report format: json or csv");
    sub->add_option("--congruence-tol", config.congruence_tolerance, "roundtrip congruence tolerance (default 1e-6)");
  };
  const std::pair<const char*, const char*> commands[] = {
      {"check", "verify the compatibility equations and decide admission"},
      {"reconstruct", "integrate the flat connection and validate the immersion"},
      {"extract", "induced structure of a parametrized hypersurface"},
      {"roundtrip", "extract, reconstruct and compare with the original up to congruence"},
      {"audit", "test both Gauss forms and both Codazzi signs on a hypersurface"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("input", config.input, "input file or catalog:NAME")->required();
    add_common(sub);
  }
  CLI::App* cat = app.add_subcommand("catalog", "list shipped examples, or print one");
  cat->add_option("name", config.input, "entry to print");
  cat->add_option("--format", config.format, "listing format: json or csv");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }
  for (const auto* sub : app.get_subcommands()) config.command = sub->get_name();
  if (!base.empty()) config.base = base;
  return run_command(config, out, err);
}

}  // namespace immersion
