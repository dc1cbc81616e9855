#include "equiaff/report.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "equiaff/blaschke.hpp"
#include "equiaff/calabi.hpp"

namespace equiaff {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

const char* backend_name(DerivBackend backend) {
  return backend == DerivBackend::Jets ? "jets" : "fd";
}

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

constexpr double kAuditTolerance = 1e-9;

struct PointOutcome {
  std::vector<double> u;
  bool ok = false;
  std::string error;
  PointInvariants inv;
  StructureResiduals res;
};

std::vector<PointOutcome> evaluate_points(const Chart& chart,
                                          const std::vector<std::vector<double>>& pts,
                                          const DerivOptions& opt, int workers) {
  std::vector<PointOutcome> out(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) out[i].u = pts[i];
  std::atomic<size_t> next{0};
  auto work = [&]() {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= pts.size()) break;
      try {
        out[i].inv = invariants_at(chart, pts[i], opt);
        out[i].res = structure_residuals(out[i].inv);
        out[i].ok = true;
      } catch (const std::exception& e) {
        out[i].error = e.what();
      }
    }
  };
  int budget = std::min<int>(std::max(workers, 1), static_cast<int>(pts.size()));
  if (budget <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < budget - 1; ++w) pool.emplace_back(work);
    work();
    for (std::thread& t : pool) t.join();
  }
  return out;
}

ordered_json residuals_json(const StructureResiduals& r) {
  ordered_json j;
  j["apolarity"] = r.apolarity;
  j["symmetry_fp"] = r.symmetry_fp;
  j["symmetry_shape"] = r.symmetry_shape;
  j["frame_metric"] = r.frame_metric;
  j["frame_volume"] = r.frame_volume;
  j["weingarten_normal"] = r.weingarten_normal;
  j["cross_route"] = r.cross_route;
  j["codazzi"] = r.codazzi;
  j["contracted_codazzi"] = r.contracted_codazzi;
  j["gauss"] = r.gauss;
  j["gauss_frame"] = r.gauss_frame;
  j["chi_identity"] = r.chi_identity;
  j["max_structural"] = r.max_structural();
  j["hypersphere"] = r.hypersphere;
  j["parallel_fp"] = r.parallel_fp;
  return j;
}

double centered_residual(const PointInvariants& inv) {
  double xmax = 0.0, gap = 0.0;
  for (size_t i = 0; i < inv.x.size(); ++i) {
    xmax = std::max(xmax, std::abs(inv.x[i]));
    gap = std::max(gap, std::abs(inv.xi[i] + inv.L1 * inv.x[i]));
  }
  return gap / (1.0 + std::abs(inv.L1) * xmax);
}

struct CheckFlags {
  bool hypersphere = false;
  bool centered = false;
  bool parallel_cubic = false;
  bool has_expected_L1 = false;
  double expected_L1 = 0.0;
  const char* l1_check_name = "closed_form_L1";
};

ordered_json point_json(const PointOutcome& o, int index, const CheckFlags& flags,
                        double tol) {
  ordered_json j;
  j["index"] = index;
  j["u"] = o.u;
  if (!o.ok) {
    j["error"] = o.error;
    j["pass"] = false;
    return j;
  }
  j["L1"] = o.inv.L1;
  j["J"] = o.inv.J;
  j["chi"] = o.inv.chi;
  j["residuals"] = residuals_json(o.res);

  ordered_json checks;
  bool pass = true;
  auto record = [&](const char* name, double value) {
    bool ok = value < tol;
    checks[name] = ok;
    pass = pass && ok;
  };
  record("structural", o.res.max_structural());
  if (flags.hypersphere) record("hypersphere", o.res.hypersphere);
  if (flags.centered) record("centered", centered_residual(o.inv));
  if (flags.parallel_cubic) record("parallel_cubic", o.res.parallel_fp);
  if (flags.has_expected_L1)
    record(flags.l1_check_name, std::abs(o.inv.L1 - flags.expected_L1));
  j["checks"] = checks;
  j["pass"] = pass;
  return j;
}

ordered_json config_json(const RunConfig& cfg, bool with_labels) {
  ordered_json j;
  if (with_labels) j["labels"] = cfg.model_labels;
  j["backend"] = cfg.backend_forced ? backend_name(cfg.backend) : "auto";
  if (cfg.tolerance > 0.0)
    j["tolerance"] = cfg.tolerance;
  else
    j["tolerance"] = "auto";
  j["points"] = cfg.points;
  j["seed"] = cfg.seed;
  j["long"] = cfg.long_running;
  return j;
}

DerivBackend pick_backend(const RunConfig& cfg, const Chart& chart) {
  if (cfg.backend_forced) {
    if (cfg.backend == DerivBackend::Jets && !chart.supports_jets())
      throw ChartError("chart '" + chart.label() +
                       "' has no jet formulas; use the finite-difference backend");
    return cfg.backend;
  }
  return chart.supports_jets() ? DerivBackend::Jets : DerivBackend::FiniteDifference;
}

void validate_config(const RunConfig& cfg) {
  if (cfg.points < 1) throw LabelError("points must be at least 1");
  if (cfg.tolerance < 0.0) throw LabelError("tolerance must be positive");
  if (cfg.workers < 1) throw LabelError("workers must be at least 1");
}

ordered_json model_section(const ResolvedModel& model, const RunConfig& cfg) {
  auto start = Clock::now();
  DerivBackend backend = pick_backend(cfg, *model.chart);
  double tol = cfg.tolerance > 0.0 ? cfg.tolerance : default_tolerance(backend);

  ordered_json j;
  j["label"] = model.label;
  j["family"] = model.family;
  j["n"] = model.chart->dim();
  j["backend"] = backend_name(backend);
  j["tolerance"] = tol;
  if (model.has_closed_form_L1) j["closed_form_L1"] = model.closed_form_L1;

  bool pass = true;
  if (model.audits) {
    ordered_json audits;
    for (const auto& [name, value] : model.audits()) {
      audits[name] = value;
      pass = pass && value < kAuditTolerance;
    }
    j["audit_tolerance"] = kAuditTolerance;
    j["audits"] = audits;
    j["audits_pass"] = pass;
  }

  CheckFlags flags;
  flags.hypersphere = model.hypersphere;
  flags.centered = model.centered;
  flags.parallel_cubic = model.parallel_cubic;
  flags.has_expected_L1 = model.has_closed_form_L1;
  flags.expected_L1 = model.closed_form_L1;

  DerivOptions opt;
  opt.backend = backend;
  auto pts = seeded_domain_points(*model.chart, cfg.points, cfg.seed);
  auto outcomes = evaluate_points(*model.chart, pts, opt, cfg.workers);

  ordered_json point_list = ordered_json::array();
  for (size_t i = 0; i < outcomes.size(); ++i) {
    ordered_json pj = point_json(outcomes[i], static_cast<int>(i), flags, tol);
    pass = pass && pj["pass"].get<bool>();
    point_list.push_back(std::move(pj));
  }
  j["points"] = std::move(point_list);
  if (cfg.timing) j["wall_ms"] = elapsed_ms(start);
  j["pass"] = pass;
  return j;
}

// ---------------------------------------------------------------------------
// Composition specs
// ---------------------------------------------------------------------------

struct ParsedSpec {
  CalabiSpec spec;
  std::vector<std::string> factor_labels;
  std::vector<ResolvedModel> factor_models;
};

ParsedSpec parse_spec_doc(const json& doc, const RunConfig& cfg) {
  if (!doc.is_object()) throw CompositionError("spec file: top level must be an object");
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (key != "r" && key != "s" && key != "factors" && key != "c")
      throw CompositionError("spec file: unknown key '" + key + "'");
  }
  if (!doc.contains("r") || !doc["r"].is_number_integer())
    throw CompositionError("spec file: key 'r' must be an integer");

  ParsedSpec parsed;
  parsed.spec.r = doc["r"].get<int>();
  if (doc.contains("factors")) {
    if (!doc["factors"].is_array())
      throw CompositionError("spec file: key 'factors' must be an array of labels");
    for (const auto& item : doc["factors"]) {
      if (!item.is_string())
        throw CompositionError("spec file: factor entries must be label strings");
      parsed.factor_labels.push_back(item.get<std::string>());
    }
  }
  if (doc.contains("s")) {
    if (!doc["s"].is_number_integer() ||
        doc["s"].get<int>() != static_cast<int>(parsed.factor_labels.size()))
      throw CompositionError("spec file: key 's' must equal the number of factors");
  }

  int K = parsed.spec.r + static_cast<int>(parsed.factor_labels.size());
  if (doc.contains("c")) {
    if (!doc["c"].is_array()) throw CompositionError("spec file: key 'c' must be an array");
    for (const auto& item : doc["c"]) {
      if (!item.is_number()) throw CompositionError("spec file: 'c' entries must be numbers");
      parsed.spec.c.push_back(item.get<double>());
    }
  } else {
    parsed.spec.c.assign(K, 1.0);
  }

  for (const std::string& label : parsed.factor_labels) {
    ResolvedModel model = resolve_label(label);
    if (model.long_running && !cfg.long_running)
      throw LabelError("factor '" + model.label + "' is long-running; pass --long");
    if (!model.has_closed_form_L1 || !(model.closed_form_L1 < 0.0) || !model.centered)
      throw CompositionError("factor '" + model.label +
                             "' is not a centered hyperbolic hypersphere");
    DerivOptions opt;
    opt.backend = pick_backend(cfg, *model.chart);
    parsed.spec.factors.push_back(
        make_factor(model.chart, model.closed_form_L1, opt));
    parsed.factor_models.push_back(std::move(model));
  }
  validate_spec(parsed.spec);
  return parsed;
}

}  // namespace

double default_tolerance(DerivBackend backend) {
  return backend == DerivBackend::Jets ? 1e-6 : 1e-3;
}

ordered_json verify_report(const RunConfig& cfg) {
  validate_config(cfg);
  if (cfg.model_labels.empty()) throw LabelError("no model labels given");
  auto start = Clock::now();

  std::vector<ResolvedModel> models;
  for (const std::string& label : cfg.model_labels) {
    ResolvedModel model = resolve_label(label);
    if (model.long_running && !cfg.long_running)
      throw LabelError("model '" + model.label + "' is long-running; pass --long");
    pick_backend(cfg, *model.chart);
    models.push_back(std::move(model));
  }

  ordered_json report;
  report["schema"] = kReportSchema;
  report["command"] = "verify";
  report["config"] = config_json(cfg, true);
  ordered_json sections = ordered_json::array();
  bool pass = true;
  for (const ResolvedModel& model : models) {
    ordered_json section = model_section(model, cfg);
    pass = pass && section["pass"].get<bool>();
    sections.push_back(std::move(section));
  }
  report["models"] = std::move(sections);
  if (cfg.timing) report["total_wall_ms"] = elapsed_ms(start);
  report["pass"] = pass;
  return report;
}

ordered_json calabi_report(const json& spec_doc, const RunConfig& cfg) {
  validate_config(cfg);
  auto start = Clock::now();
  ParsedSpec parsed = parse_spec_doc(spec_doc, cfg);
  const CalabiSpec& spec = parsed.spec;

  ChartPtr chart = build_composition(spec);
  PredictedL1 predicted = predicted_L1(spec);
  DerivBackend backend = pick_backend(cfg, *chart);
  double tol = cfg.tolerance > 0.0 ? cfg.tolerance : default_tolerance(backend);

  ordered_json report;
  report["schema"] = kReportSchema;
  report["command"] = "calabi";
  report["config"] = config_json(cfg, false);

  ordered_json sj;
  sj["r"] = spec.r;
  sj["s"] = spec.s();
  sj["factors"] = parsed.factor_labels;
  sj["c"] = spec.c;
  report["spec"] = std::move(sj);

  ordered_json cj;
  cj["label"] = chart->label();
  cj["n"] = chart->dim();
  cj["backend"] = backend_name(backend);
  cj["tolerance"] = tol;
  cj["predicted_C"] = predicted.C;
  cj["predicted_L1"] = predicted.L1;

  bool pass = true;
  ordered_json factor_list = ordered_json::array();
  bool all_parallel = true;
  for (size_t i = 0; i < spec.factors.size(); ++i) {
    const FactorSpec& f = spec.factors[i];
    DerivOptions fopt;
    fopt.backend = pick_backend(cfg, *f.chart);
    ordered_json fj;
    fj["label"] = parsed.factor_models[i].label;
    fj["n"] = f.dim;
    fj["L1"] = f.L1;
    fj["residual"] = factor_residual(f, fopt);
    factor_list.push_back(std::move(fj));
    all_parallel = all_parallel && parsed.factor_models[i].parallel_cubic;
  }
  cj["factors"] = std::move(factor_list);

  CheckFlags flags;
  flags.hypersphere = true;
  flags.centered = true;
  flags.parallel_cubic = all_parallel;
  flags.has_expected_L1 = true;
  flags.expected_L1 = predicted.L1;
  flags.l1_check_name = "predicted_L1";

  DerivOptions opt;
  opt.backend = backend;
  auto pts = seeded_domain_points(*chart, cfg.points, cfg.seed);
  auto outcomes = evaluate_points(*chart, pts, opt, cfg.workers);
  ordered_json point_list = ordered_json::array();
  for (size_t i = 0; i < outcomes.size(); ++i) {
    ordered_json pj = point_json(outcomes[i], static_cast<int>(i), flags, tol);
    pass = pass && pj["pass"].get<bool>();
    point_list.push_back(std::move(pj));
  }
  cj["points"] = std::move(point_list);
  cj["pass"] = pass;
  report["composition"] = std::move(cj);
  if (cfg.timing) report["total_wall_ms"] = elapsed_ms(start);
  report["pass"] = pass;
  return report;
}

bool report_passed(const ordered_json& report) {
  return report.contains("pass") && report["pass"].is_boolean() && report["pass"].get<bool>();
}

}  // namespace equiaff
