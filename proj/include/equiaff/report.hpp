#pragma once

// Structured verification reports. A run is described by a RunConfig; the
// report is a schema-versioned JSON document with one record per (model,
// point), deterministic field order, and byte-identical output for identical
// configs. Wall-clock fields appear only when timing is requested.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "equiaff/chart.hpp"
#include "equiaff/labels.hpp"

namespace equiaff {

struct RunConfig {
  std::vector<std::string> model_labels;
  DerivBackend backend = DerivBackend::Jets;
  bool backend_forced = false;  // --backend given; otherwise per-chart default
  double tolerance = 0.0;       // 0 = per-backend default
  int points = 3;
  std::uint64_t seed = 1;
  bool long_running = false;
  bool timing = false;
  int workers = 1;
  std::string output_path;  // empty = stdout
};

inline const char* kReportSchema = "equiaff.report/1";

// 1e-6 for jets, 1e-3 for finite differences.
double default_tolerance(DerivBackend backend);

// Pipeline checks for every configured label at seeded domain points.
// Throws LabelError for unknown labels or long-running models without the
// long flag, ChartError when a forced jets backend is unavailable.
nlohmann::ordered_json verify_report(const RunConfig& config);

// Composition run described by a parsed spec document with keys r, s,
// factors (model labels), c (positive reals). Throws CompositionError or
// LabelError on malformed specs.
nlohmann::ordered_json calabi_report(const nlohmann::json& spec_doc,
                                     const RunConfig& config);

bool report_passed(const nlohmann::ordered_json& report);

}  // namespace equiaff
