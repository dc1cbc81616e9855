#include "equiaff/labels.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "equiaff/jordan.hpp"
#include "equiaff/models.hpp"

namespace equiaff {

namespace {

std::vector<std::string> split_label(const std::string& label) {
  std::vector<std::string> parts;
  size_t start = 0;
  while (true) {
    size_t pos = label.find(':', start);
    if (pos == std::string::npos) {
      parts.push_back(label.substr(start));
      return parts;
    }
    parts.push_back(label.substr(start, pos - start));
    start = pos + 1;
  }
}

int parse_int(const std::string& text, const std::string& label) {
  int value = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw LabelError("label '" + label + "': '" + text + "' is not an integer");
  return value;
}

QuadricKind parse_quadric_kind(const std::string& kind, const std::string& label) {
  if (kind == "ellipsoid" || kind == "elliptic") return QuadricKind::Ellipsoid;
  if (kind == "paraboloid" || kind == "parabolic") return QuadricKind::Paraboloid;
  if (kind == "hyperboloid" || kind == "hyperbolic") return QuadricKind::Hyperboloid;
  throw LabelError("label '" + label +
                   "': kind must be ellipsoid, paraboloid or hyperboloid");
}

const char* canonical_kind(QuadricKind kind) {
  switch (kind) {
    case QuadricKind::Ellipsoid: return "ellipsoid";
    case QuadricKind::Paraboloid: return "paraboloid";
    default: return "hyperboloid";
  }
}

MatrixFamily parse_matrix_family(const std::string& head) {
  if (head == "slr") return MatrixFamily::SLR;
  if (head == "slc") return MatrixFamily::SLC;
  return MatrixFamily::SUstar;
}

std::string format_l1(double L1) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", L1);
  return buf;
}

}  // namespace

ResolvedModel resolve_label(const std::string& label) {
  std::vector<std::string> parts = split_label(label);
  const std::string& head = parts[0];
  ResolvedModel out;

  if (head == "quadric") {
    if (parts.size() != 3)
      throw LabelError("label '" + label + "': expected quadric:<kind>:<n>");
    QuadricKind kind = parse_quadric_kind(parts[1], label);
    int n = parse_int(parts[2], label);
    if (n < 1 || n > 32)
      throw LabelError("label '" + label + "': n must be between 1 and 32");
    out.label = std::string("quadric:") + canonical_kind(kind) + ":" + std::to_string(n);
    out.family = "quadric";
    out.chart = quadric_chart(kind, n);
    out.hypersphere = true;
    out.centered = kind != QuadricKind::Paraboloid;
    out.parallel_cubic = true;
    out.has_closed_form_L1 = true;
    out.closed_form_L1 = quadric_L1(kind, n);
    return out;
  }

  if (head == "flat") {
    if (parts.size() != 2) throw LabelError("label '" + label + "': expected flat:<n>");
    int n = parse_int(parts[1], label);
    if (n < 1 || n > 32)
      throw LabelError("label '" + label + "': n must be between 1 and 32");
    out.label = "flat:" + std::to_string(n);
    out.family = "flat";
    out.chart = flat_chart(n);
    out.hypersphere = true;
    out.centered = true;
    out.parallel_cubic = true;
    out.has_closed_form_L1 = true;
    out.closed_form_L1 = flat_L1(n);
    return out;
  }

  if (head == "perturbed-paraboloid") {
    if (parts.size() != 2)
      throw LabelError("label '" + label + "': expected perturbed-paraboloid:<n>");
    int n = parse_int(parts[1], label);
    if (n < 2 || n > 32)
      throw LabelError("label '" + label + "': n must be between 2 and 32");
    out.label = "perturbed-paraboloid:" + std::to_string(n);
    out.family = "control";
    out.chart = perturbed_paraboloid_chart(n);
    return out;
  }

  if (head == "slr" || head == "slc" || head == "suh") {
    if (parts.size() != 2) throw LabelError("label '" + label + "': expected " + head + ":<m>");
    int m = parse_int(parts[1], label);
    if (m < 3 || m > 10)
      throw LabelError("label '" + label + "': m must be between 3 and 10");
    MatrixModel model = make_matrix_model(parse_matrix_family(head), m);
    out.label = head + ":" + std::to_string(m);
    out.family = "matrix";
    out.chart = model_chart(model);
    out.hypersphere = true;
    out.centered = true;
    out.parallel_cubic = true;
    out.has_closed_form_L1 = true;
    out.closed_form_L1 = model.L1;
    out.audits = [model]() {
      return std::vector<std::pair<std::string, double>>{
          {"scale_consistency", scale_consistency_audit(model)},
          {"traceless", traceless_audit(model)},
          {"unimodularity", unimodularity_audit(model)},
      };
    };
    return out;
  }

  if (head == "e6f4") {
    if (parts.size() != 1) throw LabelError("label '" + label + "': e6f4 takes no parameters");
    out.label = "e6f4";
    out.family = "jordan";
    out.chart = e6_chart(-1.0);
    out.hypersphere = true;
    out.centered = true;
    out.parallel_cubic = true;
    out.long_running = true;
    out.has_closed_form_L1 = true;
    out.closed_form_L1 = -1.0;
    out.audits = []() {
      OriginData od = e6_origin_data(-1.0);
      int n = od.g.rows();
      double sym = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            double v = od.A[i][j][k];
            sym = std::max(sym, std::abs(v - od.A[j][i][k]));
            sym = std::max(sym, std::abs(v - od.A[i][k][j]));
          }
      return std::vector<std::pair<std::string, double>>{
          {"constant", e6_constant_audit(-1.0)},
          {"traceless_map", e6_traceless_map_audit()},
          {"cubic_symmetry", sym},
      };
    };
    return out;
  }

  throw LabelError("unknown model label '" + label + "'");
}

std::vector<CatalogEntry> model_catalog() {
  std::vector<CatalogEntry> entries;
  for (int n = 2; n <= 3; ++n)
    for (QuadricKind kind :
         {QuadricKind::Ellipsoid, QuadricKind::Paraboloid, QuadricKind::Hyperboloid}) {
      CatalogEntry e;
      e.label = std::string("quadric:") + canonical_kind(kind) + ":" + std::to_string(n);
      e.n = n;
      e.family = "quadric";
      e.backend = "jets";
      e.note = "hypersphere L1=" + format_l1(quadric_L1(kind, n));
      entries.push_back(e);
    }
  for (int n = 2; n <= 4; ++n) {
    CatalogEntry e;
    e.label = "flat:" + std::to_string(n);
    e.n = n;
    e.family = "flat";
    e.backend = "jets";
    e.note = "hypersphere L1=" + format_l1(flat_L1(n));
    entries.push_back(e);
  }
  {
    CatalogEntry e;
    e.label = "perturbed-paraboloid:2";
    e.n = 2;
    e.family = "control";
    e.backend = "jets";
    e.note = "negative control";
    entries.push_back(e);
  }
  for (const char* head : {"slr", "slc", "suh"}) {
    CatalogEntry e;
    e.label = std::string(head) + ":3";
    e.n = matrix_model_dim(parse_matrix_family(head), 3);
    e.family = "matrix";
    e.backend = "jets";
    e.note = "hypersphere L1=-1";
    entries.push_back(e);
  }
  {
    CatalogEntry e;
    e.label = "e6f4";
    e.n = 26;
    e.family = "jordan";
    e.backend = "fd";
    e.note = "hypersphere L1=-1 long-running";
    entries.push_back(e);
  }
  return entries;
}

std::string catalog_text() {
  std::string out;
  for (const CatalogEntry& e : model_catalog()) {
    out += e.label + " n=" + std::to_string(e.n) + " family=" + e.family +
           " backend=" + e.backend + " " + e.note + "\n";
  }
  return out;
}

}  // namespace equiaff
