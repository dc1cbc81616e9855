// Acceptance gate for the whole suite: one line per criterion, exit 0 iff
// every executed criterion passes. The 26-dimensional finite-difference run
// is enabled with --long and skipped otherwise.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "equiaff/blaschke.hpp"
#include "equiaff/calabi.hpp"
#include "equiaff/chart.hpp"
#include "equiaff/jordan.hpp"
#include "equiaff/linalg.hpp"
#include "equiaff/models.hpp"
#include "equiaff/rng.hpp"

using namespace equiaff;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void append(const std::string& s) {
    if (!detail.empty()) detail += ' ';
    detail += s;
  }
  // asserts value < tol
  void bound(const char* name, double value, double tol) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s=%.2e", name, value);
    append(buf);
    if (!(value < tol)) {
      std::snprintf(buf, sizeof(buf), "(exceeds %.1e)", tol);
      append(buf);
      pass = false;
    }
  }
  void expect(bool ok, const char* what) {
    if (!ok) {
      pass = false;
      append(std::string("FAILED: ") + what);
    }
  }
};

double max_abs3(const Ten3& t) {
  double m = 0.0;
  for (const auto& a : t)
    for (const auto& b : a)
      for (double v : b) m = std::max(m, std::abs(v));
  return m;
}

double max_abs4(const Ten4& t) {
  double m = 0.0;
  for (const auto& a : t) m = std::max(m, max_abs3(a));
  return m;
}

double centered_gap(const PointInvariants& inv) {
  double gap = 0.0;
  for (size_t i = 0; i < inv.x.size(); ++i)
    gap = std::max(gap, std::abs(inv.xi[i] + inv.L1 * inv.x[i]));
  return gap;
}

// residuals named by the matrix-model criteria: apolarity, the two Codazzi
// forms, the two Gauss forms, the hypersphere gap and the parallelism gap
double named_residuals(const StructureResiduals& r) {
  return std::max({r.apolarity, r.codazzi, r.contracted_codazzi, r.gauss, r.gauss_frame,
                   r.hypersphere, r.parallel_fp});
}

// --------------------------------------------------------------- criterion 1

Outcome quadric_suite() {
  Outcome o;
  double worst_a = 0.0, worst_b = 0.0;
  bool signs = true;
  for (int n = 2; n <= 3; ++n)
    for (QuadricKind kind :
         {QuadricKind::Ellipsoid, QuadricKind::Paraboloid, QuadricKind::Hyperboloid}) {
      ChartPtr chart = quadric_chart(kind, n);
      for (const auto& u : seeded_domain_points(*chart, 3, 0xacce5501ULL)) {
        PointInvariants inv = invariants_at(*chart, u);
        StructureResiduals res = structure_residuals(inv);
        worst_a = std::max(worst_a, max_abs3(inv.fp));
        worst_b = std::max(worst_b, res.hypersphere);
        switch (kind) {
          case QuadricKind::Ellipsoid: signs = signs && inv.L1 > 0.0; break;
          case QuadricKind::Paraboloid: signs = signs && std::abs(inv.L1) < 1e-8; break;
          case QuadricKind::Hyperboloid: signs = signs && inv.L1 < 0.0; break;
        }
      }
    }
  o.bound("max|A|", worst_a, 1e-8);
  o.bound("max|B-L1*g|", worst_b, 1e-8);
  o.expect(signs, "L1 sign pattern (+, 0, -)");
  return o;
}

// --------------------------------------------------------------- criterion 2

Outcome flat_suite() {
  Outcome o;
  double worst_r = 0.0, worst_spread = 0.0, worst_l1 = 0.0;
  bool signs = true;
  for (int n = 2; n <= 4; ++n) {
    ChartPtr chart = flat_chart(n);
    CalabiSpec spec;
    spec.r = n + 1;
    spec.c.assign(n + 1, 1.0);
    double closed = predicted_L1(spec).L1;
    double jmin = std::numeric_limits<double>::infinity(), jmax = -jmin;
    for (const auto& u : seeded_domain_points(*chart, 10, 0xacce5502ULL)) {
      PointInvariants inv = invariants_at(*chart, u);
      worst_r = std::max(worst_r, max_abs4(inv.curvature_low));
      jmin = std::min(jmin, inv.J);
      jmax = std::max(jmax, inv.J);
      signs = signs && inv.J > 0.0 && inv.L1 < 0.0;
      worst_l1 = std::max(worst_l1, std::abs(inv.L1 - closed));
    }
    worst_spread = std::max(worst_spread, jmax - jmin);
  }
  o.bound("max|R|", worst_r, 1e-7);
  o.bound("J-spread", worst_spread, 1e-8);
  o.bound("|L1-closed|", worst_l1, 1e-6);
  o.expect(signs, "J > 0 and L1 < 0");
  return o;
}

// ----------------------------------------------------------- criteria 3 and 4

Outcome matrix_suite(std::vector<MatrixFamily> families, DerivBackend backend, int points,
                     double origin_tol, double res_tol) {
  Outcome o;
  DerivOptions opt;
  opt.backend = backend;
  double worst_origin = 0.0, worst_res = 0.0, worst_center = 0.0, worst_audit = 0.0;
  double worst_scale = 0.0;
  for (MatrixFamily family : families) {
    MatrixModel model = make_matrix_model(family, 3);
    OriginCheck oc = origin_crosscheck(model, opt);
    worst_origin = std::max({worst_origin, oc.metric_gap, oc.cubic_gap});
    ChartPtr chart = model_chart(model);
    auto pts = seeded_domain_points(*chart, points + 1, 0xacce5503ULL);
    for (size_t i = 1; i < pts.size(); ++i) {
      PointInvariants inv = invariants_at(*chart, pts[i], opt);
      StructureResiduals res = structure_residuals(inv);
      worst_res = std::max(worst_res, named_residuals(res));
      worst_center = std::max(worst_center, centered_gap(inv));
    }
    worst_audit = std::max({worst_audit, traceless_audit(model), unimodularity_audit(model)});
    worst_scale = std::max(worst_scale, scale_consistency_audit(model));
  }
  o.bound("origin(g,A)", worst_origin, origin_tol);
  o.bound("residuals", worst_res, res_tol);
  o.bound("|xi+L1*x|", worst_center, res_tol);
  o.bound("audits", worst_audit, 1e-10);
  if (families.front() == MatrixFamily::SUstar) o.bound("scale-constant", worst_scale, 1e-12);
  return o;
}

// --------------------------------------------------------------- criterion 5

Outcome composition_suite() {
  Outcome o;
  auto hyp2 = []() {
    return make_factor(quadric_chart(QuadricKind::Hyperboloid, 2),
                       quadric_L1(QuadricKind::Hyperboloid, 2));
  };
  auto slr3 = []() {
    MatrixModel model = make_matrix_model(MatrixFamily::SLR, 3);
    return make_factor(model_chart(model), model.L1);
  };

  struct Entry {
    CalabiSpec spec;
    DerivBackend backend;
    bool small_dims;  // every factor dimension at most 2
  };
  std::vector<Entry> entries;
  {
    CalabiSpec s;  // (r, s) = (2, 0)
    s.r = 2;
    s.c = {1.0, 2.0};
    entries.push_back({s, DerivBackend::Jets, true});
  }
  {
    CalabiSpec s;  // (3, 0)
    s.r = 3;
    s.c = {1.0, 1.0, 1.0};
    entries.push_back({s, DerivBackend::Jets, true});
  }
  {
    CalabiSpec s;  // (1, 1)
    s.r = 1;
    s.factors.push_back(hyp2());
    s.c = {1.0, 1.5};
    entries.push_back({s, DerivBackend::Jets, true});
  }
  {
    CalabiSpec s;  // (0, 2)
    s.factors.push_back(hyp2());
    s.factors.push_back(hyp2());
    s.c = {1.0, 2.0};
    entries.push_back({s, DerivBackend::Jets, true});
  }
  {
    CalabiSpec s;  // (1, 2) with a 5-dimensional factor
    s.r = 1;
    s.factors.push_back(hyp2());
    s.factors.push_back(slr3());
    s.c = {1.0, 1.0, 1.0};
    entries.push_back({s, DerivBackend::Jets, false});
  }
  {
    CalabiSpec s;  // (1, 1) again, exercising the finite-difference path
    s.r = 1;
    s.factors.push_back(hyp2());
    s.c = {2.0, 1.0};
    entries.push_back({s, DerivBackend::FiniteDifference, false});
  }

  double worst_hyp = 0.0, worst_l1_small = 0.0, worst_l1_wide = 0.0;
  double worst_par_jets = 0.0, worst_par_fd = 0.0;
  for (const Entry& entry : entries) {
    ChartPtr chart = build_composition(entry.spec);
    double pred = predicted_L1(entry.spec).L1;
    DerivOptions opt;
    opt.backend = entry.backend;
    for (const auto& u : seeded_domain_points(*chart, 3, 0xacce5505ULL)) {
      PointInvariants inv = invariants_at(*chart, u, opt);
      StructureResiduals res = structure_residuals(inv);
      worst_hyp = std::max(worst_hyp, res.hypersphere);
      double gap = std::abs(inv.L1 - pred);
      if (entry.small_dims && entry.backend == DerivBackend::Jets)
        worst_l1_small = std::max(worst_l1_small, gap);
      else
        worst_l1_wide = std::max(worst_l1_wide, gap);
      if (entry.backend == DerivBackend::Jets)
        worst_par_jets = std::max(worst_par_jets, res.parallel_fp);
      else
        worst_par_fd = std::max(worst_par_fd, res.parallel_fp);
    }
  }
  o.bound("hypersphere", worst_hyp, 1e-5);
  o.bound("|L1-pred|", worst_l1_small, 1e-6);
  o.bound("|L1-pred|wide", worst_l1_wide, 1e-4);
  o.bound("parallel", worst_par_jets, 1e-5);
  o.bound("parallel(fd)", worst_par_fd, 1e-4);
  return o;
}

// --------------------------------------------------------------- criterion 6

Octonion random_octonion(SplitMix64& rng, double scale) {
  Octonion x;
  for (double& c : x.c) c = scale * rng.uniform(-1.0, 1.0);
  return x;
}

JordanElement random_element(SplitMix64& rng, double scale) {
  JordanElement t;
  for (double& v : t.xi) v = scale * rng.uniform(-1.0, 1.0);
  for (Octonion& x : t.x) x = random_octonion(rng, scale);
  return t;
}

Outcome jordan_fast_suite() {
  Outcome o;
  SplitMix64 rng(0xacce5506ULL);
  double alt = 0.0, norm_comp = 0.0;
  for (int k = 0; k < 50; ++k) {
    Octonion x = random_octonion(rng, 1.0);
    Octonion y = random_octonion(rng, 1.0);
    Octonion left = (x * x) * y - x * (x * y);
    Octonion right = (y * x) * x - y * (x * x);
    for (double c : left.c) alt = std::max(alt, std::abs(c));
    for (double c : right.c) alt = std::max(alt, std::abs(c));
    norm_comp = std::max(norm_comp, std::abs((x * y).norm2() - x.norm2() * y.norm2()));
  }
  o.bound("alternativity", alt, 1e-12);
  o.bound("norm-comp", norm_comp, 1e-12);

  double diag_gap = 0.0;
  for (int k = 0; k < 20; ++k) {
    double a = rng.uniform(-2.0, 2.0), b = rng.uniform(-2.0, 2.0), c = rng.uniform(-2.0, 2.0);
    diag_gap = std::max(diag_gap, std::abs(jordan_det(JordanElement::diag(a, b, c)) - a * b * c));
  }
  o.bound("det(diag)", diag_gap, 1e-12);

  double trace_gap = 0.0, inv_gap = 0.0;
  for (int k = 0; k < 50; ++k) {
    JordanElement t = random_element(rng, 0.7);
    double tr = t.trace();
    for (double& v : t.xi) v -= tr / 3.0;
    JordanElement x = random_element(rng, 0.7);
    trace_gap = std::max(trace_gap, e6_trace_audit(t));
    DetInvarianceAudit audit = det_invariance_audit(t, x);
    inv_gap = std::max({inv_gap, audit.derivative_gradient, audit.derivative_fd, audit.flow_gap});
  }
  o.bound("tr(L_T)", trace_gap, 1e-8);
  o.bound("det-invariance", inv_gap, 1e-8);

  double constant_gap = 0.0;
  for (double L1 : {-1.0, -0.4, -2.25})
    constant_gap = std::max(constant_gap, e6_constant_audit(L1));
  o.bound("scale-constant", constant_gap, 1e-12);

  OriginData od = e6_origin_data(-1.0);
  int n = od.g.rows();
  double sym = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        sym = std::max(sym, std::abs(od.A[i][j][k] - od.A[j][i][k]));
        sym = std::max(sym, std::abs(od.A[i][j][k] - od.A[i][k][j]));
      }
  o.bound("A_o-symmetry", sym, 1e-10);
  o.bound("traceless-map", e6_traceless_map_audit(), 1e-10);
  return o;
}

// --------------------------------------------------------------- criterion 7

Outcome e6_pipeline_suite() {
  Outcome o;
  ChartPtr chart = e6_chart(-1.0);
  DerivOptions opt;
  opt.backend = DerivBackend::FiniteDifference;
  double worst_hyp = 0.0, worst_center = 0.0;
  for (const auto& u : seeded_domain_points(*chart, 3, 0xacce5507ULL)) {
    PointInvariants inv = invariants_at(*chart, u, opt);
    StructureResiduals res = structure_residuals(inv);
    worst_hyp = std::max(worst_hyp, res.hypersphere);
    worst_center = std::max(worst_center, centered_gap(inv));
  }
  o.bound("hypersphere", worst_hyp, 1e-3);
  o.bound("|xi+L1*x|", worst_center, 1e-3);
  return o;
}

// --------------------------------------------------------------- criterion 8

Matrix<double> seeded_unimodular(int k, double eps, SplitMix64& rng) {
  Matrix<double> m = Matrix<double>::identity_like(k, 0.0);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) m(i, j) += eps * rng.uniform(-1.0, 1.0);
  m.scale(std::pow(std::abs(det(m)), -1.0 / k));
  return m;
}

Outcome invariance_suite() {
  Outcome o;
  SplitMix64 rng(0xacce5508ULL);
  std::vector<ChartPtr> charts = {quadric_chart(QuadricKind::Hyperboloid, 2), flat_chart(3),
                                  model_chart(make_matrix_model(MatrixFamily::SLR, 3))};
  double worst = 0.0;
  for (const ChartPtr& chart : charts) {
    int n = chart->dim(), a = chart->ambient_dim();
    std::vector<double> u0 = seeded_domain_points(*chart, 2, 0xacce5509ULL)[1];
    PointInvariants base = invariants_at(*chart, u0);

    Matrix<double> m = seeded_unimodular(a, 0.1, rng);
    std::vector<double> b(a);
    for (double& v : b) v = 0.2 * rng.uniform(-1.0, 1.0);
    Matrix<double> p = seeded_unimodular(n, 0.1, rng);
    std::vector<double> q(n);
    for (double& v : q) v = 0.05 * rng.uniform(-1.0, 1.0);

    ChartPtr moved = ambient_transform(reparametrize(chart, p, q), m, b);
    Matrix<double> rhs(n, 1);
    for (int i = 0; i < n; ++i) rhs(i, 0) = u0[i] - q[i];
    Matrix<double> pre = solve(p, rhs);
    std::vector<double> u1(n);
    for (int i = 0; i < n; ++i) u1[i] = pre(i, 0);

    PointInvariants inv = invariants_at(*moved, u1);
    worst = std::max({worst, std::abs(inv.L1 - base.L1), std::abs(inv.J - base.J),
                      std::abs(inv.chi - base.chi)});
  }
  o.bound("(L1,J,chi)-drift", worst, 1e-6);
  return o;
}

// --------------------------------------------------------------- criterion 9

Outcome negative_control_suite() {
  Outcome o;
  ChartPtr chart = perturbed_paraboloid_chart(2);
  double parallel = 0.0;
  for (const auto& u : seeded_domain_points(*chart, 2, 0xacce550aULL)) {
    PointInvariants inv = invariants_at(*chart, u);
    parallel = std::max(parallel, structure_residuals(inv).parallel_fp);
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "nabla-A=%.2e", parallel);
  o.append(buf);
  o.expect(parallel > 1e-3, "perturbed chart must break parallelism");
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;  // 0 = no stated budget
  bool long_only;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  bool run_long = false;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--long") == 0) run_long = true;

  std::vector<Criterion> criteria = {
      {1, "quadrics: A = 0, B = L1 g, L1 sign pattern", 5, false, quadric_suite},
      {2, "flat hyperspheres: R = 0, constant J > 0, closed-form L1", 10, false, flat_suite},
      {3, "slr:3 and slc:3 jets: origin data, residuals, audits", 120, false,
       []() {
         return matrix_suite({MatrixFamily::SLR, MatrixFamily::SLC}, DerivBackend::Jets, 5,
                             1e-7, 1e-6);
       }},
      {4, "suh:3 finite differences: residuals, scale constant", 600, false,
       []() {
         return matrix_suite({MatrixFamily::SUstar}, DerivBackend::FiniteDifference, 3, 1e-3,
                             1e-3);
       }},
      {5, "compositions: closed-form L1, hypersphere, parallelism", 300, false,
       composition_suite},
      {6, "octonion and determinant laws, origin constants", 30, false, jordan_fast_suite},
      {7, "26-dimensional pipeline by finite differences", 1800, true, e6_pipeline_suite},
      {8, "invariance under unimodular transformations", 60, false, invariance_suite},
      {9, "negative control: perturbed paraboloid", 0, false, negative_control_suite},
  };

  int passed = 0, failed = 0, skipped = 0;
  for (const Criterion& c : criteria) {
    if (c.long_only && !run_long) {
      std::printf("[SKIP] %d  %-58s (enable with --long)\n", c.id, c.name);
      ++skipped;
      continue;
    }
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.append(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0 && secs > c.budget_s) {
      o.pass = false;
      char buf[64];
      std::snprintf(buf, sizeof(buf), "over budget %.0fs", c.budget_s);
      o.append(buf);
    }
    std::printf("[%s] %d  %-58s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs,
                o.detail.c_str());
    (o.pass ? passed : failed) += 1;
  }
  std::printf("acceptance: %d passed, %d failed, %d skipped\n", passed, failed, skipped);
  return failed == 0 ? 0 : 1;
}
