#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "equiaff/blaschke.hpp"
#include "equiaff/calabi.hpp"
#include "equiaff/chart.hpp"
#include "equiaff/models.hpp"
#include "equiaff/rng.hpp"

using namespace equiaff;

namespace {

FactorSpec hyperboloid_factor(int n, double c = 1.0) {
  return make_factor(quadric_chart(QuadricKind::Hyperboloid, n, c),
                     quadric_L1(QuadricKind::Hyperboloid, n, c));
}

CalabiSpec points_only(int r, std::vector<double> c) {
  CalabiSpec spec;
  spec.r = r;
  spec.c = std::move(c);
  return spec;
}

double max4(const Ten4& t) {
  double m = 0.0;
  for (const auto& a : t)
    for (const auto& b : a)
      for (const auto& row : b)
        for (double v : row) m = std::max(m, std::abs(v));
  return m;
}

std::vector<double> interior_point(const Chart& chart, SplitMix64& rng,
                                   double fraction = 0.5) {
  Box box = chart.domain();
  std::vector<double> p(chart.dim());
  for (int i = 0; i < chart.dim(); ++i) {
    double mid = 0.5 * (box.lo[i] + box.hi[i]);
    double half = 0.5 * (box.hi[i] - box.lo[i]);
    p[i] = mid + fraction * half * rng.uniform(-1.0, 1.0);
  }
  return p;
}

// Chart wrapper that hides the jet formulas, forcing the FD path.
class PointOnly : public Chart {
 public:
  explicit PointOnly(ChartPtr base)
      : Chart(base->dim(), "pointonly(" + base->label() + ")"), base_(std::move(base)) {}
  Box domain() const override { return base_->domain(); }
  bool supports_jets() const override { return false; }
  std::vector<double> eval_point(std::span<const double> u) const override {
    return base_->eval_point(u);
  }

 private:
  ChartPtr base_;
};

}  // namespace

TEST_CASE("weight exponent denominators") {
  CalabiSpec three_points = points_only(3, {1.0, 1.0, 1.0});
  std::vector<double> f = f_indices(three_points);
  REQUIRE(f.size() == 3);
  CHECK(f[0] == 1.0);
  CHECK(f[1] == 2.0);
  CHECK(f[2] == 3.0);

  CalabiSpec mixed;
  mixed.r = 1;
  mixed.factors.push_back(hyperboloid_factor(2));
  mixed.c = {1.0, 1.0};
  f = f_indices(mixed);
  REQUIRE(f.size() == 2);
  CHECK(f[0] == 1.0);
  CHECK(f[1] == 4.0);

  CalabiSpec pair;
  pair.r = 0;
  pair.factors.push_back(hyperboloid_factor(2));
  pair.factors.push_back(hyperboloid_factor(2));
  pair.c = {1.0, 1.0};
  f = f_indices(pair);
  REQUIRE(f.size() == 2);
  CHECK(f[0] == 3.0);
  CHECK(f[1] == 6.0);

  // The denominators are exactly the running ambient coordinate counts.
  for (const CalabiSpec* spec : {&three_points, &mixed, &pair}) {
    WeightDenominatorAudit audit = weight_denominator_audit(*spec);
    CHECK(audit.index_gap == 0.0);
    CHECK(audit.L1_gap < 1e-8);
  }
}

TEST_CASE("weights specialize and telescope as stated") {
  CalabiSpec two_points = points_only(2, {1.0, 1.0});
  std::vector<double> t0{0.0};
  std::vector<double> e = weights(two_points, t0);
  CHECK(e[0] == 1.0);
  CHECK(e[1] == 1.0);

  SplitMix64 rng(7);
  CalabiSpec three_points = points_only(3, {1.0, 1.0, 1.0});
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> t{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    e = weights(three_points, t);
    CHECK(e[0] * e[1] * e[2] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(e[0] == doctest::Approx(std::exp(t[0] + 0.5 * t[1])).epsilon(1e-13));
    CHECK(e[2] == doctest::Approx(std::exp(-t[1])).epsilon(1e-13));
  }

  // Product of e_a^{n_a + 1} is 1 for any factor layout.
  CalabiSpec mixed;
  mixed.r = 1;
  mixed.factors.push_back(hyperboloid_factor(2));
  mixed.factors.push_back(hyperboloid_factor(2));
  mixed.c = {1.0, 1.0, 1.0};
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> t{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    e = weights(mixed, t);
    double prod = e[0];
    for (int al = 0; al < 2; ++al) prod *= std::pow(e[1 + al], 3.0);
    CHECK(prod == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("point-only compositions recover the coordinate-product surface") {
  SplitMix64 rng(21);
  for (int r : {2, 3, 4}) {
    CalabiSpec spec = points_only(r, std::vector<double>(r, 1.0));
    ChartPtr chart = build_composition(spec);
    CHECK(chart->dim() == r - 1);

    for (int trial = 0; trial < 3; ++trial) {
      std::vector<double> u = interior_point(*chart, rng);
      std::vector<double> x = chart->eval_point(u);
      double prod = 1.0;
      for (double v : x) prod *= v;
      CHECK(prod == doctest::Approx(1.0).epsilon(1e-12));
    }

    PredictedL1 pred = predicted_L1(spec);
    int n = r - 1;
    CHECK(pred.L1 == doctest::Approx(flat_L1(n)).epsilon(1e-13));

    std::vector<double> u = interior_point(*chart, rng);
    PointInvariants inv = invariants_at(*chart, u);
    CHECK(inv.L1 == doctest::Approx(pred.L1).epsilon(1e-9));
    StructureResiduals res = structure_residuals(inv);
    CHECK(res.hypersphere < 1e-9);
    CHECK(res.parallel_fp < 1e-9);
    if (n >= 2) {
      CHECK(max4(inv.curvature_low) < 1e-9);
      CHECK(inv.J > 0.0);
    }
  }

  // Symbolic instance: r = 3 gives C = (1/3)^{1/4}.
  PredictedL1 pred = predicted_L1(points_only(3, {1.0, 1.0, 1.0}));
  CHECK(pred.C == doctest::Approx(std::pow(1.0 / 3.0, 0.25)).epsilon(1e-14));
  CHECK(pred.L1 == doctest::Approx(-1.0 / (3.0 * pred.C)).epsilon(1e-14));
}

TEST_CASE("curve composition of two points works through the pipeline") {
  CalabiSpec spec = points_only(2, {1.0, 1.0});
  ChartPtr chart = build_composition(spec);
  CHECK(chart->dim() == 1);

  PredictedL1 pred = predicted_L1(spec);
  CHECK(pred.L1 == doctest::Approx(-std::pow(2.0, -2.0 / 3.0)).epsilon(1e-14));

  std::vector<double> u{0.17};
  PointInvariants inv = invariants_at(*chart, u);
  CHECK(inv.L1 == doctest::Approx(pred.L1).epsilon(1e-10));
  CHECK(inv.J == 0.0);
  CHECK(inv.chi == 0.0);
  StructureResiduals res = structure_residuals(inv);
  CHECK(res.hypersphere < 1e-10);
  CHECK(res.apolarity < 1e-10);
  CHECK(res.parallel_fp < 1e-10);
}

TEST_CASE("hyperboloid factors compose into hyperspheres, closed-form L1") {
  SplitMix64 rng(33);

  CalabiSpec one_one;
  one_one.r = 1;
  one_one.factors.push_back(hyperboloid_factor(2));
  one_one.c = {1.0, 1.0};

  CalabiSpec zero_two;
  zero_two.r = 0;
  zero_two.factors.push_back(hyperboloid_factor(2));
  zero_two.factors.push_back(hyperboloid_factor(2, 1.4));
  zero_two.c = {1.2, 0.9};

  CalabiSpec one_two;
  one_two.r = 1;
  one_two.factors.push_back(hyperboloid_factor(2));
  one_two.factors.push_back(hyperboloid_factor(3));
  one_two.c = {0.8, 1.0, 1.1};

  for (const CalabiSpec* spec : {&one_one, &zero_two, &one_two}) {
    ChartPtr chart = build_composition(*spec);
    PredictedL1 pred = predicted_L1(*spec);
    CHECK(pred.L1 < 0.0);
    for (int trial = 0; trial < 2; ++trial) {
      std::vector<double> u = interior_point(*chart, rng, 0.4);
      PointInvariants inv = invariants_at(*chart, u);
      StructureResiduals res = structure_residuals(inv);
      CHECK(inv.L1 == doctest::Approx(pred.L1).epsilon(1e-8));
      CHECK(res.hypersphere < 1e-7);
      // Quadric factors are symmetric, so the composition is too.
      CHECK(res.parallel_fp < 1e-7);
      CHECK(res.max_structural() < 1e-7);
    }
  }

  // Worked instance of the closed form for one point + unit hyperboloid.
  PredictedL1 pred = predicted_L1(one_one);
  double C = std::pow(1.0 / (4.0 * 27.0), 0.2);
  CHECK(pred.C == doctest::Approx(C).epsilon(1e-14));
  CHECK(pred.L1 == doctest::Approx(-1.0 / (4.0 * C)).epsilon(1e-14));
}

TEST_CASE("matrix-model factor composes and stays symmetric") {
  MatrixModel model = make_matrix_model(MatrixFamily::SLR, 3);
  FactorSpec factor = make_factor(model_chart(model), model.L1);

  CalabiSpec spec;
  spec.r = 1;
  spec.factors.push_back(factor);
  spec.c = {1.0, 1.0};
  ChartPtr chart = build_composition(spec);
  CHECK(chart->dim() == 6);

  PredictedL1 pred = predicted_L1(spec);
  SplitMix64 rng(44);
  std::vector<double> u = interior_point(*chart, rng, 0.4);
  PointInvariants inv = invariants_at(*chart, u);
  StructureResiduals res = structure_residuals(inv);
  CHECK(inv.L1 == doctest::Approx(pred.L1).epsilon(1e-7));
  CHECK(res.hypersphere < 1e-6);
  CHECK(res.parallel_fp < 1e-6);
}

TEST_CASE("constants scale the closed form and the pipeline together") {
  CalabiSpec spec;
  spec.r = 1;
  spec.factors.push_back(hyperboloid_factor(2));
  spec.c = {1.0, 1.0};

  CalabiSpec doubled = spec;
  doubled.c[0] = 2.0;

  // n = 3: C picks up c_1^{2/(n+2)} = 4^{1/5}.
  PredictedL1 a = predicted_L1(spec);
  PredictedL1 b = predicted_L1(doubled);
  CHECK(b.C == doctest::Approx(a.C * std::pow(4.0, 0.2)).epsilon(1e-13));
  CHECK(b.L1 == doctest::Approx(a.L1 / std::pow(4.0, 0.2)).epsilon(1e-13));

  ChartPtr chart = build_composition(doubled);
  SplitMix64 rng(55);
  std::vector<double> u = interior_point(*chart, rng, 0.4);
  PointInvariants inv = invariants_at(*chart, u);
  CHECK(inv.L1 == doctest::Approx(b.L1).epsilon(1e-9));
}

TEST_CASE("finite differences agree with jets on a composition") {
  CalabiSpec spec;
  spec.r = 1;
  spec.factors.push_back(hyperboloid_factor(2));
  spec.c = {1.1, 0.9};
  ChartPtr chart = build_composition(spec);
  PredictedL1 pred = predicted_L1(spec);

  DerivOptions fd;
  fd.backend = DerivBackend::FiniteDifference;
  std::vector<double> u{0.11, -0.14, 0.21};
  PointInvariants inv = invariants_at(*chart, u, fd);
  CHECK(inv.L1 == doctest::Approx(pred.L1).epsilon(1e-5));
  StructureResiduals res = structure_residuals(inv);
  CHECK(res.hypersphere < 1e-4);

  // A factor without jet formulas pushes the whole chart onto the FD path.
  FactorSpec blind;
  blind.chart = std::make_shared<PointOnly>(quadric_chart(QuadricKind::Hyperboloid, 2));
  blind.dim = 2;
  blind.L1 = -1.0;
  DerivOptions fd_factor = fd;
  CHECK(factor_residual(blind, fd_factor) < 1e-4);

  CalabiSpec mixed = spec;
  mixed.factors[0] = blind;
  ChartPtr mixed_chart = build_composition(mixed);
  CHECK_FALSE(mixed_chart->supports_jets());
  PointInvariants minv = invariants_at(*mixed_chart, u, fd);
  CHECK(minv.L1 == doctest::Approx(pred.L1).epsilon(1e-4));
}

TEST_CASE("normalized forms share the invariants") {
  CalabiSpec spec;
  spec.r = 1;
  spec.factors.push_back(hyperboloid_factor(2));
  spec.c = {1.3, 0.8};

  NormalizationReport report = normalization_equivalence_audit(spec);
  CHECK(report.L1_gap < 1e-8);
  CHECK(report.J_gap < 1e-8);
  CHECK(report.chi_gap < 1e-8);
  CHECK(report.scale_global > 0.0);
  CHECK(report.scale_last > 0.0);

  NormalizationReport again = normalization_equivalence_audit(spec);
  CHECK(report.scale_global == again.scale_global);
  CHECK(report.scale_last == again.scale_last);
  CHECK(report.L1_gap == again.L1_gap);
  CHECK(report.J_gap == again.J_gap);
  CHECK(report.chi_gap == again.chi_gap);

  CalabiSpec pair = points_only(2, {1.7, 0.6});
  NormalizationReport curve = normalization_equivalence_audit(pair);
  CHECK(curve.L1_gap < 1e-9);
}

TEST_CASE("factor and spec validation reject bad inputs") {
  CHECK_THROWS_AS(make_factor(quadric_chart(QuadricKind::Paraboloid, 2), -1.0),
                  CompositionError);
  CHECK_THROWS_AS(make_factor(quadric_chart(QuadricKind::Ellipsoid, 2), -1.0),
                  CompositionError);
  CHECK_THROWS_AS(make_factor(quadric_chart(QuadricKind::Hyperboloid, 2), -0.5),
                  CompositionError);

  // Off-center hyperboloid: xi = -L1 x fails once the surface is shifted.
  Matrix<double> id = Matrix<double>::identity_like(3, 1.0);
  ChartPtr shifted =
      ambient_transform(quadric_chart(QuadricKind::Hyperboloid, 2), id, {0.4, 0.0, 0.3});
  CHECK_THROWS_AS(make_factor(shifted, -1.0), CompositionError);

  CalabiSpec bad = points_only(1, {1.0});
  CHECK_THROWS_AS(validate_spec(bad), CompositionError);
  bad = points_only(2, {1.0});
  CHECK_THROWS_AS(validate_spec(bad), CompositionError);
  bad = points_only(2, {1.0, -2.0});
  CHECK_THROWS_AS(validate_spec(bad), CompositionError);
  bad = points_only(2, {1.0, 1.0});
  bad.factors.push_back(FactorSpec{quadric_chart(QuadricKind::Hyperboloid, 2), 3, -1.0});
  bad.c = {1.0, 1.0, 1.0};
  CHECK_THROWS_AS(validate_spec(bad), CompositionError);
}
