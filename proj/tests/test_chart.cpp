#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "equiaff/chart.hpp"

using namespace equiaff;

namespace {

// Graph chart z = exp(u0) / (1 + u1^2), smooth and non-polynomial so the
// finite-difference backend is exercised honestly.
class BumpChart : public Chart {
 public:
  BumpChart() : Chart(2, "bump") {}
  std::vector<RJet> eval_jets(std::span<const double> u, int degree) const override {
    auto ctx = JetContext::get(2, degree);
    RJet u0 = seed_variable(ctx, 0, u[0]);
    RJet u1 = seed_variable(ctx, 1, u[1]);
    RJet z = jet_exp(u0) * jet_inv(u1 * u1 + 1.0);
    return {u0, u1, z};
  }
};

// Same surface, point-only.
class BumpPointChart : public Chart {
 public:
  BumpPointChart() : Chart(2, "bump-points") {}
  bool supports_jets() const override { return false; }
  std::vector<double> eval_point(std::span<const double> u) const override {
    return {u[0], u[1], std::exp(u[0]) / (1.0 + u[1] * u[1])};
  }
};

}  // namespace

TEST_CASE("fd_partial recovers the mixed fourth partial of u0*u1*u2*u3") {
  auto f = [](std::span<const double> u) { return u[0] * u[1] * u[2] * u[3]; };
  std::vector<double> u0 = {0.3, -0.2, 0.1, 0.4};
  MultiIndex mi;
  mi.e = {1, 1, 1, 1};
  CHECK(fd_partial(f, u0, mi) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("fd_partial handles repeated-variable partials of polynomials") {
  auto f = [](std::span<const double> u) {
    return u[0] * u[0] * u[0] * u[1] + 2.0 * u[0] * u[1];
  };
  std::vector<double> u0 = {0.7, -0.3};
  MultiIndex mi;
  mi.e = {2, 1};  // d^3 f / du0^2 du1 = 6 u0
  CHECK(fd_partial(f, u0, mi) == doctest::Approx(6.0 * 0.7).epsilon(1e-6));
  mi.e = {3, 1};
  CHECK(fd_partial(f, u0, mi) == doctest::Approx(6.0).epsilon(1e-5));
  mi.e = {1, 0};  // df/du0 = 3 u0^2 u1 + 2 u1
  CHECK(fd_partial(f, u0, mi) == doctest::Approx(3.0 * 0.49 * -0.3 + 2.0 * -0.3).epsilon(1e-8));
}

TEST_CASE("finite-difference jets agree with analytic jets") {
  BumpChart analytic;
  std::vector<double> u = {0.25, -0.4};
  std::vector<RJet> exact = chart_jets(analytic, u, 4);

  DerivOptions fd_opt;
  fd_opt.backend = DerivBackend::FiniteDifference;
  std::vector<RJet> approx = chart_jets(analytic, u, 4, fd_opt);

  auto ctx = exact[0].context();
  for (size_t o = 0; o < exact.size(); ++o)
    for (int p = 0; p < ctx->size(); ++p) {
      double want = exact[o].coeff(p);
      double got = approx[o].coeff(p);
      double tol = 1e-4 * std::max(1.0, std::abs(want));
      CHECK(std::abs(got - want) <= tol);
    }
}

TEST_CASE("richardson refinement improves the raw stencil") {
  BumpChart analytic;
  std::vector<double> u = {0.1, 0.2};
  std::vector<RJet> exact = chart_jets(analytic, u, 4);

  DerivOptions raw;
  raw.backend = DerivBackend::FiniteDifference;
  raw.fd.richardson = false;
  DerivOptions rich;
  rich.backend = DerivBackend::FiniteDifference;

  std::vector<RJet> jr = chart_jets(analytic, u, 4, raw);
  std::vector<RJet> jc = chart_jets(analytic, u, 4, rich);
  MultiIndex mi;
  mi.e = {4, 0};
  int pos = exact[0].context()->position(mi);
  double want = exact[2].coeff(pos);
  double err_raw = std::abs(jr[2].coeff(pos) - want);
  double err_rich = std::abs(jc[2].coeff(pos) - want);
  CHECK(err_rich < err_raw);
  CHECK(err_rich < 1e-5);
}

TEST_CASE("point cache keeps the evaluation count sane") {
  int calls = 0;
  FdJetEvaluator ev(
      [&calls](std::span<const double> u) {
        ++calls;
        return std::vector<double>{u[0] * u[0] + u[1] * u[1] + u[2] * u[2]};
      },
      3, 1, {});
  ev.jets_at(std::vector<double>{0.1, 0.2, 0.3}, 4);
  CHECK(static_cast<int>(ev.evaluations()) == calls);
  // 35 jet positions, <= 15 directions x 9 lattice points each without
  // sharing; the cache has to do far better than that.
  CHECK(calls < 1200);
}

TEST_CASE("jets-only dispatch refuses point-only charts") {
  BumpPointChart pts;
  std::vector<double> u = {0.0, 0.0};
  CHECK_THROWS_AS(chart_jets(pts, u, 2), ChartError);
  DerivOptions fd_opt;
  fd_opt.backend = DerivBackend::FiniteDifference;
  std::vector<RJet> j = chart_jets(pts, u, 2, fd_opt);
  CHECK(j.size() == 3);
  CHECK(j[2].value() == doctest::Approx(1.0));
}

TEST_CASE("transformed chart composes jets exactly") {
  auto base = std::make_shared<BumpChart>();
  Matrix<double> m = Matrix<double>::identity_like(3, 0.0);
  m(0, 1) = 0.5;  // shear, det 1
  std::vector<double> b = {0.1, -0.2, 0.3};
  Matrix<double> p(2, 2, 0.0);
  p(0, 0) = 0.8;
  p(0, 1) = 0.3;
  p(1, 0) = -0.2;
  p(1, 1) = 1.1;
  std::vector<double> q = {0.05, -0.1};
  TransformedChart tc(base, m, b, p, q);

  std::vector<double> u = {0.2, 0.1};
  std::vector<RJet> jets = tc.eval_jets(u, 3);

  // Values must match the point path.
  std::vector<double> pt = tc.eval_point(u);
  for (int i = 0; i < 3; ++i) CHECK(jets[i].value() == doctest::Approx(pt[i]).epsilon(1e-12));

  // Coefficients must match finite differences of the transformed point map.
  DerivOptions fd_opt;
  fd_opt.backend = DerivBackend::FiniteDifference;
  std::vector<RJet> fd = chart_jets(tc, u, 3, fd_opt);
  auto ctx = jets[0].context();
  for (int o = 0; o < 3; ++o)
    for (int pp = 0; pp < ctx->size(); ++pp) {
      double want = jets[o].coeff(pp);
      double got = fd[o].coeff(pp);
      CHECK(std::abs(got - want) <= 1e-4 * std::max(1.0, std::abs(want)));
    }
}

TEST_CASE("factory helpers wire shapes correctly") {
  auto base = std::make_shared<BumpChart>();
  ChartPtr s = scaled(base, 2.0);
  std::vector<double> u = {0.3, -0.1};
  std::vector<double> y0 = base->eval_point(u);
  std::vector<double> y1 = s->eval_point(u);
  for (int i = 0; i < 3; ++i) CHECK(y1[i] == doctest::Approx(2.0 * y0[i]));

  Matrix<double> p = Matrix<double>::identity_like(2, 0.0);
  p.scale(0.5);
  ChartPtr r = reparametrize(base, p, {0.1, 0.1});
  std::vector<double> v = {0.25, -0.3};
  std::vector<double> w = {0.5 * 0.25 + 0.1, 0.5 * -0.3 + 0.1};
  std::vector<double> yr = r->eval_point(v);
  std::vector<double> yb = base->eval_point(w);
  for (int i = 0; i < 3; ++i) CHECK(yr[i] == doctest::Approx(yb[i]));
  CHECK(r->supports_jets());

  Box d = r->domain();
  CHECK(d.lo.size() == 2);
  CHECK(d.lo[0] < d.hi[0]);
}
