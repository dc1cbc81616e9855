#include "equiaff/calabi.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace equiaff {

namespace {

// Exponent coefficients of log e_a with respect to t_b, as a K x (K-1)
// matrix. n_a = 0 over the point block.
Matrix<double> weight_exponents(const CalabiSpec& spec) {
  int K = spec.K();
  std::vector<double> f = f_indices(spec);
  Matrix<double> coef(K, K - 1, 0.0);
  for (int a = 0; a < K; ++a) {
    int na = a < spec.r ? 0 : spec.factors[a - spec.r].dim;
    if (a >= 1) coef(a, a - 1) -= 1.0 / (na + 1);
    for (int b = a; b < K - 1; ++b) coef(a, b) += 1.0 / f[b];
  }
  return coef;
}

std::string composition_label(const CalabiSpec& spec) {
  std::string lab = "calabi(r=" + std::to_string(spec.r);
  for (const FactorSpec& f : spec.factors) lab += "," + f.chart->label();
  lab += ")";
  return lab;
}

// Copy a jet over n_small variables into a context over more variables, the
// small block starting at var offset.
RJet inflate_jet(const JetContextPtr& big, const RJet& small, int offset) {
  RJet out(big);
  const JetContext& sc = *small.context();
  for (int p = 0; p < sc.size(); ++p) {
    double c = small.coeffs()[p];
    if (c == 0.0) continue;
    MultiIndex mi;
    mi.e.assign(big->n_vars(), 0);
    const std::vector<int>& e = sc.mindex(p).e;
    for (size_t v = 0; v < e.size(); ++v) mi.e[offset + static_cast<int>(v)] = e[v];
    out.coeff(big->position(mi)) = c;
  }
  return out;
}

class CompositionChart : public Chart {
 public:
  explicit CompositionChart(CalabiSpec spec)
      : Chart(spec.dim(), composition_label(spec)),
        spec_(std::move(spec)),
        coef_(weight_exponents(spec_)) {}

  Box domain() const override {
    int K = spec_.K();
    Box box;
    box.lo.assign(K - 1, -0.3);
    box.hi.assign(K - 1, 0.3);
    for (const FactorSpec& f : spec_.factors) {
      Box fb = f.chart->domain();
      box.lo.insert(box.lo.end(), fb.lo.begin(), fb.lo.end());
      box.hi.insert(box.hi.end(), fb.hi.begin(), fb.hi.end());
    }
    return box;
  }

  bool supports_jets() const override {
    return std::all_of(spec_.factors.begin(), spec_.factors.end(),
                       [](const FactorSpec& f) { return f.chart->supports_jets(); });
  }

  std::vector<double> eval_point(std::span<const double> u) const override {
    int K = spec_.K();
    std::vector<double> w = weights(spec_, u.subspan(0, K - 1));
    std::vector<double> out;
    out.reserve(ambient_dim());
    for (int a = 0; a < spec_.r; ++a) out.push_back(spec_.c[a] * w[a]);
    int offset = K - 1;
    for (int al = 0; al < spec_.s(); ++al) {
      const FactorSpec& f = spec_.factors[al];
      std::vector<double> x = f.chart->eval_point(u.subspan(offset, f.dim));
      double scale = spec_.c[spec_.r + al] * w[spec_.r + al];
      for (double v : x) out.push_back(scale * v);
      offset += f.dim;
    }
    return out;
  }

  std::vector<RJet> eval_jets(std::span<const double> u, int degree) const override {
    int K = spec_.K();
    JetContextPtr ctx = JetContext::get(dim(), degree);
    std::vector<RJet> vars = seed_point(ctx, u);

    std::vector<RJet> weight_jets;
    weight_jets.reserve(K);
    for (int a = 0; a < K; ++a) {
      RJet ell(ctx);
      for (int b = 0; b < K - 1; ++b)
        if (coef_(a, b) != 0.0) ell = ell + vars[b] * coef_(a, b);
      weight_jets.push_back(jet_exp(ell));
    }

    std::vector<RJet> out;
    out.reserve(ambient_dim());
    for (int a = 0; a < spec_.r; ++a) out.push_back(weight_jets[a] * spec_.c[a]);
    int offset = K - 1;
    for (int al = 0; al < spec_.s(); ++al) {
      const FactorSpec& f = spec_.factors[al];
      DerivOptions fo;
      fo.backend = f.chart->supports_jets() ? DerivBackend::Jets
                                            : DerivBackend::FiniteDifference;
      std::vector<RJet> fx = chart_jets(*f.chart, u.subspan(offset, f.dim), degree, fo);
      RJet scale = weight_jets[spec_.r + al] * spec_.c[spec_.r + al];
      for (const RJet& j : fx) out.push_back(inflate_jet(ctx, j, offset) * scale);
      offset += f.dim;
    }
    return out;
  }

 private:
  CalabiSpec spec_;
  Matrix<double> coef_;
};

// Bisection in log-scale for a strictly increasing map scale -> L1 < 0.
double solve_scale(const std::function<double(double)>& l1_of, double target) {
  double lo = -40.0, hi = 40.0;
  for (int it = 0; it < 160; ++it) {
    double mid = 0.5 * (lo + hi);
    if (l1_of(std::exp(mid)) < target)
      lo = mid;
    else
      hi = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

}  // namespace

int CalabiSpec::dim() const {
  int n = K() - 1;
  for (const FactorSpec& f : factors) n += f.dim;
  return n;
}

void validate_spec(const CalabiSpec& spec) {
  if (spec.r < 0) throw CompositionError("negative point-factor count");
  if (spec.K() < 2) throw CompositionError("a composition needs at least two factors");
  if (static_cast<int>(spec.c.size()) != spec.K())
    throw CompositionError("expected one constant per factor");
  for (double v : spec.c)
    if (!(v > 0.0)) throw CompositionError("factor constants must be positive");
  for (const FactorSpec& f : spec.factors) {
    if (!f.chart) throw CompositionError("factor has no chart");
    if (f.chart->dim() != f.dim) throw CompositionError("factor dimension mismatch");
    if (!(f.L1 < 0.0)) throw CompositionError("factor mean curvature must be negative");
  }
}

double factor_residual(const FactorSpec& factor, const DerivOptions& opt) {
  if (!factor.chart) throw CompositionError("factor has no chart");
  if (factor.chart->dim() != factor.dim)
    throw CompositionError("factor dimension mismatch");
  if (!(factor.L1 < 0.0))
    throw CompositionError("factor mean curvature must be negative");

  double worst = 0.0;
  for (const auto& p : seeded_domain_points(*factor.chart, 3, 0x7a5c0113ULL)) {
    PointInvariants inv = invariants_at(*factor.chart, p, opt);
    StructureResiduals res = structure_residuals(inv);
    worst = std::max(worst, res.hypersphere);
    worst = std::max(worst, std::abs(inv.L1 - factor.L1));
    double xnorm = 0.0;
    for (double v : inv.x) xnorm = std::max(xnorm, std::abs(v));
    double scale = 1.0 + std::abs(factor.L1) * xnorm;
    for (size_t q = 0; q < inv.x.size(); ++q)
      worst = std::max(worst,
                       std::abs(inv.xi[q] + factor.L1 * inv.x[q]) / scale);
  }
  return worst;
}

FactorSpec make_factor(ChartPtr chart, double L1, const DerivOptions& opt, double tol) {
  if (!chart) throw CompositionError("factor has no chart");
  FactorSpec factor{std::move(chart), 0, L1};
  factor.dim = factor.chart->dim();
  double res = factor_residual(factor, opt);
  if (!(res < tol))
    throw CompositionError("factor '" + factor.chart->label() +
                           "' fails the hypersphere checks: residual " +
                           std::to_string(res));
  return factor;
}

std::vector<double> f_indices(const CalabiSpec& spec) {
  int K = spec.K();
  std::vector<double> f(K);
  double dims = 0.0;
  for (int a = 0; a < K; ++a) {
    if (a < spec.r) {
      f[a] = a + 1;
    } else {
      dims += spec.factors[a - spec.r].dim;
      f[a] = dims + (a + 1);
    }
  }
  return f;
}

std::vector<double> weights(const CalabiSpec& spec, std::span<const double> t) {
  int K = spec.K();
  if (static_cast<int>(t.size()) != K - 1)
    throw CompositionError("expected K - 1 shared parameters");
  Matrix<double> coef = weight_exponents(spec);
  std::vector<double> e(K);
  for (int a = 0; a < K; ++a) {
    double acc = 0.0;
    for (int b = 0; b < K - 1; ++b) acc += coef(a, b) * t[b];
    e[a] = std::exp(acc);
  }
  return e;
}

ChartPtr build_composition(const CalabiSpec& spec) {
  validate_spec(spec);
  return std::make_shared<CompositionChart>(spec);
}

PredictedL1 predicted_L1(const CalabiSpec& spec) {
  validate_spec(spec);
  int n = spec.dim();
  double prod = 1.0 / (n + 1);
  for (int a = 0; a < spec.r; ++a) prod *= spec.c[a] * spec.c[a];
  for (int al = 0; al < spec.s(); ++al) {
    const FactorSpec& f = spec.factors[al];
    double ca = spec.c[spec.r + al];
    prod *= std::pow(ca, 2.0 * (f.dim + 1)) /
            (std::pow(f.dim + 1.0, f.dim + 1.0) * std::pow(-f.L1, f.dim + 2.0));
  }
  PredictedL1 out;
  out.C = std::pow(prod, 1.0 / (n + 2));
  out.L1 = -1.0 / ((n + 1) * out.C);
  return out;
}

WeightDenominatorAudit weight_denominator_audit(const CalabiSpec& spec,
                                                const DerivOptions& opt) {
  validate_spec(spec);
  WeightDenominatorAudit audit;
  audit.direct = f_indices(spec);
  int K = spec.K();
  audit.cumulative.resize(K);
  double count = 0.0;
  for (int a = 0; a < K; ++a) {
    count += a < spec.r ? 1.0 : spec.factors[a - spec.r].dim + 1.0;
    audit.cumulative[a] = count;
  }
  for (int a = 0; a < K; ++a)
    audit.index_gap = std::max(audit.index_gap,
                               std::abs(audit.direct[a] - audit.cumulative[a]));

  ChartPtr chart = build_composition(spec);
  double want = predicted_L1(spec).L1;
  for (const auto& p : seeded_domain_points(*chart, 2, 0x9d2c5680ULL)) {
    PointInvariants inv = invariants_at(*chart, p, opt);
    audit.L1_gap = std::max(audit.L1_gap, std::abs(inv.L1 - want));
  }
  return audit;
}

NormalizationReport normalization_equivalence_audit(const CalabiSpec& spec,
                                                    const DerivOptions& opt) {
  validate_spec(spec);
  int n = spec.dim();
  double target = predicted_L1(spec).L1;

  CalabiSpec ones = spec;
  ones.c.assign(spec.K(), 1.0);
  double base = predicted_L1(ones).L1;

  NormalizationReport report;
  double dilation_power = -2.0 * (n + 1) / (n + 2);
  report.scale_global = solve_scale(
      [&](double c) { return std::pow(c, dilation_power) * base; }, target);
  report.scale_last = solve_scale(
      [&](double c) {
        CalabiSpec adjusted = ones;
        adjusted.c.back() = c;
        return predicted_L1(adjusted).L1;
      },
      target);

  ChartPtr direct = build_composition(spec);
  ChartPtr global = scaled(build_composition(ones), report.scale_global);
  CalabiSpec last = ones;
  last.c.back() = report.scale_last;
  ChartPtr rescaled = build_composition(last);

  for (const auto& p : seeded_domain_points(*direct, 3, 0xc0de5eedULL)) {
    PointInvariants a = invariants_at(*direct, p, opt);
    PointInvariants b = invariants_at(*global, p, opt);
    PointInvariants d = invariants_at(*rescaled, p, opt);
    for (const PointInvariants* other : {&b, &d}) {
      report.L1_gap = std::max(report.L1_gap, std::abs(a.L1 - other->L1));
      report.J_gap = std::max(report.J_gap, std::abs(a.J - other->J));
      report.chi_gap = std::max(report.chi_gap, std::abs(a.chi - other->chi));
    }
  }
  return report;
}

}  // namespace equiaff
