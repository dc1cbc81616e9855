#include "equiaff/chart.hpp"

#include <algorithm>

#include "equiaff/rng.hpp"

namespace equiaff {

std::vector<std::vector<double>> seeded_domain_points(const Chart& chart, int count,
                                                      std::uint64_t seed) {
  Box box = chart.domain();
  int n = chart.dim();
  SplitMix64 rng(seed);
  std::vector<std::vector<double>> pts;
  std::vector<double> center(n);
  for (int i = 0; i < n; ++i) center[i] = 0.5 * (box.lo[i] + box.hi[i]);
  pts.push_back(center);
  for (int k = 1; k < count; ++k) {
    std::vector<double> p(n);
    for (int i = 0; i < n; ++i) {
      double half = 0.5 * (box.hi[i] - box.lo[i]);
      p[i] = center[i] + 0.5 * half * rng.uniform(-1.0, 1.0);
    }
    pts.push_back(p);
  }
  return pts;
}

std::vector<RJet> chart_jets(const Chart& chart, std::span<const double> u, int degree,
                             const DerivOptions& opt) {
  if (static_cast<int>(u.size()) != chart.dim())
    throw ChartError("chart '" + chart.label() + "': point arity mismatch");
  if (opt.backend == DerivBackend::Jets) {
    if (!chart.supports_jets())
      throw ChartError("chart '" + chart.label() +
                       "' has no jet formulas; use the finite-difference backend");
    return chart.eval_jets(u, degree);
  }
  FdJetEvaluator ev([&chart](std::span<const double> v) { return chart.eval_point(v); },
                    chart.dim(), chart.ambient_dim(), opt.fd);
  return ev.jets_at(u, degree);
}

TransformedChart::TransformedChart(ChartPtr base, Matrix<double> ambient_map,
                                   std::vector<double> ambient_shift, Matrix<double> param_map,
                                   std::vector<double> param_shift)
    : Chart(base->dim(), "transformed(" + base->label() + ")"),
      base_(std::move(base)),
      m_(std::move(ambient_map)),
      b_(std::move(ambient_shift)),
      p_(std::move(param_map)),
      q_(std::move(param_shift)) {
  int n = dim();
  int a = ambient_dim();
  if (m_.rows() != a || m_.cols() != a || static_cast<int>(b_.size()) != a ||
      p_.rows() != n || p_.cols() != n || static_cast<int>(q_.size()) != n)
    throw ChartError("transformed chart: shape mismatch");
}

std::vector<double> TransformedChart::param_image(std::span<const double> u) const {
  int n = dim();
  std::vector<double> v(q_);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) v[i] += p_(i, j) * u[j];
  return v;
}

std::vector<double> TransformedChart::eval_point(std::span<const double> u) const {
  std::vector<double> y = base_->eval_point(param_image(u));
  int a = ambient_dim();
  std::vector<double> out(b_);
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < a; ++j) out[i] += m_(i, j) * y[j];
  return out;
}

std::vector<RJet> TransformedChart::eval_jets(std::span<const double> u, int degree) const {
  int n = dim();
  std::vector<double> v0 = param_image(u);
  std::vector<RJet> base_jets = base_->eval_jets(v0, degree);
  auto ctx = base_jets[0].context();

  // w_i = (P (u - u0))_i as linear jets; the base Taylor polynomial in its own
  // offset is then evaluated at w. Affine substitution is exact at any degree.
  std::vector<RJet> w;
  w.reserve(n);
  for (int i = 0; i < n; ++i) {
    RJet wi(ctx);
    for (int j = 0; j < n; ++j) {
      if (ctx->max_degree() >= 1)
        wi.coeff(ctx->position(MultiIndex::unit(n, j))) = p_(i, j);
    }
    w.push_back(std::move(wi));
  }

  // Monomials w^alpha by peeling one variable off the exponent tuple.
  std::vector<RJet> mono;
  mono.reserve(ctx->size());
  mono.push_back(RJet(ctx, 1.0));
  for (int p = 1; p < ctx->size(); ++p) {
    MultiIndex mi = ctx->mindex(p);
    int var = 0;
    while (mi.e[var] == 0) ++var;
    mi.e[var] -= 1;
    mono.push_back(w[var] * mono[ctx->position(mi)]);
  }

  int a = ambient_dim();
  std::vector<RJet> composed;
  composed.reserve(a);
  for (int o = 0; o < a; ++o) {
    RJet acc(ctx);
    for (int p = 0; p < ctx->size(); ++p) {
      double c = base_jets[o].coeff(p);
      if (c != 0.0) acc = acc + mono[p] * c;
    }
    composed.push_back(std::move(acc));
  }

  std::vector<RJet> out;
  out.reserve(a);
  for (int i = 0; i < a; ++i) {
    RJet acc(ctx, b_[i]);
    for (int j = 0; j < a; ++j) acc = acc + composed[j] * m_(i, j);
    out.push_back(std::move(acc));
  }
  return out;
}

Box TransformedChart::domain() const {
  // Bounding box of the preimage corners of the base domain. A hint for
  // samplers, not a tight region.
  Box base = base_->domain();
  int n = dim();
  Matrix<double> pm = p_;
  Matrix<double> rhs(n, 1);
  Box out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  bool first = true;
  for (int corner = 0; corner < (1 << n) && corner < 4096; ++corner) {
    for (int i = 0; i < n; ++i) {
      double c = (corner & (1 << i)) ? base.hi[i] : base.lo[i];
      rhs(i, 0) = c - q_[i];
    }
    Matrix<double> pre = solve(pm, rhs);
    for (int i = 0; i < n; ++i) {
      double x = pre(i, 0);
      if (first) {
        out.lo[i] = out.hi[i] = x;
      } else {
        out.lo[i] = std::min(out.lo[i], x);
        out.hi[i] = std::max(out.hi[i], x);
      }
    }
    if (first) first = false;
  }
  return out;
}

ChartPtr ambient_transform(ChartPtr base, Matrix<double> m, std::vector<double> b) {
  int n = base->dim();
  return std::make_shared<TransformedChart>(std::move(base), std::move(m), std::move(b),
                                            Matrix<double>::identity_like(n, 0.0),
                                            std::vector<double>(n, 0.0));
}

ChartPtr reparametrize(ChartPtr base, Matrix<double> p, std::vector<double> q) {
  int a = base->ambient_dim();
  return std::make_shared<TransformedChart>(std::move(base), Matrix<double>::identity_like(a, 0.0),
                                            std::vector<double>(a, 0.0), std::move(p), std::move(q));
}

ChartPtr scaled(ChartPtr base, double lambda) {
  int a = base->ambient_dim();
  Matrix<double> m = Matrix<double>::identity_like(a, 0.0);
  m.scale(lambda);
  return ambient_transform(std::move(base), std::move(m), std::vector<double>(a, 0.0));
}

}  // namespace equiaff
