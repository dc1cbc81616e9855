#include "equiaff/models.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "equiaff/rng.hpp"

namespace equiaff {

namespace {

using Cplx = std::complex<double>;
constexpr Cplx kImag{0.0, 1.0};

// ---------------------------------------------------------------------------
// Quadrics
// ---------------------------------------------------------------------------

const char* quadric_name(QuadricKind kind) {
  switch (kind) {
    case QuadricKind::Ellipsoid: return "ellipsoid";
    case QuadricKind::Paraboloid: return "paraboloid";
    case QuadricKind::Hyperboloid: return "hyperboloid";
  }
  return "";
}

class QuadricChart : public Chart {
 public:
  QuadricChart(QuadricKind kind, int n, double c)
      : Chart(n, std::string("quadric:") + quadric_name(kind) + ":" + std::to_string(n)),
        kind_(kind),
        c_(c) {}

  Box domain() const override {
    double r = kind_ == QuadricKind::Ellipsoid ? c_ / (2.0 * std::sqrt(double(dim()))) : 0.7;
    return {std::vector<double>(dim(), -r), std::vector<double>(dim(), r)};
  }

  std::vector<double> eval_point(std::span<const double> u) const override {
    std::vector<double> out(u.begin(), u.end());
    double s = 0.0;
    for (double v : u) s += v * v;
    switch (kind_) {
      case QuadricKind::Ellipsoid: out.push_back(std::sqrt(c_ * c_ - s)); break;
      case QuadricKind::Paraboloid: out.push_back(0.5 * s); break;
      case QuadricKind::Hyperboloid: out.push_back(std::sqrt(c_ * c_ + s)); break;
    }
    return out;
  }

  std::vector<RJet> eval_jets(std::span<const double> u, int degree) const override {
    JetContextPtr ctx = JetContext::get(dim(), degree);
    std::vector<RJet> vars = seed_point(ctx, u);
    RJet s(ctx);
    for (const RJet& v : vars) s = s + v * v;
    std::vector<RJet> out = vars;
    switch (kind_) {
      case QuadricKind::Ellipsoid:
        out.push_back(jet_pow_real((s - c_ * c_) * (-1.0), 0.5));
        break;
      case QuadricKind::Paraboloid:
        out.push_back(s * 0.5);
        break;
      case QuadricKind::Hyperboloid:
        out.push_back(jet_pow_real(s + c_ * c_, 0.5));
        break;
    }
    return out;
  }

 private:
  QuadricKind kind_;
  double c_;
};

// ---------------------------------------------------------------------------
// Flat hypersphere: product of coordinates constant
// ---------------------------------------------------------------------------

class FlatChart : public Chart {
 public:
  FlatChart(int n, double c)
      : Chart(n, "flat:" + std::to_string(n)), c_(c) {}

  Box domain() const override {
    return {std::vector<double>(dim(), -0.5), std::vector<double>(dim(), 0.5)};
  }

  // Exponent of the a-th weight (a = 1..n+1): -t_{a-1} + sum_{b>=a} t_b / b,
  // with the t_0 term absent.
  std::vector<double> exponent_coeffs(int a) const {
    std::vector<double> coef(dim(), 0.0);
    if (a > 1) coef[a - 2] -= 1.0;
    for (int b = a; b <= dim(); ++b) coef[b - 1] += 1.0 / b;
    return coef;
  }

  std::vector<double> eval_point(std::span<const double> u) const override {
    std::vector<double> out;
    for (int a = 1; a <= dim() + 1; ++a) {
      std::vector<double> coef = exponent_coeffs(a);
      double ell = 0.0;
      for (int j = 0; j < dim(); ++j) ell += coef[j] * u[j];
      out.push_back((a == dim() + 1 ? c_ : 1.0) * std::exp(ell));
    }
    return out;
  }

  std::vector<RJet> eval_jets(std::span<const double> u, int degree) const override {
    JetContextPtr ctx = JetContext::get(dim(), degree);
    std::vector<RJet> vars = seed_point(ctx, u);
    std::vector<RJet> out;
    for (int a = 1; a <= dim() + 1; ++a) {
      std::vector<double> coef = exponent_coeffs(a);
      RJet ell(ctx);
      for (int j = 0; j < dim(); ++j) ell = ell + vars[j] * coef[j];
      out.push_back(jet_exp(ell) * (a == dim() + 1 ? c_ : 1.0));
    }
    return out;
  }

 private:
  double c_;
};

// ---------------------------------------------------------------------------
// Perturbed paraboloid
// ---------------------------------------------------------------------------

class PerturbedParaboloid : public Chart {
 public:
  PerturbedParaboloid(int n, double eps, std::uint64_t seed)
      : Chart(n, "perturbed-paraboloid:" + std::to_string(n)), eps_(eps) {
    SplitMix64 rng(seed);
    dir_.resize(n);
    for (double& a : dir_) a = rng.uniform(0.8, 1.6);
    phase_ = rng.uniform(0.3, 1.2);
    double norm2 = 0.0;
    for (double a : dir_) norm2 += a * a;
    if (eps_ * norm2 >= 0.9)
      throw ChartError("perturbed paraboloid: eps too large for convexity");
  }

  std::vector<double> eval_point(std::span<const double> u) const override {
    std::vector<double> out(u.begin(), u.end());
    double s = 0.0, ell = phase_;
    for (int j = 0; j < dim(); ++j) {
      s += u[j] * u[j];
      ell += dir_[j] * u[j];
    }
    out.push_back(0.5 * s + eps_ * std::cos(ell));
    return out;
  }

  std::vector<RJet> eval_jets(std::span<const double> u, int degree) const override {
    JetContextPtr ctx = JetContext::get(dim(), degree);
    std::vector<RJet> vars = seed_point(ctx, u);
    RJet s(ctx), ell(ctx);
    ell += phase_;
    for (int j = 0; j < dim(); ++j) {
      s = s + vars[j] * vars[j];
      ell = ell + vars[j] * dir_[j];
    }
    CJet rot = jet_exp(to_complex(ell) * kImag);
    std::vector<RJet> out = vars;
    out.push_back(s * 0.5 + real_part(rot) * eps_);
    return out;
  }

 private:
  double eps_;
  std::vector<double> dir_;
  double phase_;
};

// ---------------------------------------------------------------------------
// Matrix model helpers
// ---------------------------------------------------------------------------

CMat czero(int d) { return CMat(d, d, Cplx{0.0, 0.0}); }

CMat unit(int d, int i, int j) {
  CMat e = czero(d);
  e(i, j) = 1.0;
  return e;
}

// [[A, B], [-conj B, conj A]]: the quaternion-linear matrices inside
// M(2m, C).  A Hermitian and B skew give the quaternion-Hermitian ones.
CMat embed_quat(const CMat& a, const CMat& b) {
  int m = a.rows();
  CMat x = czero(2 * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      x(i, j) = a(i, j);
      x(i, m + j) = b(i, j);
      x(m + i, j) = -std::conj(b(i, j));
      x(m + i, m + j) = std::conj(a(i, j));
    }
  return x;
}

CMat diag_diff(int d, int alpha) {
  CMat e = czero(d);
  e(alpha, alpha) = 1.0;
  e(d - 1, d - 1) = -1.0;
  return e;
}

CMat sym_pair(int d, int i, int j) {
  CMat e = czero(d);
  e(i, j) = 0.5;
  e(j, i) = 0.5;
  return e;
}

CMat herm_imag_pair(int d, int i, int j) {
  CMat e = czero(d);
  e(i, j) = 0.5 * kImag;
  e(j, i) = -0.5 * kImag;
  return e;
}

CMat skew_pair(int d, int i, int j) {
  CMat e = czero(d);
  e(i, j) = 0.5;
  e(j, i) = -0.5;
  return e;
}

CMat skew_imag_pair(int d, int i, int j) {
  CMat e = czero(d);
  e(i, j) = 0.5 * kImag;
  e(j, i) = -0.5 * kImag;
  return e;
}

double re_trace_product(const CMat& a, const CMat& b) {
  return (a * b).trace().real();
}

const char* family_prefix(MatrixFamily family) {
  switch (family) {
    case MatrixFamily::SLR: return "slr";
    case MatrixFamily::SLC: return "slc";
    case MatrixFamily::SUstar: return "suh";
  }
  return "";
}

// Orthonormal matrix units dual to ambient_coords, in the same order.
std::vector<CMat> ambient_units(MatrixFamily family, int m) {
  std::vector<CMat> units;
  const double r2 = std::sqrt(2.0);
  if (family == MatrixFamily::SLR) {
    for (int i = 0; i < m; ++i) units.push_back(unit(m, i, i));
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        CMat e = sym_pair(m, i, j);
        e.scale(r2);  // (E_ij + E_ji)/sqrt(2)
        units.push_back(e);
      }
  } else if (family == MatrixFamily::SLC) {
    for (int i = 0; i < m; ++i) units.push_back(unit(m, i, i));
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        CMat e = sym_pair(m, i, j);
        e.scale(r2);
        units.push_back(e);
        CMat f = herm_imag_pair(m, i, j);
        f.scale(r2);
        units.push_back(f);
      }
  } else {
    CMat zb = czero(m);
    for (int i = 0; i < m; ++i) {
      CMat e = embed_quat(unit(m, i, i), zb);
      e.scale(1.0 / r2);
      units.push_back(e);
    }
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        units.push_back(embed_quat(sym_pair(m, i, j), zb));
        units.push_back(embed_quat(herm_imag_pair(m, i, j), zb));
      }
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        units.push_back(embed_quat(czero(m), skew_pair(m, i, j)));
        units.push_back(embed_quat(czero(m), skew_imag_pair(m, i, j)));
      }
  }
  return units;
}

// Coordinate extraction shared by the double and jet paths. ReFn/ImFn pull
// the real and imaginary parts out of one matrix entry.
template <class SC, class SR, class ReFn, class ImFn>
std::vector<SR> coords_impl(MatrixFamily family, int m, const Matrix<SC>& x,
                            ReFn re, ImFn im) {
  std::vector<SR> out;
  const double r2 = std::sqrt(2.0);
  if (family == MatrixFamily::SLR) {
    for (int i = 0; i < m; ++i) out.push_back(re(x(i, i)));
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) out.push_back(re(x(i, j)) * r2);
  } else if (family == MatrixFamily::SLC) {
    for (int i = 0; i < m; ++i) out.push_back(re(x(i, i)));
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        out.push_back(re(x(i, j)) * r2);
        out.push_back(im(x(i, j)) * r2);
      }
  } else {
    for (int i = 0; i < m; ++i) out.push_back(re(x(i, i)) * r2);
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        out.push_back(re(x(i, j)) * 2.0);
        out.push_back(im(x(i, j)) * 2.0);
      }
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        out.push_back(re(x(i, m + j)) * 2.0);
        out.push_back(im(x(i, m + j)) * 2.0);
      }
  }
  return out;
}

std::vector<double> coords_of_values(MatrixFamily family, int m, const CMat& x) {
  return coords_impl<Cplx, double>(
      family, m, x, [](const Cplx& z) { return z.real(); },
      [](const Cplx& z) { return z.imag(); });
}

CMat matrix_exponent(const MatrixModel& model, std::span<const double> u) {
  CMat su = czero(model.rep_dim);
  for (int a = 0; a < model.n; ++a) {
    const CMat& e = model.basis[a];
    for (int p = 0; p < model.rep_dim; ++p)
      for (int q = 0; q < model.rep_dim; ++q)
        if (e(p, q) != 0.0) su(p, q) = su(p, q) + u[a] * e(p, q);
  }
  return su;
}

class MatrixChart : public Chart {
 public:
  explicit MatrixChart(MatrixModel model)
      : Chart(model.n, std::string(family_prefix(model.family)) + ":" +
                           std::to_string(model.m)),
        model_(std::move(model)) {}

  Box domain() const override {
    return {std::vector<double>(dim(), -0.2), std::vector<double>(dim(), 0.2)};
  }

  std::vector<double> eval_point(std::span<const double> u) const override {
    CMat e = chart_matrix(model_, std::vector<double>(u.begin(), u.end()));
    return coords_of_values(model_.family, model_.m, e);
  }

  std::vector<RJet> eval_jets(std::span<const double> u, int degree) const override {
    JetContextPtr ctx = JetContext::get(dim(), degree);
    std::vector<RJet> vars = seed_point(ctx, u);
    const int d = model_.rep_dim;
    Matrix<CJet> su(d, d, CJet(ctx));
    for (int a = 0; a < dim(); ++a) {
      CJet ca = to_complex(vars[a]);
      const CMat& e = model_.basis[a];
      for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q)
          if (e(p, q) != 0.0) su(p, q) = su(p, q) + ca * e(p, q);
    }
    su.scale(2.0);
    Matrix<CJet> ex = mat_exp(su);
    ex.scale(model_.chart_scale);
    return coords_impl<CJet, RJet>(
        model_.family, model_.m, ex, [](const CJet& z) { return real_part(z); },
        [](const CJet& z) { return imag_part(z); });
  }

 private:
  MatrixModel model_;
};

double projection_coeff(const MatrixModel& model) {
  return (model.family == MatrixFamily::SUstar ? 1.0 : 2.0) / model.m;
}

// Y |-> XY + YX - proj tr(XY) I on the tangent algebra.
CMat cubic_map(const MatrixModel& model, const CMat& x, const CMat& y) {
  CMat w = x * y + y * x;
  Cplx t = (x * y).trace();
  double proj = projection_coeff(model);
  for (int i = 0; i < model.rep_dim; ++i) w(i, i) = w(i, i) - proj * t;
  return w;
}

}  // namespace

// ---------------------------------------------------------------------------
// Public quadric / flat / perturbed factories
// ---------------------------------------------------------------------------

ChartPtr quadric_chart(QuadricKind kind, int n, double c) {
  if (n < 1) throw ChartError("quadric_chart: n must be >= 1");
  if (kind != QuadricKind::Paraboloid && !(c > 0.0))
    throw ChartError("quadric_chart: c must be positive");
  return std::make_shared<QuadricChart>(kind, n, c);
}

double quadric_L1(QuadricKind kind, int n, double c) {
  double mag = std::pow(c, -2.0 * (n + 1) / (n + 2));
  switch (kind) {
    case QuadricKind::Ellipsoid: return mag;
    case QuadricKind::Paraboloid: return 0.0;
    case QuadricKind::Hyperboloid: return -mag;
  }
  return 0.0;
}

ChartPtr flat_chart(int n, double c) {
  if (n < 1) throw ChartError("flat_chart: n must be >= 1");
  if (!(c > 0.0)) throw ChartError("flat_chart: C must be positive");
  return std::make_shared<FlatChart>(n, c);
}

double flat_L1(int n, double c) {
  double big = std::pow(c * c / (n + 1), 1.0 / (n + 2));
  return -1.0 / ((n + 1) * big);
}

ChartPtr perturbed_paraboloid_chart(int n, double eps, std::uint64_t seed) {
  if (n < 2) throw ChartError("perturbed_paraboloid_chart: n must be >= 2");
  return std::make_shared<PerturbedParaboloid>(n, eps, seed);
}

// ---------------------------------------------------------------------------
// Matrix models
// ---------------------------------------------------------------------------

int matrix_model_dim(MatrixFamily family, int m) {
  switch (family) {
    case MatrixFamily::SLR: return m * (m + 1) / 2 - 1;
    case MatrixFamily::SLC: return m * m - 1;
    case MatrixFamily::SUstar: return 2 * m * m - m - 1;
  }
  return 0;
}

int ambient_dim(MatrixFamily family, int m) {
  return matrix_model_dim(family, m) + 1;
}

std::vector<CMat> tangent_basis(MatrixFamily family, int m) {
  std::vector<CMat> basis;
  if (family == MatrixFamily::SLR) {
    for (int a = 0; a < m - 1; ++a) basis.push_back(diag_diff(m, a));
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) basis.push_back(sym_pair(m, i, j));
  } else if (family == MatrixFamily::SLC) {
    for (int a = 0; a < m - 1; ++a) basis.push_back(diag_diff(m, a));
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) basis.push_back(sym_pair(m, i, j));
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) basis.push_back(herm_imag_pair(m, i, j));
  } else {
    CMat zb = czero(m);
    for (int a = 0; a < m - 1; ++a)
      basis.push_back(embed_quat(diag_diff(m, a), zb));
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        basis.push_back(embed_quat(sym_pair(m, i, j), zb));
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        basis.push_back(embed_quat(herm_imag_pair(m, i, j), zb));
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        basis.push_back(embed_quat(czero(m), skew_pair(m, i, j)));
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        basis.push_back(embed_quat(czero(m), skew_imag_pair(m, i, j)));
  }
  return basis;
}

MatrixModel make_matrix_model(MatrixFamily family, int m, double L1) {
  if (m < 3) throw std::invalid_argument("matrix model: m must be >= 3");
  if (!(L1 < 0.0)) throw std::invalid_argument("matrix model: L1 must be negative");
  MatrixModel model;
  model.family = family;
  model.m = m;
  model.L1 = L1;
  model.n = matrix_model_dim(family, m);
  model.rep_dim = family == MatrixFamily::SUstar ? 2 * m : m;
  model.tangent_factor = 2.0;
  model.trace_norm = std::sqrt(double(model.rep_dim));
  double base = family == MatrixFamily::SUstar ? 2.0 : 4.0;
  model.metric_coeff = base / (m * (-L1));
  model.ref_scale =
      model.trace_norm / 4.0 * std::pow(model.metric_coeff, 0.5 * (model.n + 2));
  model.chart_scale =
      std::pow(-L1, -0.5 * (model.n + 2) / (model.n + 1)) / model.trace_norm;
  model.basis = tangent_basis(family, m);
  return model;
}

std::vector<double> ambient_coords(const MatrixModel& model, const CMat& x) {
  return coords_of_values(model.family, model.m, x);
}

CMat chart_matrix(const MatrixModel& model, const std::vector<double>& u) {
  CMat su = matrix_exponent(model, u);
  su.scale(2.0);
  CMat e = mat_exp(su);
  e.scale(model.chart_scale);
  return e;
}

ChartPtr model_chart(const MatrixModel& model) {
  return std::make_shared<MatrixChart>(model);
}

double origin_metric_value(const MatrixModel& model, const CMat& x, const CMat& y) {
  return model.metric_coeff * re_trace_product(x, y);
}

double origin_cubic_value(const MatrixModel& model, const CMat& x, const CMat& y,
                          const CMat& z) {
  return model.metric_coeff * re_trace_product(cubic_map(model, x, y), z);
}

OriginData origin_data(const MatrixModel& model) {
  int n = model.n;
  OriginData od{Matrix<double>(n, n, 0.0), make_ten3(n)};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      od.g(i, j) = origin_metric_value(model, model.basis[i], model.basis[j]);
      CMat w = cubic_map(model, model.basis[i], model.basis[j]);
      for (int k = 0; k < n; ++k)
        od.A[i][j][k] = model.metric_coeff * re_trace_product(w, model.basis[k]);
    }
  return od;
}

double traceless_audit(const MatrixModel& model) {
  int n = model.n;
  Matrix<double> gram(n, n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      gram(a, b) = re_trace_product(model.basis[a], model.basis[b]);
  Matrix<double> gram_inv = inverse(gram);
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    double tr = 0.0;
    for (int b = 0; b < n; ++b) {
      CMat lb = cubic_map(model, model.basis[k], model.basis[b]);
      for (int a = 0; a < n; ++a)
        tr += gram_inv(a, b) * re_trace_product(model.basis[a], lb);
    }
    worst = std::max(worst, std::abs(tr));
  }
  return worst;
}

std::vector<CMat> symmetry_algebra_span(MatrixFamily family, int m) {
  std::vector<CMat> span;
  if (family == MatrixFamily::SLR) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (i != j) span.push_back(unit(m, i, j));
    for (int a = 0; a < m - 1; ++a) span.push_back(diag_diff(m, a));
  } else if (family == MatrixFamily::SLC) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (i != j) {
          span.push_back(unit(m, i, j));
          CMat e = unit(m, i, j);
          for (int p = 0; p < m; ++p)
            for (int q = 0; q < m; ++q) e(p, q) *= kImag;
          span.push_back(e);
        }
    for (int a = 0; a < m - 1; ++a) {
      span.push_back(diag_diff(m, a));
      CMat e = diag_diff(m, a);
      for (int p = 0; p < m; ++p)
        for (int q = 0; q < m; ++q) e(p, q) *= kImag;
      span.push_back(e);
    }
  } else {
    CMat zb = czero(m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        if (i != j) {
          span.push_back(embed_quat(unit(m, i, j), zb));
          CMat e = unit(m, i, j);
          for (int p = 0; p < m; ++p)
            for (int q = 0; q < m; ++q) e(p, q) *= kImag;
          span.push_back(embed_quat(e, zb));
        }
        span.push_back(embed_quat(zb, unit(m, i, j)));
        CMat b = unit(m, i, j);
        for (int p = 0; p < m; ++p)
          for (int q = 0; q < m; ++q) b(p, q) *= kImag;
        span.push_back(embed_quat(zb, b));
      }
    for (int a = 0; a < m - 1; ++a)
      span.push_back(embed_quat(diag_diff(m, a), zb));
    for (int i = 0; i < m; ++i) {
      CMat e = czero(m);
      e(i, i) = kImag;
      span.push_back(embed_quat(e, zb));
    }
  }
  return span;
}

double representation_trace(const MatrixModel& model, const CMat& x) {
  std::vector<CMat> units = ambient_units(model.family, model.m);
  CMat xh = x.conj_transpose();
  double tr = 0.0;
  for (const CMat& mq : units) {
    CMat image = x * mq + mq * xh;
    tr += re_trace_product(mq, image);
  }
  return tr;
}

double unimodularity_audit(const MatrixModel& model) {
  double worst = 0.0;
  for (const CMat& x : symmetry_algebra_span(model.family, model.m))
    worst = std::max(worst, std::abs(representation_trace(model, x)));
  return worst;
}

double scale_consistency_audit(const MatrixModel& model) {
  double t2 = model.tangent_factor * model.tangent_factor;
  double lhs =
      std::pow(t2 * model.ref_scale / model.trace_norm, 2.0 / (model.n + 2));
  return std::abs(lhs - model.metric_coeff);
}

OriginCheck origin_crosscheck(const MatrixModel& model, const DerivOptions& opt) {
  ChartPtr chart = model_chart(model);
  std::vector<double> origin(model.n, 0.0);
  PointInvariants inv = invariants_at(*chart, origin, opt);
  OriginData od = origin_data(model);
  OriginCheck check;
  int n = model.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      check.metric_gap =
          std::max(check.metric_gap, std::abs(inv.g(i, j) - od.g(i, j)));
      for (int k = 0; k < n; ++k)
        check.cubic_gap =
            std::max(check.cubic_gap, std::abs(inv.fp[i][j][k] - od.A[i][j][k]));
    }
  // R(X,Y)Z = L1 (g(Y,Z) X - g(X,Z) Y) - [A(X), A(Y)] Z, with indices
  // R(d_i, d_j) d_k = R^p_{ijk} d_p.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int p = 0; p < n; ++p) {
          double r_up = 0.0;
          for (int l = 0; l < n; ++l)
            r_up += inv.g_inv(p, l) * inv.curvature_low[i][j][k][l];
          double flat = model.L1 * (inv.g(j, k) * (p == i ? 1.0 : 0.0) -
                                    inv.g(i, k) * (p == j ? 1.0 : 0.0));
          double bracket = 0.0;
          for (int mu = 0; mu < n; ++mu)
            bracket += inv.fp_mixed[p](i, mu) * inv.fp_mixed[mu](j, k) -
                       inv.fp_mixed[p](j, mu) * inv.fp_mixed[mu](i, k);
          check.curvature_gap =
              std::max(check.curvature_gap, std::abs(r_up - flat + bracket));
        }
  return check;
}

}  // namespace equiaff
