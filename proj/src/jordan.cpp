#include "equiaff/jordan.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace equiaff {

namespace {

// Cayley-Dickson doubling on coefficient blocks of size d:
// (a, b)(c, d) = (ac - conj(d) b, da + b conj(c)).
void cd_conj(double* a, int d) {
  if (d == 1) return;
  cd_conj(a, d / 2);
  for (int i = d / 2; i < d; ++i) a[i] = -a[i];
}

void cd_mul(const double* x, const double* y, double* out, int d) {
  if (d == 1) {
    out[0] = x[0] * y[0];
    return;
  }
  int h = d / 2;
  double t1[8], t2[8], yc[8];
  std::copy(y + h, y + d, yc);
  cd_conj(yc, h);
  cd_mul(x, y, t1, h);
  cd_mul(yc, x + h, t2, h);
  for (int i = 0; i < h; ++i) out[i] = t1[i] - t2[i];
  std::copy(y, y + h, yc);
  cd_conj(yc, h);
  cd_mul(y + h, x, t1, h);
  cd_mul(x + h, yc, t2, h);
  for (int i = 0; i < h; ++i) out[h + i] = t1[i] + t2[i];
}

Octonion real_oct(double v) {
  Octonion o;
  o.c[0] = v;
  return o;
}

using OMat3 = std::array<std::array<Octonion, 3>, 3>;

OMat3 to_full(const JordanElement& a) {
  OMat3 f;
  f[0][0] = real_oct(a.xi[0]);
  f[0][1] = a.x[2];
  f[0][2] = a.x[1].conj();
  f[1][0] = a.x[2].conj();
  f[1][1] = real_oct(a.xi[1]);
  f[1][2] = a.x[0];
  f[2][0] = a.x[1];
  f[2][1] = a.x[0].conj();
  f[2][2] = real_oct(a.xi[2]);
  return f;
}

const std::vector<JordanElement>& coordinate_units() {
  static const std::vector<JordanElement> units = [] {
    std::vector<JordanElement> out;
    for (int q = 0; q < 27; ++q) {
      std::vector<double> c(27, 0.0);
      c[q] = 1.0;
      out.push_back(jordan_from_coords(c));
    }
    return out;
  }();
  return units;
}

}  // namespace

Octonion Octonion::unit(int k) {
  Octonion o;
  o.c[k] = 1.0;
  return o;
}

Octonion Octonion::conj() const {
  Octonion o = *this;
  for (int i = 1; i < 8; ++i) o.c[i] = -o.c[i];
  return o;
}

double Octonion::norm2() const {
  double acc = 0.0;
  for (double v : c) acc += v * v;
  return acc;
}

Octonion operator+(const Octonion& a, const Octonion& b) {
  Octonion o;
  for (int i = 0; i < 8; ++i) o.c[i] = a.c[i] + b.c[i];
  return o;
}

Octonion operator-(const Octonion& a, const Octonion& b) {
  Octonion o;
  for (int i = 0; i < 8; ++i) o.c[i] = a.c[i] - b.c[i];
  return o;
}

Octonion operator*(const Octonion& a, const Octonion& b) {
  Octonion o;
  cd_mul(a.c.data(), b.c.data(), o.c.data(), 8);
  return o;
}

Octonion operator*(double s, const Octonion& a) {
  Octonion o;
  for (int i = 0; i < 8; ++i) o.c[i] = s * a.c[i];
  return o;
}

JordanElement JordanElement::identity() { return diag(1.0, 1.0, 1.0); }

JordanElement JordanElement::diag(double a, double b, double c) {
  JordanElement j;
  j.xi = {a, b, c};
  return j;
}

JordanElement operator+(const JordanElement& a, const JordanElement& b) {
  JordanElement j;
  for (int i = 0; i < 3; ++i) {
    j.xi[i] = a.xi[i] + b.xi[i];
    j.x[i] = a.x[i] + b.x[i];
  }
  return j;
}

JordanElement operator-(const JordanElement& a, const JordanElement& b) {
  JordanElement j;
  for (int i = 0; i < 3; ++i) {
    j.xi[i] = a.xi[i] - b.xi[i];
    j.x[i] = a.x[i] - b.x[i];
  }
  return j;
}

JordanElement operator*(double s, const JordanElement& a) {
  JordanElement j;
  for (int i = 0; i < 3; ++i) {
    j.xi[i] = s * a.xi[i];
    j.x[i] = s * a.x[i];
  }
  return j;
}

JordanElement jordan_product(const JordanElement& a, const JordanElement& b) {
  OMat3 fa = to_full(a), fb = to_full(b);
  OMat3 p;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Octonion acc;
      for (int k = 0; k < 3; ++k)
        acc = acc + fa[i][k] * fb[k][j] + fb[i][k] * fa[k][j];
      p[i][j] = 0.5 * acc;
    }
  JordanElement out;
  for (int i = 0; i < 3; ++i) out.xi[i] = p[i][i].re();
  out.x[0] = p[1][2];
  out.x[1] = p[2][0];
  out.x[2] = p[0][1];
  return out;
}

double jordan_inner(const JordanElement& a, const JordanElement& b) {
  return jordan_product(a, b).trace();
}

JordanElement jordan_cross(const JordanElement& a, const JordanElement& b) {
  double ta = a.trace(), tb = b.trace();
  JordanElement out = 2.0 * jordan_product(a, b) - ta * b - tb * a;
  double d = ta * tb - jordan_inner(a, b);
  for (int i = 0; i < 3; ++i) out.xi[i] += d;
  return 0.5 * out;
}

double jordan_det(const JordanElement& a) {
  return jordan_inner(jordan_cross(a, a), a) / 3.0;
}

std::vector<double> jordan_coords(const JordanElement& a) {
  const double r2 = std::sqrt(2.0);
  std::vector<double> c;
  c.reserve(27);
  for (int i = 0; i < 3; ++i) c.push_back(a.xi[i]);
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 8; ++k) c.push_back(r2 * a.x[i].c[k]);
  return c;
}

JordanElement jordan_from_coords(std::span<const double> c) {
  if (c.size() != 27)
    throw std::invalid_argument("expected 27 coordinates");
  const double inv2 = 1.0 / std::sqrt(2.0);
  JordanElement a;
  for (int i = 0; i < 3; ++i) a.xi[i] = c[i];
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 8; ++k) a.x[i].c[k] = inv2 * c[3 + 8 * i + k];
  return a;
}

const std::vector<JordanElement>& jordan_basis() {
  static const std::vector<JordanElement> basis = [] {
    std::vector<JordanElement> out;
    out.push_back((1.0 / std::sqrt(2.0)) * JordanElement::diag(1.0, -1.0, 0.0));
    out.push_back((1.0 / std::sqrt(6.0)) * JordanElement::diag(1.0, 1.0, -2.0));
    for (int slot = 0; slot < 3; ++slot)
      for (int k = 0; k < 8; ++k) {
        JordanElement f;
        f.x[slot] = (1.0 / std::sqrt(2.0)) * Octonion::unit(k);
        out.push_back(f);
      }
    return out;
  }();
  return basis;
}

Matrix<double> mult_operator(const JordanElement& t) {
  Matrix<double> op(27, 27);
  const std::vector<JordanElement>& units = coordinate_units();
  for (int q = 0; q < 27; ++q) {
    std::vector<double> col = jordan_coords(jordan_product(t, units[q]));
    for (int p = 0; p < 27; ++p) op(p, q) = col[p];
  }
  return op;
}

JordanElement exp_action(const JordanElement& t, const JordanElement& x) {
  JordanElement sum = x;
  JordanElement term = x;
  for (int k = 1; k <= 80; ++k) {
    term = (1.0 / k) * jordan_product(t, term);
    sum = sum + term;
    if (jordan_inner(term, term) < 1e-40 * (1.0 + jordan_inner(sum, sum))) break;
  }
  return sum;
}

double e6_trace_audit(const JordanElement& t) {
  Matrix<double> op = mult_operator(t);
  return op.trace();
}

DetInvarianceAudit det_invariance_audit(const JordanElement& t, const JordanElement& x) {
  DetInvarianceAudit audit;
  JordanElement v = jordan_product(t, x);
  audit.derivative_gradient = std::abs(jordan_inner(jordan_cross(x, x), v));

  const double eps = 1e-3;
  auto slope = [&](double h) {
    return (jordan_det(exp_action(h * t, x)) - jordan_det(exp_action(-h * t, x))) /
           (2.0 * h);
  };
  audit.derivative_fd = std::abs((4.0 * slope(eps / 2) - slope(eps)) / 3.0);

  audit.flow_gap = std::abs(jordan_det(exp_action(t, x)) - jordan_det(x));
  return audit;
}

double e6_reference_scale(double L1) {
  return std::sqrt(3.0) * std::pow(-3.0 * L1, -14.0);
}

double e6_chart_scale(double L1) {
  return std::pow(-L1, -14.0 / 27.0) / std::sqrt(3.0);
}

double e6_constant_audit(double L1) {
  double lhs = std::pow(e6_reference_scale(L1) / std::sqrt(3.0), 1.0 / 14.0);
  return std::abs(lhs + 1.0 / (3.0 * L1));
}

namespace {

class E6Chart : public Chart {
 public:
  explicit E6Chart(double L1) : Chart(26, "e6f4"), scale_(e6_chart_scale(L1)) {}

  Box domain() const override {
    return {std::vector<double>(26, -0.15), std::vector<double>(26, 0.15)};
  }

  bool supports_jets() const override { return false; }

  std::vector<double> eval_point(std::span<const double> u) const override {
    const std::vector<JordanElement>& basis = jordan_basis();
    JordanElement exponent;
    for (int a = 0; a < 26; ++a) exponent = exponent + u[a] * basis[a];
    JordanElement x = exp_action(exponent, JordanElement::identity());
    std::vector<double> c = jordan_coords(x);
    for (double& v : c) v *= scale_;
    return c;
  }

 private:
  double scale_;
};

}  // namespace

ChartPtr e6_chart(double L1) {
  if (!(L1 < 0.0)) throw ChartError("e6 chart: L1 must be negative");
  return std::make_shared<E6Chart>(L1);
}

OriginData e6_origin_data(double L1) {
  if (!(L1 < 0.0)) throw std::invalid_argument("e6 origin data: L1 must be negative");
  const std::vector<JordanElement>& basis = jordan_basis();
  int n = 26;
  double coeff = -1.0 / (3.0 * L1);
  OriginData data{Matrix<double>(n, n, 0.0), make_ten3(n)};
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      data.g(a, b) = coeff * jordan_inner(basis[a], basis[b]);
  JordanElement id = JordanElement::identity();
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      JordanElement prod = jordan_product(basis[a], basis[b]);
      JordanElement traceless = prod - (prod.trace() / 3.0) * id;
      for (int c = 0; c < n; ++c) {
        double v = coeff * jordan_inner(traceless, basis[c]);
        data.A[a][b][c] = v;
        data.A[b][a][c] = v;
      }
    }
  return data;
}

double e6_traceless_map_audit() {
  const std::vector<JordanElement>& basis = jordan_basis();
  JordanElement id = JordanElement::identity();
  double worst = 0.0;
  for (const JordanElement& x : basis) {
    double tr = 0.0;
    for (const JordanElement& e : basis) {
      JordanElement prod = jordan_product(x, e);
      JordanElement traceless = prod - (prod.trace() / 3.0) * id;
      tr += jordan_inner(traceless, e);
    }
    worst = std::max(worst, std::abs(tr));
  }
  return worst;
}

}  // namespace equiaff
