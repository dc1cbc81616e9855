#pragma once

// Octonions, the 27-dimensional algebra of Hermitian 3x3 octonion matrices
// with the symmetric product X o Y = (XY + YX)/2, and the hyperbolic affine
// hypersphere swept out inside it by the determinant-preserving group acting
// on the identity.

#include <array>
#include <span>
#include <vector>

#include "equiaff/chart.hpp"
#include "equiaff/linalg.hpp"
#include "equiaff/models.hpp"

namespace equiaff {

// Octonion in the basis (1, e1, ..., e7), built by Cayley-Dickson doubling
// with the convention (a, b)(c, d) = (ac - conj(d) b, da + b conj(c)):
// reals -> complexes (e1) -> quaternions (e2, e3) -> octonions (e4..e7).
// The resulting products of basis units include e1 e2 = e3, e1 e4 = e5,
// e2 e4 = e6, e3 e4 = e7.
struct Octonion {
  std::array<double, 8> c{};

  static Octonion unit(int k);  // k = 0 is the real unit
  Octonion conj() const;
  double re() const { return c[0]; }
  double norm2() const;
};

Octonion operator+(const Octonion& a, const Octonion& b);
Octonion operator-(const Octonion& a, const Octonion& b);
Octonion operator*(const Octonion& a, const Octonion& b);
Octonion operator*(double s, const Octonion& a);

// Hermitian 3x3 matrix over the octonions,
//   [ xi1      x3       conj x2 ]
//   [ conj x3  xi2      x1      ]
//   [ x2       conj x1  xi3     ]
// identified with R^27 through jordan_coords below.
struct JordanElement {
  std::array<double, 3> xi{};
  std::array<Octonion, 3> x{};

  static JordanElement identity();
  static JordanElement diag(double a, double b, double c);
  double trace() const { return xi[0] + xi[1] + xi[2]; }
};

JordanElement operator+(const JordanElement& a, const JordanElement& b);
JordanElement operator-(const JordanElement& a, const JordanElement& b);
JordanElement operator*(double s, const JordanElement& a);

// X o Y = (XY + YX)/2 through honest octonion matrix multiplication.
JordanElement jordan_product(const JordanElement& a, const JordanElement& b);

// (X, Y) = tr(X o Y): positive definite.
double jordan_inner(const JordanElement& a, const JordanElement& b);

// X x Y = (2 X o Y - tr(X) Y - tr(Y) X + (tr X tr Y - (X, Y)) I) / 2.
JordanElement jordan_cross(const JordanElement& a, const JordanElement& b);

// det X = (X x X, X) / 3.
double jordan_det(const JordanElement& a);

// Orthonormal coordinates with respect to (., .): the three diagonal entries,
// then sqrt(2) times the eight components of x1, x2, x3 in turn.
std::vector<double> jordan_coords(const JordanElement& a);
JordanElement jordan_from_coords(std::span<const double> c);

// Orthonormal basis of the trace-zero subspace, in documented order: the two
// diagonal elements diag(1,-1,0)/sqrt2 and diag(1,1,-2)/sqrt6, then for each
// off-diagonal slot x1, x2, x3 the eight single-component elements / sqrt2.
const std::vector<JordanElement>& jordan_basis();

// The 27x27 matrix of X -> T o X in the orthonormal coordinates. Symmetric,
// since the inner product associates with the product.
Matrix<double> mult_operator(const JordanElement& t);

// exp of the multiplication operator applied to x, by the power series.
JordanElement exp_action(const JordanElement& t, const JordanElement& x);

// Trace of mult_operator(t); vanishes whenever tr t = 0, which is what puts
// the determinant-preserving group inside SL(27, R).
double e6_trace_audit(const JordanElement& t);

// d/dt det(exp(t L_T) X) at t = 0, computed through the gradient identity
// ((X x X, T o X)) and through a centered difference, plus the det drift
// along the full flow at t = 1. All three vanish for tr T = 0.
struct DetInvarianceAudit {
  double derivative_gradient = 0;
  double derivative_fd = 0;
  double flow_gap = 0;
};
DetInvarianceAudit det_invariance_audit(const JordanElement& t, const JordanElement& x);

// Scale constants for the orbit chart x(u) = scale * exp(L_U)(I), U in the
// trace-zero subspace. e6_reference_scale is the classical closed form
// sqrt(3) (-3 L1)^{-14}; e6_chart_scale = (-L1)^{-14/27}/sqrt(3) is the 27th
// root that makes the chart attain L1; e6_constant_audit checks
// (reference/sqrt3)^{1/14} = -1/(3 L1).
double e6_reference_scale(double L1);
double e6_chart_scale(double L1);
double e6_constant_audit(double L1);

// The orbit chart itself: dimension 26 into R^27, point evaluation only.
ChartPtr e6_chart(double L1);

// Origin metric and cubic form on jordan_basis():
//   g_o(X, Y) = -1/(3 L1) (X, Y)
//   A_o(X, Y, Z) = g_o(X o Y - tr(X o Y)/3 I, Z).
OriginData e6_origin_data(double L1);

// Max over basis X of |trace of Y -> X o Y - tr(X o Y)/3 I on the trace-zero
// subspace|; the map is traceless.
double e6_traceless_map_audit();

}  // namespace equiaff
