#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "equiaff/blaschke.hpp"
#include "equiaff/chart.hpp"
#include "equiaff/linalg.hpp"

namespace equiaff {

// ---------------------------------------------------------------------------
// Quadric hypersurfaces
// ---------------------------------------------------------------------------

enum class QuadricKind { Ellipsoid, Paraboloid, Hyperboloid };

// Graph chart of the quadric: (u, sqrt(c^2 - |u|^2)) for the ellipsoid,
// (u, |u|^2 / 2) for the paraboloid, (u, sqrt(c^2 + |u|^2)) for the
// hyperboloid sheet with positive last coordinate.
ChartPtr quadric_chart(QuadricKind kind, int n, double c = 1.0);

// Closed-form affine mean curvature of the quadric chart:
// +c^{-2(n+1)/(n+2)}, 0, -c^{-2(n+1)/(n+2)} respectively.
double quadric_L1(QuadricKind kind, int n, double c = 1.0);

// ---------------------------------------------------------------------------
// Flat hyperbolic hypersphere  x^1 ... x^n x^{n+1} = C,  all coordinates > 0
// ---------------------------------------------------------------------------

// Exponential-weight chart t in R^n |-> (e_1(t), ..., e_n(t), C e_{n+1}(t))
// whose coordinate product is identically C.
ChartPtr flat_chart(int n, double C = 1.0);

// Closed-form affine mean curvature of flat_chart.
double flat_L1(int n, double C = 1.0);

// ---------------------------------------------------------------------------
// Perturbed paraboloid (negative control: cubic form is not parallel)
// ---------------------------------------------------------------------------

// Graph of |u|^2/2 + eps * cos(a . u + phase) with seeded direction a.
// Stays locally strongly convex for eps * |a|^2 < 1.
ChartPtr perturbed_paraboloid_chart(int n, double eps = 0.05,
                                    std::uint64_t seed = 1);

// ---------------------------------------------------------------------------
// Matrix symmetric-space hyperspheres
// ---------------------------------------------------------------------------

enum class MatrixFamily { SLR, SLC, SUstar };

using CMat = Matrix<std::complex<double>>;

// A hyperbolic affine hypersphere x(u) = chart_scale * exp(2 U(u)) embedded in
// the space of symmetric / Hermitian / quaternion-Hermitian matrices, with
// U(u) = sum_k u_k basis[k].  All data is fixed at construction.
struct MatrixModel {
  MatrixFamily family = MatrixFamily::SLR;
  int m = 3;
  double L1 = -1.0;  // affine mean curvature attained by the chart, < 0
  int n = 0;         // intrinsic dimension of the hypersurface
  int rep_dim = 0;   // matrix size of the representation: m or 2m
  double tangent_factor = 0;  // derivative of the embedding along a geodesic
  double trace_norm = 0;      // sqrt(tr(I^2)) in the representation
  double metric_coeff = 0;    // origin metric = metric_coeff * tr(XY)
  double ref_scale = 0;       // classical closed-form scale constant
  double chart_scale = 0;     // scale for which the chart attains L1
  std::vector<CMat> basis;    // n traceless tangent directions
};

MatrixModel make_matrix_model(MatrixFamily family, int m, double L1 = -1.0);

// Intrinsic dimension for the family: m(m+1)/2 - 1, m^2 - 1, 2m^2 - m - 1.
int matrix_model_dim(MatrixFamily family, int m);

// The tangent directions used by make_matrix_model, in documented order:
// diagonal differences first, then the symmetric (and Hermitian-imaginary,
// and quaternionic) off-diagonal patterns for each index pair i < j.
std::vector<CMat> tangent_basis(MatrixFamily family, int m);

// Ambient dimension n+1 of the matrix space carrying the embedding.
int ambient_dim(MatrixFamily family, int m);

// Fixed orthonormal coordinates of a representation matrix with respect to
// the trace inner product (X, Y) = tr(XY).
std::vector<double> ambient_coords(const MatrixModel& model, const CMat& X);

// The matrix chart_scale * exp(2 U(u)) itself, for audits of determinant and
// symmetry properties.
CMat chart_matrix(const MatrixModel& model, const std::vector<double>& u);

// Chart into R^{n+1}: ambient coordinates of chart_matrix(u).
ChartPtr model_chart(const MatrixModel& model);

// Origin metric and cubic form evaluated on arbitrary tangent matrices:
//   g_o(X, Y) = metric_coeff * tr(XY)
//   A_o(X, Y, Z) = metric_coeff * tr((XY + YX - proj * tr(XY) I) Z)
// with proj = 2/m for SLR/SLC and 1/m for SUstar.
double origin_metric_value(const MatrixModel& model, const CMat& X,
                           const CMat& Y);
double origin_cubic_value(const MatrixModel& model, const CMat& X,
                          const CMat& Y, const CMat& Z);

// Origin data on the model basis.
struct OriginData {
  Matrix<double> g;  // n x n Gram matrix of the origin metric
  Ten3 A;            // n^3 components of the cubic form
};
OriginData origin_data(const MatrixModel& model);

// Trace of the operator Y |-> XY + YX - proj * tr(XY) I restricted to the
// tangent algebra, maximised over basis directions X; the operator trace is
// taken with respect to the Gram matrix of the basis.
double traceless_audit(const MatrixModel& model);

// Max |tr phi_*(X)| over a spanning set of the full symmetry algebra, where
// phi_*(X): A |-> XA + A conj(X)^t acts on the ambient matrix space.
double unimodularity_audit(const MatrixModel& model);

// Spanning set of the symmetry algebra used by unimodularity_audit, exposed
// so randomized combinations can be audited too.
std::vector<CMat> symmetry_algebra_span(MatrixFamily family, int m);

// Trace of phi_*(X) on the ambient space for one algebra element.
double representation_trace(const MatrixModel& model, const CMat& X);

// |(tangent_factor^2 * ref_scale / trace_norm)^{2/(n+2)} - metric_coeff|:
// the two closed-form expressions for the origin metric coefficient.
double scale_consistency_audit(const MatrixModel& model);

// Pipeline invariants at u = 0 compared against the algebraic origin data,
// plus the residual of R = L1 (g ^ id) - [A, A] at the origin.
struct OriginCheck {
  double metric_gap = 0;
  double cubic_gap = 0;
  double curvature_gap = 0;
};
OriginCheck origin_crosscheck(const MatrixModel& model,
                              const DerivOptions& opt = {});

}  // namespace equiaff
