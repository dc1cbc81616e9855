#pragma once

// Unimodular-invariant data of a locally strongly convex hypersurface chart,
// computed from a degree-4 jet of the position map. Everything downstream
// (hypersphere audits, structural-equation residuals, model verification)
// consumes the PointInvariants produced here.

#include <span>
#include <vector>

#include "equiaff/chart.hpp"
#include "equiaff/jet.hpp"
#include "equiaff/linalg.hpp"

namespace equiaff {

class GeometryError : public std::runtime_error {
 public:
  explicit GeometryError(const std::string& msg) : std::runtime_error(msg) {}
};
class ImmersionError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};
class DegenerateHypersurface : public GeometryError {
 public:
  using GeometryError::GeometryError;
};
class NotConvex : public GeometryError {
 public:
  using GeometryError::GeometryError;
};
class TangentialNormal : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

using Ten3 = std::vector<std::vector<std::vector<double>>>;
using Ten4 = std::vector<Ten3>;

Ten3 make_ten3(int n);
Ten4 make_ten4(int n);

struct PointInvariants {
  int n = 0;
  std::vector<double> u;   // parameter point
  std::vector<double> x;   // ambient position
  std::vector<double> xi;  // affine normal

  Matrix<double> h;  // second-derivative form against the unimodular cofframe,
                     // sign-flipped to positive definite
  double H = 0.0;    // det h
  Matrix<double> g, g_inv;  // equiaffine metric and its inverse

  std::vector<Matrix<double>> christoffel_metric;   // [k](i,j): Levi-Civita of g
  std::vector<Matrix<double>> christoffel_induced;  // [k](i,j): induced connection

  std::vector<Matrix<double>> fp_mixed;  // [k](i,j) = A^k_ij
  Ten3 fp;                               // A_ijk, fully lowered cubic form
  Ten3 fp_alt;            // A_ijk recomputed through derivatives of h
  double cross_route_gap = 0.0;  // max |fp - fp_alt|

  Matrix<double> shape;      // (k,i) = B^k_i, shape operator
  Matrix<double> shape_low;  // B_ij
  std::vector<double> weingarten_nu;  // transversal component of d(xi), ~0
  double L1 = 0.0;                    // affine mean curvature
  double J = 0.0;                     // Pick invariant
  double chi = 0.0;                   // normalized scalar curvature of g

  Ten4 curvature_low;  // R_ijkl of the Levi-Civita connection of g
  Ten4 nabla_fp;       // A_ijk,l covariant derivative of the cubic form

  double frame_residual = 0.0;    // transversal coefficient of x_ij vs g_ij
  double frame_volume_gap = 0.0;  // det(x_1..x_n, xi) vs sqrt(det g)
};

// Residuals of identities that hold for every Blaschke hypersurface (first
// block) and of the hypersphere conditions (last two, nonzero in general).
struct StructureResiduals {
  double apolarity = 0.0;           // g^ij A_ijk
  double symmetry_fp = 0.0;         // total symmetry of A_ijk
  double symmetry_shape = 0.0;      // B_ij - B_ji
  double frame_metric = 0.0;        // transversal coefficient vs g
  double frame_volume = 0.0;        // det(x_1..x_n, xi) vs sqrt(det g)
  double weingarten_normal = 0.0;   // max |nu_i|
  double cross_route = 0.0;         // two routes to A_ijk
  double codazzi = 0.0;             // antisymmetrized nabla A vs the B-form
  double contracted_codazzi = 0.0;  // divergence of A vs n/2 (L1 g - B)
  double gauss = 0.0;               // curvature vs metric-and-cubic-form data
  double gauss_frame = 0.0;         // curvature vs shape-operator form
  double chi_identity = 0.0;        // chi - L1 - J
  // Hypersphere diagnostics; not identities for a generic chart.
  double hypersphere = 0.0;   // max |B_ij - L1 g_ij|
  double parallel_fp = 0.0;   // max |A_ijk,l|

  // Largest residual among the always-valid identities.
  double max_structural() const;
};

PointInvariants invariants_from_jets(std::span<const RJet> x_jets, std::span<const double> u);
PointInvariants invariants_at(const Chart& chart, std::span<const double> u,
                              const DerivOptions& opt = {});
StructureResiduals structure_residuals(const PointInvariants& inv);

// det(x_1,...,x_n, y) as a linear functional in y, returned as jets of the
// cofactor coefficients. Shared by the pipeline and the model audits.
std::vector<RJet> cofactor_functional(const std::vector<std::vector<RJet>>& tangent_rows);

}  // namespace equiaff
