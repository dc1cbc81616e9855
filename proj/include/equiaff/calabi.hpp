#pragma once

// Composition of r point factors and s centered hyperbolic affine hyperspheres
// into one hyperbolic affine hypersphere. The factors are glued by exponential
// weights in shared parameters t^1..t^{K-1}; the result carries a closed-form
// affine mean curvature that the pipeline can be checked against.

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "equiaff/blaschke.hpp"
#include "equiaff/chart.hpp"

namespace equiaff {

class CompositionError : public std::runtime_error {
 public:
  explicit CompositionError(const std::string& msg) : std::runtime_error(msg) {}
};

// One positive-dimensional factor: a hyperbolic affine hypersphere chart with
// its affine center at the ambient origin and affine mean curvature L1 < 0.
struct FactorSpec {
  ChartPtr chart;
  int dim = 0;
  double L1 = -1.0;
};

// Worst residual over seeded sample points of the three factor conditions:
// pipeline L1 matches, shape operator is L1 * id, and xi = -L1 x (centered).
double factor_residual(const FactorSpec& factor, const DerivOptions& opt = {});

// Builds the factor and validates it through the pipeline; throws
// CompositionError when the residual exceeds tol.
FactorSpec make_factor(ChartPtr chart, double L1, const DerivOptions& opt = {},
                       double tol = 1e-4);

// r point factors, s = factors.size() positive-dimensional factors, and
// K = r + s positive constants c_a ordered points-first.
struct CalabiSpec {
  int r = 0;
  std::vector<FactorSpec> factors;
  std::vector<double> c;

  int s() const { return static_cast<int>(factors.size()); }
  int K() const { return r + s(); }
  int dim() const;  // composed dimension: sum of factor dims + K - 1
};

// Throws CompositionError unless K >= 2, c has K positive entries, and the
// factor dimensions match their charts.
void validate_spec(const CalabiSpec& spec);

// Denominators f_1..f_K of the weight exponents: f_a = a over the point
// block, then the factor dimensions accumulate on top of the position.
std::vector<double> f_indices(const CalabiSpec& spec);

// Weights e_1..e_K at shared parameters t in R^{K-1}. Each e_a is
// exp(-t_{a-1}/(n_a+1) + t_a/f_a + ... + t_{K-1}/f_{K-1}) with the t_0 term
// absent and n_a = 0 for point factors.
std::vector<double> weights(const CalabiSpec& spec, std::span<const double> t);

// The composed chart
//   (c_1 e_1, ..., c_r e_r, c_{r+1} e_{r+1} x_1(p_1), ..., c_K e_K x_s(p_s))
// with parameters (t^1..t^{K-1}, p_1, ..., p_s). Supports jets when every
// factor does.
ChartPtr build_composition(const CalabiSpec& spec);

// Closed-form affine mean curvature of the composition and the constant it
// comes from: L1 = -1 / ((n+1) C).
struct PredictedL1 {
  double L1 = 0;
  double C = 0;
};
PredictedL1 predicted_L1(const CalabiSpec& spec);

// Cross-checks the weight denominators: the direct formula against the
// running count of ambient coordinates, and the closed-form L1 against the
// pipeline on the composed chart at a seeded point.
struct WeightDenominatorAudit {
  std::vector<double> direct;
  std::vector<double> cumulative;
  double index_gap = 0;
  double L1_gap = 0;
};
WeightDenominatorAudit weight_denominator_audit(const CalabiSpec& spec,
                                                const DerivOptions& opt = {});

// Builds the two normalized forms of the composition, with their free scales
// solved numerically so the closed-form L1 matches the requested one: the
// all-ones composition under one global dilation, and the all-ones
// composition with only the last weight rescaled. Reports the worst disagreement of
// (L1, J, chi) across the three charts at seeded sample points.
struct NormalizationReport {
  double scale_global = 1;  // c in x_bar = c * (e_1, ..., e_K x_s)
  double scale_last = 1;    // c' in x_tilde = (e_1, ..., c' e_K x_s)
  double L1_gap = 0;
  double J_gap = 0;
  double chi_gap = 0;
};
NormalizationReport normalization_equivalence_audit(const CalabiSpec& spec,
                                                    const DerivOptions& opt = {});

}  // namespace equiaff
