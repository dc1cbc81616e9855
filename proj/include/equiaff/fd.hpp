#pragma once

// Finite-difference construction of degree<=4 jets for functions that only
// support point evaluation. Mixed partials come from the polarization
// identity: the symmetric k-linear form D^k f applied to unit-vector slots
// equals a signed sum of k-th directional derivatives along subset sums of
// the slots. Each directional derivative uses a central stencil, optionally
// sharpened by one Richardson step; all sample points sit at integer
// multiples of h/2 along unit vectors of gcd-reduced integer directions, so a
// point cache makes the sweep over all multi-indices affordable.

#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "equiaff/jet.hpp"

namespace equiaff {

struct FdOptions {
  double step = 1e-2;       // scaled by max(1, |u0|_inf) before use
  bool richardson = true;   // (4 D_{h/2} - D_h) / 3
};

class FdJetEvaluator {
 public:
  using VecFn = std::function<std::vector<double>(std::span<const double>)>;

  FdJetEvaluator(VecFn f, int n_vars, int n_out, FdOptions opt = {});

  // Jets of all output components at u0. The point cache is per-call; lattice
  // offsets are relative to u0.
  std::vector<RJet> jets_at(std::span<const double> u0, int degree);

  // Distinct function evaluations during the last jets_at call.
  size_t evaluations() const { return evals_; }

 private:
  VecFn f_;
  int n_vars_, n_out_;
  FdOptions opt_;
  size_t evals_ = 0;

  std::unordered_map<uint64_t, std::vector<double>> cache_;
  std::vector<double> u0_;
  double half_h_ = 0.0;

  const std::vector<double>& point(const std::vector<std::pair<int, int>>& dir, int m);
  std::vector<double> directional(int k, const std::vector<std::pair<int, int>>& dir, int scale);
};

// Single mixed partial of a scalar function, same machinery.
double fd_partial(const std::function<double(std::span<const double>)>& f,
                  std::span<const double> u0, const MultiIndex& mi, FdOptions opt = {});

}  // namespace equiaff
