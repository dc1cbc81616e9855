#pragma once

// A chart is a local parametrization u in R^n -> x(u) in R^{n+1}. Charts that
// can push jets through their formulas implement eval_jets; charts that only
// evaluate points rely on the finite-difference backend. chart_jets() is the
// single entry point downstream code uses.

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "equiaff/fd.hpp"
#include "equiaff/jet.hpp"
#include "equiaff/linalg.hpp"

namespace equiaff {

class ChartError : public std::runtime_error {
 public:
  explicit ChartError(const std::string& msg) : std::runtime_error(msg) {}
};

struct Box {
  std::vector<double> lo, hi;
};

enum class DerivBackend { Jets, FiniteDifference };

struct DerivOptions {
  DerivBackend backend = DerivBackend::Jets;
  FdOptions fd;
};

class Chart {
 public:
  Chart(int dim, std::string label) : dim_(dim), label_(std::move(label)) {}
  virtual ~Chart() = default;

  int dim() const { return dim_; }
  int ambient_dim() const { return dim_ + 1; }
  const std::string& label() const { return label_; }

  // Parameter region where the chart is defined and the surface is elliptic.
  virtual Box domain() const {
    return {std::vector<double>(dim_, -1.0), std::vector<double>(dim_, 1.0)};
  }

  virtual bool supports_jets() const { return true; }

  // Ambient position. Default: strip the values off a degree-0 jet.
  virtual std::vector<double> eval_point(std::span<const double> u) const {
    std::vector<RJet> j = eval_jets(u, 0);
    std::vector<double> out(j.size());
    for (size_t i = 0; i < j.size(); ++i) out[i] = j[i].value();
    return out;
  }

  // Ambient position as jets in the parameter offset. Charts overriding only
  // eval_point leave this unimplemented.
  virtual std::vector<RJet> eval_jets(std::span<const double> u, int degree) const {
    (void)u;
    (void)degree;
    throw ChartError("chart '" + label_ + "' supports point evaluation only");
  }

 private:
  int dim_;
  std::string label_;
};

using ChartPtr = std::shared_ptr<const Chart>;

std::vector<RJet> chart_jets(const Chart& chart, std::span<const double> u, int degree,
                             const DerivOptions& opt = {});

// x(u) = M * x_base(P u + q) + b. Used by the invariance tests: unimodular M
// and affine reparametrizations (P, q) must leave the invariants alone.
class TransformedChart : public Chart {
 public:
  TransformedChart(ChartPtr base, Matrix<double> ambient_map, std::vector<double> ambient_shift,
                   Matrix<double> param_map, std::vector<double> param_shift);

  Box domain() const override;
  bool supports_jets() const override { return base_->supports_jets(); }
  std::vector<double> eval_point(std::span<const double> u) const override;
  std::vector<RJet> eval_jets(std::span<const double> u, int degree) const override;

 private:
  ChartPtr base_;
  Matrix<double> m_;
  std::vector<double> b_;
  Matrix<double> p_;
  std::vector<double> q_;

  std::vector<double> param_image(std::span<const double> u) const;
};

ChartPtr ambient_transform(ChartPtr base, Matrix<double> m, std::vector<double> b);
ChartPtr reparametrize(ChartPtr base, Matrix<double> p, std::vector<double> q);
ChartPtr scaled(ChartPtr base, double lambda);

// count deterministic sample points: the domain center first, then seeded
// uniform draws from the middle half of the domain box.
std::vector<std::vector<double>> seeded_domain_points(const Chart& chart, int count,
                                                      std::uint64_t seed);

}  // namespace equiaff
