#pragma once

// Truncated multivariate Taylor polynomials ("jets") of total degree <= 4.
//
// A jet stores factorial-normalized coefficients c_alpha = partial^alpha f / alpha!,
// so the truncated product is a plain coefficient convolution. Coefficients are laid
// out in graded-lexicographic order: ascending total degree, and within one degree
// exponent tuples compare lexicographically descending, e.g. for two variables
//   (0,0) | (1,0) (0,1) | (2,0) (1,1) (0,2) | ...
// Positions of degree <= d form a prefix, so truncation is a prefix copy.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace equiaff {

class JetError : public std::runtime_error {
 public:
  explicit JetError(const std::string& msg) : std::runtime_error(msg) {}
};

struct MultiIndex {
  std::vector<int> e;

  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> exps) : e(std::move(exps)) {}
  static MultiIndex unit(int n_vars, int var) {
    MultiIndex m(std::vector<int>(n_vars, 0));
    m.e.at(var) = 1;
    return m;
  }

  int degree() const {
    int d = 0;
    for (int k : e) d += k;
    return d;
  }
  double factorial() const {
    double f = 1.0;
    for (int k : e)
      for (int j = 2; j <= k; ++j) f *= j;
    return f;
  }
  bool operator==(const MultiIndex& o) const { return e == o.e; }
};

// Immutable per-(n_vars, max_degree) tables shared by all jets of that shape.
class JetContext {
 public:
  struct ProductTriple {
    uint32_t a, b, out;
  };

  static std::shared_ptr<const JetContext> get(int n_vars, int max_degree);

  int n_vars() const { return n_; }
  int max_degree() const { return deg_; }
  int size() const { return static_cast<int>(mindex_.size()); }
  const MultiIndex& mindex(int pos) const { return mindex_[pos]; }
  // First position with total degree d (== size() for d == max_degree+1).
  int degree_offset(int d) const { return offset_[d]; }
  int position(const MultiIndex& mi) const;
  // -1 when the sum overflows max_degree.
  int position_of_sum(int pos_a, int pos_b) const;
  std::span<const ProductTriple> product_table() const { return product_; }

  JetContext(const JetContext&) = delete;

 private:
  JetContext(int n_vars, int max_degree);
  static uint64_t pack(const MultiIndex& mi);

  int n_, deg_;
  std::vector<MultiIndex> mindex_;
  std::vector<int> offset_;
  std::unordered_map<uint64_t, int> pos_;
  std::vector<ProductTriple> product_;
};

using JetContextPtr = std::shared_ptr<const JetContext>;

namespace detail {
inline double conj_scalar(double x) { return x; }
inline std::complex<double> conj_scalar(const std::complex<double>& x) { return std::conj(x); }
inline double abs_scalar(double x) { return std::abs(x); }
inline double abs_scalar(const std::complex<double>& x) { return std::abs(x); }
}  // namespace detail

template <class S>
class Jet {
 public:
  Jet() = default;
  explicit Jet(JetContextPtr ctx) : ctx_(std::move(ctx)), c_(ctx_->size(), S{}) {}
  Jet(JetContextPtr ctx, const S& constant) : Jet(std::move(ctx)) { c_[0] = constant; }

  const JetContextPtr& context() const { return ctx_; }
  int n_vars() const { return ctx_->n_vars(); }
  int degree() const { return ctx_->max_degree(); }
  std::span<const S> coeffs() const { return c_; }
  S& coeff(int pos) { return c_[pos]; }
  const S& coeff(int pos) const { return c_[pos]; }

  S value() const { return c_[0]; }
  // partial^mi f at the base point (factorial un-normalization applied).
  S partial(const MultiIndex& mi) const {
    if (mi.degree() > degree()) throw JetError("partial: order exceeds jet degree");
    return c_[ctx_->position(mi)] * S(mi.factorial());
  }

  Jet truncated(int d) const {
    if (d >= degree()) return *this;
    Jet out(JetContext::get(n_vars(), d));
    std::copy(c_.begin(), c_.begin() + out.ctx_->size(), out.c_.begin());
    return out;
  }

  // d/du_var, a jet one degree lower.
  Jet derivative(int var) const {
    if (degree() == 0) throw JetError("derivative of a degree-0 jet");
    Jet out(JetContext::get(n_vars(), degree() - 1));
    for (int p = 0; p < ctx_->size(); ++p) {
      const MultiIndex& mi = ctx_->mindex(p);
      int ev = mi.e[var];
      if (ev == 0) continue;
      MultiIndex down = mi;
      down.e[var] -= 1;
      out.c_[out.ctx_->position(down)] += c_[p] * S(static_cast<double>(ev));
    }
    return out;
  }

  Jet operator-() const {
    Jet out = *this;
    for (S& x : out.c_) x = -x;
    return out;
  }

  Jet& operator+=(const S& s) {
    c_[0] += s;
    return *this;
  }
  Jet& operator-=(const S& s) {
    c_[0] -= s;
    return *this;
  }
  Jet& operator*=(const S& s) {
    for (S& x : c_) x *= s;
    return *this;
  }

  friend Jet operator+(const Jet& a, const Jet& b) {
    auto [x, y] = align(a, b);
    Jet out = x;
    for (size_t i = 0; i < out.c_.size(); ++i) out.c_[i] += y.c_[i];
    return out;
  }
  friend Jet operator-(const Jet& a, const Jet& b) {
    auto [x, y] = align(a, b);
    Jet out = x;
    for (size_t i = 0; i < out.c_.size(); ++i) out.c_[i] -= y.c_[i];
    return out;
  }
  // Truncated product; the result degree is the smaller operand degree.
  friend Jet operator*(const Jet& a, const Jet& b) {
    check_same_vars(a, b);
    int d = std::min(a.degree(), b.degree());
    Jet out(JetContext::get(a.n_vars(), d));
    for (const auto& t : out.ctx_->product_table()) out.c_[t.out] += a.c_[t.a] * b.c_[t.b];
    return out;
  }
  friend Jet operator+(const Jet& a, const S& s) {
    Jet out = a;
    out.c_[0] += s;
    return out;
  }
  friend Jet operator+(const S& s, const Jet& a) { return a + s; }
  friend Jet operator-(const Jet& a, const S& s) {
    Jet out = a;
    out.c_[0] -= s;
    return out;
  }
  friend Jet operator-(const S& s, const Jet& a) { return (-a) + s; }
  friend Jet operator*(const Jet& a, const S& s) {
    Jet out = a;
    out *= s;
    return out;
  }
  friend Jet operator*(const S& s, const Jet& a) { return a * s; }

 private:
  static void check_same_vars(const Jet& a, const Jet& b) {
    if (!a.ctx_ || !b.ctx_) throw JetError("uninitialized jet");
    if (a.n_vars() != b.n_vars()) throw JetError("jet variable-count mismatch");
  }
  // Truncate both operands to the common degree (prefix views, cheap copies).
  static std::pair<Jet, Jet> align(const Jet& a, const Jet& b) {
    check_same_vars(a, b);
    int d = std::min(a.degree(), b.degree());
    return {a.truncated(d), b.truncated(d)};
  }

  JetContextPtr ctx_;
  std::vector<S> c_;
};

using RJet = Jet<double>;
using CJet = Jet<std::complex<double>>;

template <class S>
Jet<S> seed_variable(JetContextPtr ctx, int var, const S& value) {
  Jet<S> j(ctx, value);
  if (ctx->max_degree() >= 1) j.coeff(ctx->position(MultiIndex::unit(ctx->n_vars(), var))) = S(1.0);
  return j;
}

inline std::vector<RJet> seed_point(JetContextPtr ctx, std::span<const double> u) {
  std::vector<RJet> out;
  out.reserve(u.size());
  for (size_t i = 0; i < u.size(); ++i) out.push_back(seed_variable(ctx, static_cast<int>(i), u[i]));
  return out;
}

template <class S>
S extract_partial(const Jet<S>& j, const MultiIndex& mi) {
  return j.partial(mi);
}

// 1/a for any jet with nonzero constant term, via the geometric series in the
// nilpotent part.
template <class S>
Jet<S> jet_inv(const Jet<S>& a) {
  S a0 = a.value();
  if (detail::abs_scalar(a0) == 0.0) throw JetError("jet_inv: zero constant term");
  S inv0 = S(1.0) / a0;
  Jet<S> y = a * inv0;
  y -= S(1.0);  // nilpotent
  Jet<S> acc(a.context(), S(1.0));
  Jet<S> pw = y;
  double sign = -1.0;
  for (int k = 1; k <= a.degree(); ++k) {
    acc = acc + pw * S(sign);
    if (k < a.degree()) pw = pw * y;
    sign = -sign;
  }
  return acc * inv0;
}

// a^p for real exponent p; requires a positive constant term. Binomial series in
// the nilpotent part (exact under truncation).
inline RJet jet_pow_real(const RJet& a, double p) {
  double a0 = a.value();
  if (!(a0 > 0.0)) throw JetError("jet_pow_real: constant term must be positive");
  if (p == 0.0) return RJet(a.context(), 1.0);
  RJet y = a * (1.0 / a0);
  y -= 1.0;  // nilpotent
  RJet acc(a.context(), 1.0);
  RJet pw = y;
  double coef = 1.0;
  for (int k = 1; k <= a.degree(); ++k) {
    coef *= (p - (k - 1)) / k;
    acc = acc + pw * coef;
    if (k < a.degree()) pw = pw * y;
  }
  return acc * std::pow(a0, p);
}

template <class S>
Jet<S> jet_exp(const Jet<S>& a) {
  S a0 = a.value();
  Jet<S> y = a;
  y -= a0;  // nilpotent
  Jet<S> acc(a.context(), S(1.0));
  Jet<S> pw = y;
  double invfact = 1.0;
  for (int k = 1; k <= a.degree(); ++k) {
    invfact /= k;
    acc = acc + pw * S(invfact);
    if (k < a.degree()) pw = pw * y;
  }
  using std::exp;
  return acc * exp(a0);
}

inline CJet to_complex(const RJet& a) {
  CJet out(a.context());
  for (int p = 0; p < a.context()->size(); ++p) out.coeff(p) = a.coeff(p);
  return out;
}

inline RJet real_part(const CJet& a) {
  RJet out(a.context());
  for (int p = 0; p < a.context()->size(); ++p) out.coeff(p) = a.coeff(p).real();
  return out;
}

inline RJet imag_part(const CJet& a) {
  RJet out(a.context());
  for (int p = 0; p < a.context()->size(); ++p) out.coeff(p) = a.coeff(p).imag();
  return out;
}

inline CJet conj(const CJet& a) {
  CJet out(a.context());
  for (int p = 0; p < a.context()->size(); ++p) out.coeff(p) = std::conj(a.coeff(p));
  return out;
}

}  // namespace equiaff
