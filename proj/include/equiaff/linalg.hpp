#pragma once

// Dense matrix arithmetic over a generic scalar: double, complex<double>, or a
// jet of either. LU with partial pivoting (pivot size judged by the constant
// term for jet scalars) backs det and solve; mat_exp is scaling-and-squaring
// with a fixed Taylor polynomial, which stays valid verbatim for jet entries.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "equiaff/jet.hpp"

namespace equiaff {

class SingularMatrix : public std::runtime_error {
 public:
  explicit SingularMatrix(const std::string& msg) : std::runtime_error(msg) {}
};

template <class T>
struct scalar_of {
  using type = T;
};
template <class T>
struct scalar_of<Jet<T>> {
  using type = T;
};

inline double pivot_weight(double x) { return std::abs(x); }
inline double pivot_weight(const std::complex<double>& x) { return std::abs(x); }
template <class T>
double pivot_weight(const Jet<T>& x) {
  return detail::abs_scalar(x.value());
}

inline double zero_like(double) { return 0.0; }
inline std::complex<double> zero_like(const std::complex<double>&) { return {0.0, 0.0}; }
template <class T>
Jet<T> zero_like(const Jet<T>& model) {
  return Jet<T>(model.context());
}

inline double one_like(double) { return 1.0; }
inline std::complex<double> one_like(const std::complex<double>&) { return {1.0, 0.0}; }
template <class T>
Jet<T> one_like(const Jet<T>& model) {
  return Jet<T>(model.context(), T(1.0));
}

inline double generic_inv(double x) { return 1.0 / x; }
inline std::complex<double> generic_inv(const std::complex<double>& x) { return 1.0 / x; }
template <class T>
Jet<T> generic_inv(const Jet<T>& x) {
  return jet_inv(x);
}

inline double generic_conj(double x) { return x; }
inline std::complex<double> generic_conj(const std::complex<double>& x) { return std::conj(x); }
inline Jet<double> generic_conj(const Jet<double>& x) { return x; }
inline CJet generic_conj(const CJet& x) { return conj(x); }

template <class S>
class Matrix {
 public:
  Matrix() : r_(0), c_(0) {}
  Matrix(int rows, int cols) : r_(rows), c_(cols), d_(static_cast<size_t>(rows) * cols) {}
  Matrix(int rows, int cols, const S& fill)
      : r_(rows), c_(cols), d_(static_cast<size_t>(rows) * cols, fill) {}

  int rows() const { return r_; }
  int cols() const { return c_; }
  S& operator()(int i, int j) { return d_[static_cast<size_t>(i) * c_ + j]; }
  const S& operator()(int i, int j) const { return d_[static_cast<size_t>(i) * c_ + j]; }

  static Matrix identity_like(int n, const S& model) {
    Matrix m(n, n, zero_like(model));
    for (int i = 0; i < n; ++i) m(i, i) = one_like(model);
    return m;
  }

  Matrix transpose() const {
    Matrix out(c_, r_);
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  Matrix conj_transpose() const {
    Matrix out(c_, r_);
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j) out(j, i) = generic_conj((*this)(i, j));
    return out;
  }

  S trace() const {
    S acc = zero_like(d_[0]);
    for (int i = 0; i < r_; ++i) acc = acc + (*this)(i, i);
    return acc;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.c_ != b.r_) throw std::invalid_argument("matrix product shape mismatch");
    Matrix out(a.r_, b.c_, zero_like(a.d_[0]));
    for (int i = 0; i < a.r_; ++i)
      for (int k = 0; k < a.c_; ++k) {
        const S& aik = a(i, k);
        for (int j = 0; j < b.c_; ++j) out(i, j) = out(i, j) + aik * b(k, j);
      }
    return out;
  }
  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    Matrix out(a.r_, a.c_);
    for (size_t i = 0; i < a.d_.size(); ++i) out.d_[i] = a.d_[i] + b.d_[i];
    return out;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    Matrix out(a.r_, a.c_);
    for (size_t i = 0; i < a.d_.size(); ++i) out.d_[i] = a.d_[i] - b.d_[i];
    return out;
  }

  void scale(double f) {
    using Sc = typename scalar_of<S>::type;
    for (S& x : d_) x = x * Sc(f);
  }

 private:
  int r_, c_;
  std::vector<S> d_;
};

namespace detail {

// In-place LU with partial pivoting. Returns the permutation sign; perm[i] is
// the pivot row chosen at step i.
template <class S>
int lu_factor(Matrix<S>& a, std::vector<int>& perm) {
  int n = a.rows();
  perm.resize(n);
  int sign = 1;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = pivot_weight(a(k, k));
    for (int i = k + 1; i < n; ++i) {
      double w = pivot_weight(a(i, k));
      if (w > best) {
        best = w;
        piv = i;
      }
    }
    if (best < 1e-300) throw SingularMatrix("LU: no usable pivot");
    perm[k] = piv;
    if (piv != k) {
      sign = -sign;
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
    }
    S inv_piv = generic_inv(a(k, k));
    for (int i = k + 1; i < n; ++i) {
      S f = a(i, k) * inv_piv;
      a(i, k) = f;
      for (int j = k + 1; j < n; ++j) a(i, j) = a(i, j) - f * a(k, j);
    }
  }
  return sign;
}

template <class S>
void lu_solve_inplace(const Matrix<S>& lu, const std::vector<int>& perm, Matrix<S>& b) {
  int n = lu.rows();
  int m = b.cols();
  for (int k = 0; k < n; ++k)
    if (perm[k] != k)
      for (int j = 0; j < m; ++j) std::swap(b(k, j), b(perm[k], j));
  for (int k = 0; k < n; ++k)
    for (int i = k + 1; i < n; ++i)
      for (int j = 0; j < m; ++j) b(i, j) = b(i, j) - lu(i, k) * b(k, j);
  for (int k = n - 1; k >= 0; --k) {
    S inv_piv = generic_inv(lu(k, k));
    for (int j = 0; j < m; ++j) {
      for (int i = k + 1; i < n; ++i) b(k, j) = b(k, j) - lu(k, i) * b(i, j);
      b(k, j) = b(k, j) * inv_piv;
    }
  }
}

}  // namespace detail

// Reusable LU factorization (several solves against one matrix).
template <class S>
class LuFactorization {
 public:
  explicit LuFactorization(Matrix<S> a) : lu_(std::move(a)) { sign_ = detail::lu_factor(lu_, perm_); }

  S det() const {
    S d = one_like(lu_(0, 0));
    for (int i = 0; i < lu_.rows(); ++i) d = d * lu_(i, i);
    if (sign_ < 0) d = -d;
    return d;
  }

  Matrix<S> solve(Matrix<S> b) const {
    detail::lu_solve_inplace(lu_, perm_, b);
    return b;
  }

  std::vector<S> solve_vec(const std::vector<S>& rhs) const {
    Matrix<S> b(static_cast<int>(rhs.size()), 1);
    for (size_t i = 0; i < rhs.size(); ++i) b(static_cast<int>(i), 0) = rhs[i];
    detail::lu_solve_inplace(lu_, perm_, b);
    std::vector<S> out(rhs.size());
    for (size_t i = 0; i < rhs.size(); ++i) out[i] = b(static_cast<int>(i), 0);
    return out;
  }

 private:
  Matrix<S> lu_;
  std::vector<int> perm_;
  int sign_;
};

template <class S>
S det(const Matrix<S>& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("det: square matrix required");
  Matrix<S> lu = a;
  std::vector<int> perm;
  int sign = detail::lu_factor(lu, perm);
  S d = one_like(lu(0, 0));
  for (int i = 0; i < lu.rows(); ++i) d = d * lu(i, i);
  if (sign < 0) d = -d;
  return d;
}

template <class S>
Matrix<S> solve(const Matrix<S>& a, const Matrix<S>& b) {
  return LuFactorization<S>(a).solve(b);
}

template <class S>
Matrix<S> inverse(const Matrix<S>& a) {
  return LuFactorization<S>(a).solve(Matrix<S>::identity_like(a.rows(), a(0, 0)));
}

// Scaling-and-squaring matrix exponential: halve until the constant-term norm
// is <= 0.5, apply a degree-18 Taylor polynomial, square back up.
template <class S>
Matrix<S> mat_exp(const Matrix<S>& m) {
  int n = m.rows();
  double norm = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += pivot_weight(m(i, j));
    norm = std::max(norm, row);
  }
  int s = 0;
  while (norm > 0.5 && s < 64) {
    norm *= 0.5;
    ++s;
  }
  Matrix<S> t = m;
  t.scale(std::ldexp(1.0, -s));
  Matrix<S> acc = Matrix<S>::identity_like(n, m(0, 0));
  Matrix<S> term = acc;
  for (int k = 1; k <= 18; ++k) {
    term = term * t;
    term.scale(1.0 / k);
    acc = acc + term;
  }
  for (int i = 0; i < s; ++i) acc = acc * acc;
  return acc;
}

// Cholesky-based definiteness test for symmetric double matrices. Pivots are
// compared against tol * (largest diagonal magnitude).
inline bool is_positive_definite(const Matrix<double>& a, double tol = 1e-12) {
  int n = a.rows();
  double scale = 0.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(a(i, i)));
  if (scale == 0.0) return false;
  Matrix<double> c = a;
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < k; ++j) c(k, k) -= c(k, j) * c(k, j);
    if (c(k, k) <= tol * scale) return false;
    c(k, k) = std::sqrt(c(k, k));
    for (int i = k + 1; i < n; ++i) {
      for (int j = 0; j < k; ++j) c(i, k) -= c(i, j) * c(k, j);
      c(i, k) /= c(k, k);
    }
  }
  return true;
}

}  // namespace equiaff
