#include "equiaff/fd.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace equiaff {

namespace {

struct Stencil {
  std::vector<int> offs;
  std::vector<double> w;  // weights for step 1; divide by step^k afterwards
};

// Central stencils of accuracy order 2 for the k-th derivative.
const Stencil& stencil(int k) {
  static const Stencil table[5] = {
      {},
      {{-1, 1}, {-0.5, 0.5}},
      {{-1, 0, 1}, {1.0, -2.0, 1.0}},
      {{-2, -1, 1, 2}, {-0.5, 1.0, -1.0, 0.5}},
      {{-2, -1, 0, 1, 2}, {1.0, -4.0, 6.0, -4.0, 1.0}},
  };
  if (k < 1 || k > 4) throw std::invalid_argument("fd: derivative order out of range");
  return table[k];
}

int gcd2(int a, int b) { return b == 0 ? a : gcd2(b, a % b); }

// Sample points are u0 + (m h/2) * vhat with vhat the unit vector of a
// gcd-reduced integer direction. Key: packed direction plus the tap index m,
// so parallel directions arising from different multi-indices share points.
uint64_t pack_key(const std::vector<std::pair<int, int>>& dir, int m) {
  uint64_t key = 0;
  int used = 0;
  for (auto [var, comp] : dir) {
    if (used == 4) throw std::logic_error("fd: more than four active variables");
    if (var >= 2046 || comp < 1 || comp > 15)
      throw std::logic_error("fd: direction key overflow");
    uint64_t slot = (static_cast<uint64_t>(var + 1) << 4) | static_cast<uint64_t>(comp);
    key |= slot << (9 + used * 15);
    ++used;
  }
  key |= static_cast<uint64_t>(m + 256) & 0x1ff;
  return key;
}

}  // namespace

FdJetEvaluator::FdJetEvaluator(VecFn f, int n_vars, int n_out, FdOptions opt)
    : f_(std::move(f)), n_vars_(n_vars), n_out_(n_out), opt_(opt) {
  if (!(opt_.step > 0.0)) throw std::invalid_argument("fd: step must be positive");
}

const std::vector<double>& FdJetEvaluator::point(const std::vector<std::pair<int, int>>& dir,
                                                 int m) {
  uint64_t key = pack_key(dir, m);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  std::vector<double> u = u0_;
  if (m != 0) {
    double norm2 = 0.0;
    for (auto [var, comp] : dir) norm2 += static_cast<double>(comp) * comp;
    double f = m * half_h_ / std::sqrt(norm2);
    for (auto [var, comp] : dir) u[var] += f * comp;
  }
  std::vector<double> val = f_(u);
  if (static_cast<int>(val.size()) != n_out_) throw std::logic_error("fd: output arity changed");
  ++evals_;
  return cache_.emplace(key, std::move(val)).first->second;
}

// k-th directional derivative along the unit vector of the gcd-reduced
// direction, sampled at pitch (scale * h/2). scale=2 gives the base step h,
// scale=1 the halved step for Richardson.
std::vector<double> FdJetEvaluator::directional(int k, const std::vector<std::pair<int, int>>& dir,
                                                int scale) {
  const Stencil& st = stencil(k);
  std::vector<double> acc(n_out_, 0.0);
  for (size_t t = 0; t < st.offs.size(); ++t) {
    const std::vector<double>& fv = point(dir, st.offs[t] * scale);
    for (int o = 0; o < n_out_; ++o) acc[o] += st.w[t] * fv[o];
  }
  double step = scale * half_h_;
  double denom = std::pow(step, k);
  for (double& a : acc) a /= denom;
  return acc;
}

std::vector<RJet> FdJetEvaluator::jets_at(std::span<const double> u0, int degree) {
  if (static_cast<int>(u0.size()) != n_vars_) throw std::invalid_argument("fd: point arity mismatch");
  cache_.clear();
  evals_ = 0;
  u0_.assign(u0.begin(), u0.end());
  double scale = 1.0;
  for (double x : u0_) scale = std::max(scale, std::abs(x));
  half_h_ = 0.5 * opt_.step * scale;

  auto ctx = JetContext::get(n_vars_, degree);
  const std::vector<double>& base = point({}, 0);
  std::vector<RJet> out;
  out.reserve(n_out_);
  for (int o = 0; o < n_out_; ++o) {
    RJet j(ctx);
    j.coeff(0) = base[o];
    out.push_back(std::move(j));
  }

  for (int p = 1; p < ctx->size(); ++p) {
    const MultiIndex& mi = ctx->mindex(p);
    int k = mi.degree();

    // Slot list: variable i repeated mi.e[i] times.
    std::vector<int> slots;
    for (int var = 0; var < n_vars_; ++var)
      for (int r = 0; r < mi.e[var]; ++r) slots.push_back(var);

    // Polarization: signed |v|^k weights per gcd-reduced subset-sum direction
    // (D^k along v equals |v|^k times D^k along the unit vector).
    std::map<std::vector<std::pair<int, int>>, double> directions;
    for (int mask = 1; mask < (1 << k); ++mask) {
      std::map<int, int> comp;
      for (int b = 0; b < k; ++b)
        if (mask & (1 << b)) comp[slots[b]] += 1;
      int g = 0;
      double norm2 = 0.0;
      for (auto& [var, c] : comp) {
        g = gcd2(g, c);
        norm2 += static_cast<double>(c) * c;
      }
      std::vector<std::pair<int, int>> v;
      v.reserve(comp.size());
      for (auto& [var, c] : comp) v.emplace_back(var, c / g);
      double sgn = ((k - __builtin_popcount(mask)) % 2 == 0) ? 1.0 : -1.0;
      directions[v] += sgn * std::pow(std::sqrt(norm2), k);
    }

    std::vector<double> partial(n_out_, 0.0);
    for (const auto& [v, cnt] : directions) {
      if (cnt == 0.0) continue;
      std::vector<double> d = directional(k, v, 2);
      if (opt_.richardson) {
        std::vector<double> dh = directional(k, v, 1);
        for (int o = 0; o < n_out_; ++o) d[o] = (4.0 * dh[o] - d[o]) / 3.0;
      }
      for (int o = 0; o < n_out_; ++o) partial[o] += cnt * d[o];
    }
    // The signed subset sum equals k! times the mixed partial; the jet stores
    // the partial divided by alpha!.
    double inv = 1.0 / (std::tgamma(k + 1) * mi.factorial());
    for (int o = 0; o < n_out_; ++o) out[o].coeff(p) = partial[o] * inv;
  }
  return out;
}

double fd_partial(const std::function<double(std::span<const double>)>& f,
                  std::span<const double> u0, const MultiIndex& mi, FdOptions opt) {
  FdJetEvaluator ev(
      [&f](std::span<const double> u) { return std::vector<double>{f(u)}; },
      static_cast<int>(u0.size()), 1, opt);
  std::vector<RJet> jets = ev.jets_at(u0, mi.degree());
  return jets[0].partial(mi);
}

}  // namespace equiaff
