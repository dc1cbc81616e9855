#include "equiaff/jet.hpp"

#include <mutex>

namespace equiaff {

namespace {

// Enumerate exponent tuples of total degree d over vars [var..n) in graded-lex
// order (leading exponent descending).
void enumerate_degree(int n, int d, int var, std::vector<int>& cur,
                      std::vector<MultiIndex>& out) {
  if (var == n - 1) {
    cur[var] = d;
    out.emplace_back(cur);
    cur[var] = 0;
    return;
  }
  for (int e = d; e >= 0; --e) {
    cur[var] = e;
    enumerate_degree(n, d - e, var + 1, cur, out);
  }
  cur[var] = 0;
}

std::mutex registry_mutex;
std::unordered_map<uint64_t, JetContextPtr>& registry() {
  static std::unordered_map<uint64_t, JetContextPtr> r;
  return r;
}

}  // namespace

uint64_t JetContext::pack(const MultiIndex& mi) {
  // Total degree <= 4 means at most four nonzero entries; pack (var, exp) pairs.
  uint64_t key = 0;
  int slot = 0;
  for (size_t v = 0; v < mi.e.size(); ++v) {
    if (mi.e[v] == 0) continue;
    if (slot == 4) throw JetError("multi-index exceeds supported degree");
    key |= (static_cast<uint64_t>(v + 1) << (slot * 16));
    key |= (static_cast<uint64_t>(mi.e[v]) << (slot * 16 + 8));
    ++slot;
  }
  return key;
}

JetContext::JetContext(int n_vars, int max_degree) : n_(n_vars), deg_(max_degree) {
  if (n_vars < 1) throw JetError("JetContext: need at least one variable");
  if (max_degree < 0 || max_degree > 4) throw JetError("JetContext: degree must be in 0..4");
  std::vector<int> cur(n_vars, 0);
  offset_.resize(max_degree + 2, 0);
  for (int d = 0; d <= max_degree; ++d) {
    offset_[d] = static_cast<int>(mindex_.size());
    enumerate_degree(n_vars, d, 0, cur, mindex_);
  }
  offset_[max_degree + 1] = static_cast<int>(mindex_.size());
  pos_.reserve(mindex_.size() * 2);
  for (size_t p = 0; p < mindex_.size(); ++p) pos_.emplace(pack(mindex_[p]), static_cast<int>(p));

  // Product triples (a, b, a+b) for all pairs with deg(a) + deg(b) <= max_degree.
  for (int p = 0; p < size(); ++p) {
    int da = mindex_[p].degree();
    int limit = offset_[max_degree - da + 1];
    for (int q = 0; q < limit; ++q) {
      MultiIndex sum = mindex_[p];
      for (int v = 0; v < n_vars; ++v) sum.e[v] += mindex_[q].e[v];
      product_.push_back({static_cast<uint32_t>(p), static_cast<uint32_t>(q),
                          static_cast<uint32_t>(pos_.at(pack(sum)))});
    }
  }
}

int JetContext::position(const MultiIndex& mi) const {
  if (static_cast<int>(mi.e.size()) != n_) throw JetError("multi-index variable-count mismatch");
  auto it = pos_.find(pack(mi));
  if (it == pos_.end()) throw JetError("multi-index degree exceeds jet degree");
  return it->second;
}

int JetContext::position_of_sum(int pos_a, int pos_b) const {
  MultiIndex sum = mindex_[pos_a];
  for (int v = 0; v < n_; ++v) sum.e[v] += mindex_[pos_b].e[v];
  if (sum.degree() > deg_) return -1;
  return pos_.at(pack(sum));
}

JetContextPtr JetContext::get(int n_vars, int max_degree) {
  uint64_t key = (static_cast<uint64_t>(n_vars) << 8) | static_cast<uint64_t>(max_degree);
  std::lock_guard<std::mutex> lock(registry_mutex);
  auto& r = registry();
  auto it = r.find(key);
  if (it != r.end()) return it->second;
  JetContextPtr ctx(new JetContext(n_vars, max_degree));
  r.emplace(key, ctx);
  return ctx;
}

}  // namespace equiaff
