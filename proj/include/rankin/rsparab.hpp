#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "rankin/exactlin.hpp"

namespace rankin {

// Rankin–Selberg parabolic P_n × P_{n+1} parametrised by (standard composition of n+1, block index).
struct RSParabolic {
  Composition p_n;         // standard composition of n
  Composition p_n1_std;    // standard composition of n+1
  int i0 = 0;              // 0-based block of p_n1_std containing n+1 after conjugation
  std::vector<int> w_std;  // one-line on {0..n}

  int n() const { return p_n1_std.total() - 1; }
  // case 2: block i0 has size 1, so it disappears on the GL(n) side
  bool inserted_block() const { return p_n1_std[i0] == 1; }
  friend bool operator==(const RSParabolic&, const RSParabolic&) = default;
  friend auto operator<=>(const RSParabolic&, const RSParabolic&) = default;
};

// The cycle N+2 -> N+3 -> ... -> n+1 -> N+1 -> N+2 (1-based), N = (Σ_{i ≤ i0} p_i) - 1.
inline RSParabolic rs_from_pair(const Composition& p, int i0) {
  if (i0 < 0 || i0 >= static_cast<int>(p.size())) throw std::out_of_range("rs_from_pair: block index out of range");
  if (p.degenerate()) throw DegenerateBlock("rs_from_pair: zero block");
  RSParabolic q;
  q.p_n1_std = p;
  q.i0 = i0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    int part = p[i] - (static_cast<int>(i) == i0 ? 1 : 0);
    if (part > 0) q.p_n.parts.push_back(part);
  }
  const int total = p.total();  // n+1
  int N = p.offset(i0 + 1) - 1;
  q.w_std.resize(total);
  for (int k = 0; k < total; ++k) q.w_std[k] = k;
  if (N + 1 < total) {
    // 1-based: N+1 -> N+2, N+2 -> N+3, ..., n+1 -> N+1
    for (int k = N + 1; k <= total; ++k) q.w_std[k - 1] = (k == total ? N + 1 : k + 1) - 1;
  }
  return q;
}

// Accepts zero parts: they are dropped and i0 is re-indexed; block i0 must be non-zero.
inline RSParabolic rs_from_pair_dropping_zeros(const Composition& p, int i0) {
  if (i0 < 0 || i0 >= static_cast<int>(p.size()) || p[i0] == 0)
    throw std::invalid_argument("rs_from_pair: distinguished block is empty");
  int shift = 0;
  for (int i = 0; i < i0; ++i) shift += p[i] == 0;
  return rs_from_pair(p.without_zeros(), i0 - shift);
}

inline std::vector<RSParabolic> enumerate_rs(int n) {
  if (n < 1) throw std::invalid_argument("enumerate_rs: n must be >= 1");
  std::vector<RSParabolic> out;
  for (const auto& c : enumerate_compositions(n + 1))
    for (std::size_t i = 0; i < c.size(); ++i) out.push_back(rs_from_pair(c, static_cast<int>(i)));
  return out;
}

using OrderedSetPartition = std::vector<std::vector<int>>;  // blocks of 1-based indices, each sorted

// Blocks of P_{n+1}: images of the standard intervals under w_std^{-1}.
inline OrderedSetPartition semistandard_blocks(const RSParabolic& q) {
  std::vector<int> winv(q.w_std.size());
  for (std::size_t k = 0; k < q.w_std.size(); ++k) winv[q.w_std[k]] = static_cast<int>(k);
  OrderedSetPartition blocks;
  int pos = 0;
  for (int part : q.p_n1_std.parts) {
    std::vector<int> b;
    for (int t = 0; t < part; ++t) b.push_back(winv[pos++] + 1);
    std::sort(b.begin(), b.end());
    blocks.push_back(b);
  }
  return blocks;
}

// Restriction of an ordered set partition of {1..n+1} to {1..n}, empty blocks dropped.
inline OrderedSetPartition restrict_to_n(const OrderedSetPartition& P, int n) {
  OrderedSetPartition out;
  for (const auto& b : P) {
    std::vector<int> r;
    for (int x : b)
      if (x <= n) r.push_back(x);
    if (!r.empty()) out.push_back(r);
  }
  return out;
}

inline bool is_standard_interval_partition(const OrderedSetPartition& P) {
  int next = 1;
  for (const auto& b : P)
    for (int x : b)
      if (x != next++) return false;
  return true;
}

// Semi-standard parabolics of GL(n+1) (ordered set partitions) whose intersection with GL(n) is standard.
inline std::vector<OrderedSetPartition> brute_force_semistandard_rs(int n) {
  if (n < 1 || n > 6) throw std::invalid_argument("brute_force_semistandard_rs: 1 <= n <= 6");
  const int k = n + 1;
  std::vector<OrderedSetPartition> out;
  // assign each element a block label; labels must be a surjection onto 0..m-1
  std::vector<int> label(k, 0);
  auto rec = [&](auto&& self, int pos) -> void {
    if (pos == k) {
      int m = *std::max_element(label.begin(), label.end()) + 1;
      std::vector<int> seen(m, 0);
      for (int l : label) seen[l] = 1;
      if (std::find(seen.begin(), seen.end(), 0) != seen.end()) return;
      OrderedSetPartition P(m);
      for (int x = 0; x < k; ++x) P[label[x]].push_back(x + 1);
      if (is_standard_interval_partition(restrict_to_n(P, n))) out.push_back(P);
      return;
    }
    for (int l = 0; l < k; ++l) {
      label[pos] = l;
      self(self, pos + 1);
    }
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end());
  return out;
}

struct RSLeviDecomposition {
  Composition M_plus;
  Composition M_minus;
  std::pair<int, int> cM;  // (GL(n_{i_P} - 1), GL(n_{i_P}))
  friend bool operator==(const RSLeviDecomposition&, const RSLeviDecomposition&) = default;
};

inline RSLeviDecomposition standardize(const RSParabolic& q) {
  RSLeviDecomposition d;
  for (int i = 0; i < static_cast<int>(q.p_n1_std.size()); ++i) {
    if (i < q.i0) d.M_plus.parts.push_back(q.p_n1_std[i]);
    if (i > q.i0) d.M_minus.parts.push_back(q.p_n1_std[i]);
  }
  d.cM = {q.p_n1_std[q.i0] - 1, q.p_n1_std[q.i0]};
  return d;
}

// 1/2 before i_P, -1/2 after, unset at i_P.
inline std::vector<std::optional<Rat>> rho_underline(const RSParabolic& q) {
  std::vector<std::optional<Rat>> r(q.p_n1_std.size());
  for (int i = 0; i < static_cast<int>(r.size()); ++i)
    if (i != q.i0) r[i] = Rat(i < q.i0 ? 1 : -1, 2);
  return r;
}

}  // namespace rankin
