#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "rankin/rat.hpp"
#include "rankin/relevant.hpp"
#include "rankin/spectra.hpp"

namespace rankin {

// ---------------------------------------------------------------------------------------------
// Unfolding data (I_r, P, π): π_n = (π+)(πc1), π_{n+1} = (π+^∨)(πc2) with πc1, πc2 cuspidal.
struct UnfoldingDatum {
  std::vector<SpehBlock> plus, c1, c2;

  int r() const { return zone_size(plus); }
  int n() const { return zone_size(plus) + zone_size(c1); }
  IncreasingDatum as_increasing() const { return IncreasingDatum{plus, {}, c1, {}, c2, {}, {}, {}}; }
  friend bool operator==(const UnfoldingDatum&, const UnfoldingDatum&) = default;
  friend auto operator<=>(const UnfoldingDatum&, const UnfoldingDatum&) = default;
  std::string str() const { return as_increasing().str(); }
};

inline Validation validate_unfolding(const UnfoldingDatum& u) {
  for (const auto& b : u.plus)
    if (b.degenerate()) return Validation::fail("+ blocks must be non-degenerate");
  for (const auto* z : {&u.c1, &u.c2})
    for (const auto& b : *z)
      if (b.d != 1) return Validation::fail("c-zone blocks must be cuspidal");
  if (zone_size(u.c2) != zone_size(u.c1) + 1) return Validation::fail("side sizes must be (n, n+1)");
  return {};
}

inline bool plus_ordered(const UnfoldingDatum& u) {
  for (std::size_t i = 1; i < u.plus.size(); ++i)
    if (u.plus[i].d > u.plus[i - 1].d) return false;
  return true;
}

// Representative with d(+,1) ≥ d(+,2) ≥ …; ties between distinct tokens are broken by token id.
enum class TieBreak { TokenAscending, TokenDescending };

inline void sort_blocks(std::vector<SpehBlock>& z, TieBreak tie) {
  std::stable_sort(z.begin(), z.end(), [tie](const SpehBlock& a, const SpehBlock& b) {
    if (a.d != b.d) return a.d > b.d;
    return tie == TieBreak::TokenAscending ? a.sigma < b.sigma : a.sigma > b.sigma;
  });
}

inline UnfoldingDatum representative(UnfoldingDatum u, TieBreak tie = TieBreak::TokenAscending) {
  sort_blocks(u.plus, tie);
  sort_blocks(u.c1, tie);
  sort_blocks(u.c2, tie);
  return u;
}

inline std::int64_t W_order(const UnfoldingDatum& u) {
  return factorial(static_cast<int>(u.plus.size())) * factorial(static_cast<int>(u.c1.size())) *
         factorial(static_cast<int>(u.c2.size()));
}

// |Stab(τ)|: stabiliser of τ^↓ in W(τ^↓).
inline std::int64_t stab_order(const IncreasingDatum& d) { return stab_order(downward_transform(d).datum); }
inline std::int64_t stab_order(const UnfoldingDatum& u) { return stab_order(u.as_increasing()); }

// Classes of unfolding data for GL(n) × GL(n+1), all r, in canonical (normal-order) form.
inline std::vector<UnfoldingDatum> enumerate_unfolding(int n, const TokenRegistry& reg) {
  if (n < 0) throw std::invalid_argument("enumerate_unfolding: n must be >= 0");
  std::vector<UnfoldingDatum> out;
  const auto any = detail::sorted_candidates(reg, n + 1);
  const auto cusp = detail::sorted_candidates(reg, n + 1, 1, 1);
  auto same = [](const SpehBlock& b) { return std::pair<int, int>{b.size(), b.size()}; };
  auto onec = [](const SpehBlock& b) { return std::pair<int, int>{b.size(), 0}; };
  auto twoc = [](const SpehBlock& b) { return std::pair<int, int>{0, b.size()}; };
  std::vector<SpehBlock> zp, z1, z2;
  detail::enumerate_zone(any, 0, n, n + 1, same, zp, [&](const auto& p, int a, int b) {
    detail::enumerate_zone(cusp, 0, a, b, onec, z1, [&](const auto& c1, int a1, int b1) {
      if (a1 != 0) return;
      detail::enumerate_zone(cusp, 0, a1, b1, twoc, z2, [&](const auto& c2, int, int b2) {
        if (b2 == 0) out.push_back(UnfoldingDatum{p, c1, c2});
      });
    });
  });
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------------------------
// Stage 1: graphs on (π+ vertices, c1 vertices, c2 vertices).  nb1[i] / nb2[i] is the c1 / c2
// neighbour of the i-th + vertex or −1; c-vertices have degree ≤ 1 by construction.
struct ResidueGraphStage1 {
  std::vector<int> nb1, nb2;

  std::size_t edge_count() const {
    return static_cast<std::size_t>(std::count_if(nb1.begin(), nb1.end(), [](int x) { return x >= 0; }) +
                                    std::count_if(nb2.begin(), nb2.end(), [](int x) { return x >= 0; }));
  }
  bool is_null() const { return edge_count() == 0; }
  // every edge of `sub` is an edge of *this
  bool contains(const ResidueGraphStage1& sub) const {
    for (std::size_t i = 0; i < nb1.size(); ++i) {
      if (sub.nb1[i] >= 0 && sub.nb1[i] != nb1[i]) return false;
      if (sub.nb2[i] >= 0 && sub.nb2[i] != nb2[i]) return false;
    }
    return true;
  }
  friend bool operator==(const ResidueGraphStage1&, const ResidueGraphStage1&) = default;
  friend auto operator<=>(const ResidueGraphStage1&, const ResidueGraphStage1&) = default;
  std::string str() const {
    std::string s = "{";
    for (std::size_t i = 0; i < nb1.size(); ++i) {
      if (nb1[i] >= 0) s += (s.size() > 1 ? "," : "") + ("+" + std::to_string(i + 1) + "-c1_" + std::to_string(nb1[i] + 1));
      if (nb2[i] >= 0) s += (s.size() > 1 ? "," : "") + ("+" + std::to_string(i + 1) + "-c2_" + std::to_string(nb2[i] + 1));
    }
    return s + "}";
  }
};

inline bool edge_c1_ok(const UnfoldingDatum& u, std::size_t i, std::size_t j) {
  return u.c1[j].sigma == u.plus[i].sigma && u.c1[j].rank == u.plus[i].rank;
}
inline bool edge_c2_ok(const TokenRegistry& reg, const UnfoldingDatum& u, std::size_t i, std::size_t j) {
  return u.c2[j].sigma == reg.dual(u.plus[i].sigma) && u.c2[j].rank == u.plus[i].rank;
}

inline Validation validate_graph(const TokenRegistry& reg, const UnfoldingDatum& u, const ResidueGraphStage1& g) {
  const std::size_t m = u.plus.size();
  if (g.nb1.size() != m || g.nb2.size() != m) return Validation::fail("graph: one entry per + vertex");
  std::vector<int> used1(u.c1.size(), 0), used2(u.c2.size(), 0);
  for (std::size_t i = 0; i < m; ++i) {
    if (g.nb1[i] >= 0) {
      if (g.nb1[i] >= static_cast<int>(u.c1.size()) || !edge_c1_ok(u, i, g.nb1[i]))
        return Validation::fail("graph: c1 edge is not token-compatible");
      if (used1[g.nb1[i]]++) return Validation::fail("graph: c1 vertex of degree > 1");
    }
    if (g.nb2[i] >= 0) {
      if (g.nb2[i] >= static_cast<int>(u.c2.size()) || !edge_c2_ok(reg, u, i, g.nb2[i]))
        return Validation::fail("graph: c2 edge is not token-compatible");
      if (used2[g.nb2[i]]++) return Validation::fail("graph: c2 vertex of degree > 1");
    }
  }
  return {};
}

// Exhaustive enumeration of 𝒢(π).  `max_graphs` guards against registry-induced blowup.
inline std::vector<ResidueGraphStage1> graphs_stage1(const TokenRegistry& reg, const UnfoldingDatum& u,
                                                     std::size_t max_graphs = 1u << 22) {
  if (!plus_ordered(u)) throw std::invalid_argument("graphs_stage1: d(+,i) must be non-increasing");
  const std::size_t m = u.plus.size();
  std::vector<ResidueGraphStage1> out;
  ResidueGraphStage1 g{std::vector<int>(m, -1), std::vector<int>(m, -1)};
  std::vector<char> used1(u.c1.size(), 0), used2(u.c2.size(), 0);
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == m) {
      if (out.size() >= max_graphs) throw std::length_error("graphs_stage1: graph limit exceeded");
      out.push_back(g);
      return;
    }
    for (int a = -1; a < static_cast<int>(u.c1.size()); ++a) {
      if (a >= 0 && (used1[a] || !edge_c1_ok(u, i, a))) continue;
      if (a >= 0) used1[a] = 1;
      g.nb1[i] = a;
      for (int b = -1; b < static_cast<int>(u.c2.size()); ++b) {
        if (b >= 0 && (used2[b] || !edge_c2_ok(reg, u, i, b))) continue;
        if (b >= 0) used2[b] = 1;
        g.nb2[i] = b;
        self(self, i + 1);
        if (b >= 0) used2[b] = 0;
      }
      g.nb2[i] = -1;
      if (a >= 0) used1[a] = 0;
    }
    g.nb1[i] = -1;
  };
  rec(rec, 0);
  return out;
}

inline SpehBlock promote(const SpehBlock& b) { return {b.sigma, b.rank, b.d + 1}; }

// (I_Γ, Q_Γ, π_Γ, I_{Γ,1}, I_{Γ,2}); order inside each group follows the index i.
inline IncreasingDatum tuple_of_stage1(const TokenRegistry& reg, const UnfoldingDatum& u, const ResidueGraphStage1& g) {
  if (auto v = validate_graph(reg, u, g); !v) throw std::invalid_argument(v.clause);
  IncreasingDatum t;
  for (std::size_t i = 0; i < u.plus.size(); ++i) {
    const bool e1 = g.nb1[i] >= 0, e2 = g.nb2[i] >= 0;
    if (!e1 && !e2) t.plus.push_back(u.plus[i]);
    if (e1) {
      if (e2) t.I1.push_back(static_cast<int>(t.one.size()));
      t.one.push_back(promote(u.plus[i]));
    }
    if (e2) {
      if (e1) t.I2.push_back(static_cast<int>(t.two.size()));
      t.two.push_back(dual(reg, promote(u.plus[i])));
    }
  }
  std::vector<char> used1(u.c1.size(), 0), used2(u.c2.size(), 0);
  for (std::size_t i = 0; i < u.plus.size(); ++i) {
    if (g.nb1[i] >= 0) used1[g.nb1[i]] = 1;
    if (g.nb2[i] >= 0) used2[g.nb2[i]] = 1;
  }
  for (std::size_t j = 0; j < u.c1.size(); ++j)
    if (!used1[j]) t.c1.push_back(u.c1[j]);
  for (std::size_t j = 0; j < u.c2.size(); ++j)
    if (!used2[j]) t.c2.push_back(u.c2[j]);
  return t;
}

// Tuples differing only by a permutation of identical blocks inside zone 1 (resp. 2), carried along
// with I1 (resp. I2), are the same induction datum.  Normal form: inside each run of identical blocks
// the matched indices come first.
inline IncreasingDatum identify_identical(IncreasingDatum d) {
  auto normalise = [](const std::vector<SpehBlock>& z, std::vector<int>& idx) {
    std::vector<char> in(z.size(), 0);
    for (int i : idx) in[i] = 1;
    for (std::size_t a = 0; a < z.size();) {
      std::size_t b = a;
      while (b < z.size() && z[b] == z[a]) ++b;
      std::stable_sort(in.begin() + a, in.begin() + b, std::greater<>());
      a = b;
    }
    idx.clear();
    for (std::size_t i = 0; i < z.size(); ++i)
      if (in[i]) idx.push_back(static_cast<int>(i));
  };
  normalise(d.one, d.I1);
  normalise(d.two, d.I2);
  return d;
}

// image of 𝒢(π) with fiber sizes
inline std::map<IncreasingDatum, std::int64_t> stage1_image(const TokenRegistry& reg, const UnfoldingDatum& u,
                                                            const std::vector<ResidueGraphStage1>& graphs,
                                                            bool identify = true) {
  std::map<IncreasingDatum, std::int64_t> img;
  for (const auto& g : graphs) {
    auto t = tuple_of_stage1(reg, u, g);
    ++img[identify ? identify_identical(t) : t];
  }
  return img;
}

// ---------------------------------------------------------------------------------------------
// Stage 2: matchings between τ_{c,1,·} and τ_{c,2,·} along dual pairs.  match[i] is the c2 partner of c1 vertex i.
struct ResidueGraphStage2 {
  std::vector<int> match;

  std::size_t edge_count() const {
    return static_cast<std::size_t>(std::count_if(match.begin(), match.end(), [](int x) { return x >= 0; }));
  }
  friend bool operator==(const ResidueGraphStage2&, const ResidueGraphStage2&) = default;
  friend auto operator<=>(const ResidueGraphStage2&, const ResidueGraphStage2&) = default;
  std::string str() const {
    std::string s = "{";
    for (std::size_t i = 0; i < match.size(); ++i)
      if (match[i] >= 0) s += (s.size() > 1 ? "," : "") + ("c1_" + std::to_string(i + 1) + "-c2_" + std::to_string(match[i] + 1));
    return s + "}";
  }
};

inline std::vector<ResidueGraphStage2> graphs_stage2(const TokenRegistry& reg, const IncreasingDatum& t,
                                                     std::size_t max_graphs = 1u << 22) {
  std::vector<ResidueGraphStage2> out;
  ResidueGraphStage2 g{std::vector<int>(t.c1.size(), -1)};
  std::vector<char> used(t.c2.size(), 0);
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == t.c1.size()) {
      if (out.size() >= max_graphs) throw std::length_error("graphs_stage2: graph limit exceeded");
      out.push_back(g);
      return;
    }
    g.match[i] = -1;
    self(self, i + 1);
    for (std::size_t j = 0; j < t.c2.size(); ++j) {
      if (used[j] || t.c1[i] != dual(reg, t.c2[j])) continue;
      used[j] = 1;
      g.match[i] = static_cast<int>(j);
      self(self, i + 1);
      used[j] = 0;
    }
    g.match[i] = -1;
  };
  rec(rec, 0);
  return out;
}

// τ_Γ: matched pairs move to the − zone in the order of the c1 index (the bijection j(i)).
inline IncreasingDatum tuple_of_stage2(const TokenRegistry& reg, const IncreasingDatum& t, const ResidueGraphStage2& g) {
  if (!t.minus.empty()) throw std::invalid_argument("tuple_of_stage2: τ must have an empty − zone");
  if (g.match.size() != t.c1.size()) throw std::invalid_argument("tuple_of_stage2: one entry per c1 vertex");
  IncreasingDatum d = t;
  d.c1.clear();
  d.c2.clear();
  std::vector<char> used(t.c2.size(), 0);
  for (std::size_t i = 0; i < t.c1.size(); ++i) {
    const int j = g.match[i];
    if (j < 0) {
      d.c1.push_back(t.c1[i]);
      continue;
    }
    if (j >= static_cast<int>(t.c2.size()) || used[j] || t.c1[i] != dual(reg, t.c2[j]))
      throw std::invalid_argument("tuple_of_stage2: invalid matching");
    used[j] = 1;
    d.minus.push_back(t.c1[i]);
  }
  for (std::size_t j = 0; j < t.c2.size(); ++j)
    if (!used[j]) d.c2.push_back(t.c2[j]);
  return d;
}

inline std::map<IncreasingDatum, std::int64_t> stage2_image(const TokenRegistry& reg, const IncreasingDatum& t,
                                                            const std::vector<ResidueGraphStage2>& graphs) {
  std::map<IncreasingDatum, std::int64_t> img;
  for (const auto& g : graphs) ++img[tuple_of_stage2(reg, t, g)];
  return img;
}

// ---------------------------------------------------------------------------------------------
// The families 𝒢(π,d), 𝒢(Γ,d), 𝒢(Γ,n,d), 𝒢(Γ′,n+1,d).

// all edges sit on + vertices with d(+,i) ≥ d (equivalently the image lies in Π_H^↑(π,d))
inline bool in_G_pi_d(const UnfoldingDatum& u, const ResidueGraphStage1& g, int d) {
  for (std::size_t i = 0; i < u.plus.size(); ++i)
    if ((g.nb1[i] >= 0 || g.nb2[i] >= 0) && u.plus[i].d < d) return false;
  return true;
}

enum class NewEdges { Any, C1Only, C2Only };

// G ⊂ H and every edge of H ∖ G is on a + vertex with d(+,i) = d, of the requested kind.
inline bool extends_at_level(const UnfoldingDatum& u, const ResidueGraphStage1& G, const ResidueGraphStage1& H, int d,
                             NewEdges kind) {
  if (!H.contains(G)) return false;
  for (std::size_t i = 0; i < u.plus.size(); ++i) {
    const bool n1 = H.nb1[i] >= 0 && G.nb1[i] < 0, n2 = H.nb2[i] >= 0 && G.nb2[i] < 0;
    if ((n1 || n2) && u.plus[i].d != d) return false;
    if (n1 && kind == NewEdges::C2Only) return false;
    if (n2 && kind == NewEdges::C1Only) return false;
  }
  return true;
}

inline std::vector<ResidueGraphStage1> filter_graphs(const std::vector<ResidueGraphStage1>& all,
                                                     const std::function<bool(const ResidueGraphStage1&)>& keep) {
  std::vector<ResidueGraphStage1> out;
  for (const auto& g : all)
    if (keep(g)) out.push_back(g);
  return out;
}

inline std::vector<ResidueGraphStage1> G_pi_d(const UnfoldingDatum& u, const std::vector<ResidueGraphStage1>& all, int d) {
  return filter_graphs(all, [&](const auto& g) { return in_G_pi_d(u, g, d); });
}
inline std::vector<ResidueGraphStage1> G_Gamma_d(const UnfoldingDatum& u, const std::vector<ResidueGraphStage1>& all,
                                                 const ResidueGraphStage1& G, int d) {
  return filter_graphs(all, [&](const auto& h) { return extends_at_level(u, G, h, d, NewEdges::Any); });
}
inline std::vector<ResidueGraphStage1> G_Gamma_n_d(const UnfoldingDatum& u, const std::vector<ResidueGraphStage1>& all,
                                                   const ResidueGraphStage1& G, int d) {
  return filter_graphs(all, [&](const auto& h) { return extends_at_level(u, G, h, d, NewEdges::C1Only); });
}
inline std::vector<ResidueGraphStage1> G_Gamma_n1_d(const UnfoldingDatum& u, const std::vector<ResidueGraphStage1>& all,
                                                    const ResidueGraphStage1& G, int d) {
  return filter_graphs(all, [&](const auto& h) { return extends_at_level(u, G, h, d, NewEdges::C2Only); });
}

struct FamilyPartitions {
  std::vector<ResidueGraphStage1> G_n, G_d;              // 𝒢(Γ,n,d), 𝒢(Γ,d)
  std::vector<std::vector<ResidueGraphStage1>> G_n1_of;  // 𝒢(Γ′,n+1,d) for Γ′ ∈ 𝒢(Γ,n,d)
  bool disjoint_union = false;                           // 𝒢(Γ,d) = ⊔ 𝒢(Γ′,n+1,d)
};

inline FamilyPartitions family_partitions(const UnfoldingDatum& u, const std::vector<ResidueGraphStage1>& all,
                                          const ResidueGraphStage1& G, int d) {
  FamilyPartitions f;
  f.G_n = G_Gamma_n_d(u, all, G, d);
  f.G_d = G_Gamma_d(u, all, G, d);
  std::vector<ResidueGraphStage1> uni;
  for (const auto& Gp : f.G_n) {
    f.G_n1_of.push_back(G_Gamma_n1_d(u, all, Gp, d));
    uni.insert(uni.end(), f.G_n1_of.back().begin(), f.G_n1_of.back().end());
  }
  std::sort(uni.begin(), uni.end());
  const bool disjoint = std::adjacent_find(uni.begin(), uni.end()) == uni.end();
  auto gd = f.G_d;
  std::sort(gd.begin(), gd.end());
  f.disjoint_union = disjoint && uni == gd;
  return f;
}

// ⊔_{Γ ∈ 𝒢(π,d+1)} 𝒢(Γ,d) = 𝒢(π,d)
inline bool level_partition_holds(const UnfoldingDatum& u, const std::vector<ResidueGraphStage1>& all, int d) {
  std::vector<ResidueGraphStage1> uni;
  for (const auto& G : G_pi_d(u, all, d + 1)) {
    auto part = G_Gamma_d(u, all, G, d);
    uni.insert(uni.end(), part.begin(), part.end());
  }
  std::sort(uni.begin(), uni.end());
  if (std::adjacent_find(uni.begin(), uni.end()) != uni.end()) return false;
  auto target = G_pi_d(u, all, d);
  std::sort(target.begin(), target.end());
  return uni == target;
}

// ---------------------------------------------------------------------------------------------
// Fiber counts, three ways.
struct FiberCheck {
  std::int64_t brute = 0;
  Rat multinomial;
  Rat stab_ratio;
  bool agree() const { return Rat(brute) == multinomial && multinomial == stab_ratio; }
};

// Γ ∈ 𝒢(π,d+1) with image τ, Γ′ ∈ 𝒢(Γ,d) with image τ′: fiber of 𝒢(Γ,d) → Π_H^↑ above τ′.
inline FiberCheck fiber_count_stage1(const TokenRegistry& reg, const UnfoldingDatum& u,
                                     const std::vector<ResidueGraphStage1>& all, const ResidueGraphStage1& G,
                                     const ResidueGraphStage1& Gp, int d, bool identify = true) {
  if (!extends_at_level(u, G, Gp, d, NewEdges::Any)) throw std::invalid_argument("fiber_count: Γ′ does not extend Γ at level d");
  auto image = [&](const ResidueGraphStage1& H) {
    auto t = tuple_of_stage1(reg, u, H);
    return identify ? identify_identical(t) : t;
  };
  const auto tau = image(G), taup = image(Gp);
  FiberCheck f;
  for (const auto& H : G_Gamma_d(u, all, G, d))
    if (image(H) == taup) ++f.brute;
  // multinomial over the tokens σ with τ_{+,i} = Speh(σ,d)
  std::vector<char> used1(u.c1.size(), 0), used2(u.c2.size(), 0);
  for (std::size_t i = 0; i < u.plus.size(); ++i) {
    if (G.nb1[i] >= 0) used1[G.nb1[i]] = 1;
    if (G.nb2[i] >= 0) used2[G.nb2[i]] = 1;
  }
  struct Counts { int kp = 0, kc1 = 0, kc2 = 0, k1 = 0, k2 = 0, k12 = 0; };
  std::map<std::string, Counts> per;
  for (std::size_t i = 0; i < u.plus.size(); ++i) {
    if (G.nb1[i] >= 0 || G.nb2[i] >= 0 || u.plus[i].d != d) continue;
    auto& c = per[u.plus[i].sigma];
    ++c.kp;
    const bool e1 = Gp.nb1[i] >= 0, e2 = Gp.nb2[i] >= 0;
    c.k1 += e1 && !e2;
    c.k2 += e2 && !e1;
    c.k12 += e1 && e2;
  }
  f.multinomial = Rat(1);
  for (auto& [s, c] : per) {
    for (std::size_t j = 0; j < u.c1.size(); ++j) c.kc1 += !used1[j] && u.c1[j].sigma == s;
    for (std::size_t j = 0; j < u.c2.size(); ++j) c.kc2 += !used2[j] && u.c2[j].sigma == reg.dual(s);
    Rat num = Rat(factorial(c.kc1) * factorial(c.kc2) * factorial(c.kp));
    Rat den = Rat(factorial(c.kc1 - c.k1 - c.k12) * factorial(c.kc2 - c.k2 - c.k12) * factorial(c.k1) *
                  factorial(c.k2) * factorial(c.k12) * factorial(c.kp - c.k1 - c.k2 - c.k12));
    f.multinomial = f.multinomial * num / den;
  }
  f.stab_ratio = Rat(stab_order(tau), stab_order(taup));
  return f;
}

// Fiber of 𝒢_c(τ) → Π^↑_{H,c}(τ) above the image of Γ.
inline FiberCheck fiber_count_stage2(const TokenRegistry& reg, const IncreasingDatum& t,
                                     const std::vector<ResidueGraphStage2>& all, const ResidueGraphStage2& g) {
  const auto delta = tuple_of_stage2(reg, t, g);
  FiberCheck f;
  for (const auto& h : all)
    if (tuple_of_stage2(reg, t, h) == delta) ++f.brute;
  struct Counts { int k1 = 0, k2 = 0, k = 0; };
  std::map<SpehBlock, Counts> per;
  for (std::size_t i = 0; i < t.c1.size(); ++i) {
    auto& c = per[t.c1[i]];
    ++c.k1;
    c.k += g.match[i] >= 0;
  }
  f.multinomial = Rat(1);
  for (auto& [b, c] : per) {
    for (const auto& x : t.c2) c.k2 += x == dual(reg, b);
    f.multinomial = f.multinomial * Rat(factorial(c.k1) * factorial(c.k2)) /
                    Rat(factorial(c.k1 - c.k) * factorial(c.k2 - c.k) * factorial(c.k));
  }
  f.stab_ratio = Rat(stab_order(t), stab_order(delta));
  return f;
}

// ---------------------------------------------------------------------------------------------
// Weighted index sets and the end-to-end pipeline.
struct WeightedIndexSet {
  std::map<RelevantDatum, Rat> weights;

  void add(const RelevantDatum& d, const Rat& w) {
    Rat& x = weights[d.canonical()];
    x = x + w;
  }
  WeightedIndexSet& merge(const WeightedIndexSet& o) {
    for (const auto& [d, w] : o.weights) add(d, w);
    return *this;
  }
  bool empty() const { return weights.empty(); }
  friend bool operator==(const WeightedIndexSet&, const WeightedIndexSet&) = default;
};

struct PipelineOptions {
  TieBreak tie = TieBreak::TokenAscending;
  std::size_t max_graphs = 1u << 20;
  bool identify_identical = true;  // see identify_identical(); false keeps the literal tuples
};

struct PipelineTrace {
  UnfoldingDatum pi;
  IncreasingDatum tau, delta;
  RelevantDatum target;
  Rat weight;
};

struct PipelineResult {
  WeightedIndexSet classes;
  std::vector<PipelineTrace> trace;
  bool fibers_match_stab = true;  // every stage-1 / stage-2 fiber equals its |Stab| ratio
};

// Σ_r Σ_{classes of (I_r,P,π)} Σ_{τ ∈ Π_H^↑(π)} Σ_{δ ∈ Π^↑_{H,c}(τ)} weight, aggregated on δ^↓.
// The class of π carries Σ_{w π} 1/|W(π)| = (#orbit)/|W(π)|; τ carries |Stab π|/|Stab τ|; δ carries |Stab τ|/|Stab δ|.
inline PipelineResult pipeline(int n, const TokenRegistry& reg, const PipelineOptions& opt = {}) {
  PipelineResult res;
  for (const auto& cls : enumerate_unfolding(n, reg)) {
    const auto u = representative(cls, opt.tie);
    std::set<UnfoldingDatum> orbit;
    {
      auto p = u.plus, a = u.c1, b = u.c2;
      std::sort(p.begin(), p.end());
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      do {
        do {
          do orbit.insert(UnfoldingDatum{p, a, b});
          while (std::next_permutation(b.begin(), b.end()));
        } while (std::next_permutation(a.begin(), a.end()));
      } while (std::next_permutation(p.begin(), p.end()));
    }
    const Rat w0(static_cast<std::int64_t>(orbit.size()), W_order(u));
    const auto s_pi = stab_order(u);
    const auto g1 = graphs_stage1(reg, u, opt.max_graphs);
    for (const auto& [tau, fib1] : stage1_image(reg, u, g1, opt.identify_identical)) {
      const auto s_tau = stab_order(tau);
      if (Rat(fib1) != Rat(s_pi, s_tau)) res.fibers_match_stab = false;
      const auto g2 = graphs_stage2(reg, tau, opt.max_graphs);
      for (const auto& [delta, fib2] : stage2_image(reg, tau, g2)) {
        const auto s_delta = stab_order(delta);
        if (Rat(fib2) != Rat(s_tau, s_delta)) res.fibers_match_stab = false;
        const Rat w = w0 * Rat(s_pi, s_tau) * Rat(s_tau, s_delta);
        auto target = downward_transform(delta).datum.canonical();
        res.classes.add(target, w);
        res.trace.push_back({u, tau, delta, target, w});
      }
    }
  }
  return res;
}

// Direct oracle: every (I,P,π) ∈ Π_H with weight 1/|W(π)|, aggregated by W-class.
inline WeightedIndexSet direct_enumeration(int n, const TokenRegistry& reg) {
  WeightedIndexSet out;
  for (const auto& c : enumerate_relevant(n, reg)) {
    std::set<RelevantDatum> orbit;
    for (const auto& w : weyl_W_pi(c)) orbit.insert(act_weyl(w, c));
    for (const auto& d : orbit) out.add(d, Rat(1, W_pi_order(d)));
  }
  return out;
}

// ---------------------------------------------------------------------------------------------
// Explicit inverse of δ ↦ δ^↓: from a class of Π_H back to (π, Γ, τ, Γ_c, δ).
struct InverseChain {
  UnfoldingDatum pi;
  ResidueGraphStage1 g1;
  IncreasingDatum tau;
  ResidueGraphStage2 g2;
  IncreasingDatum delta;
};

inline InverseChain inverse_of_class(const TokenRegistry& reg, const RelevantDatum& cls, TieBreak tie = TieBreak::TokenAscending) {
  auto split = [](const std::vector<SpehBlock>& z, std::vector<SpehBlock>& cusp, std::vector<SpehBlock>& res) {
    for (const auto& b : z) (b.d == 1 ? cusp : res).push_back(b);
  };
  std::vector<SpehBlock> one_c, one_r, two_c, two_r, minus_c, minus_r;
  split(cls.one, one_c, one_r);
  split(cls.two, two_c, two_r);
  split(cls.minus, minus_c, minus_r);
  auto cusp_of = [](const SpehBlock& b) { return SpehBlock{b.sigma, b.rank, 1}; };

  // roles of the + vertices of π: 0 none, 1 c1 edge, 2 c2 edge, 3 both
  std::vector<std::pair<SpehBlock, int>> roles;
  UnfoldingDatum u;
  for (const auto& b : cls.plus) roles.push_back({b, 0});
  for (const auto& b : one_r) roles.push_back({derivative(b), 1});
  for (const auto& b : two_r) roles.push_back({dual(reg, derivative(b)), 2});
  for (const auto& b : minus_r) roles.push_back({derivative(b), 3});
  for (const auto& b : one_r) u.c1.push_back(cusp_of(b));
  for (const auto& b : minus_r) u.c1.push_back(cusp_of(b));
  u.c1.insert(u.c1.end(), one_c.begin(), one_c.end());
  u.c1.insert(u.c1.end(), minus_c.begin(), minus_c.end());
  for (const auto& b : two_r) u.c2.push_back(cusp_of(b));
  for (const auto& b : minus_r) u.c2.push_back(dual(reg, cusp_of(b)));
  u.c2.insert(u.c2.end(), two_c.begin(), two_c.end());
  for (const auto& b : minus_c) u.c2.push_back(dual(reg, b));
  for (const auto& [b, r] : roles) u.plus.push_back(b);
  u = representative(u, tie);

  InverseChain ch;
  ch.pi = u;
  ch.g1 = {std::vector<int>(u.plus.size(), -1), std::vector<int>(u.plus.size(), -1)};
  std::vector<char> taken(u.plus.size(), 0), used1(u.c1.size(), 0), used2(u.c2.size(), 0);
  // roles with edges first so that role-0 blocks keep the remaining vertices
  std::stable_sort(roles.begin(), roles.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  for (const auto& [b, r] : roles) {
    std::size_t i = 0;
    while (i < u.plus.size() && (taken[i] || u.plus[i] != b)) ++i;
    if (i == u.plus.size()) throw std::logic_error("inverse_of_class: + vertex not found");
    taken[i] = 1;
    if (r & 1) {
      std::size_t j = 0;
      while (j < u.c1.size() && (used1[j] || !edge_c1_ok(u, i, j))) ++j;
      if (j == u.c1.size()) throw std::logic_error("inverse_of_class: c1 vertex not found");
      used1[j] = 1;
      ch.g1.nb1[i] = static_cast<int>(j);
    }
    if (r & 2) {
      std::size_t j = 0;
      while (j < u.c2.size() && (used2[j] || !edge_c2_ok(reg, u, i, j))) ++j;
      if (j == u.c2.size()) throw std::logic_error("inverse_of_class: c2 vertex not found");
      used2[j] = 1;
      ch.g1.nb2[i] = static_cast<int>(j);
    }
  }
  ch.tau = tuple_of_stage1(reg, u, ch.g1);
  ch.g2 = {std::vector<int>(ch.tau.c1.size(), -1)};
  std::vector<char> used_c1(ch.tau.c1.size(), 0), used_c2(ch.tau.c2.size(), 0);
  for (const auto& b : minus_c) {
    std::size_t i = 0, j = 0;
    while (i < ch.tau.c1.size() && (used_c1[i] || ch.tau.c1[i] != b)) ++i;
    while (j < ch.tau.c2.size() && (used_c2[j] || ch.tau.c2[j] != dual(reg, b))) ++j;
    if (i == ch.tau.c1.size() || j == ch.tau.c2.size()) throw std::logic_error("inverse_of_class: c pair not found");
    used_c1[i] = used_c2[j] = 1;
    ch.g2.match[i] = static_cast<int>(j);
  }
  ch.delta = tuple_of_stage2(reg, ch.tau, ch.g2);
  return ch;
}

struct BijectionReport {
  std::size_t classes = 0;
  std::size_t reached_once = 0;   // classes hit by exactly one (π, τ, δ) path
  std::size_t inverse_ok = 0;     // explicit inverse lands back on the class
  std::size_t stray = 0;          // pipeline targets outside Π_H / W
  bool ok() const { return reached_once == classes && inverse_ok == classes && stray == 0; }
};

inline BijectionReport check_bijection(int n, const TokenRegistry& reg, const PipelineOptions& opt = {}) {
  BijectionReport r;
  const auto classes = enumerate_relevant(n, reg);
  std::set<RelevantDatum> all(classes.begin(), classes.end());
  r.classes = classes.size();
  std::map<RelevantDatum, int> hits;
  for (const auto& t : pipeline(n, reg, opt).trace) {
    if (!all.count(t.target)) ++r.stray;
    ++hits[t.target];
  }
  for (const auto& c : classes) {
    if (hits[c] == 1) ++r.reached_once;
    auto ch = inverse_of_class(reg, c, opt.tie);
    if (validate_unfolding(ch.pi) && downward_transform(ch.delta).datum.canonical() == c) ++r.inverse_ok;
  }
  return r;
}

}  // namespace rankin
