#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rankin/exactlin.hpp"
#include "rankin/rsparab.hpp"
#include "rankin/spectra.hpp"

namespace rankin {

struct Validation {
  bool ok = true;
  std::string clause;
  explicit operator bool() const { return ok; }
  static Validation fail(std::string c) { return {false, std::move(c)}; }
};

inline int zone_size(const std::vector<SpehBlock>& z) { return composition_of(z).total(); }

inline void sort_zone(std::vector<SpehBlock>& z) { std::stable_sort(z.begin(), z.end(), normal_less); }

// ---------------------------------------------------------------------------------------------
// Relevant inducing data: four zones (+, 1, 2, −).
// side n   = (π+)(π1)(π2^{−,∨})(π−),  side n+1 = (π+^∨)(π1^{−,∨})(π2)(π−^∨)
struct RelevantDatum {
  std::vector<SpehBlock> plus, one, two, minus;

  std::array<int, 4> I() const { return {zone_size(plus), zone_size(one), zone_size(two), zone_size(minus)}; }
  std::size_t m() const { return plus.size() + one.size() + two.size() + minus.size(); }
  int n() const {
    int s = zone_size(plus) + zone_size(one) + zone_size(minus);
    for (const auto& b : two) s += derivative(b).size();
    return s;
  }
  DiscreteRep pi(const TokenRegistry& reg) const {
    DiscreteRep r;
    for (const auto& b : plus) { r.side_n.push_back(b); r.side_n1.push_back(dual(reg, b)); }
    for (const auto& b : one) { r.side_n.push_back(b); r.side_n1.push_back(dual(reg, derivative(b))); }
    for (const auto& b : two) { r.side_n.push_back(dual(reg, derivative(b))); r.side_n1.push_back(b); }
    for (const auto& b : minus) { r.side_n.push_back(b); r.side_n1.push_back(dual(reg, b)); }
    return r;
  }
  std::pair<Composition, Composition> P(const TokenRegistry& reg) const {
    auto r = pi(reg);
    return {composition_of(r.side_n), composition_of(r.side_n1)};
  }
  // zone of block k (0:+, 1:one, 2:two, 3:−) and index inside the zone
  std::pair<int, int> zone_of(std::size_t k) const {
    std::array<std::size_t, 4> sz{plus.size(), one.size(), two.size(), minus.size()};
    for (int z = 0; z < 4; ++z) {
      if (k < sz[z]) return {z, static_cast<int>(k)};
      k -= sz[z];
    }
    throw std::out_of_range("RelevantDatum: block index");
  }
  std::size_t first_of_zone(int z) const {
    std::array<std::size_t, 4> sz{plus.size(), one.size(), two.size(), minus.size()};
    std::size_t s = 0;
    for (int i = 0; i < z; ++i) s += sz[i];
    return s;
  }
  const std::vector<SpehBlock>& zone(int z) const {
    switch (z) {
      case 0: return plus;
      case 1: return one;
      case 2: return two;
      default: return minus;
    }
  }
  std::vector<SpehBlock>& zone(int z) { return const_cast<std::vector<SpehBlock>&>(std::as_const(*this).zone(z)); }

  RelevantDatum canonical() const {
    RelevantDatum c = *this;
    for (int z = 0; z < 4; ++z) sort_zone(c.zone(z));
    return c;
  }
  friend bool operator==(const RelevantDatum&, const RelevantDatum&) = default;
  friend auto operator<=>(const RelevantDatum&, const RelevantDatum&) = default;

  std::string str() const {
    auto zs = [](const std::vector<SpehBlock>& z) {
      std::string s = "[";
      for (std::size_t i = 0; i < z.size(); ++i) s += (i ? "," : "") + z[i].str();
      return s + "]";
    };
    auto i = I();
    return "I=(" + std::to_string(i[0]) + "," + std::to_string(i[1]) + "," + std::to_string(i[2]) + "," +
           std::to_string(i[3]) + ") +" + zs(plus) + " 1" + zs(one) + " 2" + zs(two) + " -" + zs(minus);
  }
};

inline Validation validate_zones(const RelevantDatum& d) {
  for (int z = 0; z < 4; ++z)
    for (const auto& b : d.zone(z))
      if (b.degenerate()) return Validation::fail("zone blocks must be non-degenerate Speh blocks");
  return {};
}

// Parse (I, P, π) into zones; checks every Π_H clause.
inline std::pair<Validation, std::optional<RelevantDatum>> parse_relevant(const TokenRegistry& reg,
                                                                          const std::array<int, 4>& I,
                                                                          const Composition& Pn, const Composition& Pn1,
                                                                          const DiscreteRep& pi) {
  using R = std::pair<Validation, std::optional<RelevantDatum>>;
  const std::size_t m = pi.side_n.size();
  if (pi.side_n1.size() != m) return R{Validation::fail("both sides must have the same number of blocks"), std::nullopt};
  if (Pn != composition_of(pi.side_n) || Pn1 != composition_of(pi.side_n1))
    return R{Validation::fail("P does not match the block sizes of pi"), std::nullopt};
  if (pi.size_n1() != pi.size_n() + 1) return R{Validation::fail("side sizes must be (n, n+1)"), std::nullopt};
  for (int x : I)
    if (x < 0) return R{Validation::fail("I entries must be non-negative"), std::nullopt};
  const int n = pi.size_n();
  if (n - I[0] - I[1] - I[3] < 0 || n + 1 - I[0] - I[2] - I[3] < 0)
    return R{Validation::fail("I violates n_2^- >= 0 or n_1^- >= 0"), std::nullopt};
  std::string best = "no split of the blocks into zones (+,1,2,-) matches I";
  std::size_t best_depth = 0;
  for (std::size_t mp = 0; mp <= m; ++mp)
    for (std::size_t m1 = 0; mp + m1 <= m; ++m1)
      for (std::size_t m2 = 0; mp + m1 + m2 <= m; ++m2) {
        std::size_t mm = m - mp - m1 - m2;
        RelevantDatum d;
        std::string why;
        std::size_t k = 0;
        for (; k < m; ++k) {
          const auto& L = pi.side_n[k];
          const auto& Rb = pi.side_n1[k];
          if (k < mp || k >= mp + m1 + m2) {
            if (L.degenerate()) { why = "block " + std::to_string(k + 1) + ": +/- zone block is degenerate"; break; }
            if (Rb != dual(reg, L)) { why = "block " + std::to_string(k + 1) + ": side n+1 is not the dual of side n"; break; }
            (k < mp ? d.plus : d.minus).push_back(L);
          } else if (k < mp + m1) {
            if (L.degenerate()) { why = "block " + std::to_string(k + 1) + ": zone-1 block is degenerate"; break; }
            if (Rb != dual(reg, derivative(L))) { why = "block " + std::to_string(k + 1) + ": side n+1 is not pi_1^{-,v}"; break; }
            d.one.push_back(L);
          } else {
            if (Rb.degenerate()) { why = "block " + std::to_string(k + 1) + ": zone-2 block is degenerate"; break; }
            if (L != dual(reg, derivative(Rb))) { why = "block " + std::to_string(k + 1) + ": side n is not pi_2^{-,v}"; break; }
            d.two.push_back(Rb);
          }
        }
        (void)mm;
        if (k == m) {
          if (d.I() == I) return R{Validation{}, d};
          why = "zone sizes do not match I";
        }
        if (k >= best_depth) { best_depth = k; best = why; }
      }
  return R{Validation::fail(best), std::nullopt};
}

inline Validation validate_relevant(const TokenRegistry& reg, const std::array<int, 4>& I, const Composition& Pn,
                                    const Composition& Pn1, const DiscreteRep& pi) {
  return parse_relevant(reg, I, Pn, Pn1, pi).first;
}

namespace detail {

// multisets (non-increasing in normal order) drawn from `cands` with per-block cost, fitting the budget
template <class Cost, class Emit>
void enumerate_zone(const std::vector<SpehBlock>& cands, std::size_t start, int bn, int bn1, Cost cost,
                    std::vector<SpehBlock>& cur, Emit emit) {
  emit(cur, bn, bn1);
  for (std::size_t i = start; i < cands.size(); ++i) {
    auto [cn, cn1] = cost(cands[i]);
    if (cn > bn || cn1 > bn1) continue;
    cur.push_back(cands[i]);
    enumerate_zone(cands, i, bn - cn, bn1 - cn1, cost, cur, emit);
    cur.pop_back();
  }
}

inline std::vector<SpehBlock> sorted_candidates(const TokenRegistry& reg, int max_size, int min_d = 1, int max_d = 1 << 20) {
  std::vector<SpehBlock> c;
  for (const auto& b : speh_blocks_up_to(reg, max_size))
    if (b.d >= min_d && b.d <= max_d) c.push_back(b);
  std::sort(c.begin(), c.end(), normal_less);
  return c;
}

}  // namespace detail

// Canonical representatives of Π_H / W for GL(n) × GL(n+1), sorted.
inline std::vector<RelevantDatum> enumerate_relevant(int n, const TokenRegistry& reg) {
  if (n < 0) throw std::invalid_argument("enumerate_relevant: n must be >= 0");
  std::vector<RelevantDatum> out;
  const auto cands = detail::sorted_candidates(reg, n + 1);
  auto same = [](const SpehBlock& b) { return std::pair<int, int>{b.size(), b.size()}; };
  auto c1 = [](const SpehBlock& b) { return std::pair<int, int>{b.size(), derivative(b).size()}; };
  auto c2 = [](const SpehBlock& b) { return std::pair<int, int>{derivative(b).size(), b.size()}; };
  RelevantDatum d;
  std::vector<SpehBlock> zp, z1, z2, zm;
  detail::enumerate_zone(cands, 0, n, n + 1, same, zp, [&](const auto& p, int a, int b) {
    detail::enumerate_zone(cands, 0, a, b, c1, z1, [&](const auto& o, int a1, int b1) {
      detail::enumerate_zone(cands, 0, a1, b1, c2, z2, [&](const auto& t, int a2, int b2) {
        detail::enumerate_zone(cands, 0, a2, b2, same, zm, [&](const auto& mi, int a3, int b3) {
          if (a3 == 0 && b3 == 0) out.push_back(RelevantDatum{p, o, t, mi});
        });
      });
    });
  });
  std::sort(out.begin(), out.end());
  return out;
}

// W(π): simultaneous permutations within each zone, as block permutations of the m blocks.
inline std::vector<WeylBlockElement> weyl_W_pi(const RelevantDatum& d) {
  std::vector<WeylBlockElement> out{WeylBlockElement::identity(d.m())};
  for (int z = 0; z < 4; ++z) {
    std::size_t s = d.first_of_zone(z), len = d.zone(z).size();
    std::vector<WeylBlockElement> next;
    for (const auto& w : out)
      for (const auto& local : all_permutations(len)) {
        auto v = w;
        for (std::size_t i = 0; i < len; ++i) v.perm[s + i] = static_cast<int>(s) + local.perm[i];
        next.push_back(v);
      }
    out = std::move(next);
  }
  return out;
}

inline RelevantDatum act_weyl(const WeylBlockElement& w, const RelevantDatum& d) {
  if (w.size() != d.m()) throw std::invalid_argument("act_weyl: size mismatch");
  std::vector<SpehBlock> all;
  for (int z = 0; z < 4; ++z) all.insert(all.end(), d.zone(z).begin(), d.zone(z).end());
  auto moved = act_weyl(w, all);
  RelevantDatum out;
  std::size_t k = 0;
  for (int z = 0; z < 4; ++z) {
    for (std::size_t i = 0; i < d.zone(z).size(); ++i, ++k) {
      if (d.zone_of(static_cast<std::size_t>(w.perm[k])).first != z) throw std::invalid_argument("act_weyl: w not in W(pi)");
    }
    out.zone(z).assign(moved.begin() + d.first_of_zone(z), moved.begin() + d.first_of_zone(z) + d.zone(z).size());
  }
  return out;
}

inline std::vector<WeylBlockElement> stab_pi(const RelevantDatum& d) {
  std::vector<WeylBlockElement> out;
  for (const auto& w : weyl_W_pi(d))
    if (act_weyl(w, d) == d) out.push_back(w);
  return out;
}

inline std::int64_t multiplicity_factorial(const std::vector<SpehBlock>& z) {
  std::map<SpehBlock, int> mult;
  for (const auto& b : z) ++mult[b];
  std::int64_t r = 1;
  for (const auto& [b, k] : mult) r *= factorial(k);
  return r;
}

inline std::int64_t W_pi_order(const RelevantDatum& d) {
  return factorial(static_cast<int>(d.plus.size())) * factorial(static_cast<int>(d.one.size())) *
         factorial(static_cast<int>(d.two.size())) * factorial(static_cast<int>(d.minus.size()));
}

inline std::int64_t stab_order(const RelevantDatum& d) {
  std::int64_t r = 1;
  for (int z = 0; z < 4; ++z) r *= multiplicity_factorial(d.zone(z));
  return r;
}

// Coordinates on a_P: side n blocks 0..m-1, then side n+1 blocks m..2m-1.
inline AffineSubspace a_pi_subspace(const RelevantDatum& d, const TokenRegistry& reg) {
  const std::size_t m = d.m();
  auto pi = d.pi(reg);
  std::vector<AffineForm> eqs;
  for (std::size_t k = 0; k < m; ++k) {
    bool dn = pi.side_n[k].degenerate(), dn1 = pi.side_n1[k].degenerate();
    if (dn) eqs.push_back(AffineForm::coord(2 * m, k));
    if (dn1) eqs.push_back(AffineForm::coord(2 * m, m + k));
    if (!dn && !dn1) eqs.push_back(AffineForm::coord(2 * m, k) + AffineForm::coord(2 * m, m + k));
  }
  return solve_affine(eqs, 2 * m);
}

// number of coordinates forced to zero by degenerate blocks
inline std::size_t forced_zero_count(const RelevantDatum& d, const TokenRegistry& reg) {
  auto pi = d.pi(reg);
  std::size_t c = 0;
  for (std::size_t k = 0; k < d.m(); ++k) c += pi.side_n[k].degenerate() + pi.side_n1[k].degenerate();
  return c;
}

inline CoordVector rho_pi(const RelevantDatum& d) {
  const std::size_t m = d.m();
  CoordVector r(2 * m, Rat(0));
  for (std::size_t k = 0; k < m; ++k) {
    int z = d.zone_of(k).first;
    Rat v = z == 0 ? Rat(1, 4) : z == 3 ? Rat(-1, 4) : Rat(0);
    r[k] = v;
    r[m + k] = v;
  }
  return r;
}

// ---------------------------------------------------------------------------------------------
// Increasing inducing data: zones (+, 1, c1, 2, c2, −) with matched index sets I1 ⊂ zone 1, I2 ⊂ zone 2.
// side n   = (π+)(π2^{−,∨}, i ∉ I2)(π1)(πc1)(π−)
// side n+1 = (π+^∨)(π1^{−,∨}, i ∉ I1)(π2)(πc2)(π−^∨)
struct IncreasingDatum {
  std::vector<SpehBlock> plus, one, c1, two, c2, minus;
  std::vector<int> I1, I2;  // sorted 0-based indices into one / two, matched in order

  std::array<int, 6> I() const {
    return {zone_size(plus), zone_size(one), zone_size(c1), zone_size(two), zone_size(c2), zone_size(minus)};
  }
  bool in_I1(int i) const { return std::find(I1.begin(), I1.end(), i) != I1.end(); }
  bool in_I2(int i) const { return std::find(I2.begin(), I2.end(), i) != I2.end(); }
  std::vector<int> not_I1() const {
    std::vector<int> r;
    for (int i = 0; i < static_cast<int>(one.size()); ++i)
      if (!in_I1(i)) r.push_back(i);
    return r;
  }
  std::vector<int> not_I2() const {
    std::vector<int> r;
    for (int i = 0; i < static_cast<int>(two.size()); ++i)
      if (!in_I2(i)) r.push_back(i);
    return r;
  }
  std::size_t m_n() const { return plus.size() + not_I2().size() + one.size() + c1.size() + minus.size(); }
  std::size_t m_n1() const { return plus.size() + not_I1().size() + two.size() + c2.size() + minus.size(); }

  // block offsets on each side
  std::size_t off_n_P2() const { return plus.size(); }
  std::size_t off_n_one() const { return plus.size() + not_I2().size(); }
  std::size_t off_n_c1() const { return off_n_one() + one.size(); }
  std::size_t off_n_minus() const { return off_n_c1() + c1.size(); }
  std::size_t off_n1_P1() const { return plus.size(); }
  std::size_t off_n1_two() const { return plus.size() + not_I1().size(); }
  std::size_t off_n1_c2() const { return off_n1_two() + two.size(); }
  std::size_t off_n1_minus() const { return off_n1_c2() + c2.size(); }

  DiscreteRep pi(const TokenRegistry& reg) const {
    DiscreteRep r;
    for (const auto& b : plus) r.side_n.push_back(b);
    for (int i : not_I2()) r.side_n.push_back(dual(reg, derivative(two[i])));
    for (const auto& b : one) r.side_n.push_back(b);
    for (const auto& b : c1) r.side_n.push_back(b);
    for (const auto& b : minus) r.side_n.push_back(b);
    for (const auto& b : plus) r.side_n1.push_back(dual(reg, b));
    for (int i : not_I1()) r.side_n1.push_back(dual(reg, derivative(one[i])));
    for (const auto& b : two) r.side_n1.push_back(b);
    for (const auto& b : c2) r.side_n1.push_back(b);
    for (const auto& b : minus) r.side_n1.push_back(dual(reg, b));
    return r;
  }
  std::pair<Composition, Composition> P(const TokenRegistry& reg) const {
    auto r = pi(reg);
    return {composition_of(r.side_n), composition_of(r.side_n1)};
  }
  friend bool operator==(const IncreasingDatum&, const IncreasingDatum&) = default;
  friend auto operator<=>(const IncreasingDatum&, const IncreasingDatum&) = default;

  std::string str() const {
    auto zs = [](const std::vector<SpehBlock>& z) {
      std::string s = "[";
      for (std::size_t i = 0; i < z.size(); ++i) s += (i ? "," : "") + z[i].str();
      return s + "]";
    };
    auto is = [](const std::vector<int>& v) {
      std::string s = "{";
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i] + 1);
      return s + "}";
    };
    return "+" + zs(plus) + " 1" + zs(one) + " c1" + zs(c1) + " 2" + zs(two) + " c2" + zs(c2) + " -" + zs(minus) +
           " I1=" + is(I1) + " I2=" + is(I2);
  }
};

inline int side_n_size(const IncreasingDatum& d) {
  int s = zone_size(d.plus) + zone_size(d.one) + zone_size(d.c1) + zone_size(d.minus);
  for (int i : d.not_I2()) s += derivative(d.two[i]).size();
  return s;
}
inline int side_n1_size(const IncreasingDatum& d) {
  int s = zone_size(d.plus) + zone_size(d.two) + zone_size(d.c2) + zone_size(d.minus);
  for (int i : d.not_I1()) s += derivative(d.one[i]).size();
  return s;
}

inline Validation validate_increasing(const IncreasingDatum& d, const TokenRegistry& reg) {
  for (const auto* z : {&d.plus, &d.minus})
    for (const auto& b : *z)
      if (b.degenerate()) return Validation::fail("+/- zone blocks must be non-degenerate");
  for (const auto* z : {&d.one, &d.two}) {
    for (std::size_t i = 0; i < z->size(); ++i) {
      if ((*z)[i].d < 2) return Validation::fail("zone 1/2 blocks must have d >= 2");
      if (i && (*z)[i].d > (*z)[i - 1].d) return Validation::fail("zone 1/2 blocks must have non-increasing d");
    }
  }
  for (const auto* z : {&d.c1, &d.c2})
    for (const auto& b : *z)
      if (b.d != 1) return Validation::fail("c-zone blocks must be cuspidal");
  if (d.I1.size() != d.I2.size()) return Validation::fail("|I1| must equal |I2|");
  for (const auto& [idx, lim] : {std::pair{&d.I1, d.one.size()}, std::pair{&d.I2, d.two.size()}}) {
    for (std::size_t k = 0; k < idx->size(); ++k) {
      if ((*idx)[k] < 0 || (*idx)[k] >= static_cast<int>(lim)) return Validation::fail("I1/I2 index out of range");
      if (k && (*idx)[k] <= (*idx)[k - 1]) return Validation::fail("I1/I2 must be strictly increasing");
    }
  }
  for (std::size_t j = 0; j < d.I1.size(); ++j)
    if (d.one[d.I1[j]] != dual(reg, d.two[d.I2[j]])) return Validation::fail("matched blocks are not dual");
  if (side_n1_size(d) != side_n_size(d) + 1) return Validation::fail("side sizes must be (n, n+1)");
  return {};
}

// Ambient a_P coordinates: side n blocks (m_n), then side n+1 blocks (m_n1).
inline AffineSubspace a_pi_up_subspace(const IncreasingDatum& d) {
  const std::size_t mn = d.m_n(), dim = mn + d.m_n1();
  auto x = [&](std::size_t k) { return AffineForm::coord(dim, k); };
  auto y = [&](std::size_t k) { return AffineForm::coord(dim, mn + k); };
  std::vector<AffineForm> eqs;
  for (std::size_t i = 0; i < d.plus.size(); ++i) eqs.push_back(x(i) + y(i));
  auto n1 = d.not_I1(), n2 = d.not_I2();
  for (std::size_t p = 0; p < n1.size(); ++p) eqs.push_back(x(d.off_n_one() + n1[p]) + y(d.off_n1_P1() + p));
  for (std::size_t p = 0; p < n2.size(); ++p) eqs.push_back(x(d.off_n_P2() + p) + y(d.off_n1_two() + n2[p]));
  for (std::size_t j = 0; j < d.I1.size(); ++j) eqs.push_back(x(d.off_n_one() + d.I1[j]) + y(d.off_n1_two() + d.I2[j]));
  for (std::size_t i = 0; i < d.minus.size(); ++i) eqs.push_back(x(d.off_n_minus() + i) + y(d.off_n1_minus() + i));
  return solve_affine(eqs, dim);
}

inline CoordVector rho_pi(const IncreasingDatum& d) {
  const std::size_t mn = d.m_n();
  CoordVector r(mn + d.m_n1(), Rat(0));
  for (std::size_t i = 0; i < d.plus.size(); ++i) r[i] = r[mn + i] = Rat(1, 4);
  for (std::size_t i = 0; i < d.minus.size(); ++i) r[d.off_n_minus() + i] = r[mn + d.off_n1_minus() + i] = Rat(-1, 4);
  return r;
}

inline CoordVector rho_pi_up(const IncreasingDatum& d) {
  const std::size_t mn = d.m_n();
  CoordVector r(mn + d.m_n1(), Rat(0));
  for (std::size_t p = 0; p < d.not_I2().size(); ++p) r[d.off_n_P2() + p] = Rat(1, 4);
  for (std::size_t i = 0; i < d.one.size(); ++i) r[d.off_n_one() + i] = Rat(-1, 4);
  for (std::size_t p = 0; p < d.not_I1().size(); ++p) r[mn + d.off_n1_P1() + p] = Rat(1, 4);
  for (std::size_t i = 0; i < d.two.size(); ++i) r[mn + d.off_n1_two() + i] = Rat(-1, 4);
  return r;
}

inline CoordVector operator+(const CoordVector& a, const CoordVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("CoordVector: size mismatch");
  CoordVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}
inline CoordVector operator-(const CoordVector& a) {
  CoordVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

// Linear map on a_P coordinates induced by a pair of block maps (degenerate targets get 0).
inline Matrix block_map_matrix(const BlockMap& bn, const BlockMap& bn1) {
  const std::size_t sn = bn.source_size, dim = sn + bn1.source_size;
  Matrix M;
  for (int s : bn.src) {
    CoordVector row(dim, Rat(0));
    if (s >= 0) row[s] = Rat(1);
    M.push_back(row);
  }
  for (int s : bn1.src) {
    CoordVector row(dim, Rat(0));
    if (s >= 0) row[sn + s] = Rat(1);
    M.push_back(row);
  }
  return M;
}

struct DownwardResult {
  WeylBlockElement w_n, w_n1;  // w^↓ ∈ W(P) on the blocks of P
  BlockMap map_n, map_n1;      // into the Π_H layout of π^↓ (zero blocks inserted)
  RelevantDatum datum;
};

namespace detail {
inline WeylBlockElement weyl_from_order(const std::vector<int>& target_sources) {
  std::vector<int> perm(target_sources.size());
  for (std::size_t t = 0; t < target_sources.size(); ++t) perm[target_sources[t]] = static_cast<int>(t);
  return WeylBlockElement(perm);
}
inline BlockMap block_map(const std::vector<int>& src, std::size_t source_size) {
  BlockMap b;
  b.src = src;
  b.source_size = source_size;
  return b;
}
}  // namespace detail

inline DownwardResult downward_transform(const IncreasingDatum& d) {
  DownwardResult r;
  auto n1 = d.not_I1(), n2 = d.not_I2();
  RelevantDatum& o = r.datum;
  o.plus = d.plus;
  for (int i : n1) o.one.push_back(d.one[i]);
  o.one.insert(o.one.end(), d.c1.begin(), d.c1.end());
  for (int i : n2) o.two.push_back(d.two[i]);
  o.two.insert(o.two.end(), d.c2.begin(), d.c2.end());
  for (int i : d.I1) o.minus.push_back(d.one[i]);
  o.minus.insert(o.minus.end(), d.minus.begin(), d.minus.end());

  // side n: target (+)(1 ∖ I1)(c1)(P2 blocks)(0 for c2)(1 over I1)(−)
  std::vector<int> mapn, wn;
  auto push = [](std::vector<int>& v, std::size_t from, std::size_t count) {
    for (std::size_t k = 0; k < count; ++k) v.push_back(static_cast<int>(from + k));
  };
  push(mapn, 0, d.plus.size());
  for (int i : n1) mapn.push_back(static_cast<int>(d.off_n_one() + i));
  push(mapn, d.off_n_c1(), d.c1.size());
  push(mapn, d.off_n_P2(), n2.size());
  for (std::size_t k = 0; k < d.c2.size(); ++k) mapn.push_back(-1);
  for (int i : d.I1) mapn.push_back(static_cast<int>(d.off_n_one() + i));
  push(mapn, d.off_n_minus(), d.minus.size());
  // side n+1: target (+)(P1 blocks)(0 for c1)(2 ∖ I2)(c2)(2 over I2)(−)
  std::vector<int> mapn1;
  push(mapn1, 0, d.plus.size());
  push(mapn1, d.off_n1_P1(), n1.size());
  for (std::size_t k = 0; k < d.c1.size(); ++k) mapn1.push_back(-1);
  for (int i : n2) mapn1.push_back(static_cast<int>(d.off_n1_two() + i));
  push(mapn1, d.off_n1_c2(), d.c2.size());
  for (int i : d.I2) mapn1.push_back(static_cast<int>(d.off_n1_two() + i));
  push(mapn1, d.off_n1_minus(), d.minus.size());

  r.map_n = detail::block_map(mapn, d.m_n());
  r.map_n1 = detail::block_map(mapn1, d.m_n1());
  auto strip = [](const std::vector<int>& v) {
    std::vector<int> s;
    for (int x : v)
      if (x >= 0) s.push_back(x);
    return s;
  };
  r.w_n = detail::weyl_from_order(strip(mapn));
  r.w_n1 = detail::weyl_from_order(strip(mapn1));
  return r;
}

struct EmptyResult {
  WeylBlockElement w_n, w_n1;
  IncreasingDatum datum;
};

inline EmptyResult empty_transform(const IncreasingDatum& d) {
  EmptyResult r;
  auto n1 = d.not_I1(), n2 = d.not_I2();
  IncreasingDatum& o = r.datum;
  o.plus = d.plus;
  for (int i : n1) o.one.push_back(d.one[i]);
  o.c1 = d.c1;
  for (int i : n2) o.two.push_back(d.two[i]);
  o.c2 = d.c2;
  for (int i : d.I1) o.minus.push_back(d.one[i]);
  o.minus.insert(o.minus.end(), d.minus.begin(), d.minus.end());
  // side n: (+)(P2)(1 ∖ I1)(c1)(1 over I1)(−)
  std::vector<int> tn, tn1;
  auto push = [](std::vector<int>& v, std::size_t from, std::size_t count) {
    for (std::size_t k = 0; k < count; ++k) v.push_back(static_cast<int>(from + k));
  };
  push(tn, 0, d.plus.size());
  push(tn, d.off_n_P2(), n2.size());
  for (int i : n1) tn.push_back(static_cast<int>(d.off_n_one() + i));
  push(tn, d.off_n_c1(), d.c1.size());
  for (int i : d.I1) tn.push_back(static_cast<int>(d.off_n_one() + i));
  push(tn, d.off_n_minus(), d.minus.size());
  // side n+1: (+)(P1)(2 ∖ I2)(c2)(2 over I2)(−)
  push(tn1, 0, d.plus.size());
  push(tn1, d.off_n1_P1(), n1.size());
  for (int i : n2) tn1.push_back(static_cast<int>(d.off_n1_two() + i));
  push(tn1, d.off_n1_c2(), d.c2.size());
  for (int i : d.I2) tn1.push_back(static_cast<int>(d.off_n1_two() + i));
  push(tn1, d.off_n1_minus(), d.minus.size());
  r.w_n = detail::weyl_from_order(tn);
  r.w_n1 = detail::weyl_from_order(tn1);
  return r;
}

// ---------------------------------------------------------------------------------------------
// Shortest block rearrangements (w_+, w^↑) built from labelled sub-blocks.
struct LabelledBlock {
  int label;
  int size;
};

struct SideConstruction {
  Composition P;          // blocks of the datum's parabolic on this side (zeros dropped)
  Composition P_refined;  // P_{π,+} or P_π^↑ (zeros dropped)
  Composition Q;          // w.P_refined
  Composition Q_std;      // standard composition of the RS parabolic on this side
  std::vector<int> w;     // element-level one-line permutation
  bool min_coset = false;
  bool pw_matches = false;
};

// source: P blocks split into labelled sub-blocks; target_groups: Q^std blocks as label sequences.
inline SideConstruction build_side(const std::vector<std::vector<LabelledBlock>>& source,
                                   const std::vector<std::vector<int>>& target_groups) {
  SideConstruction s;
  std::map<int, std::pair<int, int>> where;  // label -> (start, size)
  int pos = 0;
  for (const auto& blk : source) {
    int bs = 0;
    for (const auto& sb : blk) {
      where[sb.label] = {pos, sb.size};
      if (sb.size > 0) s.P_refined.parts.push_back(sb.size);
      pos += sb.size;
      bs += sb.size;
    }
    if (bs > 0) s.P.parts.push_back(bs);
  }
  s.w.assign(pos, -1);
  int tpos = 0;
  for (const auto& grp : target_groups) {
    int gs = 0;
    for (int lab : grp) {
      auto it = where.find(lab);
      if (it == where.end()) throw std::logic_error("build_side: unknown label");
      auto [start, size] = it->second;
      for (int e = 0; e < size; ++e) s.w[start + e] = tpos++;
      if (size > 0) s.Q.parts.push_back(size);
      gs += size;
    }
    if (gs > 0) s.Q_std.parts.push_back(gs);
  }
  if (tpos != pos || std::find(s.w.begin(), s.w.end(), -1) != s.w.end())
    throw std::logic_error("build_side: target does not cover the source");
  s.min_coset = is_min_coset(s.w, s.P, s.Q_std);
  auto pw = compute_Pw(s.w, s.P, s.Q_std);
  s.pw_matches = pw && *pw == s.P_refined;
  return s;
}

struct IncreasingConstruction {
  SideConstruction side_n, side_n1;
  RSParabolic parabolic;  // P_+ or P^↑
  std::vector<std::vector<LabelledBlock>> source_n, source_n1;
  std::vector<int> target_n, target_n1;  // labels in target order
  bool consistent = false;               // RS parabolic matches both Q^std sides
};

namespace detail {
enum : int { kPlus = 0, kA1 = 1, kR1 = 2, kB1 = 3, kA2 = 4, kR2 = 5, kB2 = 6, kC1 = 7, kC2 = 8, kMinus = 9 };
inline int label(int kind, int i) { return kind * 1000 + i; }

inline IncreasingConstruction finish(IncreasingConstruction c, const std::vector<std::vector<int>>& gn,
                                     const std::vector<std::vector<int>>& gn1, const Composition& pstd, int i0) {
  c.side_n = build_side(c.source_n, gn);
  c.side_n1 = build_side(c.source_n1, gn1);
  for (const auto& g : gn) c.target_n.insert(c.target_n.end(), g.begin(), g.end());
  for (const auto& g : gn1) c.target_n1.insert(c.target_n1.end(), g.begin(), g.end());
  c.parabolic = rs_from_pair_dropping_zeros(pstd, i0);
  c.consistent = c.parabolic.p_n == c.side_n.Q_std && c.parabolic.p_n1_std == c.side_n1.Q_std;
  return c;
}
}  // namespace detail

// P_{π,+}, w_+ and P_+ for a relevant datum.
inline IncreasingConstruction increasing_construction(const RelevantDatum& d) {
  using namespace detail;
  IncreasingConstruction c;
  auto sz = [](const SpehBlock& b) { return b.size(); };
  auto szm = [](const SpehBlock& b) { return derivative(b).size(); };
  // side n source: (+)(π1 = A1|R1)(π2^{−,∨} = B2)(−)
  for (std::size_t i = 0; i < d.plus.size(); ++i) c.source_n.push_back({{label(kPlus, i), sz(d.plus[i])}});
  for (std::size_t i = 0; i < d.one.size(); ++i)
    c.source_n.push_back({{label(kA1, i), szm(d.one[i])}, {label(kR1, i), d.one[i].rank}});
  for (std::size_t i = 0; i < d.two.size(); ++i) c.source_n.push_back({{label(kB2, i), szm(d.two[i])}});
  for (std::size_t i = 0; i < d.minus.size(); ++i) c.source_n.push_back({{label(kMinus, i), sz(d.minus[i])}});
  // side n+1 source: (+)(π1^{−,∨} = B1)(π2 = A2|R2)(−)
  for (std::size_t i = 0; i < d.plus.size(); ++i) c.source_n1.push_back({{label(kPlus, i), sz(d.plus[i])}});
  for (std::size_t i = 0; i < d.one.size(); ++i) c.source_n1.push_back({{label(kB1, i), szm(d.one[i])}});
  for (std::size_t i = 0; i < d.two.size(); ++i)
    c.source_n1.push_back({{label(kA2, i), szm(d.two[i])}, {label(kR2, i), d.two[i].rank}});
  for (std::size_t i = 0; i < d.minus.size(); ++i) c.source_n1.push_back({{label(kMinus, i), sz(d.minus[i])}});

  std::vector<std::vector<int>> gn, gn1;
  Composition pstd;
  for (std::size_t i = 0; i < d.plus.size(); ++i) {
    gn.push_back({label(kPlus, i)});
    gn1.push_back({label(kPlus, i)});
    pstd.parts.push_back(sz(d.plus[i]));
  }
  for (std::size_t i = 0; i < d.one.size(); ++i) {
    gn.push_back({label(kA1, i)});
    gn1.push_back({label(kB1, i)});
    pstd.parts.push_back(szm(d.one[i]));
  }
  for (std::size_t i = 0; i < d.two.size(); ++i) {
    gn.push_back({label(kB2, i)});
    gn1.push_back({label(kA2, i)});
    pstd.parts.push_back(szm(d.two[i]));
  }
  std::vector<int> kn, kn1;
  int k1 = 0;
  for (std::size_t i = 0; i < d.one.size(); ++i) kn.push_back(label(kR1, i));
  for (std::size_t i = 0; i < d.two.size(); ++i) { kn1.push_back(label(kR2, i)); k1 += d.two[i].rank; }
  gn.push_back(kn);
  gn1.push_back(kn1);
  int i0 = static_cast<int>(pstd.size());
  pstd.parts.push_back(k1);
  for (std::size_t i = 0; i < d.minus.size(); ++i) {
    gn.push_back({label(kMinus, i)});
    gn1.push_back({label(kMinus, i)});
    pstd.parts.push_back(sz(d.minus[i]));
  }
  return finish(c, gn, gn1, pstd, i0);
}

// P_π^↑, w^↑ and P^↑ for an increasing datum.
inline IncreasingConstruction increasing_construction(const IncreasingDatum& d) {
  using namespace detail;
  IncreasingConstruction c;
  auto sz = [](const SpehBlock& b) { return b.size(); };
  auto szm = [](const SpehBlock& b) { return derivative(b).size(); };
  auto n1 = d.not_I1(), n2 = d.not_I2();
  // side n source: (+)(P2 = B2, i ∉ I2)(π1 = A1|R1)(c1)(−)
  for (std::size_t i = 0; i < d.plus.size(); ++i) c.source_n.push_back({{label(kPlus, i), sz(d.plus[i])}});
  for (int i : n2) c.source_n.push_back({{label(kB2, i), szm(d.two[i])}});
  for (std::size_t i = 0; i < d.one.size(); ++i)
    c.source_n.push_back({{label(kA1, i), szm(d.one[i])}, {label(kR1, i), d.one[i].rank}});
  for (std::size_t i = 0; i < d.c1.size(); ++i) c.source_n.push_back({{label(kC1, i), sz(d.c1[i])}});
  for (std::size_t i = 0; i < d.minus.size(); ++i) c.source_n.push_back({{label(kMinus, i), sz(d.minus[i])}});
  // side n+1 source: (+)(P1 = B1, i ∉ I1)(π2 = A2|R2)(c2)(−)
  for (std::size_t i = 0; i < d.plus.size(); ++i) c.source_n1.push_back({{label(kPlus, i), sz(d.plus[i])}});
  for (int i : n1) c.source_n1.push_back({{label(kB1, i), szm(d.one[i])}});
  for (std::size_t i = 0; i < d.two.size(); ++i)
    c.source_n1.push_back({{label(kA2, i), szm(d.two[i])}, {label(kR2, i), d.two[i].rank}});
  for (std::size_t i = 0; i < d.c2.size(); ++i) c.source_n1.push_back({{label(kC2, i), sz(d.c2[i])}});
  for (std::size_t i = 0; i < d.minus.size(); ++i) c.source_n1.push_back({{label(kMinus, i), sz(d.minus[i])}});

  // targets: side n (+)(B2 ∉I2)(A1 ∉I1)(A1 ∈I1)[R1 all, c1](−); side n+1 (+)(A2 ∉I2)(B1 ∉I1)(A2 ∈I2)[R2 all, c2](−)
  std::vector<std::vector<int>> gn, gn1;
  Composition pstd;
  for (std::size_t i = 0; i < d.plus.size(); ++i) {
    gn.push_back({label(kPlus, i)});
    gn1.push_back({label(kPlus, i)});
    pstd.parts.push_back(sz(d.plus[i]));
  }
  for (int i : n2) {
    gn.push_back({label(kB2, i)});
    gn1.push_back({label(kA2, i)});
    pstd.parts.push_back(szm(d.two[i]));
  }
  for (int i : n1) {
    gn.push_back({label(kA1, i)});
    gn1.push_back({label(kB1, i)});
    pstd.parts.push_back(szm(d.one[i]));
  }
  for (std::size_t j = 0; j < d.I1.size(); ++j) {
    gn.push_back({label(kA1, d.I1[j])});
    gn1.push_back({label(kA2, d.I2[j])});
    pstd.parts.push_back(szm(d.two[d.I2[j]]));
  }
  std::vector<int> kn, kn1;
  int k1 = 0;
  for (std::size_t i = 0; i < d.one.size(); ++i) kn.push_back(label(kR1, i));
  for (std::size_t i = 0; i < d.c1.size(); ++i) kn.push_back(label(kC1, i));
  for (std::size_t i = 0; i < d.two.size(); ++i) { kn1.push_back(label(kR2, i)); k1 += d.two[i].rank; }
  for (std::size_t i = 0; i < d.c2.size(); ++i) { kn1.push_back(label(kC2, i)); k1 += d.c2[i].size(); }
  gn.push_back(kn);
  gn1.push_back(kn1);
  int i0 = static_cast<int>(pstd.size());
  pstd.parts.push_back(k1);
  for (std::size_t i = 0; i < d.minus.size(); ++i) {
    gn.push_back({label(kMinus, i)});
    gn1.push_back({label(kMinus, i)});
    pstd.parts.push_back(sz(d.minus[i]));
  }
  return finish(c, gn, gn1, pstd, i0);
}

// ---------------------------------------------------------------------------------------------
// Residue data for cuspidal π on a standard P (iterated residues along Λ_{±,l}).
struct ResidueDatum {
  RSParabolic Q;
  WeylBlockElement w_n, w_n1;
  int sign = 1;
  std::vector<AffineForm> linear_forms;  // Λ_{+,1..m+}, then Λ_{−,1..m−}, on a_P (side n then side n+1)
  std::array<int, 4> I_shape{};          // (Σ n_{i+}, remaining n, remaining n+1, Σ n_{i−})
};

inline ResidueDatum residue_datum(const TokenRegistry& reg, const DiscreteRep& pi,
                                  const std::vector<std::pair<int, int>>& plus_pairs,
                                  const std::vector<std::pair<int, int>>& minus_pairs) {
  const int mn = static_cast<int>(pi.side_n.size()), mn1 = static_cast<int>(pi.side_n1.size());
  for (const auto* side : {&pi.side_n, &pi.side_n1})
    for (const auto& b : *side)
      if (b.d != 1) throw std::invalid_argument("residue_datum: pi must be cuspidal");
  if (pi.size_n1() != pi.size_n() + 1) throw std::invalid_argument("residue_datum: side sizes must be (n, n+1)");
  std::set<int> is, js;
  auto check = [&](const std::pair<int, int>& p) {
    auto [i, j] = p;
    if (i < 0 || i >= mn || j < 0 || j >= mn1) throw std::invalid_argument("residue_datum: index out of range");
    if (!is.insert(i).second) throw std::invalid_argument("residue_datum: side-n indices must be distinct");
    if (!js.insert(j).second) throw std::invalid_argument("residue_datum: side-(n+1) indices must be distinct");
    if (pi.side_n[i] != dual(reg, pi.side_n1[j])) throw std::invalid_argument("residue_datum: matched blocks are not dual");
  };
  for (const auto& p : plus_pairs) check(p);
  for (const auto& p : minus_pairs) check(p);
  const int mp = static_cast<int>(plus_pairs.size()), mm = static_cast<int>(minus_pairs.size());

  ResidueDatum r;
  Composition q;
  int splus = 0, sminus = 0;
  for (const auto& [i, j] : plus_pairs) { q.parts.push_back(pi.side_n[i].size()); splus += pi.side_n[i].size(); }
  for (const auto& [i, j] : minus_pairs) sminus += pi.side_n[i].size();
  int k1 = pi.size_n1() - splus - sminus;
  q.parts.push_back(k1);
  for (int l = mm - 1; l >= 0; --l) q.parts.push_back(pi.side_n[minus_pairs[l].first].size());
  r.Q = rs_from_pair(q, mp);

  auto build = [&](int m, bool first_side) {
    std::vector<int> perm(m, -1);
    for (int l = 0; l < mp; ++l) perm[first_side ? plus_pairs[l].first : plus_pairs[l].second] = l;
    for (int l = 0; l < mm; ++l) perm[first_side ? minus_pairs[l].first : minus_pairs[l].second] = m - l - 1;
    int next = mp;
    for (int k = 0; k < m; ++k)
      if (perm[k] < 0) perm[k] = next++;
    return WeylBlockElement(perm);
  };
  r.w_n = build(mn, true);
  r.w_n1 = build(mn1, false);
  r.sign = mp % 2 ? -1 : 1;
  const std::size_t dim = mn + mn1;
  for (const auto& [i, j] : plus_pairs)
    r.linear_forms.push_back(AffineForm::coord(dim, i) + AffineForm::coord(dim, mn + j) + Rat(1, 2));
  for (const auto& [i, j] : minus_pairs)
    r.linear_forms.push_back(AffineForm::coord(dim, i) + AffineForm::coord(dim, mn + j) - Rat(1, 2));
  r.I_shape = {splus, pi.size_n() - splus - sminus, k1, sminus};
  return r;
}

// ---------------------------------------------------------------------------------------------
// Enumeration of increasing data (zones in normal order, all admissible matchings).
inline std::vector<IncreasingDatum> enumerate_increasing(int n, const TokenRegistry& reg) {
  std::vector<IncreasingDatum> out;
  const auto any = detail::sorted_candidates(reg, n + 1);
  const auto big = detail::sorted_candidates(reg, n + 1, 2);
  const auto cusp = detail::sorted_candidates(reg, n + 1, 1, 1);
  auto same = [](const SpehBlock& b) { return std::pair<int, int>{b.size(), b.size()}; };
  auto onec = [](const SpehBlock& b) { return std::pair<int, int>{b.size(), 0}; };
  auto twoc = [](const SpehBlock& b) { return std::pair<int, int>{0, b.size()}; };
  std::vector<SpehBlock> zp, z1, zc1, z2, zc2, zm;
  detail::enumerate_zone(any, 0, n, n + 1, same, zp, [&](const auto& p, int a, int b) {
    detail::enumerate_zone(big, 0, a, b, onec, z1, [&](const auto& o, int a1, int b1) {
      detail::enumerate_zone(cusp, 0, a1, b1, onec, zc1, [&](const auto& c1, int a2, int b2) {
        detail::enumerate_zone(big, 0, a2, b2, twoc, z2, [&](const auto& t, int a3, int b3) {
          detail::enumerate_zone(cusp, 0, a3, b3, twoc, zc2, [&](const auto& c2, int a4, int b4) {
            detail::enumerate_zone(any, 0, a4, b4, same, zm, [&](const auto& mi, int, int) {
              const int m1 = static_cast<int>(o.size()), m2 = static_cast<int>(t.size());
              for (int s1 = 0; s1 < (1 << m1); ++s1)
                for (int s2 = 0; s2 < (1 << m2); ++s2) {
                  if (__builtin_popcount(s1) != __builtin_popcount(s2)) continue;
                  IncreasingDatum d{p, o, c1, t, c2, mi, {}, {}};
                  for (int i = 0; i < m1; ++i)
                    if (s1 >> i & 1) d.I1.push_back(i);
                  for (int i = 0; i < m2; ++i)
                    if (s2 >> i & 1) d.I2.push_back(i);
                  if (side_n_size(d) != n || side_n1_size(d) != n + 1) continue;
                  if (validate_increasing(d, reg)) out.push_back(d);
                }
            });
          });
        });
      });
    });
  });
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace rankin
