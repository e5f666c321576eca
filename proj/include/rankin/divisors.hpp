#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "rankin/exactlin.hpp"
#include "rankin/relevant.hpp"
#include "rankin/spectra.hpp"

namespace rankin {

struct Unsupported : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Laurent product of normalized affine forms; constant (unit) factors are dropped.
class DivisorPoly {
public:
  DivisorPoly() = default;
  explicit DivisorPoly(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  const std::map<AffineForm, int>& factors() const { return factors_; }
  bool is_one() const { return factors_.empty(); }

  DivisorPoly& mul(const AffineForm& f, int exp = 1) {
    if (f.dim() != dim_) throw std::invalid_argument("DivisorPoly: form dimension mismatch");
    if (f.is_constant()) {
      if (f.constant.is_zero()) throw std::domain_error("DivisorPoly: zero factor");
      return *this;
    }
    auto key = f.normalized();
    int& e = factors_[key];
    e += exp;
    if (e == 0) factors_.erase(key);
    return *this;
  }
  friend DivisorPoly operator*(DivisorPoly a, const DivisorPoly& b) {
    if (a.dim_ != b.dim_) throw std::invalid_argument("DivisorPoly: dimension mismatch");
    for (const auto& [f, e] : b.factors_) a.mul(f, e);
    return a;
  }
  DivisorPoly inverse() const {
    DivisorPoly r(dim_);
    for (const auto& [f, e] : factors_) r.factors_[f] = -e;
    return r;
  }
  friend DivisorPoly operator/(const DivisorPoly& a, const DivisorPoly& b) { return a * b.inverse(); }
  friend bool operator==(const DivisorPoly&, const DivisorPoly&) = default;

  int degree() const {
    int s = 0;
    for (const auto& [f, e] : factors_) s += e;
    return s;
  }
  // a | b: every factor's exponent in a is at most its exponent in b (a polynomial, b arbitrary)
  friend bool divides(const DivisorPoly& a, const DivisorPoly& b) {
    for (const auto& [f, e] : a.factors_) {
      auto it = b.factors_.find(f);
      if (e > (it == b.factors_.end() ? 0 : it->second)) return false;
    }
    return true;
  }
  std::string str() const {
    if (factors_.empty()) return "1";
    std::string s;
    for (const auto& [f, e] : factors_) {
      if (!s.empty()) s += " * ";
      s += "(" + f.str() + ")";
      if (e != 1) s += "^" + std::to_string(e);
    }
    return s;
  }

private:
  std::size_t dim_ = 0;
  std::map<AffineForm, int> factors_;
};

// ---------------------------------------------------------------------------------------------
// Segments

inline bool linked(const Segment& s, const Segment& t) {
  auto a = s.elements(), b = t.elements();
  std::set<Rat> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  auto subset = [](const std::set<Rat>& x, const std::set<Rat>& y) {
    return std::includes(y.begin(), y.end(), x.begin(), x.end());
  };
  if (subset(sa, sb) || subset(sb, sa)) return false;
  std::set<Rat> u = sa;
  u.insert(sb.begin(), sb.end());
  Rat prev;
  bool first = true;
  for (const auto& x : u) {
    if (!first && x - prev != Rat(1)) return false;
    prev = x;
    first = false;
  }
  return true;
}

// Shifts t for which the segment of length di centred at t is linked with the one of length dj at 0.
inline std::vector<Rat> linking_shifts(int di, int dj) {
  std::vector<Rat> out;
  for (int k = -(di + dj); k <= di + dj; ++k) {
    Rat t(k, 2);
    if (linked(Segment{t, di}, Segment{Rat(0), dj})) out.push_back(t);
  }
  return out;
}

inline DivisorPoly linking_locus(std::size_t dim, std::size_t i, std::size_t j, const SpehBlock& bi, const SpehBlock& bj) {
  DivisorPoly p(dim);
  for (const Rat& t : linking_shifts(bi.d, bj.d))
    p.mul(AffineForm::coord(dim, i) - AffineForm::coord(dim, j) - t);
  return p;
}

// ---------------------------------------------------------------------------------------------
// Eisenstein-series divisors.  Block coordinates: side n blocks first, then side n+1 blocks.

inline void L_pi_E_side(DivisorPoly& p, const std::vector<SpehBlock>& side, std::size_t off) {
  for (std::size_t i = 0; i < side.size(); ++i)
    for (std::size_t j = i + 1; j < side.size(); ++j)
      if (!side[i].degenerate() && !side[j].degenerate() && side[i].sigma == side[j].sigma)
        p = p * linking_locus(p.dim(), off + i, off + j, side[i], side[j]);
}

inline DivisorPoly L_pi_E(const std::vector<SpehBlock>& side) {
  DivisorPoly p(side.size());
  L_pi_E_side(p, side, 0);
  return p;
}
inline DivisorPoly L_pi_E(const DiscreteRep& pi) {
  DivisorPoly p(pi.side_n.size() + pi.side_n1.size());
  L_pi_E_side(p, pi.side_n, 0);
  L_pi_E_side(p, pi.side_n1, pi.side_n.size());
  return p;
}

inline void L_pi_0_side(DivisorPoly& p, const std::vector<SpehBlock>& side, std::size_t off) {
  for (std::size_t i = 0; i < side.size(); ++i)
    for (std::size_t j = i + 1; j < side.size(); ++j)
      if (!side[i].degenerate() && side[i] == side[j])
        p.mul(AffineForm::coord(p.dim(), off + i) - AffineForm::coord(p.dim(), off + j));
}

inline DivisorPoly L_pi_0(const std::vector<SpehBlock>& side) {
  DivisorPoly p(side.size());
  L_pi_0_side(p, side, 0);
  return p;
}
inline DivisorPoly L_pi_0(const DiscreteRep& pi) {
  DivisorPoly p(pi.side_n.size() + pi.side_n1.size());
  L_pi_0_side(p, pi.side_n, 0);
  L_pi_0_side(p, pi.side_n1, pi.side_n.size());
  return p;
}

// Coordinates on a_{P_π}: one per cuspidal piece, side n pieces first.
inline std::size_t piece_count(const std::vector<SpehBlock>& side) {
  std::size_t c = 0;
  for (const auto& b : side) c += b.d;
  return c;
}
inline std::vector<std::size_t> piece_offsets(const std::vector<SpehBlock>& side, std::size_t base = 0) {
  std::vector<std::size_t> off;
  for (const auto& b : side) {
    off.push_back(base);
    base += b.d;
  }
  return off;
}

inline void L_pi_res_side(DivisorPoly& p, const std::vector<SpehBlock>& side, std::size_t base) {
  auto off = piece_offsets(side, base);
  for (std::size_t k = 0; k < side.size(); ++k)
    for (int j = 0; j + 1 < side[k].d; ++j)
      p.mul(AffineForm::coord(p.dim(), off[k] + j) - AffineForm::coord(p.dim(), off[k] + j + 1) - Rat(1));
}

inline DivisorPoly L_pi_res(const std::vector<SpehBlock>& side) {
  DivisorPoly p(piece_count(side));
  L_pi_res_side(p, side, 0);
  return p;
}
inline DivisorPoly L_pi_res(const DiscreteRep& pi) {
  const std::size_t pn = piece_count(pi.side_n);
  DivisorPoly p(pn + piece_count(pi.side_n1));
  L_pi_res_side(p, pi.side_n, 0);
  L_pi_res_side(p, pi.side_n1, pn);
  return p;
}

inline bool is_cuspidal(const std::vector<SpehBlock>& side) {
  return std::all_of(side.begin(), side.end(), [](const SpehBlock& b) { return b.d == 1; });
}

// Zeta-integral divisor for cuspidal π on both sides; degenerate padding slots are ignored.
inline DivisorPoly L_pi_Z(const TokenRegistry& reg, const DiscreteRep& pi) {
  auto padded_cuspidal = [](const std::vector<SpehBlock>& side) {
    return std::all_of(side.begin(), side.end(), [](const SpehBlock& b) { return b.d <= 1; });
  };
  if (!padded_cuspidal(pi.side_n) || !padded_cuspidal(pi.side_n1)) throw std::invalid_argument("L_pi_Z: pi must be cuspidal");
  const std::size_t mn = pi.side_n.size(), dim = mn + pi.side_n1.size();
  DivisorPoly p(dim);
  for (std::size_t i = 0; i < mn; ++i)
    for (std::size_t j = 0; j < pi.side_n1.size(); ++j)
      if (!pi.side_n[i].degenerate() && !pi.side_n1[j].degenerate() && pi.side_n[i].sigma == reg.dual(pi.side_n1[j].sigma)) {
        auto f = AffineForm::coord(dim, i) + AffineForm::coord(dim, mn + j);
        p.mul(f + Rat(1, 2)).mul(f - Rat(1, 2));
      }
  for (auto [side, off] : {std::pair{&pi.side_n, std::size_t{0}}, std::pair{&pi.side_n1, mn}})
    for (std::size_t i = 0; i < side->size(); ++i)
      for (std::size_t j = i + 1; j < side->size(); ++j)
        if (!(*side)[i].degenerate() && (*side)[i] == (*side)[j])
          p.mul(AffineForm::coord(dim, off + i) - AffineForm::coord(dim, off + j), -1);
  return p;
}

// Intertwining divisor for cuspidal blocks of one GL factor.
inline DivisorPoly L_pi_w(const std::vector<SpehBlock>& side, const WeylBlockElement& w) {
  if (w.size() != side.size()) throw std::invalid_argument("L_pi_w: size mismatch");
  if (!is_cuspidal(side)) throw Unsupported("L_pi_w: no explicit formula for non-cuspidal blocks and general w");
  DivisorPoly p(side.size());
  for (std::size_t i = 0; i < side.size(); ++i)
    for (std::size_t j = i + 1; j < side.size(); ++j)
      if (w(i) > w(j) && side[i] == side[j])
        p.mul(AffineForm::coord(side.size(), i) - AffineForm::coord(side.size(), j) - Rat(1));
  return p;
}
inline DivisorPoly L_pi_w(const DiscreteRep& pi, const WeylBlockElement& wn, const WeylBlockElement& wn1) {
  const std::size_t mn = pi.side_n.size(), dim = mn + pi.side_n1.size();
  DivisorPoly p(dim);
  auto embed = [&](const DivisorPoly& q, std::size_t off) {
    for (const auto& [f, e] : q.factors()) {
      AffineForm g = AffineForm::zero(dim);
      for (std::size_t k = 0; k < f.dim(); ++k) g.coeffs[off + k] = f.coeffs[k];
      g.constant = f.constant;
      p.mul(g, e);
    }
  };
  embed(L_pi_w(pi.side_n, wn), 0);
  embed(L_pi_w(pi.side_n1, wn1), mn);
  return p;
}

// ---------------------------------------------------------------------------------------------
// Period divisors on a_P coordinates of the datum.

namespace detail {
struct ZoneChart {
  std::size_t dim;
  std::vector<std::size_t> one, two;  // λ(1)_i, λ(2)_j coordinates
};
inline ZoneChart chart(const RelevantDatum& d) {
  ZoneChart c{2 * d.m(), {}, {}};
  for (std::size_t i = 0; i < d.one.size(); ++i) c.one.push_back(d.first_of_zone(1) + i);
  for (std::size_t j = 0; j < d.two.size(); ++j) c.two.push_back(d.m() + d.first_of_zone(2) + j);
  return c;
}
inline ZoneChart chart(const IncreasingDatum& d) {
  const std::size_t mn = d.m_n();
  ZoneChart c{mn + d.m_n1(), {}, {}};
  for (std::size_t i = 0; i < d.one.size(); ++i) c.one.push_back(d.off_n_one() + i);
  for (std::size_t j = 0; j < d.two.size(); ++j) c.two.push_back(mn + d.off_n1_two() + j);
  return c;
}
inline AffineForm x(std::size_t dim, std::size_t k) { return AffineForm::coord(dim, k); }

// the four products shared by L_{π,w_+} and L_{π,w^↑}; `skip1/skip2` exclude indices from the cross products
inline DivisorPoly pole_products(const TokenRegistry& reg, const std::vector<SpehBlock>& one,
                                 const std::vector<SpehBlock>& two, const ZoneChart& c,
                                 const std::vector<int>& skip1, const std::vector<int>& skip2) {
  DivisorPoly p(c.dim);
  for (std::size_t i = 0; i < one.size(); ++i)
    for (std::size_t j = i + 1; j < one.size(); ++j)
      if (one[i] == one[j]) p.mul(x(c.dim, c.one[i]) - x(c.dim, c.one[j]));
  for (std::size_t i = 0; i < two.size(); ++i)
    for (std::size_t j = i + 1; j < two.size(); ++j)
      if (two[i] == two[j]) p.mul(x(c.dim, c.two[i]) - x(c.dim, c.two[j]));
  auto skipped = [](const std::vector<int>& s, std::size_t i) {
    return std::find(s.begin(), s.end(), static_cast<int>(i)) != s.end();
  };
  for (std::size_t i = 0; i < one.size(); ++i)
    for (std::size_t j = 0; j < two.size(); ++j) {
      if (skipped(skip1, i) || skipped(skip2, j)) continue;
      if (one[i] == dual(reg, derivative(two[j])) && two[j].d != 2) p.mul(x(c.dim, c.one[i]) + x(c.dim, c.two[j]));
      if (dual(reg, derivative(one[i])) == two[j] && one[i].d != 2) p.mul(x(c.dim, c.one[i]) + x(c.dim, c.two[j]));
    }
  return p;
}
}  // namespace detail

inline DivisorPoly L_pi_w_plus(const TokenRegistry& reg, const RelevantDatum& d) {
  return detail::pole_products(reg, d.one, d.two, detail::chart(d), {}, {});
}

inline DivisorPoly L_pi_w_up(const TokenRegistry& reg, const IncreasingDatum& d) {
  return detail::pole_products(reg, d.one, d.two, detail::chart(d), d.I1, d.I2);
}

inline DivisorPoly L_pi_P(const TokenRegistry& reg, const RelevantDatum& d) {
  auto c = detail::chart(d);
  DivisorPoly p(c.dim);
  for (std::size_t i = 0; i < d.one.size(); ++i)
    for (std::size_t j = 0; j < d.two.size(); ++j) {
      auto f = detail::x(c.dim, c.one[i]) + detail::x(c.dim, c.two[j]);
      if (d.one[i] == dual(reg, derivative(d.two[j]))) p.mul(f);
      if (dual(reg, derivative(d.one[i])) == d.two[j]) p.mul(f);
    }
  return p;
}

inline DivisorPoly L_pi_P_up(const TokenRegistry& reg, const IncreasingDatum& d) {
  auto c = detail::chart(d);
  const std::size_t mn = d.m_n();
  auto x = [&](std::size_t k) { return detail::x(c.dim, k); };
  auto c1 = [&](std::size_t i) { return x(d.off_n_c1() + i); };
  auto c2 = [&](std::size_t j) { return x(mn + d.off_n1_c2() + j); };
  DivisorPoly p(c.dim);
  for (std::size_t i = 0; i < d.c1.size(); ++i)
    for (std::size_t j = 0; j < d.c2.size(); ++j)
      if (d.c1[i].sigma == reg.dual(d.c2[j].sigma)) {
        p.mul(c1(i) + c2(j) + Rat(1, 2));
        p.mul(c1(i) + c2(j) - Rat(1, 2));
      }
  for (std::size_t i = 0; i < d.c1.size(); ++i)
    for (std::size_t j = 0; j < d.two.size(); ++j)
      if (d.c1[i].sigma == reg.dual(d.two[j].sigma))
        for (int s : {-1, 1}) p.mul(c1(i) + x(c.two[j]) + Rat(d.two[j].d - 1 + s, 2));
  for (std::size_t i = 0; i < d.one.size(); ++i)
    for (std::size_t j = 0; j < d.c2.size(); ++j)
      if (reg.dual(d.one[i].sigma) == d.c2[j].sigma)
        for (int s : {-1, 1}) p.mul(x(c.one[i]) + c2(j) + Rat(d.one[i].d - 1 + s, 2));
  for (int i : d.not_I1())
    for (int j : d.not_I2()) {
      auto f = x(c.one[i]) + x(c.two[j]);
      if (d.one[i] == dual(reg, derivative(d.two[j]))) p.mul(f);
      if (dual(reg, derivative(d.one[i])) == d.two[j]) p.mul(f);
    }
  return p;
}

// ---------------------------------------------------------------------------------------------
// Residue affine-form families on a_{P_π} and the subspaces they cut out.

struct ResidueFamilies {
  std::size_t dim = 0;
  std::vector<AffineForm> L, Lprime;  // unprimed and primed families (± zone families included)
  std::vector<AffineForm> extra;      // target equations on coordinates no family touches
  AffineSubspace target;              // a_π − ν_π − ρ̲_π (− ρ̲_π^↑)
  AffineSubspace solved;              // common zero set of L ∪ L′ ∪ extra
};

namespace detail {

// E: a_P → a_{P_π} replicating each block coordinate to its pieces
inline Matrix replication(const std::vector<SpehBlock>& sn, const std::vector<SpehBlock>& sn1) {
  const std::size_t mn = sn.size(), dim = mn + sn1.size();
  Matrix M;
  auto add = [&](const std::vector<SpehBlock>& side, std::size_t off) {
    for (std::size_t k = 0; k < side.size(); ++k)
      for (int j = 0; j < side[k].d; ++j) {
        CoordVector row(dim, Rat(0));
        row[off + k] = Rat(1);
        M.push_back(row);
      }
  };
  add(sn, 0);
  add(sn1, mn);
  return M;
}

inline CoordVector replicate(const Matrix& E, const CoordVector& v) {
  CoordVector out(E.size(), Rat(0));
  for (std::size_t r = 0; r < E.size(); ++r)
    for (std::size_t c = 0; c < v.size(); ++c)
      if (!E[r][c].is_zero()) out[r] += E[r][c] * v[c];
  return out;
}

inline CoordVector nu_pieces(const DiscreteRep& pi) {
  auto a = cuspidal_support(pi.side_n).nu, b = cuspidal_support(pi.side_n1).nu;
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// ± zone families for one block Speh(σ,d) with pieces starting at pn (side n) and pn1 (side n+1)
inline void pm_families(ResidueFamilies& f, bool plus, int d, std::size_t pn, std::size_t pn1) {
  auto X = [&](int j) { return AffineForm::coord(f.dim, pn + j - 1); };   // λ_{n,j}, 1-based
  auto Y = [&](int j) { return AffineForm::coord(f.dim, pn1 + j - 1); };  // λ_{n+1,j}
  if (plus) {
    for (int j = 1; j <= d; ++j) f.L.push_back(-(X(j) + Y(d - j + 1) + Rat(1, 2)));
    for (int j = 1; j <= d - 1; ++j) f.Lprime.push_back(X(j) + Y(d - j) - Rat(1, 2));
  } else {
    for (int j = 1; j <= d; ++j) f.L.push_back(X(j) + Y(d - j + 1) - Rat(1, 2));
    for (int j = 2; j <= d; ++j) f.Lprime.push_back(-(X(j) + Y(d - j + 2) + Rat(1, 2)));
  }
}

}  // namespace detail

inline ResidueFamilies residue_form_families(const TokenRegistry& reg, const RelevantDatum& d) {
  ResidueFamilies f;
  const auto pi = d.pi(reg);
  const std::size_t pn = piece_count(pi.side_n);
  f.dim = pn + piece_count(pi.side_n1);
  const auto on = piece_offsets(pi.side_n), on1 = piece_offsets(pi.side_n1, pn);
  std::vector<bool> touched(f.dim, false);
  for (int z : {0, 3})
    for (std::size_t i = 0; i < d.zone(z).size(); ++i) {
      std::size_t k = d.first_of_zone(z) + i;
      int dd = d.zone(z)[i].d;
      detail::pm_families(f, z == 0, dd, on[k], on1[k]);
      for (int j = 0; j < dd; ++j) touched[on[k] + j] = touched[on1[k] + j] = true;
    }
  Matrix E = detail::replication(pi.side_n, pi.side_n1);
  CoordVector shift = -(detail::replicate(E, rho_pi(d)) + detail::nu_pieces(pi));
  f.target = a_pi_subspace(d, reg).image(E, shift);
  for (const auto& eq : f.target.equations()) {
    bool free_of_pm = true;
    for (std::size_t c = 0; c < f.dim; ++c)
      if (touched[c] && !eq.coeffs[c].is_zero()) free_of_pm = false;
    if (free_of_pm) f.extra.push_back(eq);
  }
  auto all = f.L;
  all.insert(all.end(), f.Lprime.begin(), f.Lprime.end());
  all.insert(all.end(), f.extra.begin(), f.extra.end());
  f.solved = solve_affine(all, f.dim);
  return f;
}

// Alternative expressions of each ℒ′ form, valid on the zero set of ℒ: {primary, via side n, via side n+1}.
struct PrimedAlternative {
  AffineForm primary, via_n, via_n1;
};

inline std::vector<PrimedAlternative> primed_alternatives(const TokenRegistry& reg, const RelevantDatum& d) {
  const auto pi = d.pi(reg);
  const std::size_t pn = piece_count(pi.side_n), dim = pn + piece_count(pi.side_n1);
  const auto on = piece_offsets(pi.side_n), on1 = piece_offsets(pi.side_n1, pn);
  std::vector<PrimedAlternative> out;
  for (int z : {0, 3})
    for (std::size_t i = 0; i < d.zone(z).size(); ++i) {
      std::size_t k = d.first_of_zone(z) + i;
      const int dd = d.zone(z)[i].d;
      auto X = [&](int j) { return AffineForm::coord(dim, on[k] + j - 1); };
      auto Y = [&](int j) { return AffineForm::coord(dim, on1[k] + j - 1); };
      if (z == 0)
        for (int j = 1; j <= dd - 1; ++j)
          out.push_back({X(j) + Y(dd - j) - Rat(1, 2), X(j) - X(j + 1) - Rat(1), Y(dd - j) - Y(dd - j + 1) - Rat(1)});
      else
        for (int j = 2; j <= dd; ++j)
          out.push_back({-(X(j) + Y(dd - j + 2) + Rat(1, 2)), X(j - 1) - X(j) - Rat(1),
                         Y(dd - j + 1) - Y(dd - j + 2) - Rat(1)});
    }
  return out;
}

inline ResidueFamilies residue_form_families(const TokenRegistry& reg, const IncreasingDatum& d) {
  ResidueFamilies f;
  const auto pi = d.pi(reg);
  const std::size_t pn = piece_count(pi.side_n);
  f.dim = pn + piece_count(pi.side_n1);
  const auto on = piece_offsets(pi.side_n), on1 = piece_offsets(pi.side_n1, pn);
  auto X = [&](std::size_t blk, int j) { return AffineForm::coord(f.dim, on[blk] + j - 1); };
  auto Y = [&](std::size_t blk, int j) { return AffineForm::coord(f.dim, on1[blk] + j - 1); };
  // ± zones, same layout position on both sides
  for (std::size_t i = 0; i < d.plus.size(); ++i) detail::pm_families(f, true, d.plus[i].d, on[i], on1[i]);
  for (std::size_t i = 0; i < d.minus.size(); ++i)
    detail::pm_families(f, false, d.minus[i].d, on[d.off_n_minus() + i], on1[d.off_n1_minus() + i]);
  auto n1 = d.not_I1(), n2 = d.not_I2();
  // zone 1, i ∉ I1: side n block one_i, side n+1 block P1
  for (std::size_t p = 0; p < n1.size(); ++p) {
    const int i = n1[p], dd = d.one[i].d;
    std::size_t bn = d.off_n_one() + i, bn1 = d.off_n1_P1() + p;
    for (int j = 1; j <= dd - 1; ++j) f.L.push_back(-(X(bn, dd - j + 1) + Y(bn1, j) + Rat(1, 2)));
    for (int j = 1; j <= dd - 1; ++j) f.L.push_back(X(bn, dd - j) + Y(bn1, j) - Rat(1, 2));
  }
  // zone 2, i ∉ I2: side n block P2, side n+1 block two_i
  for (std::size_t p = 0; p < n2.size(); ++p) {
    const int i = n2[p], dd = d.two[i].d;
    std::size_t bn = d.off_n_P2() + p, bn1 = d.off_n1_two() + i;
    for (int j = 1; j <= dd - 1; ++j) f.L.push_back(-(X(bn, j) + Y(bn1, dd - j + 1) + Rat(1, 2)));
    for (int j = 1; j <= dd - 1; ++j) f.L.push_back(X(bn, j) + Y(bn1, dd - j) - Rat(1, 2));
  }
  // matched pairs
  for (std::size_t t = 0; t < d.I1.size(); ++t) {
    std::size_t bn = d.off_n_one() + d.I1[t], bn1 = d.off_n1_two() + d.I2[t];
    const int d1 = d.one[d.I1[t]].d, d2 = d.two[d.I2[t]].d;
    for (int j = 2; j <= d1; ++j) f.Lprime.push_back(-(X(bn, j) + Y(bn1, d2 - j + 2) + Rat(1, 2)));
    for (int j = 1; j <= d1; ++j) f.Lprime.push_back(X(bn, j) + Y(bn1, d2 - j + 1) - Rat(1, 2));
  }
  Matrix E = detail::replication(pi.side_n, pi.side_n1);
  CoordVector shift = -(detail::replicate(E, rho_pi(d) + rho_pi_up(d)) + detail::nu_pieces(pi));
  f.target = a_pi_up_subspace(d).image(E, shift);
  auto all = f.L;
  all.insert(all.end(), f.Lprime.begin(), f.Lprime.end());
  f.solved = solve_affine(all, f.dim);
  return f;
}

}  // namespace rankin
