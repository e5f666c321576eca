#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "rankin/divisors.hpp"
#include "rankin/exactlin.hpp"
#include "rankin/spectra.hpp"

namespace rankin {

// L(arg, σ_left × σ_right^∨).  The argument is kept exactly as written (no rescaling).
struct LToken {
  std::string left, right;
  AffineForm arg;

  bool has_poles() const { return left == right; }
  friend bool operator==(const LToken&, const LToken&) = default;
  friend auto operator<=>(const LToken& a, const LToken& b) {
    return std::tie(a.arg, a.left, a.right) <=> std::tie(b.arg, b.left, b.right);
  }
  std::string str() const { return "L(" + arg.str() + ", " + left + " x " + right + "^v)"; }
};

class LTermProduct {
public:
  LTermProduct() = default;
  const std::map<LToken, int>& terms() const { return terms_; }
  bool is_one() const { return terms_.empty(); }

  LTermProduct& mul(const LToken& t, int exp = 1) {
    int& e = terms_[t];
    e += exp;
    if (e == 0) terms_.erase(t);
    return *this;
  }
  friend LTermProduct operator*(LTermProduct a, const LTermProduct& b) {
    for (const auto& [t, e] : b.terms_) a.mul(t, e);
    return a;
  }
  LTermProduct inverse() const {
    LTermProduct r;
    for (const auto& [t, e] : terms_) r.terms_[t] = -e;
    return r;
  }
  friend LTermProduct operator/(const LTermProduct& a, const LTermProduct& b) { return a * b.inverse(); }
  friend bool operator==(const LTermProduct&, const LTermProduct&) = default;

  std::size_t token_count() const {
    std::size_t c = 0;
    for (const auto& [t, e] : terms_) c += static_cast<std::size_t>(e > 0 ? e : -e);
    return c;
  }
  std::string str() const {
    if (terms_.empty()) return "1";
    std::string s;
    for (const auto& [t, e] : terms_) {
      if (!s.empty()) s += " * ";
      s += t.str();
      if (e != 1) s += "^" + std::to_string(e);
    }
    return s;
  }

private:
  std::map<LToken, int> terms_;
};

// Canonical representative under L(s,σ1×σ2^∨) ~ L(1−s,σ1^∨×σ2) (ε-factors dropped) and the symmetry
// L(s,π×π′) = L(s,π′×π).  Pole data is invariant under both.
inline LToken canonical_token(const TokenRegistry& reg, const LToken& t) {
  auto one_minus = [](const AffineForm& a) { return Rat(-1) * a + Rat(1); };
  const std::string &l = t.left, &r = t.right, &lv = reg.dual(t.left), &rv = reg.dual(t.right);
  std::vector<LToken> reps{{l, r, t.arg}, {rv, lv, t.arg}, {lv, rv, one_minus(t.arg)}, {r, l, one_minus(t.arg)}};
  auto positive = [](const LToken& x) {
    for (const auto& c : x.arg.coeffs)
      if (!c.is_zero()) return c.sign() > 0;
    return true;
  };
  std::optional<LToken> best;
  for (const auto& x : reps)
    if (positive(x) && (!best || x < *best)) best = x;
  return *best;
}

inline LTermProduct canonical(const TokenRegistry& reg, const LTermProduct& p) {
  LTermProduct out;
  for (const auto& [t, e] : p.terms()) out.mul(canonical_token(reg, t), e);
  return out;
}

// ---------------------------------------------------------------------------------------------
// Scalar factors n_π(w, λ) for blocks of one GL factor.  `coord[i]` is the expression of λ_i.

inline LTermProduct n_factor_at(const TokenRegistry& reg, const std::vector<SpehBlock>& blocks,
                                const std::vector<AffineForm>& coord, const WeylBlockElement& w) {
  if (blocks.size() != w.size() || coord.size() != blocks.size()) throw std::invalid_argument("n_factor: size mismatch");
  LTermProduct p;
  for (std::size_t i = 0; i < blocks.size(); ++i)
    for (std::size_t j = i + 1; j < blocks.size(); ++j) {
      if (w(i) < w(j) || blocks[i].degenerate() || blocks[j].degenerate()) continue;
      const auto& a = blocks[i];
      const auto& b = blocks[j];
      AffineForm s = coord[i] - coord[j];
      // L(1−s, π_i^∨ × π_j) / L(1+s, π_i × π_j^∨), expanded to cuspidal tokens
      for (const auto& term : discrete_L_expand(dual(reg, a), b))
        p.mul({term.left, reg.dual(term.right), Rat(-1) * s + (Rat(1) + term.shift)}, 1);
      for (const auto& term : discrete_L_expand(a, dual(reg, b)))
        p.mul({term.left, reg.dual(term.right), s + (Rat(1) + term.shift)}, -1);
    }
  return p;
}

inline std::vector<AffineForm> block_coordinates(std::size_t m) {
  std::vector<AffineForm> c;
  for (std::size_t i = 0; i < m; ++i) c.push_back(AffineForm::coord(m, i));
  return c;
}

inline LTermProduct n_factor(const TokenRegistry& reg, const std::vector<SpehBlock>& blocks, const WeylBlockElement& w) {
  return n_factor_at(reg, blocks, block_coordinates(blocks.size()), w);
}

// Lift of a block permutation to the cuspidal pieces (order kept inside each block).
inline WeylBlockElement lift_to_pieces(const std::vector<SpehBlock>& blocks, const WeylBlockElement& w) {
  std::vector<int> new_start(blocks.size());
  std::vector<int> size_at(blocks.size());
  for (std::size_t i = 0; i < blocks.size(); ++i) size_at[w(i)] = blocks[i].d;
  for (std::size_t p = 0, acc = 0; p < blocks.size(); ++p) {
    new_start[p] = static_cast<int>(acc);
    acc += size_at[p];
  }
  std::vector<int> perm;
  for (std::size_t i = 0; i < blocks.size(); ++i)
    for (int a = 0; a < blocks[i].d; ++a) perm.push_back(new_start[w(i)] + a);
  return WeylBlockElement(perm);
}

// n_{σ_π}(w̃, λ + ν_π) with λ in block coordinates and w̃ the lift of w.
inline LTermProduct n_factor_cuspidal(const TokenRegistry& reg, const std::vector<SpehBlock>& blocks,
                                      const WeylBlockElement& w) {
  const std::size_t m = blocks.size();
  std::vector<SpehBlock> pieces;
  std::vector<AffineForm> coord;
  for (std::size_t i = 0; i < m; ++i)
    for (int a = 1; a <= blocks[i].d; ++a) {
      pieces.push_back({blocks[i].sigma, blocks[i].rank, 1});
      coord.push_back(AffineForm::coord(m, i) + Rat(2 * a - 1 - blocks[i].d, 2));
    }
  return n_factor_at(reg, pieces, coord, lift_to_pieces(blocks, w));
}

// ---------------------------------------------------------------------------------------------
// The two displays of n_{i,j}.  `before[a][b]` (0-based) says piece b of block j is sent before piece a of block i.

enum class NijVariant { A, B };

inline LTermProduct nij_expand(const SpehBlock& bi, const SpehBlock& bj, const std::vector<std::vector<bool>>& before,
                               const AffineForm& s, NijVariant variant) {
  const int di = bi.d, dj = bj.d;
  const Rat c = Rat(dj - di, 2);
  auto tok = [&](const Rat& k) { return LToken{bi.sigma, bj.sigma, s + (c + k)}; };
  LTermProduct p;
  if (variant == NijVariant::A) {
    for (int a = 1; a <= di; ++a) {
      int ba = 0;
      for (int b = 1; b <= dj; ++b)
        if (before[a - 1][b - 1]) ba = b;
      for (int b = 1; b <= ba; ++b) {
        p.mul(tok(Rat(a - b)), 1);
        p.mul(tok(Rat(a - (b - 1))), -1);
      }
    }
  } else {
    for (int b = 1; b <= dj; ++b) {
      int ab = di + 1;
      for (int a = di; a >= 1; --a)
        if (before[a - 1][b - 1]) ab = a;
      for (int a = ab; a <= di; ++a) {
        p.mul(tok(Rat(a - b)), 1);
        p.mul(tok(Rat(a + 1 - b)), -1);
      }
    }
  }
  return p;
}

// Inversion pattern of a shuffle: `order` lists, in target order, 0 for a piece of block i and 1 for block j.
inline std::vector<std::vector<bool>> shuffle_pattern(int di, int dj, const std::vector<int>& order) {
  std::vector<int> pos_i, pos_j;
  for (std::size_t k = 0; k < order.size(); ++k) (order[k] == 0 ? pos_i : pos_j).push_back(static_cast<int>(k));
  if (static_cast<int>(pos_i.size()) != di || static_cast<int>(pos_j.size()) != dj)
    throw std::invalid_argument("shuffle_pattern: wrong piece counts");
  std::vector<std::vector<bool>> before(di, std::vector<bool>(dj, false));
  for (int a = 0; a < di; ++a)
    for (int b = 0; b < dj; ++b) before[a][b] = pos_j[b] < pos_i[a];
  return before;
}

inline std::vector<std::vector<int>> all_shuffles(int di, int dj) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int a, int b) -> void {
    if (a == 0 && b == 0) {
      out.push_back(cur);
      return;
    }
    if (a > 0) { cur.push_back(0); self(self, a - 1, b); cur.pop_back(); }
    if (b > 0) { cur.push_back(1); self(self, a, b - 1); cur.pop_back(); }
  };
  rec(rec, di, dj);
  return out;
}

// ---------------------------------------------------------------------------------------------
// Pole orders contributed by the declared poles of L(s, σ × σ^∨) at s ∈ {0, 1}; zeros are not modelled.

inline int pole_order_at(const LTermProduct& p, const CoordVector& point) {
  int order = 0;
  for (const auto& [t, e] : p.terms()) {
    if (!t.has_poles()) continue;
    Rat v = t.arg.eval(point);
    if (v == Rat(0) || v == Rat(1)) order -= e;
  }
  return order;
}

// Order at a point in general position of an affine subspace.
inline int pole_order_along(const LTermProduct& p, const AffineSubspace& H) {
  int order = 0;
  for (const auto& [t, e] : p.terms()) {
    if (!t.has_poles()) continue;
    if (H.annihilated_by(t.arg) || H.annihilated_by(t.arg - Rat(1))) order -= e;
  }
  return order;
}

struct MzerosReport {
  int d = 0;
  int numerator_poles = 0;
  int denominator_poles = 0;
  int order = 0;
  bool regular = false;
};

// π = π1 ⊠ π1 with w = (1 2): the scalar factor has no pole along λ1 = λ2.
inline MzerosReport mzeros_regularity(const TokenRegistry& reg, const SpehBlock& b) {
  auto p = n_factor(reg, {b, b}, WeylBlockElement({1, 0}));
  auto H = solve_affine({AffineForm::coord(2, 0) - AffineForm::coord(2, 1)}, 2);
  MzerosReport r;
  r.d = b.d;
  for (const auto& [t, e] : p.terms()) {
    if (!t.has_poles()) continue;
    if (H.annihilated_by(t.arg) || H.annihilated_by(t.arg - Rat(1))) (e > 0 ? r.numerator_poles : r.denominator_poles) += e > 0 ? e : -e;
  }
  r.order = pole_order_along(p, H);
  r.regular = r.order == 0;
  return r;
}

}  // namespace rankin
