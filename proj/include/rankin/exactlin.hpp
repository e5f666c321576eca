#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rankin/rat.hpp"

// Indices are 0-based throughout the C++ API; JSON and the CLI use 1-based.
namespace rankin {

struct DegenerateBlock : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Ordered block sizes; zero parts are degenerate GL(0) blocks and keep their index.
struct Composition {
  std::vector<int> parts;

  Composition() = default;
  Composition(std::vector<int> p) : parts(std::move(p)) {}
  Composition(std::initializer_list<int> p) : parts(p) {}

  int total() const { return std::accumulate(parts.begin(), parts.end(), 0); }
  std::size_t size() const { return parts.size(); }
  int operator[](std::size_t i) const { return parts[i]; }
  bool degenerate() const { return std::find(parts.begin(), parts.end(), 0) != parts.end(); }
  Composition without_zeros() const {
    Composition c;
    for (int p : parts)
      if (p != 0) c.parts.push_back(p);
    return c;
  }
  // start offset of block i
  int offset(std::size_t i) const { return std::accumulate(parts.begin(), parts.begin() + i, 0); }
  friend auto operator<=>(const Composition&, const Composition&) = default;
  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + std::to_string(parts[i]);
    return s + ")";
  }
};

// Compositions of n with positive parts, in descending lexicographic order: (3),(2,1),(1,2),(1,1,1).
inline std::vector<Composition> enumerate_compositions(int n) {
  if (n < 0) throw std::invalid_argument("enumerate_compositions: negative total");
  std::vector<Composition> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int rest) -> void {
    if (rest == 0) { out.emplace_back(cur); return; }
    for (int p = rest; p >= 1; --p) {
      cur.push_back(p);
      self(self, rest - p);
      cur.pop_back();
    }
  };
  rec(rec, n);
  return out;
}

inline CoordVector rho_of_parabolic(const Composition& c) {
  if (c.degenerate()) throw DegenerateBlock("rho_of_parabolic: zero block");
  int total = c.total();
  CoordVector rho;
  int before = 0;
  for (int p : c.parts) {
    rho.push_back(Rat(total - before - p - before, 2));
    before += p;
  }
  return rho;
}

inline Rat pair_with_coroot(const CoordVector& lambda, std::size_t i, std::size_t j) {
  if (i >= lambda.size() || j >= lambda.size() || i == j) throw std::out_of_range("pair_with_coroot: bad index");
  return lambda[i] - lambda[j];
}

// Block permutation: perm[i] is the position that block i moves to.
struct WeylBlockElement {
  std::vector<int> perm;

  WeylBlockElement() = default;
  explicit WeylBlockElement(std::vector<int> p) : perm(std::move(p)) {
    std::vector<int> s = perm;
    std::sort(s.begin(), s.end());
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s[i] != static_cast<int>(i)) throw std::invalid_argument("WeylBlockElement: not a permutation");
  }
  static WeylBlockElement identity(std::size_t m) {
    std::vector<int> p(m);
    std::iota(p.begin(), p.end(), 0);
    return WeylBlockElement(p);
  }
  // cycles in 1-based notation, e.g. {{1,2,3}} sends 1->2->3->1
  static WeylBlockElement from_cycles(std::size_t m, const std::vector<std::vector<int>>& cycles) {
    auto w = identity(m);
    for (const auto& c : cycles)
      for (std::size_t k = 0; k < c.size(); ++k) w.perm.at(c[k] - 1) = c[(k + 1) % c.size()] - 1;
    return WeylBlockElement(w.perm);
  }
  std::size_t size() const { return perm.size(); }
  int operator()(int i) const { return perm[i]; }
  bool is_identity() const {
    for (std::size_t i = 0; i < perm.size(); ++i)
      if (perm[i] != static_cast<int>(i)) return false;
    return true;
  }
  WeylBlockElement inverse() const {
    std::vector<int> q(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) q[perm[i]] = static_cast<int>(i);
    return WeylBlockElement(q);
  }
  // (a*b)(i) = a(b(i))
  friend WeylBlockElement operator*(const WeylBlockElement& a, const WeylBlockElement& b) {
    if (a.size() != b.size()) throw std::invalid_argument("WeylBlockElement: size mismatch");
    std::vector<int> p(a.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = a.perm[b.perm[i]];
    return WeylBlockElement(p);
  }
  int inversions() const {
    int c = 0;
    for (std::size_t i = 0; i < perm.size(); ++i)
      for (std::size_t j = i + 1; j < perm.size(); ++j) c += perm[i] > perm[j];
    return c;
  }
  friend bool operator==(const WeylBlockElement&, const WeylBlockElement&) = default;
  friend auto operator<=>(const WeylBlockElement&, const WeylBlockElement&) = default;
};

template <class T>
std::vector<T> act_weyl(const WeylBlockElement& w, const std::vector<T>& x) {
  if (w.size() != x.size()) throw std::invalid_argument("act_weyl: composition mismatch");
  std::vector<T> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[w.perm[i]] = x[i];
  return out;
}

inline Composition act_weyl(const WeylBlockElement& w, const Composition& c) { return Composition(act_weyl(w, c.parts)); }

// All permutations of m blocks, in lexicographic one-line order.
inline std::vector<WeylBlockElement> all_permutations(std::size_t m) {
  std::vector<WeylBlockElement> out;
  auto w = WeylBlockElement::identity(m);
  do out.push_back(w);
  while (std::next_permutation(w.perm.begin(), w.perm.end()));
  return out;
}

// Target-indexed block map: target block t comes from source block src[t]; -1 marks a new degenerate block.
struct BlockMap {
  std::vector<int> src;
  std::size_t source_size = 0;

  static BlockMap from_weyl(const WeylBlockElement& w) {
    BlockMap b;
    b.source_size = w.size();
    b.src.assign(w.size(), -1);
    for (std::size_t i = 0; i < w.size(); ++i) b.src[w.perm[i]] = static_cast<int>(i);
    return b;
  }
  template <class T>
  std::vector<T> apply(const std::vector<T>& x, const T& filler) const {
    if (x.size() != source_size) throw std::invalid_argument("BlockMap: size mismatch");
    std::vector<T> out;
    for (int s : src) out.push_back(s < 0 ? filler : x[s]);
    return out;
  }
  // (a after b)
  friend BlockMap operator*(const BlockMap& a, const BlockMap& b) {
    if (a.source_size != b.src.size()) throw std::invalid_argument("BlockMap: size mismatch");
    BlockMap c;
    c.source_size = b.source_size;
    for (int t : a.src) c.src.push_back(t < 0 ? -1 : b.src[t]);
    return c;
  }
  friend bool operator==(const BlockMap&, const BlockMap&) = default;
};

// Blocks of P_w = M_P ∩ w^{-1} Q w, w given in one-line form on {0..k-1}. nullopt = not standard.
inline std::optional<Composition> compute_Pw(const std::vector<int>& w, const Composition& P, const Composition& Q) {
  const int k = static_cast<int>(w.size());
  if (P.total() != k || Q.total() != k) throw std::invalid_argument("compute_Pw: size mismatch");
  std::vector<int> qblock(k);
  for (std::size_t b = 0, pos = 0; b < Q.size(); ++b)
    for (int t = 0; t < Q[b]; ++t) qblock[pos++] = static_cast<int>(b);
  Composition out;
  int start = 0;
  for (int p : P.parts) {
    std::vector<std::pair<int, int>> pieces;  // (first position, length) per Q block
    std::vector<int> first(Q.size(), -1), last(Q.size(), -1), count(Q.size(), 0);
    for (int i = start; i < start + p; ++i) {
      int b = qblock[w[i]];
      if (first[b] < 0) first[b] = i;
      last[b] = i;
      ++count[b];
    }
    for (std::size_t b = 0; b < Q.size(); ++b) {
      if (count[b] == 0) continue;
      if (last[b] - first[b] + 1 != count[b]) return std::nullopt;
      pieces.emplace_back(first[b], count[b]);
    }
    std::sort(pieces.begin(), pieces.end());
    for (auto& pc : pieces) out.parts.push_back(pc.second);
    start += p;
  }
  return out;
}

// w is of minimal length in its double coset Q\W/P: increasing on P blocks, w^{-1} increasing on Q blocks.
inline bool is_min_coset(const std::vector<int>& w, const Composition& P, const Composition& Q) {
  std::vector<int> winv(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) winv[w[i]] = static_cast<int>(i);
  auto increasing_on = [](const std::vector<int>& f, const Composition& c) {
    int s = 0;
    for (int p : c.parts) {
      for (int i = s; i + 1 < s + p; ++i)
        if (f[i] > f[i + 1]) return false;
      s += p;
    }
    return true;
  };
  return increasing_on(w, P) && increasing_on(winv, Q);
}

// Affine linear form  Σ c_i λ_i + c_0.
struct AffineForm {
  CoordVector coeffs;
  Rat constant;

  AffineForm() = default;
  AffineForm(CoordVector c, Rat k = Rat(0)) : coeffs(std::move(c)), constant(k) {}
  static AffineForm zero(std::size_t dim) { return AffineForm(CoordVector(dim, Rat(0))); }
  static AffineForm coord(std::size_t dim, std::size_t i) {
    auto f = zero(dim);
    f.coeffs.at(i) = Rat(1);
    return f;
  }
  std::size_t dim() const { return coeffs.size(); }
  bool is_constant() const {
    return std::all_of(coeffs.begin(), coeffs.end(), [](const Rat& r) { return r.is_zero(); });
  }
  Rat eval(const CoordVector& x) const {
    if (x.size() != coeffs.size()) throw std::invalid_argument("AffineForm: dimension mismatch");
    Rat s = constant;
    for (std::size_t i = 0; i < x.size(); ++i) s += coeffs[i] * x[i];
    return s;
  }
  Rat linear_eval(const CoordVector& x) const { return eval(x) - constant; }

  friend AffineForm operator+(AffineForm a, const AffineForm& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("AffineForm: dimension mismatch");
    for (std::size_t i = 0; i < a.dim(); ++i) a.coeffs[i] += b.coeffs[i];
    a.constant += b.constant;
    return a;
  }
  friend AffineForm operator*(const Rat& s, AffineForm a) {
    for (auto& c : a.coeffs) c *= s;
    a.constant *= s;
    return a;
  }
  friend AffineForm operator-(const AffineForm& a) { return Rat(-1) * a; }
  friend AffineForm operator-(const AffineForm& a, const AffineForm& b) { return a + (-b); }
  friend AffineForm operator+(AffineForm a, const Rat& k) { a.constant += k; return a; }
  friend AffineForm operator-(AffineForm a, const Rat& k) { a.constant -= k; return a; }

  // coprime integer coefficients, first nonzero coefficient positive
  AffineForm normalized() const {
    AffineForm f = *this;
    if (is_constant()) {
      f.constant = Rat(constant.is_zero() ? 0 : 1);
      return f;
    }
    std::int64_t l = 1, g = 0;
    for (const auto& c : coeffs) l = std::lcm(l, c.den());
    for (const auto& c : coeffs) g = std::gcd(g, (c * Rat(l)).num());
    Rat scale = Rat(l, g);
    auto lead = std::find_if(coeffs.begin(), coeffs.end(), [](const Rat& r) { return !r.is_zero(); });
    if (lead->sign() < 0) scale = -scale;
    return scale * f;
  }
  friend bool operator==(const AffineForm&, const AffineForm&) = default;
  friend auto operator<=>(const AffineForm&, const AffineForm&) = default;

  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      if (coeffs[i].is_zero()) continue;
      Rat c = coeffs[i];
      s += c.sign() < 0 ? (s.empty() ? "-" : " - ") : (s.empty() ? "" : " + ");
      Rat a = c.sign() < 0 ? -c : c;
      if (a != Rat(1)) s += a.str() + "*";
      s += "x" + std::to_string(i + 1);
    }
    if (!constant.is_zero() || s.empty()) {
      if (s.empty()) s = constant.str();
      else s += (constant.sign() < 0 ? " - " : " + ") + (constant.sign() < 0 ? -constant : constant).str();
    }
    return s;
  }
};

using Matrix = std::vector<CoordVector>;

// Reduced row echelon form in place; returns pivot columns.  Zero rows are dropped.
inline std::vector<std::size_t> rref(Matrix& rows, std::size_t ncols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && rows[p][c].is_zero()) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[r], rows[p]);
    Rat inv = Rat(1) / rows[r][c];
    for (auto& x : rows[r]) x *= inv;
    for (std::size_t q = 0; q < rows.size(); ++q) {
      if (q == r || rows[q][c].is_zero()) continue;
      Rat f = rows[q][c];
      for (std::size_t k = 0; k < rows[q].size(); ++k) rows[q][k] -= f * rows[r][k];
    }
    pivots.push_back(c);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

// Affine subspace offset + span(basis), stored canonically: basis in RREF, offset reduced against its pivots.
class AffineSubspace {
public:
  AffineSubspace() = default;
  static AffineSubspace empty_set(std::size_t dim) {
    AffineSubspace s;
    s.dim_ = dim;
    s.empty_ = true;
    return s;
  }
  static AffineSubspace whole(std::size_t dim) {
    Matrix gens;
    for (std::size_t i = 0; i < dim; ++i) {
      CoordVector e(dim, Rat(0));
      e[i] = Rat(1);
      gens.push_back(e);
    }
    return from_generators(CoordVector(dim, Rat(0)), gens);
  }
  static AffineSubspace from_generators(CoordVector offset, Matrix gens) {
    AffineSubspace s;
    s.dim_ = offset.size();
    for (auto& g : gens)
      if (g.size() != s.dim_) throw std::invalid_argument("AffineSubspace: generator dimension");
    s.pivots_ = rref(gens, s.dim_);
    s.basis_ = std::move(gens);
    for (std::size_t k = 0; k < s.basis_.size(); ++k) {
      Rat f = offset[s.pivots_[k]];
      if (f.is_zero()) continue;
      for (std::size_t c = 0; c < s.dim_; ++c) offset[c] -= f * s.basis_[k][c];
    }
    s.offset_ = std::move(offset);
    return s;
  }

  std::size_t ambient_dim() const { return dim_; }
  bool empty() const { return empty_; }
  int dimension() const { return empty_ ? -1 : static_cast<int>(basis_.size()); }
  const CoordVector& offset() const { return offset_; }
  const Matrix& basis() const { return basis_; }

  bool contains(const CoordVector& x) const {
    if (empty_ || x.size() != dim_) return false;
    CoordVector d(dim_);
    for (std::size_t i = 0; i < dim_; ++i) d[i] = x[i] - offset_[i];
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      Rat f = d[pivots_[k]];
      if (f.is_zero()) continue;
      for (std::size_t c = 0; c < dim_; ++c) d[c] -= f * basis_[k][c];
    }
    return std::all_of(d.begin(), d.end(), [](const Rat& r) { return r.is_zero(); });
  }
  // form vanishes identically on the subspace
  bool annihilated_by(const AffineForm& f) const {
    if (empty_) return true;
    if (!f.eval(offset_).is_zero()) return false;
    for (const auto& b : basis_)
      if (!f.linear_eval(b).is_zero()) return false;
    return true;
  }

  // A defining system of equations (one per codimension).
  std::vector<AffineForm> equations() const {
    if (empty_) return {AffineForm(CoordVector(dim_, Rat(0)), Rat(1))};
    std::vector<bool> is_pivot(dim_, false);
    for (auto p : pivots_) is_pivot[p] = true;
    std::vector<AffineForm> eqs;
    // annihilator of the RREF row space: for each non-pivot column c, x_c - Σ_k basis[k][c] x_{pivot_k}
    for (std::size_t c = 0; c < dim_; ++c) {
      if (is_pivot[c]) continue;
      CoordVector f(dim_, Rat(0));
      f[c] = Rat(1);
      for (std::size_t k = 0; k < basis_.size(); ++k) f[pivots_[k]] -= basis_[k][c];
      AffineForm form(f);
      form.constant = -form.linear_eval(offset_);
      eqs.push_back(form);
    }
    return eqs;
  }

  AffineSubspace translate(const CoordVector& v) const {
    if (empty_) return *this;
    CoordVector o = offset_;
    for (std::size_t i = 0; i < dim_; ++i) o[i] += v.at(i);
    return from_generators(o, basis_);
  }
  // image under x -> M x + shift, M given as rows (target_dim x dim)
  AffineSubspace image(const Matrix& M, const CoordVector& shift) const {
    if (empty_) return empty_set(M.size());
    auto apply = [&](const CoordVector& x, bool with_shift) {
      CoordVector y(M.size(), Rat(0));
      for (std::size_t r = 0; r < M.size(); ++r) {
        for (std::size_t c = 0; c < dim_; ++c)
          if (!M[r][c].is_zero()) y[r] += M[r][c] * x[c];
        if (with_shift) y[r] += shift.at(r);
      }
      return y;
    };
    Matrix gens;
    for (const auto& b : basis_) gens.push_back(apply(b, false));
    return from_generators(apply(offset_, true), gens);
  }

  friend bool operator==(const AffineSubspace& a, const AffineSubspace& b) {
    if (a.dim_ != b.dim_ || a.empty_ != b.empty_) return false;
    if (a.empty_) return true;
    return a.offset_ == b.offset_ && a.basis_ == b.basis_;
  }

  std::string str() const {
    if (empty_) return "{}";
    std::string s = "offset (";
    for (std::size_t i = 0; i < dim_; ++i) s += (i ? "," : "") + offset_[i].str();
    s += ") span {";
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      s += k ? "; (" : "(";
      for (std::size_t i = 0; i < dim_; ++i) s += (i ? "," : "") + basis_[k][i].str();
      s += ")";
    }
    return s + "}";
  }

private:
  std::size_t dim_ = 0;
  bool empty_ = false;
  CoordVector offset_;
  Matrix basis_;
  std::vector<std::size_t> pivots_;
};

// Common zero set of affine forms in an ambient space of dimension dim.
inline AffineSubspace solve_affine(const std::vector<AffineForm>& forms, std::size_t dim) {
  Matrix aug;
  for (const auto& f : forms) {
    if (f.dim() != dim) throw std::invalid_argument("solve_affine: form dimension mismatch");
    CoordVector row = f.coeffs;
    row.push_back(-f.constant);
    aug.push_back(row);
  }
  auto pivots = rref(aug, dim + 1);
  if (!pivots.empty() && pivots.back() == dim) return AffineSubspace::empty_set(dim);
  std::vector<int> pivot_row(dim, -1);
  for (std::size_t k = 0; k < pivots.size(); ++k) pivot_row[pivots[k]] = static_cast<int>(k);
  CoordVector offset(dim, Rat(0));
  for (std::size_t k = 0; k < pivots.size(); ++k) offset[pivots[k]] = aug[k][dim];
  Matrix gens;
  for (std::size_t f = 0; f < dim; ++f) {
    if (pivot_row[f] >= 0) continue;
    CoordVector g(dim, Rat(0));
    g[f] = Rat(1);
    for (std::size_t k = 0; k < pivots.size(); ++k) g[pivots[k]] = -aug[k][f];
    gens.push_back(g);
  }
  return AffineSubspace::from_generators(offset, gens);
}

inline AffineSubspace intersect(const AffineSubspace& a, const AffineSubspace& b) {
  auto eqs = a.equations();
  auto eb = b.equations();
  eqs.insert(eqs.end(), eb.begin(), eb.end());
  return solve_affine(eqs, a.ambient_dim());
}

inline std::size_t form_rank(const std::vector<AffineForm>& forms, std::size_t dim) {
  Matrix m;
  for (const auto& f : forms) m.push_back(f.coeffs);
  return rref(m, dim).size();
}

}  // namespace rankin
