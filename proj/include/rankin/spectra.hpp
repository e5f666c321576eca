#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rankin/exactlin.hpp"

namespace rankin {

struct CuspidalToken {
  std::string id;
  int rank = 1;
  std::string dual_id;
  friend bool operator==(const CuspidalToken&, const CuspidalToken&) = default;
};

class TokenRegistry {
public:
  TokenRegistry() = default;
  explicit TokenRegistry(std::vector<CuspidalToken> tokens) : tokens_(std::move(tokens)) {
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      const auto& t = tokens_[i];
      if (t.id.empty()) throw std::invalid_argument("registry: empty token id");
      if (t.rank < 1) throw std::invalid_argument("registry: token '" + t.id + "' has rank < 1");
      if (!index_.emplace(t.id, i).second) throw std::invalid_argument("registry: duplicate id '" + t.id + "'");
    }
    for (const auto& t : tokens_) {
      auto it = index_.find(t.dual_id);
      if (it == index_.end()) throw std::invalid_argument("registry: dual of '" + t.id + "' is unknown");
      const auto& d = tokens_[it->second];
      if (d.dual_id != t.id) throw std::invalid_argument("registry: dual pairing of '" + t.id + "' is not an involution");
      if (d.rank != t.rank) throw std::invalid_argument("registry: '" + t.id + "' and its dual differ in rank");
    }
  }
  const std::vector<CuspidalToken>& tokens() const { return tokens_; }
  bool empty() const { return tokens_.empty(); }
  bool contains(const std::string& id) const { return index_.count(id) != 0; }
  const CuspidalToken& get(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw std::invalid_argument("registry: unknown token '" + id + "'");
    return tokens_[it->second];
  }
  const std::string& dual(const std::string& id) const { return get(id).dual_id; }
  int rank(const std::string& id) const { return get(id).rank; }

private:
  std::vector<CuspidalToken> tokens_;
  std::map<std::string, std::size_t> index_;
};

// Speh(σ,d); d = 0 is the degenerate block of GL(0) and carries no token.
struct SpehBlock {
  std::string sigma;
  int rank = 0;
  int d = 0;

  static SpehBlock degenerate_block() { return {}; }
  static SpehBlock make(const TokenRegistry& reg, const std::string& id, int d) {
    if (d < 0) throw std::invalid_argument("SpehBlock: negative d");
    if (d == 0) return {};
    return {id, reg.rank(id), d};
  }
  bool degenerate() const { return d == 0; }
  int size() const { return rank * d; }
  std::string str() const { return degenerate() ? "1" : "Speh(" + sigma + "," + std::to_string(d) + ")"; }
  friend bool operator==(const SpehBlock&, const SpehBlock&) = default;
  friend auto operator<=>(const SpehBlock&, const SpehBlock&) = default;
};

inline SpehBlock derivative(const SpehBlock& b) {
  if (b.d <= 1) return SpehBlock::degenerate_block();
  return {b.sigma, b.rank, b.d - 1};
}

inline SpehBlock dual(const TokenRegistry& reg, const SpehBlock& b) {
  if (b.degenerate()) return b;
  return {reg.dual(b.sigma), b.rank, b.d};
}

// normal-form order inside a zone: d descending, then token id ascending
inline bool normal_less(const SpehBlock& a, const SpehBlock& b) {
  if (a.d != b.d) return a.d > b.d;
  return a.sigma < b.sigma;
}

inline Composition composition_of(const std::vector<SpehBlock>& blocks) {
  Composition c;
  for (const auto& b : blocks) c.parts.push_back(b.size());
  return c;
}

struct DiscreteRep {
  std::vector<SpehBlock> side_n;
  std::vector<SpehBlock> side_n1;

  int size_n() const { return composition_of(side_n).total(); }
  int size_n1() const { return composition_of(side_n1).total(); }
  friend bool operator==(const DiscreteRep&, const DiscreteRep&) = default;
  friend auto operator<=>(const DiscreteRep&, const DiscreteRep&) = default;
};

inline DiscreteRep dual(const TokenRegistry& reg, const DiscreteRep& pi) {
  DiscreteRep out;
  for (const auto& b : pi.side_n) out.side_n.push_back(dual(reg, b));
  for (const auto& b : pi.side_n1) out.side_n1.push_back(dual(reg, b));
  return out;
}

struct CuspidalSupport {
  Composition P_pi;                 // one block of size rank per cuspidal piece
  std::vector<std::string> sigma;   // token per piece
  CoordVector nu;                   // ν_π coordinate per piece
  std::vector<int> block_of;        // originating Speh block index
  std::vector<int> index_in_block;  // j-1 within the block
};

inline CuspidalSupport cuspidal_support(const std::vector<SpehBlock>& blocks) {
  CuspidalSupport cs;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto& b = blocks[i];
    for (int j = 1; j <= b.d; ++j) {
      cs.P_pi.parts.push_back(b.rank);
      cs.sigma.push_back(b.sigma);
      cs.nu.push_back(Rat(2 * j - 1 - b.d, 2));
      cs.block_of.push_back(static_cast<int>(i));
      cs.index_in_block.push_back(j - 1);
    }
  }
  return cs;
}

// ν_{Q,π} in a_Q coordinates (one entry per block of Q); Q must satisfy P_π ⊂ Q ⊂ P.
inline CoordVector nu_relative(const std::vector<SpehBlock>& blocks, const Composition& Q) {
  CoordVector out;
  std::size_t q = 0;
  for (const auto& b : blocks) {
    if (b.degenerate()) continue;
    std::vector<int> sub;
    int filled = 0;
    while (filled < b.size()) {
      if (q >= Q.size()) throw std::invalid_argument("nu_relative: Q does not refine P");
      int part = Q[q++];
      if (part % b.rank != 0) throw std::invalid_argument("nu_relative: Q is not coarser than P_pi");
      sub.push_back(part / b.rank);
      filled += part;
    }
    if (filled != b.size()) throw std::invalid_argument("nu_relative: Q does not refine P");
    for (const Rat& x : rho_of_parabolic(Composition(sub))) out.push_back(-x);
  }
  if (q != Q.size()) throw std::invalid_argument("nu_relative: Q does not refine P");
  return out;
}

struct Segment {
  Rat center;
  int length = 1;

  std::vector<Rat> elements() const {
    std::vector<Rat> e;
    for (int j = 1; j <= length; ++j) e.push_back(center + Rat(2 * j - 1 - length, 2));
    return e;
  }
  friend bool operator==(const Segment&, const Segment&) = default;
};

inline Segment segment_of(const SpehBlock& b, const Rat& shift) {
  if (b.degenerate()) throw std::invalid_argument("segment_of: degenerate block");
  return {shift, b.d};
}

struct DiscreteLTerm {
  std::string left;   // σ
  std::string right;  // σ′  (the term is L(s + shift, σ × σ′))
  Rat shift;
  friend bool operator==(const DiscreteLTerm&, const DiscreteLTerm&) = default;
};

inline std::vector<DiscreteLTerm> discrete_L_expand(const SpehBlock& a, const SpehBlock& b) {
  std::vector<DiscreteLTerm> out;
  for (int i = 1; i <= a.d; ++i)
    for (int j = 1; j <= b.d; ++j) out.push_back({a.sigma, b.sigma, Rat(a.d - 2 * i + 1, 2) + Rat(b.d - 2 * j + 1, 2)});
  return out;
}

// All non-degenerate Speh blocks of GL size at most `max_size`.
inline std::vector<SpehBlock> speh_blocks_up_to(const TokenRegistry& reg, int max_size) {
  std::vector<SpehBlock> out;
  for (const auto& t : reg.tokens())
    for (int d = 1; t.rank * d <= max_size; ++d) out.push_back({t.id, t.rank, d});
  return out;
}

}  // namespace rankin
