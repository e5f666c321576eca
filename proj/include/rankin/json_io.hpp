#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "rankin/divisors.hpp"
#include "rankin/relevant.hpp"
#include "rankin/resgraph.hpp"
#include "rankin/rsparab.hpp"
#include "rankin/scalarfactor.hpp"
#include "rankin/zetanum.hpp"

namespace rankin::io {

using json = nlohmann::ordered_json;

// Malformed input (bad JSON shape, unknown token, failed validation).
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------------------------
// Exact linear algebra

inline json to_json(const Rat& r) { return r.str(); }
inline Rat rat_from_json(const json& j) {
  if (j.is_number_integer()) return Rat(j.get<std::int64_t>());
  if (!j.is_string()) throw InputError("rational must be a \"p/q\" string");
  try {
    return Rat::parse(j.get<std::string>());
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
}

inline json to_json(const CoordVector& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}
inline CoordVector coords_from_json(const json& j) {
  if (!j.is_array()) throw InputError("coordinate vector must be an array");
  CoordVector v;
  for (const auto& x : j) v.push_back(rat_from_json(x));
  return v;
}

inline json to_json(const AffineForm& f) {
  json o;
  o["coeffs"] = to_json(f.coeffs);
  o["const"] = to_json(f.constant);
  return o;
}
inline AffineForm form_from_json(const json& j) {
  if (!j.is_object() || !j.contains("coeffs")) throw InputError("affine form needs \"coeffs\"");
  return AffineForm(coords_from_json(j.at("coeffs")), j.contains("const") ? rat_from_json(j.at("const")) : Rat(0));
}

inline json to_json(const Composition& c) { return json(c.parts); }

inline json to_json(const DivisorPoly& p) {
  json a = json::array();
  for (const auto& [f, e] : p.factors()) a.push_back({{"form", to_json(f)}, {"exp", e}});
  return a;
}
inline DivisorPoly divisor_from_json(const json& j, std::size_t dim) {
  if (!j.is_array()) throw InputError("divisor must be an array");
  DivisorPoly p(dim);
  for (const auto& t : j) p.mul(form_from_json(t.at("form")), t.at("exp").get<int>());
  return p;
}

inline json to_json(const LTermProduct& p) {
  json a = json::array();
  for (const auto& [t, e] : p.terms())
    a.push_back({{"L", {{"left", t.left}, {"right", t.right}}}, {"arg", to_json(t.arg)}, {"exp", e}});
  return a;
}

inline json to_json(const AffineSubspace& s) {
  json eq = json::array();
  for (const auto& f : s.equations()) eq.push_back(to_json(f));
  return {{"empty", s.empty()}, {"equations", eq}};
}

// ---------------------------------------------------------------------------------------------
// Registry and discrete data

inline json to_json(const TokenRegistry& reg) {
  json a = json::array();
  for (const auto& t : reg.tokens()) a.push_back({{"id", t.id}, {"rank", t.rank}, {"dual", t.dual_id}});
  return a;
}
inline TokenRegistry registry_from_json(const json& j) {
  if (!j.is_array()) throw InputError("registry must be a JSON array");
  std::vector<CuspidalToken> toks;
  for (const auto& t : j) {
    if (!t.is_object() || !t.contains("id")) throw InputError("registry entry needs \"id\"");
    CuspidalToken c;
    c.id = t.at("id").get<std::string>();
    c.rank = t.value("rank", 1);
    c.dual_id = t.value("dual", c.id);
    toks.push_back(c);
  }
  try {
    return TokenRegistry(toks);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

inline json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("'" + path + "': " + e.what());
  }
}
inline TokenRegistry load_registry(const std::string& path) { return registry_from_json(read_file(path)); }

inline json to_json(const SpehBlock& b) {
  return {{"sigma", b.degenerate() ? json(nullptr) : json(b.sigma)}, {"d", b.d}};
}
inline SpehBlock block_from_json(const TokenRegistry& reg, const json& j) {
  const int d = j.at("d").get<int>();
  if (d == 0) return SpehBlock::degenerate_block();
  if (!j.contains("sigma") || !j.at("sigma").is_string()) throw InputError("block needs a token \"sigma\"");
  const auto id = j.at("sigma").get<std::string>();
  if (!reg.contains(id)) throw InputError("unknown token '" + id + "'");
  if (d < 0) throw InputError("block with negative d");
  return SpehBlock::make(reg, id, d);
}

inline json to_json(const std::vector<SpehBlock>& bs) {
  json a = json::array();
  for (const auto& b : bs) a.push_back(to_json(b));
  return a;
}
inline std::vector<SpehBlock> blocks_from_json(const TokenRegistry& reg, const json& j) {
  if (!j.is_array()) throw InputError("block list must be an array");
  std::vector<SpehBlock> v;
  for (const auto& b : j) v.push_back(block_from_json(reg, b));
  return v;
}

inline json to_json(const DiscreteRep& pi) { return {{"side_n", to_json(pi.side_n)}, {"side_n1", to_json(pi.side_n1)}}; }
inline DiscreteRep rep_from_json(const TokenRegistry& reg, const json& j) {
  if (!j.is_object() || !j.contains("side_n") || !j.contains("side_n1")) throw InputError("pi needs \"side_n\" and \"side_n1\"");
  return {blocks_from_json(reg, j.at("side_n")), blocks_from_json(reg, j.at("side_n1"))};
}

inline json to_json(const RSParabolic& q) {
  std::vector<int> w1;
  for (int x : q.w_std) w1.push_back(x + 1);
  return {{"p_n", to_json(q.p_n)}, {"p_n1", to_json(q.p_n1_std)}, {"i0", q.i0 + 1}, {"w", w1}};
}

// ---------------------------------------------------------------------------------------------
// Inducing data.  Indices in I1/I2 are 1-based.

inline json one_based(const std::vector<int>& v) {
  json a = json::array();
  for (int x : v) a.push_back(x + 1);
  return a;
}

inline json to_json(const TokenRegistry& reg, const RelevantDatum& d) {
  auto [Pn, Pn1] = d.P(reg);
  json o;
  o["I"] = d.I();
  o["P"] = {{"n", to_json(Pn)}, {"n1", to_json(Pn1)}};
  o["pi"] = to_json(d.pi(reg));
  o["I1"] = json::array();
  o["I2"] = json::array();
  return o;
}

inline json to_json(const TokenRegistry& reg, const IncreasingDatum& d) {
  auto [Pn, Pn1] = d.P(reg);
  json o;
  o["I"] = d.I();
  o["P"] = {{"n", to_json(Pn)}, {"n1", to_json(Pn1)}};
  o["pi"] = to_json(d.pi(reg));
  o["I1"] = one_based(d.I1);
  o["I2"] = one_based(d.I2);
  return o;
}

struct ParsedDatum {
  std::optional<RelevantDatum> relevant;
  std::optional<IncreasingDatum> increasing;
  DiscreteRep pi;
};

namespace detail {

inline Composition composition_from_json(const json& j) {
  if (!j.is_array()) throw InputError("composition must be an array");
  return Composition(j.get<std::vector<int>>());
}

inline std::vector<int> zero_based(const json& j, const char* what) {
  std::vector<int> v;
  if (j.is_null()) return v;
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array");
  for (const auto& x : j) {
    int i = x.get<int>();
    if (i < 1) throw InputError(std::string(what) + " indices are 1-based");
    v.push_back(i - 1);
  }
  return v;
}

// Recover the zones (+,1,c1,2,c2,−) from the block layout; the first split that reproduces π and I wins.
inline std::optional<IncreasingDatum> parse_increasing(const TokenRegistry& reg, const std::array<int, 6>& I,
                                                       const DiscreteRep& pi, const std::vector<int>& I1,
                                                       const std::vector<int>& I2, std::string& why) {
  const std::size_t mn = pi.side_n.size(), mn1 = pi.side_n1.size();
  why = "no split of the blocks into zones (+,1,c1,2,c2,-) matches I and pi";
  if (I1.size() != I2.size()) {
    why = "I1 and I2 must have the same size";
    return std::nullopt;
  }
  const std::size_t k = I1.size();
  for (std::size_t mp = 0; mp <= std::min(mn, mn1); ++mp)
    for (std::size_t m1 = k; mp + m1 <= mn; ++m1)
      for (std::size_t m2 = k; mp + m2 <= mn1; ++m2) {
        if (mp + (m2 - k) + m1 > mn || mp + (m1 - k) + m2 > mn1) continue;
        for (std::size_t mc1 = 0; mp + (m2 - k) + m1 + mc1 <= mn; ++mc1) {
          const std::size_t mm = mn - mp - (m2 - k) - m1 - mc1;
          if (mp + (m1 - k) + m2 + mm > mn1) continue;
          const std::size_t mc2 = mn1 - mp - (m1 - k) - m2 - mm;
          IncreasingDatum d;
          d.I1 = I1;
          d.I2 = I2;
          d.plus.assign(pi.side_n.begin(), pi.side_n.begin() + mp);
          d.one.assign(pi.side_n.begin() + mp + (m2 - k), pi.side_n.begin() + mp + (m2 - k) + m1);
          d.c1.assign(pi.side_n.begin() + mp + (m2 - k) + m1, pi.side_n.begin() + mp + (m2 - k) + m1 + mc1);
          d.minus.assign(pi.side_n.end() - mm, pi.side_n.end());
          d.two.assign(pi.side_n1.begin() + mp + (m1 - k), pi.side_n1.begin() + mp + (m1 - k) + m2);
          d.c2.assign(pi.side_n1.begin() + mp + (m1 - k) + m2, pi.side_n1.begin() + mp + (m1 - k) + m2 + mc2);
          bool idx_ok = true;
          for (int i : I1) idx_ok = idx_ok && i < static_cast<int>(m1);
          for (int i : I2) idx_ok = idx_ok && i < static_cast<int>(m2);
          if (!idx_ok) continue;
          bool degenerate = false;
          for (const auto* z : {&d.plus, &d.one, &d.c1, &d.two, &d.c2, &d.minus})
            for (const auto& b : *z) degenerate = degenerate || b.degenerate();
          if (degenerate) continue;
          if (d.I() != I || !(d.pi(reg) == pi)) continue;
          auto v = validate_increasing(d, reg);
          if (!v) {
            why = v.clause;
            continue;
          }
          return d;
        }
      }
  return std::nullopt;
}

}  // namespace detail

// Datum JSON: {"I": [4 or 6 ints], "P": {"n": [...], "n1": [...]}, "pi": {...}, "I1": [...], "I2": [...]}.
// A bare {"pi": ...} is accepted for divisors that only need the representation.
inline ParsedDatum datum_from_json(const TokenRegistry& reg, const json& j) {
  if (!j.is_object() || !j.contains("pi")) throw InputError("datum needs \"pi\"");
  ParsedDatum out;
  out.pi = rep_from_json(reg, j.at("pi"));
  if (!j.contains("I")) return out;
  const auto I = j.at("I").get<std::vector<int>>();
  if (j.contains("P")) {
    auto Pn = detail::composition_from_json(j.at("P").at("n")), Pn1 = detail::composition_from_json(j.at("P").at("n1"));
    if (Pn != composition_of(out.pi.side_n) || Pn1 != composition_of(out.pi.side_n1))
      throw InputError("P does not match the block sizes of pi");
  }
  if (I.size() == 4) {
    auto [v, d] = parse_relevant(reg, {I[0], I[1], I[2], I[3]}, composition_of(out.pi.side_n),
                                 composition_of(out.pi.side_n1), out.pi);
    if (!v) throw InputError("invalid relevant datum: " + v.clause);
    out.relevant = d;
  } else if (I.size() == 6) {
    std::string why;
    auto d = detail::parse_increasing(reg, {I[0], I[1], I[2], I[3], I[4], I[5]}, out.pi,
                                      detail::zero_based(j.value("I1", json::array()), "I1"),
                                      detail::zero_based(j.value("I2", json::array()), "I2"), why);
    if (!d) throw InputError("invalid increasing datum: " + why);
    out.increasing = d;
  } else {
    throw InputError("\"I\" must have 4 (relevant) or 6 (increasing) entries");
  }
  return out;
}

// ---------------------------------------------------------------------------------------------
// Reports

inline json to_json(const TokenRegistry& reg, const WeightedIndexSet& s) {
  json a = json::array();
  for (const auto& [d, w] : s.weights) a.push_back({{"datum", to_json(reg, d)}, {"weight", to_json(w)}});
  return a;
}

inline json pipeline_report(int n, const TokenRegistry& reg, const WeightedIndexSet& classes, bool matches) {
  json o;
  o["n"] = n;
  o["registry"] = to_json(reg);
  o["classes"] = to_json(reg, classes);
  o["matches_direct_enumeration"] = matches;
  return o;
}

inline json to_json(const zeta::NumericReport& r) {
  return {{"check", r.check}, {"points", r.points}, {"max_abs_error", r.max_abs_error}, {"pass", r.pass}};
}

}  // namespace rankin::io
