#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "rankin/divisors.hpp"
#include "rankin/relevant.hpp"
#include "rankin/resgraph.hpp"
#include "rankin/rsparab.hpp"
#include "rankin/scalarfactor.hpp"
#include "rankin/zetanum.hpp"

namespace rankin::suites {

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  std::vector<Check> checks;
  double seconds = 0;
  bool pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }
};

struct NamedRegistry {
  std::string name;
  TokenRegistry reg;
};

inline TokenRegistry chi_registry() { return TokenRegistry({{"chi", 1, "chi"}}); }

// The fixed three-token corpus: self-dual, dual pair, mixed ranks.
inline std::vector<NamedRegistry> standard_corpus() {
  return {{"self_dual", TokenRegistry({{"a", 1, "a"}, {"b", 1, "b"}, {"c", 1, "c"}})},
          {"dual_pair", TokenRegistry({{"a", 1, "b"}, {"b", 1, "a"}, {"c", 1, "c"}})},
          {"mixed_ranks", TokenRegistry({{"chi", 1, "chi"}, {"s", 2, "sv"}, {"sv", 2, "s"}})}};
}

// Thread cap: RANKIN_BOOKKEEPER_THREADS if set and positive, else the hardware concurrency.
inline unsigned thread_cap() {
  if (const char* e = std::getenv("RANKIN_BOOKKEEPER_THREADS")) {
    int v = std::atoi(e);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs task(i) for i < count on at most `threads` workers; results are stored by index, so the
// output does not depend on scheduling.
template <class R>
std::vector<R> run_indexed(std::size_t count, const std::function<R(std::size_t)>& task, unsigned threads = thread_cap()) {
  std::vector<R> out(count);
  const unsigned workers = std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = task(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < count;) {
        try {
          out[i] = task(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

namespace detail {

template <class F>
SuiteResult timed(const std::string& name, F body) {
  auto t0 = std::chrono::steady_clock::now();
  SuiteResult r{name, {}, 0};
  body(r);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline std::string ratio(std::size_t ok, std::size_t total) { return std::to_string(ok) + "/" + std::to_string(total); }
inline std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

}  // namespace detail

// ---------------------------------------------------------------------------------------------
// RS parabolics: parametrisation against the brute-force set of semi-standard parabolics.

inline SuiteResult rs_suite(int max_n = 4) {
  return detail::timed("rs", [&](SuiteResult& r) {
    const std::vector<std::size_t> counts{3, 8, 20, 48, 112, 256};
    for (int n = 1; n <= max_n; ++n) {
      std::set<OrderedSetPartition> from_param, brute;
      const auto qs = enumerate_rs(n);
      for (const auto& q : qs) from_param.insert(semistandard_blocks(q));
      for (const auto& b : brute_force_semistandard_rs(n)) brute.insert(b);
      const bool ok = from_param == brute && from_param.size() == qs.size() &&
                      (n > static_cast<int>(counts.size()) || qs.size() == counts[n - 1]);
      r.checks.push_back({"rs_bijection_n" + std::to_string(n), ok,
                          "count " + std::to_string(qs.size()) + ", brute " + std::to_string(brute.size())});
    }
  });
}

// ---------------------------------------------------------------------------------------------
// Pipeline: the GL(1)×GL(2) example and equality with the direct enumeration.

inline WeightedIndexSet gl1_gl2_expected() {
  const auto reg = chi_registry();
  const auto c = SpehBlock::make(reg, "chi", 1), c2 = SpehBlock::make(reg, "chi", 2);
  WeightedIndexSet s;
  s.add(RelevantDatum{{}, {c}, {c, c}, {}}, Rat(1, 2));
  s.add(RelevantDatum{{}, {}, {c}, {c}}, Rat(1));
  s.add(RelevantDatum{{c}, {}, {c}, {}}, Rat(1));
  s.add(RelevantDatum{{}, {}, {c2}, {}}, Rat(1));
  return s;
}

inline Check pipeline_check(const std::string& name, int n, const TokenRegistry& reg) {
  const auto p = pipeline(n, reg);
  const auto d = direct_enumeration(n, reg);
  const bool ok = p.classes == d && p.fibers_match_stab;
  return {name + "_n" + std::to_string(n), ok,
          std::to_string(d.weights.size()) + " classes" + (p.fibers_match_stab ? "" : ", fiber/Stab mismatch")};
}

inline SuiteResult pipeline_suite(const std::vector<NamedRegistry>& corpus, int max_n = 2) {
  return detail::timed("pipeline", [&](SuiteResult& r) {
    const auto reg = chi_registry();
    const auto p = pipeline(1, reg);
    r.checks.push_back({"gl1_gl2_example", p.classes == gl1_gl2_expected(),
                        std::to_string(p.classes.weights.size()) + " weighted classes"});
    std::vector<std::pair<std::size_t, int>> jobs;
    for (std::size_t k = 0; k < corpus.size(); ++k)
      for (int n = 0; n <= max_n; ++n) jobs.push_back({k, n});
    auto res = run_indexed<Check>(jobs.size(), [&](std::size_t i) {
      return pipeline_check(corpus[jobs[i].first].name, jobs[i].second, corpus[jobs[i].first].reg);
    });
    r.checks.insert(r.checks.end(), res.begin(), res.end());
  });
}

// ---------------------------------------------------------------------------------------------
// Counting lemmas and the disjoint-union identities on every stage-1/stage-2 context.

struct CountingTally {
  std::size_t contexts = 0, fibers1 = 0, fibers1_ok = 0, fibers2 = 0, fibers2_ok = 0;
  std::size_t unions = 0, unions_ok = 0, levels = 0, levels_ok = 0;
  bool ok() const { return fibers1 == fibers1_ok && fibers2 == fibers2_ok && unions == unions_ok && levels == levels_ok; }
  CountingTally& operator+=(const CountingTally& o) {
    contexts += o.contexts;
    fibers1 += o.fibers1, fibers1_ok += o.fibers1_ok, fibers2 += o.fibers2, fibers2_ok += o.fibers2_ok;
    unions += o.unions, unions_ok += o.unions_ok, levels += o.levels, levels_ok += o.levels_ok;
    return *this;
  }
};

inline std::size_t block_count(const UnfoldingDatum& u) { return u.plus.size() + u.c1.size() + u.c2.size(); }
inline std::size_t block_count(const IncreasingDatum& d) {
  return d.plus.size() + d.one.size() + d.c1.size() + d.two.size() + d.c2.size() + d.minus.size();
}

inline CountingTally counting_context(const TokenRegistry& reg, const UnfoldingDatum& u, std::size_t max_blocks) {
  CountingTally t;
  ++t.contexts;
  const auto all = graphs_stage1(reg, u);
  int maxd = 1;
  for (const auto& b : u.plus) maxd = std::max(maxd, b.d);
  for (int d = 1; d <= maxd; ++d) {
    ++t.levels;
    t.levels_ok += level_partition_holds(u, all, d);
    for (const auto& G : G_pi_d(u, all, d + 1)) {
      const auto fam = family_partitions(u, all, G, d);
      ++t.unions;
      t.unions_ok += fam.disjoint_union;
      for (const auto& Gp : fam.G_d) {
        ++t.fibers1;
        t.fibers1_ok += fiber_count_stage1(reg, u, all, G, Gp, d).agree();
      }
    }
  }
  for (const auto& [tau, fiber] : stage1_image(reg, u, all)) {
    if (block_count(tau) > max_blocks) continue;
    const auto g2 = graphs_stage2(reg, tau);
    for (const auto& g : g2) {
      ++t.fibers2;
      t.fibers2_ok += fiber_count_stage2(reg, tau, g2, g).agree();
    }
  }
  return t;
}

inline SuiteResult counting_suite(const std::vector<NamedRegistry>& corpus, std::size_t max_blocks = 6, int max_n = -1) {
  return detail::timed("counting", [&](SuiteResult& r) {
    // a single large + block against one cuspidal block fits for every n, so n is bounded separately
    if (max_n < 0) max_n = static_cast<int>(max_blocks);
    for (const auto& [name, reg] : corpus) {
      std::vector<UnfoldingDatum> ctx;
      for (int n = 0; n <= max_n; ++n)
        for (const auto& u : enumerate_unfolding(n, reg))
          if (block_count(u) <= max_blocks) ctx.push_back(u);
      auto parts = run_indexed<CountingTally>(ctx.size(), [&](std::size_t i) { return counting_context(reg, ctx[i], max_blocks); });
      CountingTally t;
      for (const auto& p : parts) t += p;
      r.checks.push_back({"fibers_stage1_" + name, t.fibers1 == t.fibers1_ok, detail::ratio(t.fibers1_ok, t.fibers1)});
      r.checks.push_back({"fibers_stage2_" + name, t.fibers2 == t.fibers2_ok, detail::ratio(t.fibers2_ok, t.fibers2)});
      r.checks.push_back({"disjoint_unions_" + name, t.unions == t.unions_ok && t.levels == t.levels_ok,
                          detail::ratio(t.unions_ok + t.levels_ok, t.unions + t.levels) + " over " +
                              std::to_string(t.contexts) + " contexts"});
    }
  });
}

// ---------------------------------------------------------------------------------------------
// Affine identities on enumerated data.

// w^↓(a_π − ρ̲_π − ρ̲_π^↑) = a_{π^↓} − ρ̲_{π^↓}
inline bool downward_shift_identity_holds(const TokenRegistry& reg, const IncreasingDatum& d) {
  const auto down = downward_transform(d);
  const auto M = block_map_matrix(down.map_n, down.map_n1);
  const CoordVector zero(M.size(), Rat(0));
  const auto lhs = a_pi_up_subspace(d).translate(-(rho_pi(d) + rho_pi_up(d))).image(M, zero);
  const auto rhs = a_pi_subspace(down.datum, reg).translate(-rho_pi(down.datum));
  return lhs == rhs;
}

inline CoordVector act_on_coordinates(const WeylBlockElement& wn, const WeylBlockElement& wn1, const CoordVector& x) {
  const std::size_t mn = wn.size();
  CoordVector a(x.begin(), x.begin() + mn), b(x.begin() + mn, x.end());
  auto out = act_weyl(wn, a);
  auto o1 = act_weyl(wn1, b);
  out.insert(out.end(), o1.begin(), o1.end());
  return out;
}

// w_∅(ρ̲_π + ρ̲_π^↑) = ρ̲_{π_∅} + ρ̲_{π_∅}^↑
inline bool empty_shift_identity_holds(const IncreasingDatum& d) {
  const auto e = empty_transform(d);
  return act_on_coordinates(e.w_n, e.w_n1, rho_pi(d) + rho_pi_up(d)) == rho_pi(e.datum) + rho_pi_up(e.datum);
}

// π^↓ = (π_∅)^↓, w^↓ = w_∅^↓ w_∅ and w_∅^↓ ρ̲_{π_∅} = ρ̲_{π^↓}
inline bool downward_factors_through_empty(const IncreasingDatum& d) {
  const auto e = empty_transform(d);
  const auto down = downward_transform(d), down_e = downward_transform(e.datum);
  if (!(down.datum == down_e.datum)) return false;
  if (!(down.w_n == down_e.w_n * e.w_n) || !(down.w_n1 == down_e.w_n1 * e.w_n1)) return false;
  if (!(down.map_n == down_e.map_n * BlockMap::from_weyl(e.w_n))) return false;
  if (!(down.map_n1 == down_e.map_n1 * BlockMap::from_weyl(e.w_n1))) return false;
  const auto rho_e = rho_pi(e.datum);
  const std::size_t mn = e.datum.m_n();
  CoordVector a(rho_e.begin(), rho_e.begin() + mn), b(rho_e.begin() + mn, rho_e.end());
  auto moved = down_e.map_n.apply(a, Rat(0));
  auto m1 = down_e.map_n1.apply(b, Rat(0));
  moved.insert(moved.end(), m1.begin(), m1.end());
  return moved == rho_pi(down.datum);
}

struct AffineTally {
  std::size_t relevant = 0, relevant_ok = 0, increasing = 0, increasing_ok = 0;
  std::size_t vector_ok = 0, empty_ok = 0, compose_ok = 0;
};

inline SuiteResult affine_suite(const std::vector<NamedRegistry>& corpus, int max_n = 3) {
  return detail::timed("affine", [&](SuiteResult& r) {
    for (const auto& [name, reg] : corpus) {
      std::vector<int> ns;
      for (int n = 0; n <= max_n; ++n) ns.push_back(n);
      auto parts = run_indexed<AffineTally>(ns.size(), [&](std::size_t k) {
        AffineTally t;
        const int n = ns[k];
        for (const auto& d : enumerate_relevant(n, reg)) {
          ++t.relevant;
          const auto f = residue_form_families(reg, d);
          t.relevant_ok += f.solved == f.target;
        }
        for (const auto& d : enumerate_increasing(n, reg)) {
          ++t.increasing;
          const auto f = residue_form_families(reg, d);
          t.increasing_ok += f.solved == f.target;
          t.vector_ok += downward_shift_identity_holds(reg, d);
          t.empty_ok += empty_shift_identity_holds(d);
          t.compose_ok += downward_factors_through_empty(d);
        }
        return t;
      });
      AffineTally t;
      for (const auto& p : parts) {
        t.relevant += p.relevant, t.relevant_ok += p.relevant_ok, t.increasing += p.increasing;
        t.increasing_ok += p.increasing_ok, t.vector_ok += p.vector_ok, t.empty_ok += p.empty_ok, t.compose_ok += p.compose_ok;
      }
      r.checks.push_back({"residue_families_relevant_" + name, t.relevant == t.relevant_ok, detail::ratio(t.relevant_ok, t.relevant)});
      r.checks.push_back({"residue_families_increasing_" + name, t.increasing == t.increasing_ok,
                          detail::ratio(t.increasing_ok, t.increasing)});
      r.checks.push_back({"downward_shift_identity_" + name, t.increasing == t.vector_ok, detail::ratio(t.vector_ok, t.increasing)});
      r.checks.push_back({"empty_shift_identity_" + name, t.increasing == t.empty_ok, detail::ratio(t.empty_ok, t.increasing)});
      r.checks.push_back({"downward_composition_" + name, t.increasing == t.compose_ok, detail::ratio(t.compose_ok, t.increasing)});
    }
  });
}

// ---------------------------------------------------------------------------------------------
// Scalar-factor algebra.

inline SuiteResult nij_suite(int max_d = 5, int mzeros_max_d = 4) {
  return detail::timed("nij", [&](SuiteResult& r) {
    const TokenRegistry reg({{"a", 1, "a"}, {"s", 2, "sv"}, {"sv", 2, "s"}});
    std::size_t total = 0, ok = 0;
    const AffineForm s = AffineForm::coord(1, 0);
    for (int di = 1; di <= max_d; ++di)
      for (int dj = 1; dj <= max_d; ++dj) {
        const auto bi = SpehBlock::make(reg, "a", di), bj = SpehBlock::make(reg, "a", dj);
        for (const auto& sh : all_shuffles(di, dj)) {
          const auto pat = shuffle_pattern(di, dj, sh);
          ++total;
          ok += nij_expand(bi, bj, pat, s, NijVariant::A) == nij_expand(bi, bj, pat, s, NijVariant::B);
        }
      }
    r.checks.push_back({"nij_variants_agree", ok == total, detail::ratio(ok, total) + " shuffles"});

    std::size_t gtotal = 0, gok = 0;
    const std::vector<std::vector<std::string>> shapes{{"a", "a"}, {"a", "s"}, {"s", "sv"}, {"s", "s"}, {"a", "a", "a"}, {"s", "a", "sv"}};
    for (const auto& ids : shapes)
      for (int d1 = 1; d1 <= 3; ++d1)
        for (int d2 = 1; d2 <= 3; ++d2)
          for (int d3 = 1; d3 <= (ids.size() > 2 ? 2 : 1); ++d3) {
            const int ds[3] = {d1, d2, d3};
            std::vector<SpehBlock> b;
            for (std::size_t i = 0; i < ids.size(); ++i) b.push_back(SpehBlock::make(reg, ids[i], ds[i]));
            for (const auto& w : all_permutations(b.size())) {
              ++gtotal;
              gok += canonical(reg, n_factor(reg, b, w)) == canonical(reg, n_factor_cuspidal(reg, b, w));
            }
          }
    r.checks.push_back({"discrete_cuspidal_consistency", gok == gtotal, detail::ratio(gok, gtotal)});

    bool mz = true;
    std::string det;
    for (int d = 1; d <= mzeros_max_d; ++d) {
      const auto rep = mzeros_regularity(reg, SpehBlock::make(reg, "a", d));
      mz = mz && rep.regular;
      det += (d > 1 ? " " : "") + std::string("d=") + std::to_string(d) + ":" + std::to_string(rep.order);
    }
    r.checks.push_back({"mzeros_regularity", mz, det});
  });
}

// ---------------------------------------------------------------------------------------------
// Numerics for the GL(1)×GL(2) example.

inline std::vector<std::pair<double, double>> gl1gl2_sample_points() {
  return {{0.1, 0.2}, {0.0, 0.0}, {-0.2, 0.35}, {0.3, -0.15}, {0.05, 0.6}, {-0.35, -0.3}};
}

inline SuiteResult zeta_suite() {
  return detail::timed("zeta", [&](SuiteResult& r) {
    const auto fe = zeta::functional_equation_grid(1e-10);
    r.checks.push_back({"xi_functional_equation", fe.pass, "max rel error " + detail::sci(fe.max_abs_error)});
    const auto refl = zeta::reflection_grid(1e-10);
    r.checks.push_back({"xi_reflection", refl.pass, "max rel error " + detail::sci(refl.max_abs_error)});
    const auto res = zeta::residue_checks(1e-9);
    r.checks.push_back({"xi_residues", res.pass, "max error " + detail::sci(res.max_abs_error)});
    double worst = 0;
    for (int d = 1; d <= 4; ++d) worst = std::max(worst, std::abs(zeta::numeric_n_at_zero(d) + 1.0));
    r.checks.push_back({"n_at_zero", worst <= 1e-9, "max error " + detail::sci(worst)});
    double gworst = 0;
    std::size_t count = 0;
    for (auto [l1, l2] : gl1gl2_sample_points()) {
      gworst = std::max(gworst, zeta::gl1gl2_residue_check(l1, l2).error);
      gworst = std::max(gworst, zeta::gl1gl2_residue_check_swapped(l1, l2).error);
      count += 2;
    }
    r.checks.push_back({"gl1gl2_residues", gworst <= 1e-8, std::to_string(count) + " points, max error " + detail::sci(gworst)});
  });
}

// ---------------------------------------------------------------------------------------------
// Randomised structural laws.

inline Composition random_composition(std::mt19937_64& rng, int total) {
  Composition c;
  while (total > 0) {
    int p = std::uniform_int_distribution<int>(1, total)(rng);
    c.parts.push_back(p);
    total -= p;
  }
  return c;
}

inline WeylBlockElement random_permutation(std::mt19937_64& rng, std::size_t m) {
  auto w = WeylBlockElement::identity(m);
  std::shuffle(w.perm.begin(), w.perm.end(), rng);
  return w;
}

inline SuiteResult structural_suite(int cases = 200, std::uint64_t seed = 20240611) {
  return detail::timed("structural", [&](SuiteResult& r) {
    std::mt19937_64 rng(seed);
    const auto corpus = standard_corpus();
    auto pick_reg = [&]() -> const TokenRegistry& { return corpus[rng() % corpus.size()].reg; };
    auto random_block = [&](const TokenRegistry& reg, int max_d) {
      const auto& toks = reg.tokens();
      const auto& t = toks[rng() % toks.size()];
      return SpehBlock::make(reg, t.id, std::uniform_int_distribution<int>(0, max_d)(rng));
    };

    // dual is an involution, commutes with the derivative, preserves size
    int ok = 0;
    for (int k = 0; k < cases; ++k) {
      const auto& reg = pick_reg();
      const auto b = random_block(reg, 6);
      ok += dual(reg, dual(reg, b)) == b && dual(reg, derivative(b)) == derivative(dual(reg, b)) &&
            dual(reg, b).size() == b.size() && (b.degenerate() || derivative(b).d == b.d - 1);
    }
    r.checks.push_back({"dual_derivative_laws", ok == cases, std::to_string(ok) + "/" + std::to_string(cases)});

    // W(π)-closure of Π_H
    ok = 0;
    std::vector<std::pair<const TokenRegistry*, RelevantDatum>> pool;
    for (const auto& nr : corpus)
      for (int n = 1; n <= 3; ++n)
        for (const auto& d : enumerate_relevant(n, nr.reg)) pool.push_back({&nr.reg, d});
    for (int k = 0; k < cases; ++k) {
      const auto& [reg, d] = pool[rng() % pool.size()];
      const auto W = weyl_W_pi(d);
      const auto& w = W[rng() % W.size()];
      const auto e = act_weyl(w, d);
      const auto pi = e.pi(*reg);
      auto [v, parsed] = parse_relevant(*reg, d.I(), composition_of(pi.side_n), composition_of(pi.side_n1), pi);
      ok += v.ok && e.canonical() == d.canonical() && static_cast<std::int64_t>(W.size()) == W_pi_order(d);
    }
    r.checks.push_back({"W_pi_closure", ok == cases, std::to_string(ok) + "/" + std::to_string(cases)});

    // act_weyl is a group action on compositions and coordinate vectors
    ok = 0;
    for (int k = 0; k < cases; ++k) {
      const int total = std::uniform_int_distribution<int>(1, 9)(rng);
      const auto c = random_composition(rng, total);
      const auto a = random_permutation(rng, c.size()), b = random_permutation(rng, c.size());
      CoordVector x;
      for (std::size_t i = 0; i < c.size(); ++i) x.push_back(Rat(std::uniform_int_distribution<int>(-9, 9)(rng), 4));
      ok += act_weyl(a * b, c) == act_weyl(a, act_weyl(b, c)) &&
            act_weyl(WeylBlockElement::identity(c.size()), c) == c && act_weyl(a * b, x) == act_weyl(a, act_weyl(b, x)) &&
            act_weyl(a.inverse(), act_weyl(a, x)) == x;
    }
    r.checks.push_back({"act_weyl_group_laws", ok == cases, std::to_string(ok) + "/" + std::to_string(cases)});

    // ν_π = −ρ_{P_π}/r block by block
    ok = 0;
    for (int k = 0; k < cases; ++k) {
      const auto& reg = pick_reg();
      std::vector<SpehBlock> bs;
      const int m = std::uniform_int_distribution<int>(1, 4)(rng);
      for (int i = 0; i < m; ++i) {
        SpehBlock b;
        while (b.degenerate()) b = random_block(reg, 5);
        bs.push_back(b);
      }
      const auto cs = cuspidal_support(bs);
      CoordVector expect;
      for (const auto& b : bs) {
        const auto rho = rho_of_parabolic(Composition(std::vector<int>(b.d, b.rank)));
        for (const auto& x : rho) expect.push_back(-x / Rat(b.rank));
      }
      ok += cs.nu == expect;
    }
    r.checks.push_back({"nu_equals_minus_rho_over_r", ok == cases, std::to_string(ok) + "/" + std::to_string(cases)});

    // divisor algebra: associativity/commutativity of products, inverse, degree additivity, divisibility
    ok = 0;
    for (int k = 0; k < cases; ++k) {
      const std::size_t dim = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
      auto rand_poly = [&] {
        DivisorPoly p(dim);
        const int f = std::uniform_int_distribution<int>(0, 4)(rng);
        for (int i = 0; i < f; ++i) {
          AffineForm a = AffineForm::zero(dim);
          for (auto& c : a.coeffs) c = Rat(std::uniform_int_distribution<int>(-2, 2)(rng));
          if (a.is_constant()) a.coeffs[0] = Rat(1);
          a.constant = Rat(std::uniform_int_distribution<int>(-4, 4)(rng), 2);
          p.mul(a, std::uniform_int_distribution<int>(-2, 2)(rng));
        }
        return p;
      };
      const auto a = rand_poly(), b = rand_poly(), c = rand_poly();
      ok += (a * b) * c == a * (b * c) && a * b == b * a && (a / a).is_one() && (a * b).degree() == a.degree() + b.degree() &&
            divides(DivisorPoly(dim), a * a.inverse()) && a * DivisorPoly(dim) == a;
    }
    r.checks.push_back({"divisor_algebra_laws", ok == cases, std::to_string(ok) + "/" + std::to_string(cases)});
  });
}

}  // namespace rankin::suites
