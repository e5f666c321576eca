#include <set>

#include "doctest.h"
#include "rankin/resgraph.hpp"
#include "rankin/suites.hpp"
#include "test_support.hpp"

using namespace rankin;
using test::B;

TEST_CASE("stage-1 graph counts") {
  const auto reg = test::self_dual();
  const auto a = B(reg, "a", 1), b = B(reg, "b", 1);
  // one + vertex with one partner on each side: empty, either edge, both
  UnfoldingDatum u{{B(reg, "a", 2)}, {a}, {a, b}};
  REQUIRE(validate_unfolding(u).ok);
  const auto g = graphs_stage1(reg, u);
  CHECK(g.size() == 4);
  std::size_t nulls = 0;
  for (const auto& x : g) nulls += x.is_null();
  CHECK(nulls == 1);
  // no compatible partner
  CHECK(graphs_stage1(reg, UnfoldingDatum{{B(reg, "a", 2)}, {b}, {b, b}}).size() == 1);
  // one + vertex against two c1 vertices and no c2 partner
  CHECK(graphs_stage1(reg, UnfoldingDatum{{a}, {a, a}, {b, b, b}}).size() == 3);
  CHECK_THROWS(graphs_stage1(reg, UnfoldingDatum{{a, B(reg, "a", 2)}, {a}, {a, b}}));
  CHECK_THROWS_AS(graphs_stage1(reg, UnfoldingDatum{{a, a, a}, {a, a, a}, {a, a, a, a}}, 5), std::length_error);
}

TEST_CASE("stage-1 tuples") {
  const auto reg = test::self_dual();
  const auto a = B(reg, "a", 1), b = B(reg, "b", 1), a2 = B(reg, "a", 2);
  UnfoldingDatum u{{a2}, {a}, {a, b}};
  for (const auto& g : graphs_stage1(reg, u)) {
    const auto t = tuple_of_stage1(reg, u, g);
    CHECK(validate_increasing(t, reg).ok);
    if (g.is_null()) CHECK(t == u.as_increasing());
    if (g.edge_count() == 2) {
      CHECK(t.one == std::vector<SpehBlock>{B(reg, "a", 3)});
      CHECK(t.two == std::vector<SpehBlock>{B(reg, "a", 3)});
      CHECK(t.I1 == std::vector<int>{0});
      CHECK(t.I2 == std::vector<int>{0});
      CHECK(t.c2 == std::vector<SpehBlock>{b});
    }
  }
  // identical blocks inside a zone are identified
  IncreasingDatum d{{}, {a, a}, {}, {a, a}, {a}, {}, {1}, {1}};
  const auto n = identify_identical(d);
  CHECK(n.I1 == std::vector<int>{0});
  CHECK(n.I2 == std::vector<int>{0});
  CHECK(identify_identical(n) == n);
}

TEST_CASE("stage-2 graph counts") {
  const auto reg = test::self_dual();
  const auto a = B(reg, "a", 1), b = B(reg, "b", 1);
  IncreasingDatum one{{}, {}, {a}, {}, {a, b}, {}, {}, {}};
  CHECK(graphs_stage2(reg, one).size() == 2);
  IncreasingDatum two{{}, {}, {a, a}, {}, {a, a, b}, {}, {}, {}};
  const auto g = graphs_stage2(reg, two);
  CHECK(g.size() == 7);
  // images: no pair, one pair, two pairs with fibers 1, 4, 2
  const auto img = stage2_image(reg, two, g);
  std::multiset<std::int64_t> fib;
  for (const auto& [t, k] : img) fib.insert(k);
  CHECK(fib == std::multiset<std::int64_t>{1, 2, 4});
  for (const auto& x : g) CHECK(fiber_count_stage2(reg, two, g, x).agree());
  const auto d = tuple_of_stage2(reg, one, graphs_stage2(reg, one)[1]);
  CHECK(d.minus == std::vector<SpehBlock>{a});
  CHECK(d.c1.empty());
  CHECK(d.c2 == std::vector<SpehBlock>{b});
  CHECK_THROWS(tuple_of_stage2(reg, d, ResidueGraphStage2{{}}));
}

TEST_CASE("the fiber example") {
  const auto reg = test::self_dual();
  const auto a = B(reg, "a", 1), b = B(reg, "b", 1);
  // two identical + vertices of degree 1, one c1 and one c2 partner; Γ′ joins one + vertex to c1
  UnfoldingDatum u{{a, a}, {a}, {a, b}};
  REQUIRE(validate_unfolding(u).ok);
  const auto all = graphs_stage1(reg, u);
  const ResidueGraphStage1 G{{-1, -1}, {-1, -1}}, Gp{{0, -1}, {-1, -1}};
  const auto f = fiber_count_stage1(reg, u, all, G, Gp, 1);
  CHECK(f.brute == 2);
  CHECK(f.agree());
  CHECK_THROWS(fiber_count_stage1(reg, u, all, Gp, G, 1));
}

TEST_CASE("level families") {
  const auto reg = test::self_dual();
  const auto a = B(reg, "a", 1), b = B(reg, "b", 1);
  UnfoldingDatum u{{B(reg, "a", 2)}, {a}, {a, b}};
  const auto all = graphs_stage1(reg, u);
  const ResidueGraphStage1 G{{-1}, {-1}};
  const auto f = family_partitions(u, all, G, 2);
  CHECK(f.G_d.size() == 4);
  CHECK(f.G_n.size() == 2);
  CHECK(f.disjoint_union);
  CHECK(G_pi_d(u, all, 3).size() == 1);
  CHECK(G_pi_d(u, all, 2).size() == 4);
  for (int d = 1; d <= 3; ++d) CHECK(level_partition_holds(u, all, d));
}

TEST_CASE("property: level partitions, disjoint unions and fibers on enumerated unfolding data") {
  std::size_t checked = 0;
  for (const auto& reg : {test::self_dual(), test::dual_pair(), test::mixed()})
    for (int n = 0; n <= 3; ++n)
      for (const auto& cls : enumerate_unfolding(n, reg)) {
        const auto u = representative(cls);
        REQUIRE(validate_unfolding(u).ok);
        const auto all = graphs_stage1(reg, u);
        int top = 1;
        for (const auto& p : u.plus) top = std::max(top, p.d);
        for (int d = 1; d <= top; ++d) {
          CHECK(level_partition_holds(u, all, d));
          for (const auto& G : G_pi_d(u, all, d + 1)) {
            CHECK(family_partitions(u, all, G, d).disjoint_union);
            for (const auto& Gp : G_Gamma_d(u, all, G, d)) CHECK(fiber_count_stage1(reg, u, all, G, Gp, d).agree());
          }
        }
        for (const auto& [t, k] : stage1_image(reg, u, all)) {
          CHECK(validate_increasing(t, reg).ok);
          CHECK(Rat(k) == Rat(stab_order(u), stab_order(t)));
          const auto g2 = graphs_stage2(reg, t);
          for (const auto& [d, k2] : stage2_image(reg, t, g2)) CHECK(Rat(k2) == Rat(stab_order(t), stab_order(d)));
        }
        ++checked;
      }
  CHECK(checked >= 200);
}

TEST_CASE("pipeline on GL1 x GL2") {
  const auto chi = test::chi();
  const auto c = B(chi, "chi", 1);
  const auto p = pipeline(1, chi);
  CHECK(p.fibers_match_stab);
  CHECK(p.classes == suites::gl1_gl2_expected());
  CHECK(p.classes.weights.at(RelevantDatum{{}, {c}, {c, c}, {}}.canonical()) == Rat(1, 2));
  CHECK(p.classes == direct_enumeration(1, chi));
  CHECK(pipeline(1, TokenRegistry{}).classes.empty());
  CHECK(direct_enumeration(1, TokenRegistry{}).empty());
}

TEST_CASE("pipeline equals the direct enumeration and is a bijection") {
  for (const auto& reg : {test::chi(), test::self_dual(), test::dual_pair(), test::mixed()})
    for (int n = 0; n <= 2; ++n) {
      const auto d = direct_enumeration(n, reg);
      for (auto tie : {TieBreak::TokenAscending, TieBreak::TokenDescending}) {
        PipelineOptions opt;
        opt.tie = tie;
        const auto p = pipeline(n, reg, opt);
        CHECK(p.classes == d);
        CHECK(p.fibers_match_stab);
        CHECK(check_bijection(n, reg, opt).ok());
      }
    }
}

TEST_CASE("literal tuples without identification break the fiber count at n = 3") {
  PipelineOptions literal;
  literal.identify_identical = false;
  const auto chi = test::chi();
  const auto p = pipeline(3, chi, literal);
  CHECK_FALSE((p.fibers_match_stab && p.classes == direct_enumeration(3, chi)));
  CHECK(pipeline(3, chi).classes == direct_enumeration(3, chi));
}

TEST_CASE("representatives and orders") {
  const auto reg = test::self_dual();
  const auto a = B(reg, "a", 1), b2 = B(reg, "b", 2);
  UnfoldingDatum u{{a, b2, B(reg, "a", 2)}, {}, {a}};
  const auto asc = representative(u), desc = representative(u, TieBreak::TokenDescending);
  CHECK(plus_ordered(asc));
  CHECK(plus_ordered(desc));
  CHECK(asc.plus[0] == B(reg, "a", 2));
  CHECK(desc.plus[0] == b2);
  CHECK(W_order(u) == 6);
  CHECK_FALSE(validate_unfolding(UnfoldingDatum{{}, {b2}, {a, a, a}}).ok);
  CHECK_FALSE(validate_unfolding(UnfoldingDatum{{}, {a}, {a}}).ok);
}
