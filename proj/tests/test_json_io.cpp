#include "doctest.h"
#include "rankin/json_io.hpp"
#include "test_support.hpp"

using namespace rankin;
using io::json;
using test::B;

TEST_CASE("rationals and coordinates") {
  CHECK(io::rat_from_json(json("3/6")) == Rat(1, 2));
  CHECK(io::rat_from_json(json(-4)) == Rat(-4));
  CHECK(io::to_json(Rat(-3, 4)) == json("-3/4"));
  CHECK_THROWS_AS(io::rat_from_json(json(0.5)), io::InputError);
  CHECK_THROWS_AS(io::rat_from_json(json("1/0")), io::InputError);
  CHECK_THROWS_AS(io::rat_from_json(json("x")), io::InputError);
  for (int k = 0; k < test::kCases; ++k) {
    CoordVector v;
    for (int i = test::uniform(0, 5); i > 0; --i) v.push_back(Rat(test::uniform(-20, 20), test::uniform(1, 9)));
    CHECK(io::coords_from_json(json::parse(io::to_json(v).dump())) == v);
    const AffineForm f(v, Rat(test::uniform(-5, 5), 3));
    CHECK(io::form_from_json(io::to_json(f)) == f);
  }
}

TEST_CASE("divisor round trip") {
  DivisorPoly p(2);
  p.mul(AffineForm::coord(2, 0) - AffineForm::coord(2, 1) - Rat(1)).mul(AffineForm::coord(2, 0), -2);
  const auto back = io::divisor_from_json(json::parse(io::to_json(p).dump()), 2);
  CHECK(back == p);
  CHECK_THROWS_AS(io::divisor_from_json(json::object(), 2), io::InputError);
}

TEST_CASE("registries") {
  const auto chi = io::load_registry(test::data_dir() + "/registries/chi.json");
  CHECK(chi.contains("chi"));
  CHECK(chi.dual("chi") == "chi");
  const auto mixed = io::load_registry(test::data_dir() + "/registries/mixed_ranks.json");
  CHECK(mixed.dual("s") == "sv");
  CHECK(mixed.rank("s") == 2);
  for (const char* f : {"chi", "self_dual", "dual_pair", "mixed_ranks"}) {
    const auto r = io::load_registry(test::data_dir() + "/registries/" + f + ".json");
    CHECK(io::registry_from_json(io::to_json(r)).tokens().size() == r.tokens().size());
  }
  CHECK_THROWS_AS(io::load_registry("/nonexistent.json"), io::InputError);
  CHECK_THROWS_AS(io::registry_from_json(json::object()), io::InputError);
  CHECK_THROWS_AS(io::registry_from_json(json::parse(R"([{"id":"a","dual":"b"}])")), io::InputError);
  // an omitted dual means self-dual and an omitted rank means 1
  const auto d = io::registry_from_json(json::parse(R"([{"id":"a"}])"));
  CHECK(d.dual("a") == "a");
  CHECK(d.rank("a") == 1);
}

TEST_CASE("blocks") {
  const auto chi = test::chi();
  CHECK(io::block_from_json(chi, json::parse(R"({"sigma":"chi","d":3})")) == B(chi, "chi", 3));
  CHECK(io::block_from_json(chi, json::parse(R"({"sigma":null,"d":0})")).degenerate());
  CHECK(io::to_json(SpehBlock::degenerate_block()) == json::parse(R"({"sigma":null,"d":0})"));
  CHECK_THROWS_AS(io::block_from_json(chi, json::parse(R"({"sigma":"psi","d":1})")), io::InputError);
  CHECK_THROWS_AS(io::block_from_json(chi, json::parse(R"({"d":1})")), io::InputError);
  CHECK_THROWS_AS(io::block_from_json(chi, json::parse(R"({"sigma":"chi","d":-1})")), io::InputError);
}

TEST_CASE("datum parsing") {
  const auto chi = test::chi();
  const auto s2 = B(chi, "chi", 2), c = B(chi, "chi", 1);
  // degenerate blocks pad both sides to the same length
  const auto j = json::parse(R"({"I":[0,1,2,0],"P":{"n":[1,0,0],"n1":[0,1,1]},
    "pi":{"side_n":[{"sigma":"chi","d":1},{"sigma":null,"d":0},{"sigma":null,"d":0}],
          "side_n1":[{"sigma":null,"d":0},{"sigma":"chi","d":1},{"sigma":"chi","d":1}]}})");
  CHECK(j.at("pi") == io::to_json(chi, RelevantDatum{{}, {c}, {c, c}, {}}).at("pi"));
  const auto p = io::datum_from_json(chi, j);
  REQUIRE(p.relevant);
  CHECK(p.relevant->one.size() == 1);
  CHECK(p.relevant->two.size() == 2);
  // bare representation
  const auto bare = io::datum_from_json(chi, json{{"pi", j.at("pi")}});
  CHECK_FALSE(bare.relevant);
  CHECK_FALSE(bare.increasing);
  CHECK(bare.pi == p.pi);
  auto bad = j;
  bad["I"] = {0, 1, 1, 0};
  CHECK_THROWS_AS(io::datum_from_json(chi, bad), io::InputError);
  bad = j;
  bad["P"]["n"] = {1, 1, 0};
  CHECK_THROWS_AS(io::datum_from_json(chi, bad), io::InputError);
  bad = j;
  bad["I"] = {0, 1, 2};
  CHECK_THROWS_AS(io::datum_from_json(chi, bad), io::InputError);
  CHECK_THROWS_AS(io::datum_from_json(chi, json::object()), io::InputError);
  // I1/I2 are 1-based
  IncreasingDatum up{{}, {s2}, {}, {s2}, {c}, {}, {0}, {0}};
  auto ju = io::to_json(chi, up);
  CHECK(ju.at("I1") == json::array({1}));
  ju["I1"] = {0};
  CHECK_THROWS_AS(io::datum_from_json(chi, ju), io::InputError);
}

TEST_CASE("property: enumerated data survive a JSON round trip") {
  std::size_t checked = 0;
  for (const auto& reg : {test::self_dual(), test::dual_pair(), test::mixed()})
    for (int n = 0; n <= 3; ++n) {
      for (const auto& d : enumerate_relevant(n, reg)) {
        const auto p = io::datum_from_json(reg, json::parse(io::to_json(reg, d).dump()));
        REQUIRE(p.relevant);
        CHECK(*p.relevant == d);
        ++checked;
      }
      for (const auto& d : enumerate_increasing(n, reg)) {
        const auto p = io::datum_from_json(reg, json::parse(io::to_json(reg, d).dump()));
        REQUIRE(p.increasing);
        CHECK(p.increasing->pi(reg) == d.pi(reg));
        CHECK(p.increasing->I() == d.I());
        CHECK(*p.increasing == d);
        ++checked;
      }
    }
  CHECK(checked >= 200);
}

TEST_CASE("reports") {
  const auto chi = test::chi();
  const auto r = io::pipeline_report(1, chi, direct_enumeration(1, chi), true);
  CHECK(r.at("classes").size() == 4);
  CHECK(r.at("matches_direct_enumeration") == true);
  CHECK(io::to_json(rs_from_pair({1, 1, 1}, 1)).at("w") == json::array({1, 3, 2}));
  CHECK(io::to_json(rs_from_pair({1, 1, 1}, 1)).at("i0") == 2);
}
