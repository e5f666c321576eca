#include <algorithm>

#include "doctest.h"
#include "rankin/scalarfactor.hpp"
#include "test_support.hpp"

using namespace rankin;
using test::B;

namespace {
AffineForm X(std::size_t dim, std::size_t k) { return AffineForm::coord(dim, k); }

int inversions(const WeylBlockElement& w) {
  int c = 0;
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = i + 1; j < w.size(); ++j) c += w(i) > w(j);
  return c;
}

std::vector<std::vector<bool>> full(int di, int dj) { return std::vector<std::vector<bool>>(di, std::vector<bool>(dj, true)); }
}  // namespace

TEST_CASE("scalar factor on the GL2 Borel") {
  const auto reg = test::dual_pair();
  const auto a = B(reg, "a", 1), c = B(reg, "c", 1);
  const auto swap = WeylBlockElement::from_cycles(2, {{1, 2}});
  const auto s = X(2, 0) - X(2, 1);
  LTermProduct want;
  want.mul({"a", "c", s}, 1).mul({"a", "c", s + Rat(1)}, -1);
  CHECK(canonical(reg, n_factor(reg, {a, c}, swap)) == canonical(reg, want));
  CHECK(n_factor(reg, {a, c}, WeylBlockElement::identity(2)).is_one());
  CHECK(n_factor(reg, {a, c}, swap).token_count() == 2);
}

TEST_CASE("canonical tokens") {
  const auto reg = test::dual_pair();
  const auto s = X(1, 0);
  // functional-equation partner and Rankin–Selberg swap collapse to one representative
  const LToken t{"a", "c", s}, fe{"b", "c", Rat(-1) * s + Rat(1)}, rs{"c", "b", s};
  CHECK(canonical_token(reg, t) == canonical_token(reg, fe));
  CHECK(canonical_token(reg, t) == canonical_token(reg, rs));
  CHECK(canonical_token(reg, canonical_token(reg, t)) == canonical_token(reg, t));
  CHECK(LToken{"a", "a", s}.has_poles());
  CHECK_FALSE(LToken{"a", "b", s}.has_poles());
}

TEST_CASE("the two n_ij displays") {
  const auto chi = test::chi();
  const auto s = X(1, 0);
  const auto c = B(chi, "chi", 1);
  LTermProduct want;
  want.mul({"chi", "chi", s}, 1).mul({"chi", "chi", s + Rat(1)}, -1);
  CHECK(nij_expand(c, c, full(1, 1), s, NijVariant::A) == want);
  CHECK(nij_expand(c, c, full(1, 1), s, NijVariant::B) == want);
  const std::vector<std::vector<bool>> none(1, std::vector<bool>(1, false));
  CHECK(nij_expand(c, c, none, s, NijVariant::A).is_one());
  CHECK(nij_expand(c, c, none, s, NijVariant::B).is_one());
  const auto s3 = B(chi, "chi", 3);
  CHECK(nij_expand(c, s3, full(1, 3), s, NijVariant::A) == nij_expand(c, s3, full(1, 3), s, NijVariant::B));
  CHECK(all_shuffles(2, 3).size() == 10);
  CHECK(shuffle_pattern(1, 1, {1, 0}) == full(1, 1));
}

TEST_CASE("property: displays A and B agree on every shuffle with d <= 5") {
  const auto chi = test::chi();
  const auto s = X(1, 0);
  std::size_t checked = 0;
  for (int di = 1; di <= 5; ++di)
    for (int dj = 1; dj <= 5; ++dj)
      for (const auto& order : all_shuffles(di, dj)) {
        const auto pat = shuffle_pattern(di, dj, order);
        CHECK(nij_expand(B(chi, "chi", di), B(chi, "chi", dj), pat, s, NijVariant::A) ==
              nij_expand(B(chi, "chi", di), B(chi, "chi", dj), pat, s, NijVariant::B));
        ++checked;
      }
  CHECK(checked == 912);
}

TEST_CASE("property: discrete and cuspidal expansions of the scalar factor agree") {
  const TokenRegistry regs[] = {test::self_dual(), test::dual_pair(), test::mixed()};
  for (int k = 0; k < test::kCases; ++k) {
    const auto& reg = regs[k % 3];
    const std::size_t m = test::uniform(1, 4);
    std::vector<SpehBlock> blocks;
    for (std::size_t i = 0; i < m; ++i) blocks.push_back(test::random_block(reg, 1, 3));
    auto w = WeylBlockElement::identity(m);
    std::shuffle(w.perm.begin(), w.perm.end(), test::rng());
    CHECK(canonical(reg, n_factor(reg, blocks, w)) == canonical(reg, n_factor_cuspidal(reg, blocks, w)));
  }
}

TEST_CASE("property: scalar factors multiply along reduced products") {
  const auto reg = test::self_dual();
  std::size_t checked = 0;
  for (int k = 0; k < test::kCases; ++k) {
    const std::size_t m = test::uniform(2, 5);
    std::vector<SpehBlock> blocks;
    for (std::size_t i = 0; i < m; ++i) blocks.push_back(test::random_block(reg, 1, 3));
    auto w1 = WeylBlockElement::identity(m), w2 = w1;
    std::shuffle(w1.perm.begin(), w1.perm.end(), test::rng());
    std::shuffle(w2.perm.begin(), w2.perm.end(), test::rng());
    if (inversions(w2 * w1) != inversions(w2) + inversions(w1)) continue;
    const auto coord = block_coordinates(m);
    const auto lhs = n_factor_at(reg, blocks, coord, w2 * w1);
    const auto rhs = n_factor_at(reg, act_weyl(w1, blocks), act_weyl(w1, coord), w2) * n_factor_at(reg, blocks, coord, w1);
    CHECK(canonical(reg, lhs) == canonical(reg, rhs));
    ++checked;
  }
  CHECK(checked > 20);
}

TEST_CASE("declared pole orders") {
  const auto s = X(1, 0);
  LTermProduct p;
  p.mul({"a", "a", s}, 1).mul({"a", "a", s + Rat(1)}, -1);
  CHECK(pole_order_at(p, {Rat(0)}) == 0);
  CHECK(pole_order_at(p, {Rat(1)}) == -1);
  CHECK(pole_order_at(p, {Rat(1, 2)}) == 0);
  LTermProduct q;
  q.mul({"a", "b", s}, 1).mul({"a", "b", s + Rat(1)}, -1);
  for (int k = -3; k <= 3; ++k) CHECK(pole_order_at(q, {Rat(k, 2)}) == 0);
  CHECK(pole_order_along(p, solve_affine({s}, 1)) == 0);
}

TEST_CASE("property: pole order is additive") {
  const std::string ids[] = {"a", "b"};
  auto random_product = [&](std::size_t dim) {
    LTermProduct p;
    for (int t = test::uniform(0, 4); t > 0; --t) {
      AffineForm f = AffineForm::zero(dim);
      f.coeffs[test::uniform(0, static_cast<int>(dim) - 1)] = Rat(1);
      f.constant = Rat(test::uniform(-2, 2));
      p.mul({ids[test::uniform(0, 1)], ids[test::uniform(0, 1)], f}, test::uniform(-2, 2));
    }
    return p;
  };
  for (int k = 0; k < test::kCases; ++k) {
    const std::size_t dim = test::uniform(1, 3);
    auto a = random_product(dim), b = random_product(dim);
    CoordVector pt;
    for (std::size_t i = 0; i < dim; ++i) pt.push_back(Rat(test::uniform(-2, 2)));
    CHECK(pole_order_at(a * b, pt) == pole_order_at(a, pt) + pole_order_at(b, pt));
    CHECK(pole_order_at(a.inverse(), pt) == -pole_order_at(a, pt));
  }
}

TEST_CASE("regularity of the swap on pi1 x pi1") {
  const auto chi = test::chi();
  for (int d = 1; d <= 4; ++d) {
    const auto r = mzeros_regularity(chi, B(chi, "chi", d));
    CHECK(r.regular);
    CHECK(r.order == 0);
    CHECK(r.numerator_poles == r.denominator_poles);
  }
}
