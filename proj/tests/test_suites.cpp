#include <cstdlib>

#include "doctest.h"
#include "rankin/suites.hpp"

using namespace rankin;
using namespace rankin::suites;

namespace {
void require_pass(const SuiteResult& r) {
  CHECK_FALSE(r.checks.empty());
  for (const auto& c : r.checks) {
    INFO(r.suite << "/" << c.name << ": " << c.detail);
    CHECK(c.pass);
  }
  CHECK(r.pass());
}
}  // namespace

TEST_CASE("run_indexed is independent of the worker count") {
  auto sq = [](std::size_t i) { return static_cast<long>(i * i); };
  const auto one = run_indexed<long>(100, sq, 1), four = run_indexed<long>(100, sq, 4);
  CHECK(one == four);
  CHECK(one[9] == 81);
  CHECK(run_indexed<long>(0, sq, 4).empty());
  CHECK_THROWS(run_indexed<long>(8, [](std::size_t i) -> long { if (i == 5) throw std::runtime_error("x"); return 0; }, 3));
}

TEST_CASE("thread cap honours the environment") {
  setenv("RANKIN_BOOKKEEPER_THREADS", "3", 1);
  CHECK(thread_cap() == 3);
  setenv("RANKIN_BOOKKEEPER_THREADS", "0", 1);
  CHECK(thread_cap() >= 1);
  unsetenv("RANKIN_BOOKKEEPER_THREADS");
  CHECK(thread_cap() >= 1);
}

TEST_CASE("rs suite") { require_pass(rs_suite()); }

TEST_CASE("pipeline suite") {
  const auto r = pipeline_suite(standard_corpus());
  require_pass(r);
  CHECK(r.checks.front().name == "gl1_gl2_example");
  CHECK(r.checks.size() == 1 + 3 * 3);
}

TEST_CASE("counting suite") {
  const auto r = counting_suite(standard_corpus());
  require_pass(r);
  CHECK(r.checks.size() == 9);
}

TEST_CASE("affine suite") { require_pass(affine_suite(standard_corpus(), 3)); }

TEST_CASE("scalar-factor suite") { require_pass(nij_suite()); }

TEST_CASE("numeric suite") { require_pass(zeta_suite()); }

TEST_CASE("structural suite") {
  const auto a = structural_suite(), b = structural_suite();
  require_pass(a);
  REQUIRE(a.checks.size() == b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) CHECK(a.checks[i].detail == b.checks[i].detail);
}
