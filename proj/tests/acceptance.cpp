// One line per acceptance criterion; exit status 0 iff all pass.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "rankin/suites.hpp"

using namespace rankin;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

Outcome from_suite(const suites::SuiteResult& r) {
  std::string failed;
  for (const auto& c : r.checks)
    if (!c.pass) failed += (failed.empty() ? "" : ", ") + c.name + " (" + c.detail + ")";
  return {r.pass(), failed.empty() ? std::to_string(r.checks.size()) + " checks" : "failed: " + failed};
}

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o{false, ""};
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = s < budget_s;
  const bool ok = o.pass && in_time;
  failures += !ok;
  std::printf("[%s] %d. %s — %s; %.2f s (budget %.0f s)%s\n", ok ? "PASS" : "FAIL", id, title, o.detail.c_str(), s, budget_s,
              in_time ? "" : " over budget");
  std::fflush(stdout);
}

}  // namespace

int main() {
  const auto corpus = suites::standard_corpus();

  criterion(1, "RS-parabolic parametrisation equals the brute-force set, n = 1..4", 10,
            [] { return from_suite(suites::rs_suite(4)); });

  criterion(2, "GL(1) x GL(2) pipeline reproduces the weighted classes exactly", 5, [] {
    const auto p = pipeline(1, suites::chi_registry());
    const bool ok = p.classes == suites::gl1_gl2_expected();
    std::string d;
    for (const auto& [cls, w] : p.classes.weights) {
      const auto I = cls.I();
      d += (d.empty() ? "" : ", ") + std::string("(") + std::to_string(I[0]) + "," + std::to_string(I[1]) + "," +
           std::to_string(I[2]) + "," + std::to_string(I[3]) + "):" + w.str();
    }
    return Outcome{ok, d};
  });

  criterion(3, "pipeline equals the direct enumeration for n <= 2 on the 3-token corpus", 120, [&] {
    suites::SuiteResult r{"pipeline", {}, 0};
    for (const auto& [name, reg] : corpus)
      for (int n = 0; n <= 2; ++n) r.checks.push_back(suites::pipeline_check(name, n, reg));
    return from_suite(r);
  });

  criterion(4, "counting lemmas and disjoint-union identities, contexts with <= 6 blocks", 600,
            [&] { return from_suite(suites::counting_suite(corpus, 6)); });

  criterion(5, "affine identities on enumerated relevant and increasing data, n <= 3", 600,
            [&] { return from_suite(suites::affine_suite(corpus, 3)); });

  criterion(6, "scalar-factor algebra: n_ij displays, discrete/cuspidal consistency, regularity", 600,
            [] { return from_suite(suites::nij_suite(5, 4)); });

  criterion(7, "numerics: functional equation, residues, regularised scalar factor, GL(1) x GL(2) residues", 30,
            [] { return from_suite(suites::zeta_suite()); });

  criterion(8, "structural laws, 200 randomised cases each", 600, [] { return from_suite(suites::structural_suite(200)); });

  std::printf("%s: %d/8 criteria passed\n", failures ? "FAIL" : "PASS", 8 - failures);
  return failures ? 1 : 0;
}
