#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "rankin/cli.hpp"
#include "test_support.hpp"

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {
struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "rankin_bookkeeper");
  std::ostringstream out, err;
  const int code = rankin::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string registry(const std::string& name) { return rankin::test::data_dir() + "/registries/" + name + ".json"; }

std::string write_temp(const std::string& name, const std::string& text) {
  const auto dir = fs::temp_directory_path() / "rankin_cli_test";
  fs::create_directories(dir);
  const auto p = (dir / name).string();
  std::ofstream(p) << text;
  return p;
}

const char* kBorel = R"({"pi":{"side_n":[{"sigma":"chi","d":1}],"side_n1":[{"sigma":"chi","d":1},{"sigma":"chi","d":1}]}})";
}  // namespace

TEST_CASE("enumerate") {
  auto r = run({"enumerate", "--rs", "-n", "2"});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j.at("count") == 8);
  CHECK(j.at("items").size() == 8);
  CHECK(j.at("items")[0].contains("i0"));

  r = run({"enumerate", "--relevant", "-n", "1", "--registry", registry("chi")});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out).at("count") == 4);
  r = run({"enumerate", "--increasing", "-n", "1", "--registry", registry("chi"), "--max-blocks", "3"});
  REQUIRE(r.code == 0);
  for (const auto& it : json::parse(r.out).at("items")) CHECK(it.at("pi").at("side_n").size() <= 3);

  CHECK(run({"enumerate", "-n", "2"}).code == 2);
  CHECK(run({"enumerate", "--rs", "--relevant", "-n", "2"}).code == 2);
  CHECK(run({"enumerate", "--rs"}).code == 2);
  CHECK(run({"enumerate", "--relevant", "-n", "1"}).code == 2);
  CHECK(run({"enumerate", "--relevant", "-n", "1", "--registry", "/nonexistent.json"}).code == 2);
}

TEST_CASE("verify") {
  auto r = run({"verify", "pipeline", "-n", "1", "--registry", registry("chi"), "--json"});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j.at("pass") == true);
  CHECK(j.at("reports")[0].at("matches_direct_enumeration") == true);
  CHECK(j.at("reports")[0].at("classes").size() == 4);

  for (const char* s : {"rs", "nij", "zeta", "structural"}) {
    r = run({"verify", s});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("PASS", 0) == 0);
  }
  // JSON output is deterministic
  CHECK(run({"verify", "--suite", "affine", "-n", "2", "--json"}).out.size() > 0);
  auto a = json::parse(run({"verify", "structural", "--json"}).out), b = json::parse(run({"verify", "structural", "--json"}).out);
  for (auto* x : {&a, &b})
    for (auto& res : x->at("results")) res.erase("seconds");
  CHECK(a == b);

  CHECK(run({"verify", "nosuch"}).code == 2);
  CHECK(run({"verify"}).code == 2);
  CHECK(run({"verify", "counting", "--limit-blocks", "0"}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({}).code == 2);
}

TEST_CASE("divisor") {
  const auto datum = write_temp("borel.json", kBorel);
  auto r = run({"divisor", datum, "--which", "0", "--registry", registry("chi"), "--json"});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j.at("dim") == 3);
  REQUIRE(j.at("divisor").size() == 1);
  CHECK(j.at("divisor")[0].at("form").at("coeffs") == json::array({"0", "1", "-1"}));

  r = run({"divisor", datum, "--which", "E", "--registry", registry("chi"), "--json"});
  REQUIRE(r.code == 0);
  j = json::parse(r.out);
  REQUIRE(j.at("divisor").size() == 2);
  std::set<std::string> consts;
  for (const auto& f : j.at("divisor")) consts.insert(f.at("form").at("const").get<std::string>());
  CHECK(consts == std::set<std::string>{"1", "-1"});

  r = run({"divisor", datum, "--which", "Z", "--registry", registry("chi"), "--json"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out).at("divisor").size() == 5);

  // w needs one-line permutations; degree-2 blocks are out of scope
  auto wd = json::parse(kBorel);
  wd["w_n"] = {1};
  wd["w_n1"] = {2, 1};
  r = run({"divisor", write_temp("w.json", wd.dump()), "--which", "w", "--registry", registry("chi"), "--json"});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out).at("divisor").size() == 1);
  CHECK(run({"divisor", datum, "--which", "w", "--registry", registry("chi")}).code == 2);
  auto sp = json::parse(R"({"pi":{"side_n":[{"sigma":"chi","d":1}],"side_n1":[{"sigma":"chi","d":2}]},"w_n":[1],"w_n1":[1]})");
  r = run({"divisor", write_temp("sp.json", sp.dump()), "--which", "w", "--registry", registry("chi")});
  CHECK(r.code == 2);
  CHECK(r.err.find("unsupported") != std::string::npos);

  CHECK(run({"divisor", datum, "--which", "P", "--registry", registry("chi")}).code == 2);
  CHECK(run({"divisor", datum, "--which", "X", "--registry", registry("chi")}).code == 2);
  CHECK(run({"divisor", write_temp("bad.json", "{not json"), "--which", "E", "--registry", registry("chi")}).code == 2);
  CHECK(run({"divisor", datum, "--which", "E"}).code == 2);
}

TEST_CASE("pipeline subcommand and --out") {
  const auto out = (fs::temp_directory_path() / "rankin_cli_test" / "pipe.json").string();
  fs::create_directories(fs::path(out).parent_path());
  auto r = run({"pipeline", "-n", "1", "--registry", registry("chi"), "--out", out});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(out);
  auto j = json::parse(in);
  CHECK(j.at("n") == 1);
  CHECK(j.at("matches_direct_enumeration") == true);
}

TEST_CASE("the installed binary reports exit codes") {
  const std::string bin = RANKIN_BOOKKEEPER;
  auto status = [&](const std::string& args) {
    const int s = std::system((bin + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  CHECK(status("enumerate --rs -n 3") == 0);
  CHECK(status("verify nosuch") == 2);
  CHECK(status("--help") == 0);
  CHECK(status("verify rs -n 2 --json") == 0);
}
