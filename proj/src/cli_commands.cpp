#include "rankin/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "rankin/json_io.hpp"
#include "rankin/suites.hpp"

namespace rankin::cli {

namespace {

using io::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::optional<int> n;
  std::string registry_path;
  std::string out_path;
  std::optional<int> limit_blocks;
  bool as_json = false;
};

std::vector<suites::NamedRegistry> corpus_for(const RunConfig& cfg) {
  if (cfg.registry_path.empty()) return suites::standard_corpus();
  return {{std::filesystem::path(cfg.registry_path).stem().string(), io::load_registry(cfg.registry_path)}};
}

TokenRegistry registry_for(const RunConfig& cfg, const char* what) {
  if (cfg.registry_path.empty()) throw UsageError(std::string(what) + " needs --registry");
  return io::load_registry(cfg.registry_path);
}

int require_n(const RunConfig& cfg, int lo) {
  if (!cfg.n) throw UsageError("-n is required");
  if (*cfg.n < lo) throw UsageError("-n must be >= " + std::to_string(lo));
  return *cfg.n;
}

void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out_path);
  if (!f) throw UsageError("cannot write '" + cfg.out_path + "'");
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------------------------

template <class D>
bool within_limit(const RunConfig& cfg, const D& d) {
  return !cfg.limit_blocks || suites::block_count(d) <= static_cast<std::size_t>(*cfg.limit_blocks);
}

int cmd_enumerate(const RunConfig& cfg, bool rs, bool relevant, bool increasing, std::ostream& out) {
  if (rs + relevant + increasing != 1) throw UsageError("enumerate needs exactly one of --rs, --relevant, --increasing");
  json items = json::array();
  json o;
  if (rs) {
    const int n = require_n(cfg, 1);
    for (const auto& q : enumerate_rs(n)) items.push_back(io::to_json(q));
    o["kind"] = "rs";
    o["n"] = n;
  } else {
    const int n = require_n(cfg, 0);
    const auto reg = registry_for(cfg, "enumerate");
    if (reg.empty()) throw UsageError("registry is empty");
    if (relevant) {
      for (const auto& d : enumerate_relevant(n, reg)) {
        if (cfg.limit_blocks && d.m() > static_cast<std::size_t>(*cfg.limit_blocks)) continue;
        json e = io::to_json(reg, d);
        e["W_pi_order"] = W_pi_order(d);
        e["orbit_size"] = W_pi_order(d) / stab_order(d);
        items.push_back(e);
      }
      o["kind"] = "relevant";
    } else {
      for (const auto& d : enumerate_increasing(n, reg))
        if (within_limit(cfg, d)) items.push_back(io::to_json(reg, d));
      o["kind"] = "increasing";
    }
    o["n"] = n;
    o["registry"] = io::to_json(reg);
  }
  o["count"] = items.size();
  o["items"] = items;
  emit(cfg, out, dump(o));  // listings are always JSON
  return kPass;
}

// ---------------------------------------------------------------------------------------------

json suite_json(const suites::SuiteResult& r) {
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  return {{"suite", r.suite}, {"pass", r.pass()}, {"checks", checks}};
}

std::string suite_text(const suites::SuiteResult& r) {
  std::ostringstream s;
  s << (r.pass() ? "PASS " : "FAIL ") << r.suite << "\n";
  for (const auto& c : r.checks) s << "  " << (c.pass ? "ok   " : "FAIL ") << c.name << "  " << c.detail << "\n";
  return s.str();
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"rs", "counting", "affine", "nij", "zeta", "pipeline", "structural"};
  return names;
}

int cmd_verify(const RunConfig& cfg, const std::string& suite, std::ostream& out) {
  std::vector<std::string> run;
  if (suite == "all") {
    run = suite_names();
  } else if (std::find(suite_names().begin(), suite_names().end(), suite) != suite_names().end()) {
    run = {suite};
  } else {
    throw UsageError("unknown suite '" + suite + "' (rs|counting|affine|nij|zeta|pipeline|structural|all)");
  }
  if (cfg.n && *cfg.n < 0) throw UsageError("-n must be >= 0");
  if (cfg.limit_blocks && *cfg.limit_blocks < 1) throw UsageError("--limit-blocks must be positive");
  const auto corpus = corpus_for(cfg);

  std::vector<suites::SuiteResult> results;
  json extra = json::array();
  for (const auto& s : run) {
    if (s == "rs") results.push_back(suites::rs_suite(cfg.n ? std::max(1, *cfg.n) : 4));
    if (s == "counting")
      results.push_back(suites::counting_suite(corpus, cfg.limit_blocks ? *cfg.limit_blocks : 6));
    if (s == "affine") results.push_back(suites::affine_suite(corpus, cfg.n ? *cfg.n : 3));
    if (s == "nij") results.push_back(suites::nij_suite());
    if (s == "structural") results.push_back(suites::structural_suite());
    if (s == "zeta") {
      results.push_back(suites::zeta_suite());
      for (const auto& r : {zeta::functional_equation_grid(), zeta::reflection_grid(), zeta::residue_checks()})
        extra.push_back(io::to_json(r));
    }
    if (s == "pipeline") {
      if (!cfg.registry_path.empty() && cfg.n) {
        // explicit (n, registry): the pipeline report itself
        const auto& reg = corpus.front().reg;
        suites::SuiteResult r{"pipeline", {suites::pipeline_check(corpus.front().name, *cfg.n, reg)}, 0};
        const auto p = pipeline(*cfg.n, reg);
        extra.push_back(io::pipeline_report(*cfg.n, reg, p.classes, p.classes == direct_enumeration(*cfg.n, reg)));
        results.push_back(r);
      } else {
        results.push_back(suites::pipeline_suite(corpus, cfg.n ? *cfg.n : 2));
      }
    }
  }
  bool pass = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass(); });
  if (cfg.as_json) {
    json o;
    o["suite"] = suite;
    o["pass"] = pass;
    json arr = json::array();
    for (const auto& r : results) arr.push_back(suite_json(r));
    o["results"] = arr;
    if (!extra.empty()) o["reports"] = extra;
    emit(cfg, out, dump(o));
  } else {
    std::string text;
    for (const auto& r : results) text += suite_text(r);
    for (const auto& e : extra) text += dump(e);
    emit(cfg, out, text);
  }
  return pass ? kPass : kCheckFailed;
}

// ---------------------------------------------------------------------------------------------

WeylBlockElement weyl_from_json(const json& j, std::size_t m, const char* what) {
  if (!j.is_array() || j.size() != m) throw io::InputError(std::string(what) + " must be a one-line permutation of the blocks");
  std::vector<int> p;
  for (const auto& x : j) p.push_back(x.get<int>() - 1);
  try {
    return WeylBlockElement(p);
  } catch (const std::invalid_argument& e) {
    throw io::InputError(std::string(what) + ": " + e.what());
  }
}

int cmd_divisor(const RunConfig& cfg, const std::string& datum_path, const std::string& which, std::ostream& out) {
  static const std::vector<std::string> kinds{"E", "0", "Z", "P", "Pup", "res", "w"};
  if (std::find(kinds.begin(), kinds.end(), which) == kinds.end())
    throw UsageError("--which must be one of E|0|Z|P|Pup|res|w");
  const auto reg = registry_for(cfg, "divisor");
  const auto raw = io::read_file(datum_path);
  const auto d = io::datum_from_json(reg, raw);
  DivisorPoly p;
  if (which == "E") p = L_pi_E(d.pi);
  if (which == "0") p = L_pi_0(d.pi);
  if (which == "res") p = L_pi_res(d.pi);
  if (which == "Z") p = L_pi_Z(reg, d.pi);
  if (which == "P") {
    if (!d.relevant) throw io::InputError("which=P needs a relevant datum (4-entry I)");
    p = L_pi_P(reg, *d.relevant);
  }
  if (which == "Pup") {
    if (!d.increasing) throw io::InputError("which=Pup needs an increasing datum (6-entry I)");
    p = L_pi_P_up(reg, *d.increasing);
  }
  if (which == "w") {
    if (!raw.contains("w_n") || !raw.contains("w_n1")) throw io::InputError("which=w needs \"w_n\" and \"w_n1\"");
    p = L_pi_w(d.pi, weyl_from_json(raw.at("w_n"), d.pi.side_n.size(), "w_n"),
               weyl_from_json(raw.at("w_n1"), d.pi.side_n1.size(), "w_n1"));
  }
  json o;
  o["which"] = which;
  o["dim"] = p.dim();
  o["divisor"] = io::to_json(p);
  emit(cfg, out, cfg.as_json ? dump(o) : p.str() + "\n");
  return kPass;
}

int cmd_pipeline(const RunConfig& cfg, std::ostream& out) {
  const int n = require_n(cfg, 0);
  const auto reg = registry_for(cfg, "pipeline");
  const auto p = pipeline(n, reg);
  const bool match = p.classes == direct_enumeration(n, reg);
  emit(cfg, out, dump(io::pipeline_report(n, reg, p.classes, match)));
  return match ? kPass : kCheckFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bookkeeping for the Rankin-Selberg spectral expansion: enumeration, divisors, verification"};
  app.require_subcommand(1);
  RunConfig cfg;
  auto common = [&](CLI::App* sub) {
    sub->add_option("-n", cfg.n, "GL(n) x GL(n+1)");
    sub->add_option("--registry", cfg.registry_path, "token registry JSON");
    sub->add_option("--out", cfg.out_path, "write output to this path");
    sub->add_option("--limit-blocks,--max-blocks", cfg.limit_blocks, "bound on the number of blocks");
    sub->add_flag("--json", cfg.as_json, "JSON output");
  };

  bool rs = false, relevant = false, increasing = false;
  auto* en = app.add_subcommand("enumerate", "list RS parabolics, relevant or increasing inducing data");
  common(en);
  en->add_flag("--rs", rs);
  en->add_flag("--relevant", relevant);
  en->add_flag("--increasing", increasing);

  std::string suite;
  auto* ve = app.add_subcommand("verify", "run verification suites");
  common(ve);
  ve->add_option("suite,--suite", suite, "rs|counting|affine|nij|zeta|pipeline|structural|all");

  std::string datum_path, which;
  auto* di = app.add_subcommand("divisor", "singularity divisor of a datum");
  common(di);
  di->add_option("datum", datum_path, "datum JSON file")->required();
  di->add_option("--which", which, "E|0|Z|P|Pup|res|w")->required();

  auto* pi = app.add_subcommand("pipeline", "run the residue-graph pipeline and compare with the direct enumeration");
  common(pi);

  std::vector<std::string> argv_store(args);
  if (argv_store.empty()) argv_store.push_back("rankin_bookkeeper");
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*en) return cmd_enumerate(cfg, rs, relevant, increasing, out);
    if (*ve) {
      if (suite.empty()) throw UsageError("verify needs a suite");
      return cmd_verify(cfg, suite, out);
    }
    if (*di) return cmd_divisor(cfg, datum_path, which, out);
    if (*pi) return cmd_pipeline(cfg, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const io::InputError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Unsupported& e) {
    err << "unsupported: " << e.what() << "\n";
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed JSON input: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace rankin::cli
