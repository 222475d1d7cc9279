// Acceptance run: one PASS/FAIL line per criterion, exit 1 on any failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "../finmod_oracles.hpp"
#include "gpif/dsl.hpp"
#include "gpif/error.hpp"
#include "gpif/finmod.hpp"
#include "gpif/groebner.hpp"
#include "gpif/props.hpp"

using namespace gpif;
using nlohmann::json;
namespace oracle = gpif::test::oracle;
using finmod::Bits;
using finmod::Elem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3fs", s);
  return buf;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw ConfigError("cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// query records of a JSON run, in order
std::vector<json> query_records(const std::string& script) {
  const auto res = dsl::run_script(dsl::parse_script(script), {dsl::RunOptions::Format::Json});
  std::vector<json> out;
  std::istringstream lines(res.output);
  for (std::string line; std::getline(lines, line);) {
    auto j = json::parse(line);
    if (j["kind"] == "error") throw ConfigError("script error: " + j["message"].get<std::string>());
    if (j["kind"] == "query") out.push_back(std::move(j));
  }
  return out;
}

// ---------------------------------------------------------------- 1, 2

Outcome obstructed_square() {
  const auto t0 = Clock::now();
  std::string bad;
  for (const char* field : {"GF(2)", "QQ"}) {
    const auto recs = query_records(std::string("ring poly ") + field +
                                    "[x,y,z] / (x*y - z^2, x^2 - y*z)\n"
                                    "ideal p = (x, z) prime\n"
                                    "query ideal-eq p*(x,y,z) == p^2\n"
                                    "query power-stabilizes p ^ 2\n"
                                    "query obstruction p ^ 2 candidates (x,y,z)\n");
    const bool ok = recs.size() == 3 && recs[0]["value"] == true && recs[1]["value"] == false &&
                    recs[2]["value"] == true && recs[2]["result"] == "certificate (x, y, z)";
    if (!ok) bad += std::string(" ") + field;
  }
  const double s = seconds_since(t0);
  if (!bad.empty()) return {false, "wrong results over" + bad};
  return {s < 1.0, "GF(2) and QQ in " + fmt_seconds(s)};
}

Outcome absorbing_product() {
  const auto t0 = Clock::now();
  std::string bad;
  for (const char* field : {"GF(2)", "QQ"}) {
    const auto recs = query_records(std::string("ring poly ") + field +
                                    "[x,y,z] / (x*y - z, y*z - x)\n"
                                    "ideal p = (x, y, z)\n"
                                    "ideal q = (x, z)\n"
                                    "query ideal-eq p*q == q\n");
    if (recs.size() != 1 || recs[0]["value"] != true) bad += std::string(" ") + field;
  }
  const double s = seconds_since(t0);
  if (!bad.empty()) return {false, "wrong results over" + bad};
  return {s < 1.0, "GF(2) and QQ in " + fmt_seconds(s)};
}

// ---------------------------------------------------------------- 3

Outcome golden_values() {
  using finring::FiniteRing;
  using finring::RingSpec;
  const auto t0 = Clock::now();
  std::string bad;

  struct Golden {
    unsigned n;
    long sub;  // generator of N in R = M
    std::vector<std::pair<long, unsigned>> factors;
    std::string text;
  };
  const std::vector<Golden> goldens{
      {8, 0, {{2, 3}}, "(2)^3"},
      {12, 0, {{2, 2}, {3, 1}}, "(2)^2 * (3)^1"},
      {8, 4, {{2, 2}}, "(2)^2"},
  };
  for (const auto& g : goldens) {
    const auto r = FiniteRing::build(RingSpec::zmod(g.n));
    const auto m = finmod::build_module(r, 1, {});
    const finmod::MElem gen = m->from_tuple(std::vector<Elem>{r->element_from_integer(g.sub)});
    const auto n = finmod::submodule_closure(m, std::span<const finmod::MElem>(&gen, 1));
    const auto f = finmod::factorize(m, n);

    oracle::Multiset expect;
    for (const auto& [x, e] : g.factors) {
      const Elem xe = r->element_from_integer(x);
      expect[finring::ideal_closure(r, std::span<const Elem>(&xe, 1)).bits()] = e;
    }
    std::map<Bits, std::set<oracle::Multiset>> memo;
    const auto all = oracle::bf_all_multisets(*m, m->all_set(), n.bits(), memo);
    const bool ok = f.to_string() == g.text && oracle::as_multiset(f) == expect && all.size() == 1 &&
                    *all.begin() == expect;
    if (!ok) bad += " Z/" + std::to_string(g.n) + "(" + std::to_string(g.sub) + ")=" + f.to_string();
  }

  {
    const auto r = FiniteRing::build(RingSpec::zmod(6));
    const auto m = finmod::build_module(r, 1, {});
    const auto zero = finmod::Submodule::zero(m);
    const auto ass = finmod::associated_primes(m, zero);
    std::string text;
    std::set<Bits> got;
    for (const auto& p : ass) {
      text += (text.empty() ? "" : ", ") + p.to_string();
      got.insert(p.ideal().bits());
    }
    const bool ok = text == "(2), (3)" && got == oracle::bf_ass(*m, m->all_set(), zero.bits());
    if (!ok) bad += " Ass(Z/6)={" + text + "}";
  }

  const double s = seconds_since(t0);
  if (!bad.empty()) return {false, "mismatch:" + bad};
  return {s < 1.0, "4 values, all-filtration oracle agrees, " + fmt_seconds(s)};
}

// ---------------------------------------------------------------- 4

Outcome full_suite() {
  const auto t0 = Clock::now();
  const auto reports = props::run_suite(props::InstanceFamily::default_family());
  const double s = seconds_since(t0);
  std::size_t instances = 0;
  std::string failed;
  for (const auto& r : reports) {
    instances += r.instances;
    if (!r.pass) failed += " " + std::string(props::property_name(r.id)) + "[" + r.assertion + "]";
    std::printf("      %s\n", props::report_text(r, true).c_str());
  }
  if (reports.size() != props::all_properties().size()) return {false, "suite ran only part of the properties"};
  if (!failed.empty()) return {false, "violations:" + failed};
  return {s < 300.0, std::to_string(reports.size()) + " properties, " + std::to_string(instances) +
                         " instances, " + fmt_seconds(s)};
}

// ---------------------------------------------------------------- 5

Outcome unique_multiset() {
  const auto cases = props::module_cases(props::InstanceFamily::default_family());
  std::size_t checked = 0, orders = 0;
  for (const auto& c : cases) {
    if (c.sub.is_whole()) continue;
    const auto ass = finmod::associated_primes(c.module, c.sub);
    if (ass.size() < 2) continue;
    ++checked;

    const auto canonical = finmod::factorize(c.module, c.sub);
    std::map<Bits, std::set<oracle::Multiset>> memo;
    const auto all = oracle::bf_all_multisets(*c.module, c.module->all_set(), c.sub.bits(), memo);
    if (all.size() != 1 || *all.begin() != oracle::as_multiset(canonical)) {
      return {false, "filtrations disagree on\n" + props::instance_script(props::PropertyId::UniqueMultiset, std::vector{c})};
    }

    std::vector<std::size_t> perm(ass.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    do {
      std::vector<finring::FiniteIdeal> pref;
      for (std::size_t i : perm) pref.push_back(ass[i].ideal());
      const auto f = finmod::rpe_filtration(c.module, c.sub, finmod::TieBreak::given(pref));
      f.validate();
      ++orders;
      if (finmod::PrimeFactorization::from_primes(f.primes()) != canonical) {
        return {false, "tie-break order changes the multiset on\n" + props::instance_script(props::PropertyId::UniqueMultiset, std::vector{c})};
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  if (checked == 0) return {false, "no instance with two associated primes"};
  return {true, std::to_string(checked) + " instances, " + std::to_string(orders) +
                    " tie-break orders, all-filtration oracle agrees"};
}

// ---------------------------------------------------------------- 6

Outcome dsum_max() {
  auto family = props::InstanceFamily::default_family();
  family.exhaustive = false;
  family.samples = 200;
  family.seed = 20240601;
  const auto insts = props::instances_for(props::PropertyId::DsumMax, family);
  if (insts.size() != 200) return {false, "expected 200 sampled pairs, got " + std::to_string(insts.size())};

  for (const auto& inst : insts) {
    const auto& pair = std::get<std::vector<props::ModuleCase>>(inst);
    if (pair.size() != 2) return {false, "sample is not a pair"};
    std::vector<finmod::ModulePtr> ms;
    std::vector<finmod::Submodule> ns;
    std::vector<oracle::Multiset> parts;
    for (const auto& c : pair) {
      ms.push_back(c.module);
      ns.push_back(c.sub);
      if (c.sub.is_whole()) {
        parts.emplace_back();
        continue;
      }
      std::map<Bits, std::set<oracle::Multiset>> memo;
      const auto all = oracle::bf_all_multisets(*c.module, c.module->all_set(), c.sub.bits(), memo);
      if (all.size() != 1) return {false, "summand without a unique multiset"};
      parts.push_back(*all.begin());
    }
    // componentwise max of the exponent vectors
    oracle::Multiset want = parts[0];
    for (const auto& [p, e] : parts[1]) want[p] = std::max(want[p], e);

    const auto [sum, sub] = finmod::direct_sum(ms, ns);
    const oracle::Multiset got =
        sub.is_whole() ? oracle::Multiset{} : oracle::as_multiset(finmod::factorize(sum, sub));
    if (got != want) {
      return {false, "max formula fails on\n" + props::instance_script(props::PropertyId::DsumMax, inst)};
    }
  }
  const auto report = props::check_property(props::PropertyId::DsumMax, family);
  if (!report.pass) return {false, "DSUM-MAX property reports " + report.assertion};
  return {true, "200 seeded pairs, exponents equal componentwise max"};
}

// ---------------------------------------------------------------- 7

arith::Field field_of(const std::string& name) {
  if (name == "QQ") return arith::Field::rationals();
  return arith::Field::prime(std::stoul(name.substr(3, name.size() - 4)));  // GF(p)
}

std::vector<poly::Polynomial> expr_gens(const dsl::Expr& e, const poly::RingPtr& ring) {
  std::vector<poly::Polynomial> out;
  if (e.kind == dsl::Expr::Kind::Group) {
    for (const auto& k : e.kids) out.push_back(dsl::parse_polynomial(dsl::render(k), ring));
  } else {
    out.push_back(dsl::parse_polynomial(dsl::render(e), ring));
  }
  return out;
}

// relation ideals and relation + declared ideals of the bundled polynomial scripts
std::vector<std::pair<std::string, std::vector<poly::Polynomial>>> bundled_ideals() {
  std::vector<std::pair<std::string, std::vector<poly::Polynomial>>> out;
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(GPIF_SCRIPTS_DIR)) {
    if (e.path().extension() == ".gpif") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    const auto script = dsl::parse_script(slurp(f));
    poly::RingPtr ring;
    std::vector<poly::Polynomial> rels;
    for (const auto& st : script.statements) {
      if (st.kind == dsl::Statement::Kind::Ring) {
        if (st.ring.kind != dsl::RingDecl::Kind::Poly) break;
        for (auto order : {poly::MonomialOrder::grevlex(), poly::MonomialOrder::lex()}) {
          ring = poly::PolyRing::make(st.ring.vars, field_of(st.ring.field), order);
          rels.clear();
          for (const auto& r : st.ring.relations) rels.push_back(dsl::parse_polynomial(dsl::render(r), ring));
          out.emplace_back(f.filename().string() + " relations", rels);
          for (const auto& other : script.statements) {
            if (other.kind != dsl::Statement::Kind::Ideal) continue;
            auto gens = expr_gens(other.ideal.value, ring);
            gens.insert(gens.end(), rels.begin(), rels.end());
            out.emplace_back(f.filename().string() + " " + other.ideal.name, gens);
          }
        }
      }
    }
  }
  return out;
}

Outcome groebner_determinism() {
  const auto ideals = bundled_ideals();
  if (ideals.empty()) return {false, "no bundled polynomial ideals found"};
  std::mt19937_64 rng(77);
  for (const auto& [name, gens] : ideals) {
    const auto base = groebner::buchberger(gens);
    for (int t = 0; t < 100; ++t) {
      auto g = gens;
      std::shuffle(g.begin(), g.end(), rng);
      if (groebner::buchberger(g) != base) return {false, "basis depends on generator order for " + name};
    }
  }

  const auto ring = poly::PolyRing::make({"x", "y"}, arith::Field::rationals(), poly::MonomialOrder::grevlex());
  const auto P = [&](const char* s) { return dsl::parse_polynomial(s, ring); };
  const auto xy = groebner::buchberger({P("x"), P("x + y")});
  const auto one = groebner::buchberger({P("x"), P("x - 1")});
  if (xy != std::vector<poly::Polynomial>{P("x"), P("y")}) return {false, "GB(x, x+y) is not {x, y}"};
  if (one != std::vector<poly::Polynomial>{P("1")}) return {false, "GB(x, x-1) is not {1}"};
  return {true, std::to_string(ideals.size()) + " bundled ideals x 100 permutations, both fixed bases exact"};
}

// ---------------------------------------------------------------- 8

Outcome mutation() {
  std::string detail;
  for (auto id : {props::PropertyId::FactorProduct, props::PropertyId::ColonChar}) {
    const std::string name(props::property_name(id));
    std::string script;
    {
      finmod::testing::ColonMutation mut;
      const auto r = props::check_property(id, props::InstanceFamily::default_family());
      if (r.pass) return {false, name + " still passes under the mutation"};
      if (r.counterexample.empty()) return {false, name + " failed without a counterexample"};
      script = r.counterexample;
      const auto replay = dsl::run_script(dsl::parse_script(script));
      if (replay.exit_code != 1 || replay.output.find("FAIL") == std::string::npos) {
        return {false, name + " counterexample does not replay"};
      }
      detail += " " + name + "[" + r.assertion + "]";
    }
    // the same script is clean once the mutation is gone
    if (dsl::run_script(dsl::parse_script(script)).exit_code != 0) {
      return {false, name + " counterexample fails without the mutation"};
    }
  }
  return {true, "caught and replayed:" + detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"obstructed square p = (x, z)", obstructed_square},
      {"absorbing product p*q == q", absorbing_product},
      {"finite-engine golden values", golden_values},
      {"property suite, default family", full_suite},
      {"UNIQUE-MULTISET over tie-break orders", unique_multiset},
      {"DSUM-MAX on 200 sampled pairs", dsum_max},
      {"Groebner basis determinism", groebner_determinism},
      {"mutation sensitivity", mutation},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s  %zu  %s  (%s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
