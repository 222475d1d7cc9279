#include <doctest.h>

#include "gpif/dsl.hpp"
#include "gpif/props.hpp"

using namespace gpif;
using namespace gpif::props;
using finring::RingSpec;

namespace {

InstanceFamily small_family() {
  return InstanceFamily::of_rings({RingSpec::zmod(4), RingSpec::zmod(6), RingSpec::zmod(12), RingSpec::gf(3),
                                   RingSpec::product({RingSpec::zmod(2), RingSpec::zmod(4)})});
}

// replays a counterexample script and returns the single query's output
dsl::RunResult replay(const std::string& script) { return dsl::run_script(dsl::parse_script(script)); }

}  // namespace

TEST_CASE("property names") {
  CHECK(all_properties().size() == 13);
  for (auto id : all_properties()) CHECK(parse_property(property_name(id)) == id);
  CHECK_FALSE(parse_property("NOT-A-PROPERTY").has_value());
  CHECK(property_name(PropertyId::DsumMax) == "DSUM-MAX");
}

TEST_CASE("examples from the property table") {
  auto fam = InstanceFamily::of_rings({RingSpec::zmod(4), RingSpec::zmod(6)});
  fam.cap = 64;
  const auto dmax = check_property(PropertyId::DsumMax, fam);
  CHECK(dmax.pass);
  CHECK(dmax.instances > 0);
  const auto pd = check_property(PropertyId::PowerDistinct, InstanceFamily::of_rings({RingSpec::zmod(8)}));
  CHECK(pd.pass);
  CHECK(pd.instances > 0);
  CHECK_THROWS_AS(check_property(PropertyId::UniqueMultiset, InstanceFamily::of_rings({})), ConfigError);
}

TEST_CASE("cap 1 gives vacuous passes") {
  auto fam = small_family();
  fam.cap = 1;
  for (const auto& r : run_suite(fam)) {
    CHECK(r.pass);
    CHECK(r.instances == 0);
  }
}

TEST_CASE("bad families are configuration errors") {
  auto fam = small_family();
  fam.cap = 5000;
  CHECK_THROWS_AS(check_property(PropertyId::AssChain, fam), ConfigError);
  fam = small_family();
  fam.exhaustive = false;
  fam.samples = 0;
  CHECK_THROWS_AS(check_property(PropertyId::AssChain, fam), ConfigError);
}

TEST_CASE("every property passes on a small exhaustive family") {
  for (const auto& r : run_suite(small_family())) {
    INFO(property_name(r.id), ": ", r.assertion, " ", r.detail);
    CHECK(r.pass);
    CHECK(r.instances > 0);
    CHECK(r.counterexample.empty());
  }
}

TEST_CASE("sampled runs are reproducible") {
  auto fam = InstanceFamily::default_family();
  fam.exhaustive = false;
  fam.samples = 40;
  fam.seed = 17;
  for (auto id : {PropertyId::UniqueMultiset, PropertyId::DsumRegular, PropertyId::ExistIff}) {
    const auto a = check_property(id, fam);
    const auto b = check_property(id, fam);
    CHECK(a.pass);
    CHECK(a.instances == 40);
    CHECK(report_json(a, false) == report_json(b, false));
    const auto xa = instances_for(id, fam);
    const auto xb = instances_for(id, fam);
    REQUIRE(xa.size() == xb.size());
    for (std::size_t i = 0; i < xa.size(); ++i) CHECK(instance_script(id, xa[i]) == instance_script(id, xb[i]));
  }
}

TEST_CASE("mutated colon is caught and the counterexample replays") {
  finmod::testing::ColonMutation mut;
  for (auto id : {PropertyId::FactorProduct, PropertyId::ColonChar}) {
    const auto r = check_property(id, small_family());
    REQUIRE_FALSE(r.pass);
    CHECK_FALSE(r.counterexample.empty());
    const auto res = replay(r.counterexample);
    CHECK(res.exit_code == 1);
    CHECK(res.output.find("FAIL") != std::string::npos);
    CHECK(res.output.find("assertion " + r.assertion + ":") != std::string::npos);
    // the replay must not depend on anything outside the script text
    CHECK(dsl::render(dsl::parse_script(r.counterexample)) == r.counterexample);
  }
}

TEST_CASE("instance scripts replay passing instances") {
  const auto insts = instances_for(PropertyId::DsumMax, InstanceFamily::of_rings({RingSpec::zmod(6)}));
  REQUIRE_FALSE(insts.empty());
  for (std::size_t i = 0; i < insts.size(); i += 5) {
    const auto res = replay(instance_script(PropertyId::DsumMax, insts[i]));
    CHECK(res.exit_code == 0);
  }
  const auto powers = instances_for(PropertyId::SelfFactorIff, InstanceFamily::of_rings({RingSpec::zmod(12)}));
  REQUIRE_FALSE(powers.empty());
  for (const auto& inst : powers) CHECK(replay(instance_script(PropertyId::SelfFactorIff, inst)).exit_code == 0);
}

TEST_CASE("report rendering") {
  PropertyReport r;
  r.id = PropertyId::Reorder;
  r.instances = 3;
  CHECK(report_text(r, false) == "PASS  REORDER  instances=3");
  CHECK(report_json(r, false) ==
        R"({"schema":"gpif-report/1","kind":"property","property":"REORDER","instances":3,"pass":true})");
  r.pass = false;
  r.assertion = "reorder";
  r.detail = "d";
  r.counterexample = "ring Z/2\n";
  CHECK(report_text(r, false).rfind("FAIL  REORDER  instances=3", 0) == 0);
}
