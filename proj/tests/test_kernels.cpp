#include <doctest.h>

#include <random>

#include "gpif/finmod.hpp"
#include "gpif/kernels.hpp"

using namespace gpif;
using namespace gpif::finmod;
using kernels::Exec;

namespace {

std::vector<ModulePtr> large_modules() {
  std::vector<ModulePtr> out;
  using finring::RingSpec;
  out.push_back(build_module(finring::FiniteRing::build(RingSpec::zmod(16)), 2, {}));               // 256
  out.push_back(build_module(finring::FiniteRing::build(RingSpec::zmod(12)), 3, {{6, 0, 0}}));      // 864
  out.push_back(build_module(finring::FiniteRing::build(RingSpec::zmod(16)), 3, {}));               // 4096
  out.push_back(build_module(finring::FiniteRing::build(RingSpec::product({RingSpec::zmod(4), RingSpec::gf(5)})),
                             2, {}));                                                                // 400
  return out;
}

}  // namespace

TEST_CASE("serial and parallel scans agree on large modules") {
  std::mt19937_64 rng(41);
  for (const auto& m : large_modules()) {
    REQUIRE(m->size() >= 200);
    const auto lattice = finring::all_ideals(m->ring());
    const auto& primes = m->ring()->prime_bits();
    for (int t = 0; t < 6; ++t) {
      std::vector<MElem> g{static_cast<MElem>(rng() % m->size()), static_cast<MElem>(rng() % m->size())};
      const auto n = submodule_closure(m, std::span<const MElem>(g.data(), 1 + rng() % 2));
      const auto top = m->all_set();
      for (const auto& a : lattice) {
        const auto gens = a.generators();
        CHECK(kernels::colon_scan(*m, top, n.bits(), gens, Exec::Serial) ==
              kernels::colon_scan(*m, top, n.bits(), gens, Exec::Parallel));
      }
      CHECK(kernels::associated_prime_scan(*m, top, n.bits(), primes, Exec::Serial) ==
            kernels::associated_prime_scan(*m, top, n.bits(), primes, Exec::Parallel));
    }
  }
}

TEST_CASE("default execution mode switches whole computations") {
  const auto m = large_modules()[1];
  const auto n = Submodule::zero(m);
  const auto saved = kernels::default_exec();
  kernels::set_default_exec(Exec::Serial);
  const auto serial = factorize(m, n);
  kernels::set_default_exec(Exec::Parallel);
  const auto parallel = factorize(m, n);
  kernels::set_default_exec(saved);
  CHECK(serial == parallel);
  // 12·M = 0 but 6·M and 4·M are not
  CHECK(serial.to_string() == "(2)^2 * (3)^1");
}

TEST_CASE("annihilator kernel matches the definition") {
  const auto m = large_modules()[3];
  const auto n = Submodule::zero(m);
  for (MElem x = 0; x < m->size(); x += 7) {
    const auto ann = kernels::annihilator(*m, x, n.bits());
    for (Elem r = 0; r < m->ring()->size(); ++r) CHECK(ann.test(r) == (m->act(r, x) == 0));
  }
}
