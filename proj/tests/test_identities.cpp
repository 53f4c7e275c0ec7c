// tests/test_identities.cpp
//
// Finite-section identity certification: individual residuals, the
// adjudicated identity pairs, and the randomized suite.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>

#include "hardylab/identities.hpp"

using namespace hardylab;

namespace {

struct Rng {
  std::mt19937_64 g;
  explicit Rng(std::uint64_t seed) : g(seed) {}
  double u() { return static_cast<double>(g() >> 11) * 0x1.0p-53; }
  double sym() { return 2.0 * u() - 1.0; }
  cplx c() { return cplx(sym(), sym()); }
};

Symbol random_poly(Rng& rng, long lo, long hi) {
  std::map<long, cplx> m;
  for (long n = lo; n <= hi; ++n) m[n] = rng.c();
  return Symbol::trig_poly(m);
}

}  // namespace

TEST_CASE("product and adjoint identities certify at roundoff on fixed pairs") {
  Rng rng(31);
  const DiskPoint z(0.6, 0.9);
  for (int iter = 0; iter < 5; ++iter) {
    const Symbol f = random_poly(rng, -6, 6);
    const Symbol g = random_poly(rng, -5, 5);
    for (IdentityId id : {IdentityId::toeplitz_product, IdentityId::hankel_product,
                          IdentityId::hankel_adjoint, IdentityId::hankel_flip,
                          IdentityId::dilation_exchange}) {
      const ResidualReport r = identity_residual(id, f, g, z, 64);
      INFO(identity_name(id), " residual ", r.residual, " note ", r.note);
      CHECK(r.pass);
      CHECK(r.residual <= 1e-12);
      CHECK(r.N == 64);
      CHECK(!r.note.empty());
      CHECK(r.margin >= 0);
    }
  }
}

TEST_CASE("mobius identities certify on a z-grid") {
  const Symbol none;
  for (double r : {0.0, 0.3, 0.6, 0.9}) {
    for (double th : {0.0, 1.1, -2.4}) {
      const DiskPoint z(r, th);
      for (IdentityId id : {IdentityId::mobius_defect, IdentityId::mobius_flip_defect,
                            IdentityId::mobius_hankel_rank_one}) {
        const ResidualReport rep = identity_residual(id, none, none, z, 64);
        INFO(identity_name(id), " at r=", r, " th=", th, " residual ", rep.residual);
        CHECK(rep.pass);
        CHECK(rep.residual <= 1e-12);
      }
    }
  }
}

TEST_CASE("commutation adjudication: g-reading wins, f-reading fails loudly") {
  Rng rng(32);
  for (int iter = 0; iter < 8; ++iter) {
    const Symbol f = random_poly(rng, -6, 6);
    const Symbol g = random_poly(rng, 0, 6);  // analytic
    const Adjudication a = adjudicate_commutation(f, g, 64);
    CHECK(a.winner == IdentityId::commute_via_g);
    CHECK(a.loser == IdentityId::commute_via_f);
    CHECK(a.winner_residual <= 1e-12);
    CHECK(a.loser_residual >= 1e-2);
  }
}

TEST_CASE("dilation expansion adjudication: g-form wins") {
  Rng rng(33);
  for (int iter = 0; iter < 5; ++iter) {
    const Symbol f = random_poly(rng, -5, 5);
    const Symbol g = random_poly(rng, -4, 4);
    const DiskPoint z(0.6, 2.0 * kPi * rng.u() - kPi);
    const Adjudication a = adjudicate_dilation_expansion(f, g, z, 64);
    CHECK(a.winner == IdentityId::dilation_expansion_g_form);
    CHECK(a.loser == IdentityId::dilation_expansion_f_form);
    CHECK(a.winner_residual <= 1e-12);
    CHECK(a.loser_residual >= 1e-2);
  }
}

TEST_CASE("randomized suite: certified residuals, unique winners, determinism") {
  const SuiteReport r1 = identity_suite(7, 25, 48, 6);
  CHECK(r1.all_pass);
  CHECK(r1.trials == 25);
  CHECK(r1.N == 48);
  CHECK(r1.commute_loser_min >= 1e-2);
  CHECK(r1.dilation_loser_min >= 1e-2);
  REQUIRE(!r1.worst.empty());
  for (const auto& [name, worst] : r1.worst) {
    INFO(name, " worst residual ", worst);
    CHECK(worst <= r1.tol);
  }
  // identical seed reproduces identical numbers
  const SuiteReport r2 = identity_suite(7, 25, 48, 6);
  REQUIRE(r1.worst.size() == r2.worst.size());
  for (std::size_t i = 0; i < r1.worst.size(); ++i) {
    CHECK(r1.worst[i].first == r2.worst[i].first);
    CHECK(r1.worst[i].second == r2.worst[i].second);
  }
  CHECK(r1.commute_loser_min == r2.commute_loser_min);
  // a different seed still certifies
  const SuiteReport r3 = identity_suite(99, 10, 48, 6);
  CHECK(r3.all_pass);

  CHECK(!format_suite_report(r1).empty());
}
