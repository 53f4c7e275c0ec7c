// tests/test_symbol.cpp
//
// Coefficient-level properties of the Symbol type: constructors, transforms,
// certified envelopes, products, projection, and reproducing kernels.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <vector>

#include "hardylab/symbol.hpp"

using namespace hardylab;

namespace {

// fixed 53-bit mapping so the suite is bit-stable across standard libraries
struct Rng {
  std::mt19937_64 g;
  explicit Rng(std::uint64_t seed) : g(seed) {}
  double u() { return static_cast<double>(g() >> 11) * 0x1.0p-53; }
  double sym() { return 2.0 * u() - 1.0; }
  cplx c() { return cplx(sym(), sym()); }
};

Symbol random_poly(Rng& rng, long deg) {
  std::map<long, cplx> m;
  for (long n = -deg; n <= deg; ++n) m[n] = rng.c();
  return Symbol::trig_poly(m);
}

// Fejer (Cesaro) partial sum: positive summation method, converges to f at
// every continuity point; independent of how coefficients were produced.
cplx fejer_sum(const Symbol& f, double theta, long N) {
  cplx acc(0.0, 0.0);
  for (long n = -N; n <= N; ++n) {
    const double w = 1.0 - std::abs(static_cast<double>(n)) / static_cast<double>(N + 1);
    acc += w * f.coeff(n) * std::polar(1.0, n * theta);
  }
  return acc;
}

}  // namespace

TEST_CASE("trig_poly constructors agree and window aligns with coeff") {
  const Symbol a = Symbol::trig_poly(-2, {cplx(1, 0), cplx(0, 2), cplx(-0.5, 0), cplx(0, 0), cplx(3, -1)});
  const Symbol b = Symbol::trig_poly(std::map<long, cplx>{
      {-2, {1, 0}}, {-1, {0, 2}}, {0, {-0.5, 0}}, {2, {3, -1}}});
  for (long n = -5; n <= 5; ++n) CHECK(a.coeff(n) == b.coeff(n));

  const CoeffVector w = a.window(-4, 5);
  CHECK(w.lo == -4);
  CHECK(w.size() == 9);
  for (long n = -4; n < 5; ++n) CHECK(w.at(n) == a.coeff(n));
  CHECK(a.is_finite_band());
  CHECK(a.band_lo() == -2);
  CHECK(a.band_hi() == 2);
  CHECK(a.effective_degree() == 2);
  CHECK(!a.is_analytic());
  CHECK(Symbol::trig_poly(0, {cplx(1, 0), cplx(2, 0)}).is_analytic());
  CHECK(Symbol::trig_poly(-3, {cplx(1, 0), cplx(0, 0), cplx(0, 0), cplx(4, 0)}).is_coanalytic());
}

TEST_CASE("arc indicator: mean value, Parseval, Fejer boundary values") {
  const double alpha = 0.0, beta = 1.0;
  const Symbol f = Symbol::arc_indicator(alpha, beta);
  CHECK(f.coeff(0).real() == doctest::Approx((beta - alpha) / (2 * kPi)).epsilon(1e-14));
  CHECK(f.coeff(0).imag() == doctest::Approx(0.0).epsilon(1e-14));

  // Parseval: sum |c(n)|^2 = |arc| / 2pi  (L^2 norm of an indicator)
  double s = std::norm(f.coeff(0));
  for (long n = 1; n <= 20000; ++n) s += std::norm(f.coeff(n)) + std::norm(f.coeff(-n));
  CHECK(s == doctest::Approx((beta - alpha) / (2 * kPi)).epsilon(1e-4));

  // real symbol: c(-n) = conj(c(n))
  for (long n = 1; n <= 30; ++n)
    CHECK(std::abs(f.coeff(-n) - std::conj(f.coeff(n))) <= 1e-15);

  // Fejer sums approach the indicator away from the jumps
  CHECK(std::abs(fejer_sum(f, 0.5, 4096) - cplx(1.0, 0.0)) <= 0.02);
  CHECK(std::abs(fejer_sum(f, -1.1, 4096)) <= 0.02);
  CHECK(std::abs(fejer_sum(f, 2.9, 4096)) <= 0.02);

  CHECK(f.jump_angles().size() == 2);
  CHECK(f.sup_norm_bound() == doctest::Approx(1.0));
  CHECK(f.has_evaluator());
  CHECK(std::abs(f.eval(0.5) - cplx(1.0, 0.0)) == 0.0);
  CHECK(std::abs(f.eval(-2.0)) == 0.0);
}

TEST_CASE("mobius factor: Parseval unimodularity and vanishing at z") {
  const DiskPoint z(0.7, 0.3);
  const Symbol phi = Symbol::mobius(z);
  CHECK(phi.is_analytic());
  CHECK(phi.coeff(0) == z.value());

  double s = 0.0;
  for (long n = 0; n <= 400; ++n) s += std::norm(phi.coeff(n));
  CHECK(s == doctest::Approx(1.0).epsilon(1e-10));  // |phi| = 1 on the circle

  cplx at_z(0.0, 0.0);
  cplx zn(1.0, 0.0);
  for (long n = 0; n <= 2000; ++n) {
    at_z += phi.coeff(n) * zn;
    zn *= z.value();
  }
  CHECK(std::abs(at_z) <= 1e-12);  // phi_z(z) = 0

  if (phi.has_evaluator()) {
    for (int k = 0; k < 16; ++k) {
      const double th = -kPi + 2 * kPi * (k + 0.5) / 16.0;
      CHECK(std::abs(std::abs(phi.eval(th)) - 1.0) <= 1e-10);
    }
  }
}

TEST_CASE("smooth-decay exemplar is co-analytic with exact power coefficients") {
  const Symbol f = Symbol::smooth_decay(2.0);
  CHECK(f.is_coanalytic());
  CHECK(!f.is_analytic());
  for (long n = 1; n <= 50; ++n) {
    CHECK(f.coeff(-n).real() == doctest::Approx(std::pow(n, -2.0)).epsilon(1e-14));
    CHECK(f.coeff(n) == cplx(0.0, 0.0));
  }
  CHECK(std::isfinite(f.sup_norm_bound()));
  // sum n^-2 = pi^2/6; the certified bound may round up to the envelope tail
  CHECK(f.side_l1_bound(true) >= kPi * kPi / 6.0 - 1e-9);
  CHECK(f.side_l1_bound(true) <= 2.1);
}

TEST_CASE("transforms: conj/tilde/star laws on coefficients") {
  Rng rng(11);
  const Symbol f = random_poly(rng, 6);
  const Symbol fc = f.conj(), ft = f.tilde(), fs = f.star();
  for (long n = -8; n <= 8; ++n) {
    CHECK(fc.coeff(n) == std::conj(f.coeff(-n)));
    CHECK(ft.coeff(n) == f.coeff(-n));
    CHECK(fs.coeff(n) == std::conj(f.coeff(n)));
    // star(conj(f)) = tilde(f), and all three are involutions
    CHECK(f.conj().star().coeff(n) == ft.coeff(n));
    CHECK(f.conj().conj().coeff(n) == f.coeff(n));
    CHECK(f.tilde().tilde().coeff(n) == f.coeff(n));
    CHECK(f.star().star().coeff(n) == f.coeff(n));
  }

  // analyticity swaps under conj and tilde
  const Symbol an = Symbol::trig_poly(0, {cplx(1, 1), cplx(2, 0)});
  CHECK(an.is_analytic());
  CHECK(an.conj().is_coanalytic());
  CHECK(an.tilde().is_coanalytic());
  CHECK(an.star().is_analytic());

  // tilde of an arc is the reflected arc
  const Symbol arc = Symbol::arc_indicator(0.0, 1.0);
  const Symbol rarc = Symbol::arc_indicator(-1.0, 0.0);
  for (long n = -20; n <= 20; ++n)
    CHECK(std::abs(arc.tilde().coeff(n) - rarc.coeff(n)) <= 1e-15);
}

TEST_CASE("certified envelopes bound the coefficients they claim to bound") {
  const std::vector<Symbol> cases = {
      Symbol::arc_indicator(-0.5, 0.5),
      Symbol::mobius(DiskPoint(0.85, -1.2)),
      Symbol::smooth_decay(2.0),
      Symbol::trig_poly(std::map<long, cplx>{{-3, {0.5, 0}}, {2, {1, -1}}}),
      multiply(Symbol::arc_indicator(0.0, 2.0),
               Symbol::trig_poly(std::map<long, cplx>{{-1, {0.3, 0.1}}, {4, {1, 0}}})),
  };
  for (const Symbol& f : cases) {
    const DecayEnvelope& env = f.envelope();
    const long from = std::max(f.envelope_from(), 1L);
    for (long n = from; n <= from + 200; ++n) {
      double bound;
      if (env.kind == DecayEnvelope::Kind::finite)
        bound = (n <= env.band) ? f.sup_norm_bound() : 0.0;
      else
        bound = env.at(n);
      bound += f.coeff_defect() + 1e-13;
      CHECK(std::abs(f.coeff(n)) <= bound);
      CHECK(std::abs(f.coeff(-n)) <= bound);
    }
    if (env.kind != DecayEnvelope::Kind::finite) {
      CHECK(env.tail_l2(10) >= 0.0);
      CHECK(env.tail_l2(20) <= env.tail_l2(10));
    }
  }
}

TEST_CASE("algebra: add and scale are coefficientwise") {
  Rng rng(12);
  const Symbol f = random_poly(rng, 5), g = random_poly(rng, 7);
  const Symbol s = add(f, g);
  const Symbol t = scale(cplx(0.0, -2.0), f);
  for (long n = -9; n <= 9; ++n) {
    CHECK(std::abs(s.coeff(n) - (f.coeff(n) + g.coeff(n))) <= 1e-15);
    CHECK(std::abs(t.coeff(n) - cplx(0.0, -2.0) * f.coeff(n)) <= 1e-15);
  }
  CHECK(s.sup_norm_bound() <= f.sup_norm_bound() + g.sup_norm_bound() + 1e-12);

  // jump metadata flows through sums
  const Symbol mix = add(Symbol::arc_indicator(0.0, 1.0), Symbol::constant(cplx(1, 0)));
  CHECK(mix.jump_angles().size() == 2);
}

TEST_CASE("multiply: exact when a factor has finite band") {
  Rng rng(13);
  const Symbol f = random_poly(rng, 4), g = random_poly(rng, 3);
  const Symbol p = multiply(f, g);
  CHECK(p.coeff_defect() == 0.0);
  for (long n = -8; n <= 8; ++n) {
    cplx conv(0.0, 0.0);
    for (long k = -3; k <= 3; ++k) conv += f.coeff(n - k) * g.coeff(k);
    CHECK(std::abs(p.coeff(n) - conv) <= 1e-13);
  }

  // infinite x finite stays exact: compare against the finite convolution
  const Symbol arc = Symbol::arc_indicator(-0.4, 1.1);
  const Symbol q = multiply(arc, g);
  CHECK(q.coeff_defect() == 0.0);
  for (long n : {-40L, -7L, 0L, 3L, 55L}) {
    cplx conv(0.0, 0.0);
    for (long k = -3; k <= 3; ++k) conv += arc.coeff(n - k) * g.coeff(k);
    CHECK(std::abs(q.coeff(n) - conv) <= 1e-13);
  }
  CHECK(q.sup_norm_bound() <= arc.sup_norm_bound() * g.sup_norm_bound() + 1e-9);

  // two arc indicators: no l1-summable side, certified product impossible
  CHECK_THROWS_AS(multiply(Symbol::arc_indicator(0, 1), Symbol::arc_indicator(0.5, 2)),
                  uncertifiable_error);
}

TEST_CASE("riesz projection: exactness on polys, idempotence, certified loss") {
  const Symbol f = Symbol::trig_poly(std::map<long, cplx>{
      {-2, {0, 2}}, {0, {1, 0}}, {3, {-0.5, 0}}});
  const ProjectionResult pr = riesz_project(f);
  CHECK(pr.analytic.is_analytic());
  CHECK(pr.analytic.coeff(-2) == cplx(0.0, 0.0));
  CHECK(pr.analytic.coeff(0) == f.coeff(0));
  CHECK(pr.analytic.coeff(3) == f.coeff(3));
  CHECK(pr.discarded_l2 == doctest::Approx(2.0).epsilon(1e-14));

  const ProjectionResult pr2 = riesz_project(pr.analytic);
  CHECK(pr2.discarded_l2 <= 1e-15);
  for (long n = -4; n <= 4; ++n) CHECK(pr2.analytic.coeff(n) == pr.analytic.coeff(n));

  // infinite case: the certified loss dominates the actual dropped mass
  const Symbol arc = Symbol::arc_indicator(0.0, 2.5);
  const ProjectionResult pa = riesz_project(arc);
  CHECK(pa.analytic.is_analytic());
  double dropped = 0.0;
  for (long n = 1; n <= 20000; ++n) dropped += std::norm(arc.coeff(-n));
  CHECK(pa.discarded_l2 + 1e-12 >= std::sqrt(dropped));
}

TEST_CASE("kernel: truncation length, exact tail, unit norm split") {
  for (double r : {0.5, 0.9, 0.99}) {
    for (double th : {0.0, 1.3, -2.1}) {
      const Kernel k = kernel(DiskPoint(r, th), 1e-6);
      CHECK(k.N >= 1);
      CHECK(k.coeffs.lo == 0);
      CHECK(k.coeffs.size() == k.N);
      // discarded l2 mass of the unit-norm kernel is exactly |z|^N
      CHECK(std::abs(k.tail - std::pow(r, static_cast<double>(k.N))) <= 1e-14);
      CHECK(k.tail <= 1e-6 * (1 + 1e-12));
      const double head = k.coeffs.norm();
      CHECK(head * head + k.tail * k.tail == doctest::Approx(1.0).epsilon(1e-11));
      // entries are sqrt(1-r^2) conj(z)^n
      const cplx zb = std::conj(std::polar(r, th));
      cplx zn = std::sqrt(1 - r * r);
      for (long n = 0; n < std::min(k.N, 40L); ++n) {
        CHECK(std::abs(k.coeffs.at(n) - zn) <= 1e-14);
        zn *= zb;
      }
    }
  }
  const Kernel k0 = kernel(DiskPoint(0.0, 0.0), 1e-6);
  CHECK(k0.N == 1);
  CHECK(k0.tail == 0.0);
  CHECK(k0.coeffs.at(0) == cplx(1.0, 0.0));
}

TEST_CASE("side l1 bounds: finite for summable sides, infinite otherwise") {
  const Symbol arc = Symbol::arc_indicator(0, 1);
  CHECK(!std::isfinite(arc.side_l1_bound(true)));
  CHECK(!std::isfinite(arc.side_l1_bound(false)));
  const Symbol poly = Symbol::trig_poly(std::map<long, cplx>{{-2, {1, 0}}, {1, {0, 3}}});
  CHECK(poly.side_l1_bound(true) == doctest::Approx(1.0));
  CHECK(poly.side_l1_bound(false) == doctest::Approx(3.0));
  const Symbol phi = Symbol::mobius(DiskPoint(0.6, 0.0));
  CHECK(std::isfinite(phi.side_l1_bound(false)));
  CHECK(phi.side_l1_bound(true) <= 1e-15);
}
