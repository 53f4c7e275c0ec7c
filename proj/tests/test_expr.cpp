// tests/test_expr.cpp
//
// Expression language: parsing, printing (fixpoint), lowering fidelity,
// indicator-product algebra, grid-sampled fallback, and fuzz robustness.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "hardylab/expr.hpp"

using namespace hardylab;

namespace {

void check_same_coeffs(const Symbol& a, const Symbol& b, long range, double tol,
                       const char* what) {
  for (long n = -range; n <= range; ++n) {
    INFO(what, " at degree ", n);
    CHECK(std::abs(a.coeff(n) - b.coeff(n)) <= tol);
  }
}

}  // namespace

TEST_CASE("literals, atoms, precedence") {
  CHECK(lower_text("1").coeff(0) == cplx(1, 0));
  CHECK(lower_text("0.5i").coeff(0) == cplx(0, 0.5));
  CHECK(lower_text("pi").coeff(0).real() == doctest::Approx(kPi));
  CHECK(lower_text("i").coeff(0) == cplx(0, 1));
  CHECK(lower_text("z").coeff(1) == cplx(1, 0));
  CHECK(lower_text("zbar").coeff(-1) == cplx(1, 0));
  CHECK(lower_text("conj(z)").coeff(-1) == cplx(1, 0));

  const Symbol p = lower_text("1 + 2*z^2");
  CHECK(p.coeff(0) == cplx(1, 0));
  CHECK(p.coeff(2) == cplx(2, 0));
  CHECK(lower_text("-z^2").coeff(2) == cplx(-1, 0));  // ^ binds tighter than unary -
  CHECK(lower_text("2^3").coeff(0) == cplx(8, 0));
  CHECK(lower_text("z^0").coeff(0) == cplx(1, 0));
  CHECK(std::abs(lower_text("2*z - z*2").coeff(1)) == 0.0);
  CHECK(lower_text("z*zbar").coeff(0) == cplx(1, 0));  // |z|^2 = 1 on the circle

  const Symbol t = lower_text("trigpoly(-2: 0.3, 0: 1, 1: 0.5)");
  CHECK(t.coeff(-2) == cplx(0.3, 0));
  CHECK(t.coeff(0) == cplx(1, 0));
  CHECK(t.coeff(1) == cplx(0.5, 0));
  CHECK(t.coeff(2) == cplx(0, 0));
}

TEST_CASE("builtins lower to the library constructors") {
  check_same_coeffs(lower_text("arc(0, 1)"), Symbol::arc_indicator(0, 1), 40, 1e-15,
                    "arc");
  check_same_coeffs(lower_text("arc(pi - 0.5, pi + 0.5)"),
                    Symbol::arc_indicator(kPi - 0.5, kPi + 0.5), 40, 1e-12,
                    "arc around pi");
  check_same_coeffs(lower_text("blaschke(0.4)"), Symbol::mobius(DiskPoint(0.4, 0.0)),
                    40, 1e-15, "blaschke");
  // complex argument via constant folding: c(0) of a Mobius factor is its point
  const Symbol m = lower_text("blaschke(0.3 + 0.2i)");
  CHECK(std::abs(m.coeff(0) - cplx(0.3, 0.2)) <= 1e-12);
  // transforms lower through Symbol's transforms
  const Symbol f = lower_text("trigpoly(-1: 2, 3: 1i)");
  check_same_coeffs(lower_text("conj(trigpoly(-1: 2, 3: 1i))"), f.conj(), 6, 0.0,
                    "conj");
  check_same_coeffs(lower_text("tilde(trigpoly(-1: 2, 3: 1i))"), f.tilde(), 6, 0.0,
                    "tilde");
  check_same_coeffs(lower_text("star(trigpoly(-1: 2, 3: 1i))"), f.star(), 6, 0.0,
                    "star");
}

TEST_CASE("lowering is homomorphic on certified products") {
  const Symbol direct = lower_text("(1 + 0.5*z) * (1 - 0.5*zbar)");
  const Symbol composed =
      multiply(lower_text("1 + 0.5*z"), lower_text("1 - 0.5*zbar"));
  check_same_coeffs(direct, composed, 4, 1e-12, "poly product");

  const Symbol d2 = lower_text("arc(0, 2) * trigpoly(-1: 0.3, 4: 1)");
  const Symbol c2 = multiply(Symbol::arc_indicator(0, 2),
                             Symbol::trig_poly(std::map<long, cplx>{
                                 {-1, {0.3, 0}}, {4, {1, 0}}}));
  check_same_coeffs(d2, c2, 30, 1e-12, "arc x poly");

  const Symbol cube = lower_text("(1 + z)^3");
  CHECK(cube.coeff(0) == cplx(1, 0));
  CHECK(cube.coeff(1) == cplx(3, 0));
  CHECK(cube.coeff(2) == cplx(3, 0));
  CHECK(cube.coeff(3) == cplx(1, 0));
}

TEST_CASE("indicator algebra: arc products lower to exact intersections") {
  // disjoint arcs: empty intersection, exactly the zero symbol
  const Symbol zero = lower_text("arc(-0.5, 0.5) * arc(pi - 0.5, pi + 0.5)");
  CHECK(zero.is_zero());

  // overlapping arcs: the common sub-arc
  check_same_coeffs(lower_text("arc(0, 2) * arc(1, 3)"), Symbol::arc_indicator(1, 2),
                    40, 1e-12, "overlap");
  // idempotence
  check_same_coeffs(lower_text("arc(0, 1) * arc(0, 1)"), Symbol::arc_indicator(0, 1),
                    40, 1e-12, "idempotent");
  check_same_coeffs(lower_text("arc(0, 1)^2"), Symbol::arc_indicator(0, 1), 40, 1e-12,
                    "power idempotent");
  // wrap-around overlap produces two arcs
  const Symbol two = lower_text("arc(-1, 1) * arc(0.5, 2*pi - 0.5)");
  check_same_coeffs(
      two, add(Symbol::arc_indicator(0.5, 1.0), Symbol::arc_indicator(-1.0, -0.5)), 40,
      1e-12, "wrap");
}

TEST_CASE("grid-sampled fallback carries a defect and matches exact algebra") {
  // arc * (arc + 1) defeats the coefficient algebra (both factors have
  // non-summable power tails) but both have boundary evaluators, so the
  // sampled path kicks in. The true product is 2 * arc(0,1).
  const Symbol s = lower_text("arc(0, 1) * (arc(0, 1) + 1)");
  CHECK(s.coeff_defect() > 0.0);
  const Symbol exact = scale(cplx(2, 0), Symbol::arc_indicator(0, 1));
  for (long n = -10; n <= 10; ++n)
    CHECK(std::abs(s.coeff(n) - exact.coeff(n)) <= s.coeff_defect() + 1e-9);
}

TEST_CASE("printer: parse(print(e)) is a fixpoint") {
  const std::vector<std::string> cases = {
      "blaschke(0.5)^2 - conj(z)",
      "-z^2*conj(z + 1)",
      "tilde(arc(0, 1))*star(z)",
      "1 + 2i - trigpoly(-1: 1)",
      "((z))",
      "-(-z)",
      "z^0",
      "2^3",
      "conj(zbar)",
      "arc(pi - 0.5, pi + 0.5) * arc(-0.5, 0.5)",
      "trigpoly(-3: 0.5, -1: 1, 2: 0.25) + blaschke(0.1 - 0.2i)",
  };
  for (const std::string& s : cases) {
    INFO("case: ", s);
    const std::string p1 = print_symbol_expr(parse_symbol_expr(s));
    const std::string p2 = print_symbol_expr(parse_symbol_expr(p1));
    CHECK(p1 == p2);
    // lowering the printed form gives the same symbol
    const Symbol a = lower_text(s), b = lower_text(p1);
    for (long n = -12; n <= 12; ++n)
      CHECK(std::abs(a.coeff(n) - b.coeff(n)) <= 1e-12 + a.coeff_defect() + b.coeff_defect());
  }
}

TEST_CASE("errors carry position; malformed inputs are rejected") {
  try {
    parse_symbol_expr("1 +\n* 2");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
    CHECK(e.col >= 1);
  }
  CHECK_THROWS_AS(parse_symbol_expr(""), ParseError);
  CHECK_THROWS_AS(parse_symbol_expr("arc(0 1)"), ParseError);
  CHECK_THROWS_AS(parse_symbol_expr("z^"), ParseError);
  CHECK_THROWS_AS(parse_symbol_expr("z^-1"), ParseError);   // no division / negative powers
  CHECK_THROWS_AS(parse_symbol_expr("z^1.5"), ParseError);
  CHECK_THROWS_AS(parse_symbol_expr("1/2"), ParseError);
  CHECK_THROWS_AS(parse_symbol_expr("blaschke(z)"), ParseError);  // args must fold
  CHECK_THROWS_AS(parse_symbol_expr("blaschke(1.2)"), ParseError);  // |a| < 1
  CHECK_THROWS_AS(parse_symbol_expr("frob(1)"), ParseError);
  CHECK_THROWS_AS(parse_symbol_expr("trigpoly(0.5: 1)"), ParseError);
  CHECK_THROWS_AS(parse_symbol_expr("(z"), ParseError);
}

TEST_CASE("fuzz: the parser never crashes on arbitrary bytes") {
  std::mt19937_64 g(20260819);
  const std::string charset =
      "z()+-*^0123456789.i piconjtildestararcblaschketrigpoly,: \t\n\\\"'[]{}&|@~%$";
  for (int iter = 0; iter < 3000; ++iter) {
    const int len = static_cast<int>(g() % 48);
    std::string s;
    for (int j = 0; j < len; ++j) {
      if (g() % 16 == 0)
        s.push_back(static_cast<char>(g() % 256));  // raw bytes too
      else
        s.push_back(charset[g() % charset.size()]);
    }
    try {
      const SymbolExpr e = parse_symbol_expr(s);
      const std::string p = print_symbol_expr(e);
      CHECK(print_symbol_expr(parse_symbol_expr(p)) == p);
    } catch (const ParseError&) {
      // rejected cleanly: fine
    }
  }
}
