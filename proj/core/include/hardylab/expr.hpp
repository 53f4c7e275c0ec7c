// core/include/hardylab/expr.hpp
//
// A small expression language for defining symbols in config files and on
// the command line. Grammar (standard precedence, ^ > * > +/-):
//
//   expr    := term (('+' | '-') term)*
//   term    := factor ('*' factor)*            -- no division (certified
//   factor  := ('-' | '+')* power                 sup-norm bounds would need
//   power   := primary ('^' integer)*             zero-freeness proofs)
//   primary := number | 'i' | 'pi' | 'z' | 'zbar'
//            | ('conj'|'tilde'|'star') '(' expr ')'
//            | 'blaschke' '(' const-expr ')'            -- |a| < 1
//            | 'arc' '(' const-expr ',' const-expr ')'  -- radians
//            | 'trigpoly' '(' int ':' const-expr (',' int ':' const-expr)* ')'
//            | '(' expr ')'
//
// Numbers take an optional 'i' suffix for imaginary literals (e.g. 0.5i);
// call arguments must constant-fold (numbers, pi, i, + - * ^ and signs).
// parse() throws ParseError with line/column on any malformed input and
// never crashes on arbitrary bytes.

#pragma once

#include "hardylab/symbol.hpp"

#include <map>
#include <string>
#include <vector>

namespace hardylab {

struct ParseError : std::runtime_error {
  int line = 0;
  int col = 0;
  ParseError(const std::string& msg, int line_, int col_)
      : std::runtime_error(msg + " (line " + std::to_string(line_) + ", column " +
                           std::to_string(col_) + ")"),
        line(line_),
        col(col_) {}
};

struct SymbolExpr {
  enum class Tag {
    number, atom_z, atom_zbar,
    neg, conj, tilde, star,
    add, sub, mul, pow,
    blaschke, arc, trigpoly,
  };
  Tag tag = Tag::number;
  cplx number{};                 // Tag::number
  long exponent = 0;             // Tag::pow
  cplx blaschke_a{};             // Tag::blaschke (constant-folded)
  double arc_alpha = 0.0;        // Tag::arc
  double arc_beta = 0.0;
  std::map<long, cplx> trig;     // Tag::trigpoly
  std::vector<SymbolExpr> kids;  // operands (neg/conj/tilde/star: 1; add/sub/mul: 2; pow: 1)
};

SymbolExpr parse_symbol_expr(const std::string& text);

// minimal-parenthesis printer; parse(print(e)) is structurally equal to e
std::string print_symbol_expr(const SymbolExpr& e);

struct LoweringOptions {
  long band_request = 64;  // max |degree| materialized by sampled lowering
  long grid_size = 4096;   // power of two, >= 4 * band_request
};

// Lower an expression to a Symbol with certified metadata.
//  * polynomial subtrees are exact;
//  * blaschke/arc come from closed-form coefficient rules;
//  * products the coefficient algebra cannot certify fall back to
//    (a) exact indicator intersection when both factors are arcs, else
//    (b) circle-grid sampling at opts.grid_size, materializing degrees
//        |n| <= band_request with the aliasing budget recorded on the
//        result (coarse; fine for plotting, not for certificates).
Symbol lower(const SymbolExpr& e, const LoweringOptions& opts = {});
Symbol lower_text(const std::string& text, const LoweringOptions& opts = {});

}  // namespace hardylab
