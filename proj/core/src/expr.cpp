// core/src/expr.cpp

#include "hardylab/expr.hpp"

#include "hardylab/fft.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <optional>

namespace hardylab {

namespace {

// ------------------------------------------------------------------ lexer

enum class Tok { end, number, ident, lparen, rparen, comma, colon, plus, minus, times, caret };

struct Token {
  Tok kind = Tok::end;
  cplx num{};
  std::string text;
  int line = 1;
  int col = 1;
};

struct Lexer {
  const std::string& src;
  std::size_t pos = 0;
  int line = 1;
  int col = 1;
  Token cur;

  explicit Lexer(const std::string& s) : src(s) { advance(); }

  [[noreturn]] void fail(const std::string& msg, int l, int c) const { throw ParseError(msg, l, c); }

  int peek() const { return pos < src.size() ? static_cast<unsigned char>(src[pos]) : -1; }

  int take() {
    const int c = peek();
    if (c < 0) return c;
    ++pos;
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    return c;
  }

  void advance() {
    while (peek() >= 0 && std::isspace(peek())) take();
    Token t;
    t.line = line;
    t.col = col;
    const int c = peek();
    if (c < 0) {
      t.kind = Tok::end;
      cur = t;
      return;
    }
    if (std::isdigit(c) || (c == '.' && pos + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[pos + 1])))) {
      std::string digits;
      bool saw_dot = false, saw_exp = false;
      while (peek() >= 0) {
        const int d = peek();
        if (std::isdigit(d)) {
          digits += static_cast<char>(take());
        } else if (d == '.' && !saw_dot && !saw_exp) {
          saw_dot = true;
          digits += static_cast<char>(take());
        } else if ((d == 'e' || d == 'E') && !saw_exp && pos + 1 < src.size() &&
                   (std::isdigit(static_cast<unsigned char>(src[pos + 1])) ||
                    ((src[pos + 1] == '+' || src[pos + 1] == '-') && pos + 2 < src.size() &&
                     std::isdigit(static_cast<unsigned char>(src[pos + 2]))))) {
          saw_exp = true;
          digits += static_cast<char>(take());
          if (peek() == '+' || peek() == '-') digits += static_cast<char>(take());
        } else {
          break;
        }
      }
      double v = 0.0;
      try {
        v = std::stod(digits);
      } catch (const std::exception&) {
        fail("malformed number '" + digits + "'", t.line, t.col);
      }
      t.kind = Tok::number;
      if (peek() == 'i' && !(pos + 1 < src.size() && (std::isalnum(static_cast<unsigned char>(src[pos + 1])) || src[pos + 1] == '_'))) {
        take();
        t.num = cplx(0.0, v);
      } else {
        t.num = cplx(v, 0.0);
      }
      cur = t;
      return;
    }
    if (std::isalpha(c) || c == '_') {
      std::string id;
      while (peek() >= 0 && (std::isalnum(peek()) || peek() == '_')) id += static_cast<char>(take());
      if (id == "i") {
        t.kind = Tok::number;
        t.num = cplx(0.0, 1.0);
      } else if (id == "pi") {
        t.kind = Tok::number;
        t.num = cplx(kPi, 0.0);
      } else {
        t.kind = Tok::ident;
        t.text = id;
      }
      cur = t;
      return;
    }
    switch (c) {
      case '(': take(); t.kind = Tok::lparen; break;
      case ')': take(); t.kind = Tok::rparen; break;
      case ',': take(); t.kind = Tok::comma; break;
      case ':': take(); t.kind = Tok::colon; break;
      case '+': take(); t.kind = Tok::plus; break;
      case '-': take(); t.kind = Tok::minus; break;
      case '*': take(); t.kind = Tok::times; break;
      case '^': take(); t.kind = Tok::caret; break;
      default:
        fail(std::string("unexpected character '") + static_cast<char>(c) + "'", t.line, t.col);
    }
    cur = t;
  }
};

// ----------------------------------------------------------------- parser

struct Parser {
  Lexer lx;

  explicit Parser(const std::string& s) : lx(s) {}

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, lx.cur.line, lx.cur.col); }

  void expect(Tok k, const char* what) {
    if (lx.cur.kind != k) fail(std::string("expected ") + what);
    lx.advance();
  }

  SymbolExpr parse() {
    SymbolExpr e = parse_expr();
    if (lx.cur.kind != Tok::end) fail("trailing input after expression");
    return e;
  }

  SymbolExpr parse_expr() {
    SymbolExpr e = parse_term();
    while (lx.cur.kind == Tok::plus || lx.cur.kind == Tok::minus) {
      const bool plus = lx.cur.kind == Tok::plus;
      lx.advance();
      SymbolExpr rhs = parse_term();
      SymbolExpr n;
      n.tag = plus ? SymbolExpr::Tag::add : SymbolExpr::Tag::sub;
      n.kids.push_back(std::move(e));
      n.kids.push_back(std::move(rhs));
      e = std::move(n);
    }
    return e;
  }

  SymbolExpr parse_term() {
    SymbolExpr e = parse_factor();
    while (lx.cur.kind == Tok::times) {
      lx.advance();
      SymbolExpr rhs = parse_factor();
      SymbolExpr n;
      n.tag = SymbolExpr::Tag::mul;
      n.kids.push_back(std::move(e));
      n.kids.push_back(std::move(rhs));
      e = std::move(n);
    }
    return e;
  }

  SymbolExpr parse_factor() {
    bool negate = false;
    while (lx.cur.kind == Tok::plus || lx.cur.kind == Tok::minus) {
      if (lx.cur.kind == Tok::minus) negate = !negate;
      lx.advance();
    }
    SymbolExpr e = parse_power();
    if (negate) {
      SymbolExpr n;
      n.tag = SymbolExpr::Tag::neg;
      n.kids.push_back(std::move(e));
      return n;
    }
    return e;
  }

  long parse_integer(const char* what) {
    bool neg = false;
    while (lx.cur.kind == Tok::plus || lx.cur.kind == Tok::minus) {
      if (lx.cur.kind == Tok::minus) neg = !neg;
      lx.advance();
    }
    if (lx.cur.kind != Tok::number || lx.cur.num.imag() != 0.0)
      fail(std::string("expected integer ") + what);
    const double v = lx.cur.num.real();
    const double r = std::round(v);
    if (std::abs(v - r) > 0.0 || std::abs(r) > 1e9) fail(std::string("expected integer ") + what);
    lx.advance();
    return neg ? -static_cast<long>(r) : static_cast<long>(r);
  }

  SymbolExpr parse_power() {
    SymbolExpr e = parse_primary();
    while (lx.cur.kind == Tok::caret) {
      const int l = lx.cur.line, c = lx.cur.col;
      lx.advance();
      const long k = parse_integer("exponent");
      if (k < 0) throw ParseError("negative powers are not in the grammar (no division)", l, c);
      SymbolExpr n;
      n.tag = SymbolExpr::Tag::pow;
      n.exponent = k;
      n.kids.push_back(std::move(e));
      e = std::move(n);
    }
    return e;
  }

  // constant-fold a sub-expression used as a call argument
  std::optional<cplx> fold(const SymbolExpr& e) const {
    using T = SymbolExpr::Tag;
    switch (e.tag) {
      case T::number: return e.number;
      case T::neg: {
        auto v = fold(e.kids[0]);
        return v ? std::optional<cplx>(-*v) : std::nullopt;
      }
      case T::conj:
      case T::star: {
        auto v = fold(e.kids[0]);
        return v ? std::optional<cplx>(std::conj(*v)) : std::nullopt;
      }
      case T::tilde: return fold(e.kids[0]);
      case T::add:
      case T::sub:
      case T::mul: {
        auto a = fold(e.kids[0]), b = fold(e.kids[1]);
        if (!a || !b) return std::nullopt;
        if (e.tag == T::add) return *a + *b;
        if (e.tag == T::sub) return *a - *b;
        return *a * *b;
      }
      case T::pow: {
        auto a = fold(e.kids[0]);
        if (!a) return std::nullopt;
        cplx r(1.0, 0.0);
        for (long j = 0; j < e.exponent; ++j) r *= *a;
        return r;
      }
      default: return std::nullopt;
    }
  }

  cplx parse_const_arg(const char* what) {
    const int l = lx.cur.line, c = lx.cur.col;
    SymbolExpr e = parse_expr();
    auto v = fold(e);
    if (!v) throw ParseError(std::string(what) + " must be a constant expression", l, c);
    return *v;
  }

  SymbolExpr parse_primary() {
    switch (lx.cur.kind) {
      case Tok::number: {
        SymbolExpr e;
        e.tag = SymbolExpr::Tag::number;
        e.number = lx.cur.num;
        lx.advance();
        return e;
      }
      case Tok::lparen: {
        lx.advance();
        SymbolExpr e = parse_expr();
        expect(Tok::rparen, "')'");
        return e;
      }
      case Tok::ident: {
        const std::string id = lx.cur.text;
        const int l = lx.cur.line, c = lx.cur.col;
        lx.advance();
        if (id == "z") {
          SymbolExpr e;
          e.tag = SymbolExpr::Tag::atom_z;
          return e;
        }
        if (id == "zbar") {
          SymbolExpr e;
          e.tag = SymbolExpr::Tag::atom_zbar;
          return e;
        }
        if (id == "conj" || id == "tilde" || id == "star") {
          expect(Tok::lparen, "'(' after function name");
          SymbolExpr kid = parse_expr();
          expect(Tok::rparen, "')'");
          SymbolExpr e;
          e.tag = id == "conj" ? SymbolExpr::Tag::conj
                : id == "tilde" ? SymbolExpr::Tag::tilde
                                : SymbolExpr::Tag::star;
          e.kids.push_back(std::move(kid));
          return e;
        }
        if (id == "blaschke") {
          expect(Tok::lparen, "'(' after blaschke");
          const cplx a = parse_const_arg("blaschke parameter");
          expect(Tok::rparen, "')'");
          if (!(std::abs(a) < 1.0))
            throw ParseError("blaschke parameter must lie strictly inside the unit disk", l, c);
          SymbolExpr e;
          e.tag = SymbolExpr::Tag::blaschke;
          e.blaschke_a = a;
          return e;
        }
        if (id == "arc") {
          expect(Tok::lparen, "'(' after arc");
          const cplx a = parse_const_arg("arc endpoint");
          expect(Tok::comma, "','");
          const cplx b = parse_const_arg("arc endpoint");
          expect(Tok::rparen, "')'");
          if (a.imag() != 0.0 || b.imag() != 0.0)
            throw ParseError("arc endpoints must be real angles", l, c);
          const double len = b.real() - a.real();
          const double wrapped = len - 2.0 * kPi * std::floor(len / (2.0 * kPi));
          if (!(wrapped > 1e-12) || !(wrapped < 2.0 * kPi - 1e-12))
            throw ParseError("arc endpoints must be distinct mod 2pi", l, c);
          SymbolExpr e;
          e.tag = SymbolExpr::Tag::arc;
          e.arc_alpha = a.real();
          e.arc_beta = b.real();
          return e;
        }
        if (id == "trigpoly") {
          expect(Tok::lparen, "'(' after trigpoly");
          SymbolExpr e;
          e.tag = SymbolExpr::Tag::trigpoly;
          while (true) {
            const long n = parse_integer("degree");
            expect(Tok::colon, "':' after degree");
            e.trig[n] = parse_const_arg("trigpoly coefficient");
            if (lx.cur.kind == Tok::comma) {
              lx.advance();
              continue;
            }
            break;
          }
          expect(Tok::rparen, "')'");
          if (e.trig.empty()) throw ParseError("trigpoly needs at least one coefficient", l, c);
          return e;
        }
        throw ParseError("unknown identifier '" + id + "'", l, c);
      }
      default:
        fail("expected a number, atom, function call, or '('");
    }
  }
};

// ---------------------------------------------------------------- printer

std::string fmt_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_number(cplx v) {
  if (v.imag() == 0.0) return fmt_real(v.real());
  if (v.real() == 0.0) {
    if (v.imag() == 1.0) return "i";
    if (v.imag() == -1.0) return "-i";
    return fmt_real(v.imag()) + "i";
  }
  std::string s = "(" + fmt_real(v.real());
  if (v.imag() >= 0.0)
    s += " + " + (v.imag() == 1.0 ? std::string("") : fmt_real(v.imag())) + "i";
  else
    s += " - " + (v.imag() == -1.0 ? std::string("") : fmt_real(-v.imag())) + "i";
  return s + ")";
}

int precedence(const SymbolExpr& e) {
  using T = SymbolExpr::Tag;
  switch (e.tag) {
    case T::add:
    case T::sub: return 1;
    case T::mul: return 2;
    case T::neg: return 3;  // prints as leading '-', needs parens under ^ and as a right operand
    case T::pow: return 4;
    default: return 5;
  }
}

void print_rec(const SymbolExpr& e, std::string& out, int parent_prec) {
  using T = SymbolExpr::Tag;
  const int prec = precedence(e);
  const bool wrap = prec < parent_prec;
  if (wrap) out += "(";
  switch (e.tag) {
    case T::number: out += fmt_number(e.number); break;
    case T::atom_z: out += "z"; break;
    case T::atom_zbar: out += "zbar"; break;
    case T::neg:
      out += "-";
      print_rec(e.kids[0], out, 4);
      break;
    case T::conj:
    case T::tilde:
    case T::star:
      out += e.tag == T::conj ? "conj(" : e.tag == T::tilde ? "tilde(" : "star(";
      print_rec(e.kids[0], out, 0);
      out += ")";
      break;
    case T::add:
    case T::sub:
      print_rec(e.kids[0], out, 1);
      out += e.tag == T::add ? " + " : " - ";
      print_rec(e.kids[1], out, 2);
      break;
    case T::mul:
      print_rec(e.kids[0], out, 2);
      out += " * ";
      print_rec(e.kids[1], out, 3);
      break;
    case T::pow:
      print_rec(e.kids[0], out, 5);
      out += "^" + std::to_string(e.exponent);
      break;
    case T::blaschke:
      out += "blaschke(" + fmt_number(e.blaschke_a) + ")";
      break;
    case T::arc:
      out += "arc(" + fmt_real(e.arc_alpha) + ", " + fmt_real(e.arc_beta) + ")";
      break;
    case T::trigpoly: {
      out += "trigpoly(";
      bool first = true;
      for (const auto& [n, c] : e.trig) {
        if (!first) out += ", ";
        first = false;
        out += std::to_string(n) + ": " + fmt_number(c);
      }
      out += ")";
      break;
    }
  }
  if (wrap) out += ")";
}

// --------------------------------------------------------------- lowering

// exact intersection of two boundary-arc indicators (0, 1, or 2 arcs)
Symbol intersect_arcs(double a1, double b1, double a2, double b2) {
  auto norm = [](double a, double b, double& s, double& l) {
    l = b - a - 2.0 * kPi * std::floor((b - a) / (2.0 * kPi));
    s = a - 2.0 * kPi * std::floor(a / (2.0 * kPi));
  };
  double s1, l1, s2, l2;
  norm(a1, b1, s1, l1);
  norm(a2, b2, s2, l2);
  // A = [s1, s1+l1) in [0, 4pi); B unrolled as two copies
  const double blo[2] = {s2, s2 + 2.0 * kPi};
  Symbol out = Symbol::zero();
  for (int j = 0; j < 2; ++j) {
    const double lo = std::max(s1, blo[j]);
    const double hi = std::min(s1 + l1, blo[j] + l2);
    if (hi - lo > 1e-12) out = add(out, Symbol::arc_indicator(lo, hi));
  }
  return out;
}

Symbol grid_sampled_product(const Symbol& A, const Symbol& B, const LoweringOptions& opts) {
  if (!A.has_evaluator() || !B.has_evaluator())
    throw uncertifiable_error(
        "product lowering: coefficient algebra rejected the product and a factor "
        "has no boundary evaluator for grid sampling");
  const long G = opts.grid_size;
  const long Bnd = opts.band_request;
  Vec h(G);
  for (long j = 0; j < G; ++j) {
    const double th = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(G);
    h[j] = A.eval(th) * B.eval(th);
  }
  Vec X(G);
  fft_engine().fwd(X, h);  // X[k] = sum_j h[j] e^{-2pi i jk/G}
  auto coeff_at = [X, G](long n) -> cplx {
    long k = n % G;
    if (k < 0) k += G;
    return X[k] / static_cast<double>(G);
  };
  std::map<long, cplx> table;
  for (long n = -Bnd; n <= Bnd; ++n) table[n] = coeff_at(n);

  // envelope for the true product: both factors bounded with power/geometric
  // coefficient tails; dominate by C/n with a coarse constant
  auto power_const = [](const Symbol& s) {
    const DecayEnvelope& e = s.envelope();
    switch (e.kind) {
      case DecayEnvelope::Kind::finite: return 0.0;
      case DecayEnvelope::Kind::power: return e.C * std::pow(1.0, e.p - 1.0);
      case DecayEnvelope::Kind::geometric: return e.A / (1.0 - e.rho) / (e.rho > 0.0 ? -std::log(e.rho) : 1.0);
    }
    return 0.0;
  };
  const double Cprod = A.sup_norm_bound() * power_const(B) + B.sup_norm_bound() * power_const(A) +
                       power_const(A) * power_const(B);
  // aliasing: reported c(n) = sum_m true c(n + mG); per-degree error is at
  // most the true-coefficient tail beyond G - Bnd, summed over the band
  const double alias_per = 4.0 * std::max(Cprod, 1e-300) / static_cast<double>(G - Bnd);
  const double defect = static_cast<double>(2 * Bnd + 1) * alias_per +
                        A.coeff_defect() * 3.0 + B.coeff_defect() * 3.0;

  std::vector<double> jumps;
  for (double t : A.jump_angles()) jumps.push_back(t);
  for (double t : B.jump_angles()) jumps.push_back(t);
  auto table_sp = std::make_shared<const std::map<long, cplx>>(std::move(table));
  Symbol::Generator gen = [table_sp](long n) {
    auto it = table_sp->find(n);
    return it == table_sp->end() ? cplx(0.0, 0.0) : it->second;
  };
  Symbol::Evaluator ev = [A, B](double th) { return A.eval(th) * B.eval(th); };
  return Symbol::from_generator(std::move(gen), DecayEnvelope::power(std::max(Cprod, 1e-300), 1.0),
                                1, A.sup_norm_bound() * B.sup_norm_bound(),
                                "(" + A.name() + " *grid* " + B.name() + ")", defect,
                                std::move(jumps), std::move(ev));
}

Symbol lower_product(const SymbolExpr& ea, const SymbolExpr& eb, const LoweringOptions& opts) {
  Symbol A = lower(ea, opts);
  Symbol B = lower(eb, opts);
  try {
    return multiply(A, B);
  } catch (const uncertifiable_error&) {
    if (ea.tag == SymbolExpr::Tag::arc && eb.tag == SymbolExpr::Tag::arc)
      return intersect_arcs(ea.arc_alpha, ea.arc_beta, eb.arc_alpha, eb.arc_beta);
    return grid_sampled_product(A, B, opts);
  }
}

}  // namespace

SymbolExpr parse_symbol_expr(const std::string& text) { return Parser(text).parse(); }

std::string print_symbol_expr(const SymbolExpr& e) {
  std::string out;
  print_rec(e, out, 0);
  return out;
}

Symbol lower(const SymbolExpr& e, const LoweringOptions& opts) {
  if (opts.band_request < 1 || opts.grid_size < 4 * opts.band_request ||
      (opts.grid_size & (opts.grid_size - 1)) != 0)
    throw std::invalid_argument(
        "LoweringOptions: grid_size must be a power of two with grid_size >= 4 * band_request");
  using T = SymbolExpr::Tag;
  switch (e.tag) {
    case T::number: return Symbol::constant(e.number);
    case T::atom_z: return Symbol::trig_poly(1, {cplx(1.0, 0.0)});
    case T::atom_zbar: return Symbol::trig_poly(-1, {cplx(1.0, 0.0)});
    case T::neg: return scale(cplx(-1.0, 0.0), lower(e.kids[0], opts));
    case T::conj: return lower(e.kids[0], opts).conj();
    case T::tilde: return lower(e.kids[0], opts).tilde();
    case T::star: return lower(e.kids[0], opts).star();
    case T::add: return add(lower(e.kids[0], opts), lower(e.kids[1], opts));
    case T::sub:
      return add(lower(e.kids[0], opts), scale(cplx(-1.0, 0.0), lower(e.kids[1], opts)));
    case T::mul: return lower_product(e.kids[0], e.kids[1], opts);
    case T::pow: {
      if (e.exponent == 0) return Symbol::constant(cplx(1.0, 0.0));
      if (e.kids[0].tag == T::arc) return lower(e.kids[0], opts);  // indicators are idempotent
      Symbol base = lower(e.kids[0], opts);
      Symbol acc = base;
      for (long j = 1; j < e.exponent; ++j) acc = multiply(acc, base);
      return acc;
    }
    case T::blaschke: return Symbol::mobius(DiskPoint::from_complex(e.blaschke_a));
    case T::arc: return Symbol::arc_indicator(e.arc_alpha, e.arc_beta);
    case T::trigpoly: return Symbol::trig_poly(e.trig);
  }
  throw std::logic_error("lower: unknown expression node");
}

Symbol lower_text(const std::string& text, const LoweringOptions& opts) {
  return lower(parse_symbol_expr(text), opts);
}

}  // namespace hardylab
