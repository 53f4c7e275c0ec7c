// core/include/hardylab/symbol.hpp
//
// Immutable boundary symbols f on the unit circle, represented by their
// Fourier coefficients c(n) (two-sided, Laurent indexing). A Symbol is a
// value type backed by a shared immutable payload: copies are cheap and
// every operation is safe to call concurrently.
//
// Coefficient data comes in two flavors that compose freely:
//   * a stored finite window (trig polys, exact products), and/or
//   * a pure generator closure for lazily evaluated families
//     (arc indicators, Mobius factors, power-decay tails).
// Every symbol carries a certified decay envelope, a certified sup-norm
// bound, declared jump angles, and an l1 bound on any coefficient error
// introduced by truncated products ("defect").

#pragma once

#include "hardylab/types.hpp"

#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <vector>

namespace hardylab {

struct uncertifiable_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// kernel(z, eps): coefficients of the normalized reproducing kernel
// k_z[n] = sqrt(1-|z|^2) conj(z)^n truncated at N = ceil(log eps / log |z|).
// The discarded l2 tail is exactly |z|^N (unit-norm kernel).
struct Kernel {
  CoeffVector coeffs;  // degrees [0, N)
  long N = 0;
  double tail = 0.0;
};

struct ProjectionResult;

class Symbol {
 public:
  using Generator = std::function<cplx(long)>;    // pure: degree -> coefficient
  using Evaluator = std::function<cplx(double)>;  // pure: theta -> f(e^{i theta})

  Symbol();  // the zero symbol

  // ---- built-in constructors ----
  static Symbol zero();
  static Symbol constant(cplx c);
  // coeffs[i] is the coefficient of degree lo+i
  static Symbol trig_poly(long lo, std::vector<cplx> coeffs);
  static Symbol trig_poly(const std::map<long, cplx>& coeffs);
  // indicator of the boundary arc from alpha to beta (counterclockwise);
  // c(0) = len/2pi, c(n) = (e^{-in alpha} - e^{-in beta}) / (2 pi i n)
  static Symbol arc_indicator(double alpha, double beta);
  // Mobius factor phi_z(w) = (z-w)/(1-conj(z)w):
  // c(0) = z, c(n) = -(1-|z|^2) conj(z)^{n-1} for n >= 1
  static Symbol mobius(DiskPoint z);
  // co-analytic power-decay exemplar: c(-n) = n^{-p} for n >= 1
  static Symbol smooth_decay(double p);
  // escape hatch for custom families; env must bound |c(+-n)| for n >= env_from;
  // defect is an l1 bound on |reported - true| coefficient error
  static Symbol from_generator(Generator gen, DecayEnvelope env, long env_from,
                               double sup_bound, std::string name,
                               double defect = 0.0, std::vector<double> jumps = {},
                               Evaluator evalf = nullptr);

  // ---- coefficient access ----
  cplx coeff(long n) const;
  // window of degrees [lo, hi) as a dense vector
  CoeffVector window(long lo, long hi) const;

  // ---- symbol transforms ----
  Symbol conj() const;   // pointwise conjugate:        c(n) -> conj(c(-n))
  Symbol tilde() const;  // f~(e^{it}) = f(e^{-it}):    c(n) -> c(-n)
  Symbol star() const;   // f*(e^{it}) = conj(f)(e^{-it}): c(n) -> conj(c(n))

  // ---- metadata ----
  const std::string& name() const;
  double sup_norm_bound() const;        // certified ||f||_inf bound (may be +inf)
  const DecayEnvelope& envelope() const;
  long envelope_from() const;           // envelope valid for |n| >= this
  double coeff_defect() const;          // l1 bound on |stored - true| coefficient error
  const std::vector<double>& jump_angles() const;  // declared jumps, in (-pi, pi]
  bool is_zero() const;
  bool is_analytic() const;             // certified c(n) = 0 for n < 0
  bool is_coanalytic() const;           // certified c(n) = 0 for n > 0
  bool is_finite_band() const;
  long band_lo() const;  // finite symbols: lowest possibly-nonzero degree
  long band_hi() const;  // finite symbols: highest possibly-nonzero degree
  // largest one-sided degree spill: max(|band_lo|, band_hi) for finite
  // symbols; for generator symbols, the degree beyond which the envelope
  // tail drops below tol (used for certified window margins)
  long effective_degree(double tol = 1e-15) const;

  bool has_evaluator() const;
  cplx eval(double theta) const;  // boundary value (throws without evaluator)

  // certified l1 bound on one side: sum_{n>=1} |c(+-n)| (+inf if not summable)
  double side_l1_bound(bool negative_side) const;

  struct Impl;  // defined in symbol.cpp; opaque to the public API

 private:
  std::shared_ptr<const Impl> impl_;
  explicit Symbol(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  friend Symbol add(const Symbol&, const Symbol&);
  friend Symbol scale(cplx, const Symbol&);
  friend Symbol multiply(const Symbol&, const Symbol&);
  friend ProjectionResult riesz_project(const Symbol&);
  friend struct SymbolBuilder;
};

// ---- algebra ----
Symbol add(const Symbol& f, const Symbol& g);
Symbol scale(cplx a, const Symbol& f);
// Product with certified coefficients. Exact when either factor has a finite
// band (any nesting depth); for two infinite summable factors the product is
// materialized by truncated convolution with the truncation defect recorded.
// Throws uncertifiable_error when neither factor has an l1-summable side
// (e.g. two arc indicators: power envelopes with p = 1).
Symbol multiply(const Symbol& f, const Symbol& g);

// Riesz projection P: keep nonnegative degrees.
struct ProjectionResult {
  Symbol analytic;
  double discarded_l2;  // certified l2 bound on the dropped co-analytic part
};
ProjectionResult riesz_project(const Symbol& f);

Kernel kernel(DiskPoint z, double eps);

}  // namespace hardylab
