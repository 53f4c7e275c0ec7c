// core/include/hardylab/fft.hpp
//
// FFT-based application of Toeplitz/Hankel coefficient windows by circulant
// embedding. The symbol side of a convolution can be planned once per
// (symbol, input-length, output-length) and reused across many inputs --
// the sweep engine leans on this heavily (one symbol spectrum per radius,
// shared by every probed angle).
//
// Index conventions (matching the dense windows in operators.hpp):
//   toeplitz: out[m] = sum_{k<L} c(m-k)    x[k],  m in [0,M)
//   hankel:   out[m] = sum_{k<L} c(-m-k-1) x[k],  m in [0,M)
// Both reduce to one linear convolution of the length-(L+M-1) symbol window
// with x (x reversed for the hankel case), sliced at offset L-1.

#pragma once

#include "hardylab/symbol.hpp"

#include <unsupported/Eigen/FFT>

namespace hardylab {

inline long next_pow2(long n) {
  long p = 1;
  while (p < n) p <<= 1;
  return p;
}

inline Eigen::FFT<double>& fft_engine() {
  thread_local Eigen::FFT<double> fft;  // caches kissfft plans per size
  return fft;
}

// full linear convolution (length la + lb - 1)
inline Vec fft_linear_conv(const Vec& a, const Vec& b) {
  const long la = a.size(), lb = b.size();
  if (la == 0 || lb == 0) return Vec();
  const long n = next_pow2(la + lb - 1);
  Vec pa = Vec::Zero(n), pb = Vec::Zero(n);
  pa.head(la) = a;
  pb.head(lb) = b;
  Vec fa(n), fb(n);
  auto& fft = fft_engine();
  fft.fwd(fa, pa);
  fft.fwd(fb, pb);
  fa.array() *= fb.array();
  Vec out(n);
  fft.inv(out, fa);
  return out.head(la + lb - 1);
}

// precomputed symbol spectrum for repeated applies at fixed (L, M)
struct ConvPlan {
  long L = 0;        // input length
  long M = 0;        // output length
  long P = 0;        // transform size (power of two >= L+ (L+M-1) - 1)
  bool reverse_input = false;  // hankel applies reverse x first
  Vec symbol_spec;   // FFT of the padded symbol window
};

inline ConvPlan make_toeplitz_plan(const Symbol& f, long L, long M) {
  ConvPlan pl;
  pl.L = L;
  pl.M = M;
  pl.P = next_pow2(2 * L + M - 2);
  pl.reverse_input = false;
  Vec t = Vec::Zero(pl.P);
  CoeffVector w = f.window(-(L - 1), M);  // c(j), j = -(L-1) .. M-1
  t.head(L + M - 1) = w.data;
  pl.symbol_spec.resize(pl.P);
  fft_engine().fwd(pl.symbol_spec, t);
  return pl;
}

inline ConvPlan make_hankel_plan(const Symbol& f, long L, long M) {
  ConvPlan pl;
  pl.L = L;
  pl.M = M;
  pl.P = next_pow2(2 * L + M - 2);
  pl.reverse_input = true;
  Vec a(pl.P);
  a.setZero();
  CoeffVector w = f.window(-(L + M - 1), 0);  // c(-1) .. c(-(L+M-1))
  for (long j = 0; j < L + M - 1; ++j) a[j] = w.at(-j - 1);
  pl.symbol_spec.resize(pl.P);
  fft_engine().fwd(pl.symbol_spec, a);
  return pl;
}

// forward transform of the (padded, possibly reversed) input; reusable by
// every plan sharing the same (P, reverse_input, L) layout
inline Vec conv_input_spectrum(const ConvPlan& pl, const Vec& x) {
  if (x.size() > pl.L) throw std::invalid_argument("conv_input_spectrum: input longer than planned L");
  Vec px = Vec::Zero(pl.P);
  if (pl.reverse_input) {
    // reversal is around the planned length L: px[L-1-k] = x[k]
    for (long k = 0; k < x.size(); ++k) px[pl.L - 1 - k] = x[k];
  } else {
    px.head(x.size()) = x;
  }
  Vec fx(pl.P);
  fft_engine().fwd(fx, px);
  return fx;
}

inline Vec conv_with_spectrum(const ConvPlan& pl, const Vec& xspec) {
  Vec prod = pl.symbol_spec.array() * xspec.array();
  Vec full(pl.P);
  fft_engine().inv(full, prod);
  return full.segment(pl.L - 1, pl.M);
}

// apply a plan; x.size() must be <= plan.L (shorter inputs are zero-padded)
inline Vec conv_apply(const ConvPlan& pl, const Vec& x) {
  return conv_with_spectrum(pl, conv_input_spectrum(pl, x));
}

}  // namespace hardylab
