// core/include/hardylab/operators.hpp
//
// Finite sections (windows) of Toeplitz and Hankel operators on H^2, fast
// FFT-based applies, rank-one bookkeeping, and singular-value extraction.
//
// Matrix conventions on the basis {1, w, w^2, ...}:
//   toeplitz_window(f)(m,k) = c_f(m-k)
//   hankel_window(f)(m,k)   = c_f(-m-k-1)
// so H_f is the zero matrix when f is analytic, and equals the classical
// flipped-coefficient matrix ((c(-m-k-1)))_{m,k>=0} otherwise.
//
// Every window entry comes from a certified coefficient, and windows demand
// a square-summable coefficient envelope; symbols that cannot certify that
// (power-envelope exponent <= 1/2) are rejected with uncertifiable_error.

#pragma once

#include "hardylab/fft.hpp"
#include "hardylab/symbol.hpp"

#include <vector>

namespace hardylab {

// throws uncertifiable_error unless f's envelope is square-summable
void require_window_certifiable(const Symbol& f, const char* op);

Mat toeplitz_window(const Symbol& f, long rows, long cols);
Mat hankel_window(const Symbol& f, long rows, long cols);
inline Mat toeplitz_window(const Symbol& f, long n) { return toeplitz_window(f, n, n); }
inline Mat hankel_window(const Symbol& f, long n) { return hankel_window(f, n, n); }

// FFT applies: out[m], m in [0, out_len), input treated as coordinates on
// {1, ..., w^{L-1}} with L = x.size(). Agrees with the dense window applied
// to x up to roundoff (an invariant the test suite checks at 1e-12).
Vec toeplitz_apply(const Symbol& f, const Vec& x, long out_len);
Vec hankel_apply(const Symbol& f, const Vec& x, long out_len);

// dense reference applies (O(L*M) via explicit windows)
Vec toeplitz_apply_dense(const Symbol& f, const Vec& x, long out_len);
Vec hankel_apply_dense(const Symbol& f, const Vec& x, long out_len);

// rank-one x (x) y acting as v -> <v,y> x; as a matrix, x * y^H
Mat rank_one(const Vec& x, const Vec& y);

// raw length-N window of the normalized reproducing kernel at z
// (k_z[n] = sqrt(1-|z|^2) conj(z)^n, no tolerance-based truncation)
Vec kernel_window(DiskPoint z, long N);

// largest singular value. Exact dense SVD for small matrices, deterministic
// power iteration on A^H A above that (adequate for residual magnitudes).
double opnorm(const Mat& A);

// All singular values, descending. Backend policy (documented in
// docs/calibration.md):
//   max dim <= 160 : Jacobi SVD (fully accurate)
//   max dim <= 512 : Hermitian dilation [[0,A],[A^H,0]] eigenvalues
//                    (keeps tiny singular values accurate to ~1e-15 abs)
//   larger         : Gram eigenvalues of A^H A (values below ~1e-8 flatten
//                    to the square-root floor; fine for >=1e-3 thresholds)
std::vector<double> singular_values(const Mat& A);

// singular values of the N x N hankel window of f, descending
std::vector<double> hankel_svd(const Symbol& f, long N);

}  // namespace hardylab
