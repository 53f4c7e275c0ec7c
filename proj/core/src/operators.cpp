// core/src/operators.cpp

#include "hardylab/operators.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace hardylab {

void require_window_certifiable(const Symbol& f, const char* op) {
  if (!f.envelope().l2_summable()) {
    throw uncertifiable_error(std::string(op) +
                              ": symbol '" + f.name() +
                              "' has no square-summable coefficient envelope "
                              "(power exponent must exceed 1/2); window entries "
                              "could not carry certified error bounds");
  }
}

Mat toeplitz_window(const Symbol& f, long rows, long cols) {
  require_window_certifiable(f, "toeplitz_window");
  if (rows <= 0 || cols <= 0) throw std::invalid_argument("toeplitz_window: empty window");
  CoeffVector w = f.window(-(rows - 1), cols);  // c(j), j in [-(rows-1), cols)
  Mat A(rows, cols);
  for (long m = 0; m < rows; ++m)
    for (long k = 0; k < cols; ++k) A(m, k) = w.at(m - k);
  return A;
}

Mat hankel_window(const Symbol& f, long rows, long cols) {
  require_window_certifiable(f, "hankel_window");
  if (rows <= 0 || cols <= 0) throw std::invalid_argument("hankel_window: empty window");
  CoeffVector w = f.window(-(rows + cols - 1), 0);  // c(-1) .. c(-(rows+cols-1))
  Mat A(rows, cols);
  for (long m = 0; m < rows; ++m)
    for (long k = 0; k < cols; ++k) A(m, k) = w.at(-m - k - 1);
  return A;
}

Vec toeplitz_apply(const Symbol& f, const Vec& x, long out_len) {
  require_window_certifiable(f, "toeplitz_apply");
  if (x.size() == 0 || out_len <= 0) return Vec::Zero(std::max<long>(out_len, 0));
  ConvPlan pl = make_toeplitz_plan(f, x.size(), out_len);
  return conv_apply(pl, x);
}

Vec hankel_apply(const Symbol& f, const Vec& x, long out_len) {
  require_window_certifiable(f, "hankel_apply");
  if (x.size() == 0 || out_len <= 0) return Vec::Zero(std::max<long>(out_len, 0));
  ConvPlan pl = make_hankel_plan(f, x.size(), out_len);
  return conv_apply(pl, x);
}

Vec toeplitz_apply_dense(const Symbol& f, const Vec& x, long out_len) {
  return toeplitz_window(f, out_len, x.size()) * x;
}

Vec hankel_apply_dense(const Symbol& f, const Vec& x, long out_len) {
  return hankel_window(f, out_len, x.size()) * x;
}

Mat rank_one(const Vec& x, const Vec& y) { return x * y.adjoint(); }

Vec kernel_window(DiskPoint z, long N) {
  if (N <= 0) throw std::invalid_argument("kernel_window: need N >= 1");
  const double s = std::sqrt(1.0 - z.r * z.r);
  const cplx zbar = std::conj(z.value());
  Vec k(N);
  cplx pw(1.0, 0.0);
  for (long n = 0; n < N; ++n) {
    k[n] = s * pw;
    pw *= zbar;
  }
  return k;
}

namespace {

constexpr long kJacobiMax = 160;
constexpr long kDilatedMax = 512;

double power_iteration_norm(const Mat& A) {
  const long n = A.cols();
  // deterministic start, mildly asymmetric to avoid landing in a null space
  Vec v(n);
  for (long i = 0; i < n; ++i) v[i] = cplx(1.0 + 1e-3 * std::cos(static_cast<double>(i)), 1e-3 * std::sin(0.7 * static_cast<double>(i)));
  v.normalize();
  double s_prev = -1.0;
  for (int it = 0; it < 5000; ++it) {
    Vec w = A * v;
    const double s = w.norm();
    if (s == 0.0) return 0.0;
    Vec u = A.adjoint() * w;
    const double un = u.norm();
    if (un == 0.0) return s;  // w is a left singular vector with A^H w = 0
    v = u / un;
    if (s_prev >= 0.0 && std::abs(s - s_prev) <= 1e-12 * std::max(1.0, s)) return s;
    s_prev = s;
  }
  return s_prev;
}

}  // namespace

double opnorm(const Mat& A) {
  if (A.size() == 0) return 0.0;
  if (std::max(A.rows(), A.cols()) <= kJacobiMax) {
    Eigen::JacobiSVD<Mat> svd(A);
    return svd.singularValues()(0);
  }
  return power_iteration_norm(A);
}

std::vector<double> singular_values(const Mat& A) {
  const long n = std::max(A.rows(), A.cols());
  const long k = std::min(A.rows(), A.cols());
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(k));
  if (n <= kJacobiMax) {
    Eigen::JacobiSVD<Mat> svd(A);
    for (long i = 0; i < svd.singularValues().size(); ++i)
      out.push_back(std::max(0.0, svd.singularValues()(i)));
    return out;
  }
  if (n <= kDilatedMax) {
    // Hermitian dilation: eigenvalues of [[0, A], [A^H, 0]] are +-sigma_i
    // (padded with zeros); the positive ones keep full absolute accuracy.
    const long r = A.rows(), c = A.cols();
    Mat D = Mat::Zero(r + c, r + c);
    D.topRightCorner(r, c) = A;
    D.bottomLeftCorner(c, r) = A.adjoint();
    Eigen::SelfAdjointEigenSolver<Mat> eig(D, Eigen::EigenvaluesOnly);
    const auto& ev = eig.eigenvalues();  // ascending
    for (long i = 0; i < k; ++i) out.push_back(std::max(0.0, ev(ev.size() - 1 - i)));
    return out;
  }
  // Gram route: sigma = sqrt(eig(A^H A)). Squaring floors tiny values near
  // sqrt(machine-eps * sigma_1^2) ~ 1e-8 * sigma_1; calibration notes apply.
  Mat G = A.adjoint() * A;
  Eigen::SelfAdjointEigenSolver<Mat> eig(G, Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  for (long i = 0; i < k; ++i) out.push_back(std::sqrt(std::max(0.0, ev(ev.size() - 1 - i))));
  return out;
}

std::vector<double> hankel_svd(const Symbol& f, long N) {
  require_window_certifiable(f, "hankel_svd");
  return singular_values(hankel_window(f, N, N));
}

}  // namespace hardylab
