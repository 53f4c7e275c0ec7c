// tests/test_operators.cpp
//
// Windows, fast applies vs dense references, rank-one bookkeeping, and the
// tiered singular-value backends.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "hardylab/operators.hpp"

using namespace hardylab;

namespace {

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

Vec random_vec(Rng& rng, long n) {
  Vec v(n);
  for (long i = 0; i < n; ++i) v[i] = rng.c();
  return v;
}

}  // namespace

TEST_CASE("window entries follow the matrix conventions") {
  Rng rng(21);
  const Symbol f = random_poly(rng, 5);
  const Mat T = toeplitz_window(f, 7, 9);
  const Mat H = hankel_window(f, 7, 9);
  for (long m = 0; m < 7; ++m)
    for (long k = 0; k < 9; ++k) {
      CHECK(T(m, k) == f.coeff(m - k));
      CHECK(H(m, k) == f.coeff(-m - k - 1));
    }
  // analytic symbol: hankel window is identically zero
  const Mat HZ = hankel_window(Symbol::trig_poly(0, {cplx(1, 0), cplx(2, 3)}), 12);
  CHECK(HZ.norm() == 0.0);
  // window certification: p = 1/2 power envelopes cannot be certified in l2
  CHECK_THROWS_AS(
      require_window_certifiable(
          Symbol::from_generator([](long) { return cplx(0.0, 0.0); },
                                 DecayEnvelope::power(1.0, 0.4), 1, 1.0, "slow"),
          "test"),
      uncertifiable_error);
}

TEST_CASE("fast applies equal dense applies on 200 seeded instances") {
  Rng rng(22);
  double worst = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    const long L = 1024;
    const long deg = 1 + static_cast<long>(rng.g() % 32);
    const long out_len = (iter % 3 == 0) ? L : L / 2 + static_cast<long>(rng.g() % L);
    const Symbol f = random_poly(rng, deg);
    const Vec x = random_vec(rng, L);
    const Vec t1 = toeplitz_apply(f, x, out_len);
    const Vec t2 = toeplitz_apply_dense(f, x, out_len);
    const Vec h1 = hankel_apply(f, x, out_len);
    const Vec h2 = hankel_apply_dense(f, x, out_len);
    REQUIRE(t1.size() == out_len);
    REQUIRE(h1.size() == out_len);
    const double scale_t = std::max(1.0, t2.norm());
    const double scale_h = std::max(1.0, h2.norm());
    worst = std::max(worst, (t1 - t2).norm() / scale_t);
    worst = std::max(worst, (h1 - h2).norm() / scale_h);
  }
  INFO("worst fast-vs-dense relative error: ", worst);
  CHECK(worst <= 1e-12);
}

TEST_CASE("hankel apply of the zbar symbol picks out the first coordinate") {
  const Symbol zbar = Symbol::trig_poly(-1, {cplx(1, 0)});
  const Kernel k = kernel(DiskPoint(0.8, 0.0), 1e-6);
  const Vec out = hankel_apply(zbar, k.coeffs.data, 8);
  CHECK(std::abs(out[0] - cplx(0.6, 0.0)) <= 1e-12);  // sqrt(1 - 0.64)
  for (long m = 1; m < 8; ++m) CHECK(std::abs(out[m]) <= 1e-15);
}

TEST_CASE("adjoint coherence: hankel window of star equals adjoint window") {
  Rng rng(23);
  for (int iter = 0; iter < 10; ++iter) {
    const Symbol f = random_poly(rng, 6);
    const Mat A = hankel_window(f, 20).adjoint();
    const Mat B = hankel_window(f.star(), 20);
    CHECK((A - B).norm() <= 1e-12 * std::max(1.0, A.norm()));
  }
}

TEST_CASE("rank-one matches the inner-product action") {
  Rng rng(24);
  const Vec x = random_vec(rng, 9), y = random_vec(rng, 9), v = random_vec(rng, 9);
  const Mat R = rank_one(x, y);
  CHECK((R * v - x * inner(v, y)).norm() <= 1e-13);
  CHECK(R.rows() == 9);
  CHECK(R.cols() == 9);
}

TEST_CASE("kernel_window agrees with the truncated kernel") {
  const DiskPoint z(0.85, 0.7);
  const Kernel k = kernel(z, 1e-8);
  const Vec w = kernel_window(z, k.N);
  for (long n = 0; n < k.N; ++n) CHECK(std::abs(w[n] - k.coeffs.at(n)) <= 1e-15);
}

TEST_CASE("opnorm across backend tiers") {
  Rng rng(25);
  {
    Mat A(100, 60);
    for (long i = 0; i < A.size(); ++i) A.data()[i] = rng.c();
    const double ref = Eigen::JacobiSVD<Mat>(A).singularValues()(0);
    CHECK(opnorm(A) == doctest::Approx(ref).epsilon(1e-10));
  }
  {
    Mat A(300, 300);
    for (long i = 0; i < A.size(); ++i) A.data()[i] = rng.c();
    const double ref = Eigen::BDCSVD<Mat>(A).singularValues()(0);
    CHECK(opnorm(A) == doctest::Approx(ref).epsilon(1e-8));
  }
  CHECK(opnorm(Mat::Zero(50, 50)) == 0.0);
}

TEST_CASE("singular_values: descending, accurate per tier") {
  Rng rng(26);
  {
    Mat A(120, 120);
    for (long i = 0; i < A.size(); ++i) A.data()[i] = rng.c();
    const std::vector<double> sv = singular_values(A);
    const Eigen::VectorXd ref = Eigen::JacobiSVD<Mat>(A).singularValues();
    REQUIRE(static_cast<long>(sv.size()) == 120);
    for (long i = 0; i < 120; ++i) CHECK(sv[i] == doctest::Approx(ref(i)).epsilon(1e-9));
  }
  {
    Mat A(400, 400);
    for (long i = 0; i < A.size(); ++i) A.data()[i] = rng.c();
    const std::vector<double> sv = singular_values(A);
    const Eigen::VectorXd ref = Eigen::BDCSVD<Mat>(A).singularValues();
    for (long i = 0; i < 400; ++i) {
      CHECK(sv[i] + 1e-10 >= sv[std::min<long>(i + 1, 399)]);
      CHECK(std::abs(sv[i] - ref(i)) <= 1e-8 * std::max(1.0, ref(0)));
    }
  }
  {
    // Gram tier: top values accurate relatively, all values nonnegative
    Mat A(600, 600);
    for (long i = 0; i < A.size(); ++i) A.data()[i] = rng.c();
    const std::vector<double> sv = singular_values(A);
    const Eigen::VectorXd ref = Eigen::BDCSVD<Mat>(A).singularValues();
    for (long i = 0; i < 20; ++i)
      CHECK(sv[i] == doctest::Approx(ref(i)).epsilon(1e-7));
    for (double s : sv) CHECK(s >= 0.0);
    CHECK(std::is_sorted(sv.rbegin(), sv.rend()));
  }
}

TEST_CASE("hankel_svd: ordering, sup bound, finite-rank law") {
  const Symbol f = Symbol::trig_poly(std::map<long, cplx>{
      {-3, {0.5, 0}}, {-1, {1, 0}}, {2, {0.25, 0}}});
  const std::vector<double> sv = hankel_svd(f, 64);
  REQUIRE(sv.size() == 64);
  CHECK(std::is_sorted(sv.rbegin(), sv.rend()));
  // the hankel window norm is bounded by the symbol sup-norm bound
  CHECK(sv[0] <= f.sup_norm_bound() + 1e-10);
  // rank law: only degrees -1..-3 contribute, so rank <= 3
  CHECK(sv[2] > 1e-8);
  CHECK(sv[3] <= 1e-12);

  const std::vector<double> svz =
      hankel_svd(Symbol::trig_poly(0, {cplx(3, 0), cplx(0, 1)}), 32);
  CHECK(svz[0] <= 1e-15);  // analytic: zero hankel
}
