// tests/acceptance.cpp
//
// The acceptance gate: ten numbered criteria, one pass/fail line each.
// Every tolerance is pinned here as a literal. Run with no arguments to
// execute all criteria; pass a number (1..10) to run a single one.
// Exit code = number of failing criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "hardylab/diagnostics.hpp"
#include "hardylab/expr.hpp"
#include "hardylab/identities.hpp"
#include "hardylab/report.hpp"

using namespace hardylab;

namespace {

std::string strf(const char* fmt, ...) {
  char buf[768];
  va_list ap;
  va_start(ap, fmt);
  vsnprintf(buf, sizeof(buf), fmt, ap);
  va_end(ap);
  return std::string(buf);
}

struct Check {
  bool pass = true;
  std::string msg;
  void require(bool ok, const std::string& why) {
    if (!ok && pass) {
      pass = false;
      msg = why;
    }
  }
};

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

double now_s() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

// 5 radii x 8 angles, |z| <= 0.95
std::vector<DiskPoint> polar_grid() {
  std::vector<DiskPoint> grid;
  for (double r : {0.15, 0.35, 0.55, 0.75, 0.95})
    for (int j = 0; j < 8; ++j)
      grid.emplace_back(r, -kPi + 2.0 * kPi * (j + 0.5) / 8.0);
  return grid;
}

const Symbol kOne = Symbol::constant(cplx(1.0, 0.0));

// ---------------------------------------------------------------- criteria

// 1: randomized identity suite with adjudication, within its time budget
std::string crit1(Check& c) {
  const double t0 = now_s();
  const SuiteReport r = identity_suite(20260819, 100, 64, 8, 1e-12);
  const double wall = now_s() - t0;
  double worst = 0.0;
  for (const auto& [name, v] : r.worst) worst = std::max(worst, v);
  c.require(r.all_pass, "some identity residual exceeded 1e-12");
  c.require(worst <= 1e-12, strf("worst certified residual %.3g > 1e-12", worst));
  c.require(r.commute_loser_min >= 1e-2,
            strf("commutation loser residual %.3g < 1e-2", r.commute_loser_min));
  c.require(r.dilation_loser_min >= 1e-2,
            strf("dilation loser residual %.3g < 1e-2", r.dilation_loser_min));
  c.require(wall <= 60.0, strf("suite took %.1f s > 60 s", wall));
  return strf("100 seeded pairs at N=64: worst residual %.2e, losers >= %.3g, %.1f s",
              worst, std::min(r.commute_loser_min, r.dilation_loser_min), wall);
}

// 2: the Mobius hankel window is exactly a rank-one kernel product
std::string crit2(Check& c) {
  double worst = 0.0;
  for (const DiskPoint& z : polar_grid()) {
    const Mat H = hankel_window(Symbol::mobius(z).conj(), 64);
    const Mat R = rank_one(kernel_window(z.conj(), 64), kernel_window(z, 64));
    worst = std::max(worst, opnorm(H + R));
  }
  c.require(worst <= 1e-10, strf("worst defect %.3g > 1e-10", worst));
  return strf("40 grid points: worst ||H_conj(phi) + k (x) k|| = %.2e", worst);
}

// 3: hankel/adjoint-hankel kernel norms agree at mirrored points
std::string crit3(Check& c) {
  Rng rng(20260819);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Symbol f = random_poly(rng, 10);
    const Symbol fs = f.star();
    const long M = 13;
    for (const DiskPoint& z : polar_grid()) {
      const Kernel kz = kernel(z, 1e-14);
      const Kernel kzb = kernel(z.conj(), 1e-14);
      const double a = hankel_apply(f, kz.coeffs.data, M).norm();
      const double b = hankel_apply(fs, kzb.coeffs.data, M).norm();
      worst = std::max(worst, std::abs(a - b));
    }
  }
  c.require(worst <= 1e-10, strf("worst asymmetry %.3g > 1e-10", worst));
  return strf("20 symbols x 40 points: worst | ||H*k_zbar|| - ||Hk_z|| | = %.2e", worst);
}

// 4: kernel truncation tail is exactly |z|^N
std::string crit4(Check& c) {
  double worst = 0.0;
  for (double r : {0.5, 0.9, 0.99}) {
    for (double th : {0.0, 2.2, -1.4}) {
      const Kernel k = kernel(DiskPoint(r, th), 1e-6);
      worst = std::max(worst, std::abs(k.tail - std::pow(r, double(k.N))));
    }
  }
  c.require(worst <= 1e-14, strf("tail mismatch %.3g > 1e-14", worst));
  return strf("|z| in {0.5, 0.9, 0.99}: worst |tail - |z|^N| = %.2e", worst);
}

// 5: fast apply correctness at N=1024 and speed at N=4096
std::string crit5(Check& c) {
  Rng rng(5);
  double worst = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    const long L = 1024;
    const Symbol f = random_poly(rng, 1 + long(rng.g() % 32));
    Vec x(L);
    for (long i = 0; i < L; ++i) x[i] = rng.c();
    const Vec t1 = toeplitz_apply(f, x, L), t2 = toeplitz_apply_dense(f, x, L);
    const Vec h1 = hankel_apply(f, x, L), h2 = hankel_apply_dense(f, x, L);
    worst = std::max(worst, (t1 - t2).norm() / std::max(1.0, t2.norm()));
    worst = std::max(worst, (h1 - h2).norm() / std::max(1.0, h2.norm()));
  }
  c.require(worst <= 1e-12, strf("fast-vs-dense error %.3g > 1e-12", worst));

  const long N = 4096;
  const Symbol f = random_poly(rng, 32);
  Vec x(N);
  for (long i = 0; i < N; ++i) x[i] = rng.c();
  std::vector<double> fast_t, dense_t;
  volatile double sink = 0.0;
  for (int run = 0; run < 10; ++run) {
    double t0 = now_s();
    sink = sink + toeplitz_apply(f, x, N).norm();
    fast_t.push_back(now_s() - t0);
    t0 = now_s();
    sink = sink + toeplitz_apply_dense(f, x, N).norm();
    dense_t.push_back(now_s() - t0);
  }
  std::sort(fast_t.begin(), fast_t.end());
  std::sort(dense_t.begin(), dense_t.end());
  const double ratio = dense_t[5] / std::max(fast_t[5], 1e-12);
  c.require(ratio >= 5.0, strf("fast path only %.1fx faster at N=4096", ratio));
  return strf("200 instances at N=1024: worst error %.2e; N=4096 speedup %.0fx",
              worst, ratio);
}

// 6: window-spectrum (Hartman) discrimination with calibrated families
std::string crit6(Check& c) {
  const Verdict smooth = hartman_verdict(Symbol::smooth_decay(2.0));
  c.require(smooth.outcome == Outcome::compact, "smooth-decay symbol not compact");
  const HartmanEvidence& se = *smooth.hartman;
  c.require(se.sigma50[1] <= 1e-3,
            strf("smooth sigma50(512) = %.3g > 1e-3", se.sigma50[1]));
  c.require(se.sigma50[1] < se.sigma25[1] && se.sigma25[1] < se.sigma10[1] &&
                se.sigma10[1] < se.sigma1[1],
            "smooth spectrum not falling in the index");

  const Verdict arc = hartman_verdict(Symbol::arc_indicator(0.0, kPi));
  c.require(arc.outcome == Outcome::noncompact, "arc(0, pi) not noncompact");
  const HartmanEvidence& ae = *arc.hartman;
  const double s1a = ae.sigma1[1], s1b = ae.sigma1[2];
  c.require(std::abs(s1b - s1a) <= 0.10 * std::max(s1a, s1b),
            strf("arc top singular value unstable: %.4f vs %.4f", s1a, s1b));
  c.require(s1b >= 1e-2, strf("arc top singular value %.3g < 1e-2", s1b));
  c.require(ae.count_above_tau_c[0] < ae.count_above_tau_c[1] &&
                ae.count_above_tau_c[1] < ae.count_above_tau_c[2],
            "arc counting function not strictly growing");
  return strf(
      "smooth: compact, sigma50(512)=%.2e falling; arc: noncompact, sigma1 %.4f->%.4f"
      " (%.1f%%), counts %ld/%ld/%ld",
      se.sigma50[1], s1a, s1b, 100.0 * std::abs(s1b - s1a) / s1b,
      ae.count_above_tau_c[0], ae.count_above_tau_c[1], ae.count_above_tau_c[2]);
}

// 7: two-case discrimination for the disjoint-arc pair vs the bare-jump pair
std::string crit7(Check& c) {
  const Symbol fA = Symbol::arc_indicator(-0.5, 0.5);
  const Symbol gB = Symbol::arc_indicator(kPi - 0.5, kPi + 0.5);
  const Symbol fgA = lower_text("arc(-0.5, 0.5) * arc(pi - 0.5, pi + 0.5)");

  const RadialNet netA = RadialNet::standard(collect_jump_angles({fA, gB}));
  const Verdict va = product_verdict(fA, gB, netA, fgA);
  c.require(va.outcome == Outcome::compact, "disjoint pair not compact");
  for (const AngleCase& ac : va.per_angle)
    c.require(ac.passed && (ac.case_id == 1 || ac.case_id == 2),
              strf("angle %.4f not in case 1/2", ac.angle));

  const RadialNet netB = RadialNet::standard(collect_jump_angles({fA}));
  const Verdict vb = product_verdict(fA, kOne, netB);
  c.require(vb.outcome == Outcome::noncompact, "bare-jump pair not noncompact");
  long fails = 0;
  for (const AngleCase& ac : vb.per_angle) {
    if (!ac.decisive_fail) continue;
    ++fails;
    c.require(std::abs(ac.angle) <= 0.5 + 1e-12 &&
                  std::abs(std::abs(ac.angle) - 0.5) <= 1e-9,
              strf("failing angle %.4f is not a declared jump near 0", ac.angle));
  }
  c.require(fails > 0, "no failing angle recorded for the bare-jump pair");

  // decay contrast along the radial path toward theta = 0
  const QuantitySpec chainA{QuantityKind::hankel_chain_norm, fA, gB, "chain"};
  const SweepCurve curveA = radial_sweep_single(chainA, netA, 0.0);
  const double drop = curveA.values.front() / std::max(curveA.values.back(), 1e-300);
  c.require(drop >= 10.0, strf("pair-A chain norm drop %.2fx < 10x", drop));

  const QuantitySpec chainB{QuantityKind::hankel_chain_norm, fA, kOne, "chain"};
  const SweepCurve curveB = radial_sweep_single(chainB, netB, 0.5);
  const std::size_t nB = curveB.values.size();
  double mx = 0.0, mn = 1e300;
  for (std::size_t i = nB - 4; i < nB; ++i) {
    mx = std::max(mx, curveB.values[i]);
    mn = std::min(mn, curveB.values[i]);
  }
  c.require(mx <= 2.0 * mn, strf("pair-B plateau ratio %.2f > 2", mx / mn));
  return strf(
      "pair A compact (%zu angles, cases 1/2), chain drop %.0fx; pair B noncompact, "
      "%ld failing angles at declared jumps, plateau ratio %.2f",
      va.per_angle.size(), drop, fails, mx / mn);
}

// 8: cancellation estimator recovers the coefficient
std::string crit8(Check& c) {
  const Symbol f1 = Symbol::arc_indicator(0.0, 1.0);
  const RadialNet net = RadialNet::standard(collect_jump_angles({f1}));

  const Verdict ok =
      sum_product_verdict(f1, kOne, scale(cplx(-1, 0), f1), kOne, net);
  c.require(ok.outcome == Outcome::compact, "exact cancellation not compact");
  double worst_c = 1e300;
  bool saw5 = false;
  for (const AngleCase& ac : ok.per_angle)
    if (ac.case_id == 5 && ac.passed && ac.has_t) {
      saw5 = true;
      worst_c = std::min(worst_c, std::abs(ac.c - cplx(1, 0)));
      c.require(std::abs(ac.c - cplx(1, 0)) <= 1e-6,
                strf("estimated c off by %.3g > 1e-6", std::abs(ac.c - cplx(1, 0))));
    }
  c.require(saw5, "no angle went through estimator condition (5)");

  const Verdict bad =
      sum_product_verdict(f1, kOne, scale(cplx(2, 0), f1), kOne, net);
  c.require(bad.outcome == Outcome::noncompact, "doubled pair not noncompact");
  bool saw_t = false;
  double t_err = 1e300, c_err = 1e300;
  for (const AngleCase& ac : bad.per_angle)
    if (ac.has_t && ac.t_stable) {
      saw_t = true;
      t_err = std::min(t_err, std::abs(ac.t - cplx(2, 0)));
      c_err = std::min(c_err, std::abs(ac.c + cplx(2, 0)));
    }
  c.require(saw_t, "no stable limit estimate recorded for the doubled pair");
  c.require(t_err <= 1e-2, strf("estimated t off by %.3g > 1e-2", t_err));
  c.require(c_err <= 1e-2, strf("estimated c off by %.3g > 1e-2", c_err));
  return strf("exact cancel: compact via case 5, |c-1| <= %.1e; doubled: noncompact, "
              "|t-2| = %.1e, |c+2| = %.1e",
              worst_c, t_err, c_err);
}

// 9: dilation residual falls along the radial path; jump pair stays up
std::string crit9(Check& c) {
  const Symbol f = Symbol::trig_poly(std::map<long, cplx>{
      {-3, {0.5, 0}}, {-1, {1, 0}}, {2, {0.25, 0}}});
  const Symbol g = Symbol::trig_poly(std::map<long, cplx>{
      {-2, {0.3, 0}}, {0, {1, 0}}, {1, {0.5, 0}}});
  const DilationSpec poly = DilationSpec::single(f, g);
  const Symbol fA = Symbol::arc_indicator(-0.5, 0.5);
  const DilationSpec pairA =
      DilationSpec::single(fA, Symbol::arc_indicator(kPi - 0.5, kPi + 0.5));
  const DilationSpec pairB = DilationSpec::single(fA, kOne);

  std::vector<double> rp, ra, rb;
  for (int j = 4; j <= 10; ++j) {
    const DiskPoint z(1.0 - std::ldexp(1.0, -j), 0.0);
    rp.push_back(dilation_residual(poly, z, 256));
    ra.push_back(dilation_residual(pairA, z, 256));
    rb.push_back(dilation_residual(pairB, z, 256));
  }
  for (std::size_t i = 0; i + 1 < rp.size(); ++i)
    c.require(rp[i + 1] <= 1.5 * rp[i],
              strf("poly residual step %zu grew: %.3g -> %.3g", i, rp[i], rp[i + 1]));
  c.require(rp.back() < rp.front(), "poly residual did not decrease overall");
  const double floor_b = *std::min_element(rb.begin(), rb.end());
  c.require(floor_b >= 10.0 * ra.back(),
            strf("jump-pair floor %.3g < 10x pair-A terminal %.3g", floor_b, ra.back()));
  return strf("poly residual %.3g -> %.3g (monotone within 1.5x); jump pair floor "
              "%.3g = %.0fx pair-A terminal %.3g",
              rp.front(), rp.back(), floor_b, floor_b / ra.back(), ra.back());
}

// 10: the curated preset finishes in budget and exits clean
std::string crit10(Check& c) {
  namespace fs = std::filesystem;
  const double t0 = now_s();
  const Report rep = run(paper_suite_config());
  const double wall = now_s() - t0;
  const fs::path dir = fs::temp_directory_path() / "hardylab_acceptance" / "suite";
  fs::remove_all(dir);
  const std::vector<std::string> files = report_emit(rep, dir.string(), "ACC");
  c.require(wall <= 600.0, strf("paper suite took %.0f s > 600 s", wall));
  c.require(rep.all_ok(), "some suite task failed its expectation");
  for (const TaskResult& t : rep.tasks)
    c.require(t.ok, strf("task '%s' failed: %s", t.id.c_str(), t.detail.c_str()));
  c.require(files.size() >= 2, "expected curve CSVs plus the run report");
  return strf("%zu tasks, all within thresholds, %.0f s, %zu report files",
              rep.tasks.size(), wall, files.size());
}

using CritFn = std::string (*)(Check&);
struct Criterion {
  int id;
  const char* label;
  CritFn fn;
};

const Criterion kCriteria[] = {
    {1, "operator identity suite", crit1},
    {2, "Mobius hankel rank-one law", crit2},
    {3, "adjoint kernel-norm symmetry", crit3},
    {4, "kernel truncation tail", crit4},
    {5, "fast apply: exactness and speed", crit5},
    {6, "window-spectrum discrimination", crit6},
    {7, "two-case pair discrimination", crit7},
    {8, "cancellation estimator", crit8},
    {9, "dilation residual coherence", crit9},
    {10, "paper-suite preset budget", crit10},
};

bool run_one(const Criterion& cr) {
  Check c;
  std::string what;
  try {
    what = cr.fn(c);
  } catch (const std::exception& e) {
    c.pass = false;
    c.msg = strf("exception: %s", e.what());
  }
  if (c.pass)
    std::printf("criterion %2d: PASS — %s: %s\n", cr.id, cr.label, what.c_str());
  else
    std::printf("criterion %2d: FAIL — %s: %s\n", cr.id, cr.label, c.msg.c_str());
  std::fflush(stdout);
  return c.pass;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) {
    const int want = std::atoi(argv[1]);
    for (const Criterion& cr : kCriteria)
      if (cr.id == want) return run_one(cr) ? 0 : 1;
    std::fprintf(stderr, "unknown criterion %s (valid: 1..10)\n", argv[1]);
    return 2;
  }
  int failures = 0;
  for (const Criterion& cr : kCriteria)
    if (!run_one(cr)) ++failures;
  return failures;
}
