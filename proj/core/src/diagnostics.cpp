// core/src/diagnostics.cpp
//
// Radial sweep engine and compactness verdicts. The engine walks the net
// radius-by-radius: FFT plans for every requested quantity are built once
// per radius (symbol spectra are angle-independent), then each probed angle
// reuses them, sharing the forward transform of the kernel vector between
// all quantities with the same input layout.

#include "hardylab/diagnostics.hpp"

#include "hardylab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace hardylab {

namespace {

double wrap_angle(double t) {
  double w = std::fmod(t, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  if (w > kPi) w -= 2.0 * kPi;
  return w;
}

void sort_dedupe(std::vector<double>& a) {
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end(),
                      [](double x, double y) { return std::abs(x - y) < 1e-9; }),
          a.end());
}

std::string strprintf(const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  vsnprintf(buf, sizeof(buf), fmt, ap);
  va_end(ap);
  return std::string(buf);
}

}  // namespace

// ------------------------------------------------------------------- net

RadialNet RadialNet::standard(const std::vector<double>& extra_angles, int n_angles,
                              int j_min, int j_max, double eps) {
  if (n_angles < 1 || j_min < 1 || j_max < j_min)
    throw std::invalid_argument("RadialNet::standard: bad grid parameters");
  RadialNet net;
  net.kernel_eps = eps;
  net.angles.reserve(static_cast<std::size_t>(n_angles) + extra_angles.size());
  for (int i = 0; i < n_angles; ++i)
    net.angles.push_back(wrap_angle(-kPi + 2.0 * kPi * (i + 0.5) / n_angles));
  for (double t : extra_angles) net.angles.push_back(wrap_angle(t));
  sort_dedupe(net.angles);
  for (int j = j_min; j <= j_max; ++j)
    net.radii.push_back(1.0 - std::ldexp(1.0, -j));
  return net;
}

void RadialNet::validate() const {
  if (angles.empty()) throw std::invalid_argument("RadialNet: no angles");
  if (radii.empty()) throw std::invalid_argument("RadialNet: no radii");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] >= 0.0 && radii[i] < 1.0))
      throw std::invalid_argument("RadialNet: radii must lie in [0,1)");
    if (i > 0 && !(radii[i] > radii[i - 1]))
      throw std::invalid_argument("RadialNet: radii must be strictly increasing");
  }
  if (!(kernel_eps > 0.0 && kernel_eps < 1.0))
    throw std::invalid_argument("RadialNet: kernel_eps must be in (0,1)");
}

std::vector<double> collect_jump_angles(const std::vector<Symbol>& symbols) {
  std::vector<double> out;
  for (const Symbol& s : symbols)
    for (double t : s.jump_angles()) out.push_back(wrap_angle(t));
  sort_dedupe(out);
  return out;
}

// ----------------------------------------------------------------- trends

const char* trend_name(Trend t) {
  switch (t) {
    case Trend::vanishing: return "vanishing";
    case Trend::plateaued: return "plateaued";
    case Trend::indeterminate: return "indeterminate";
  }
  return "?";
}

TrendStats classify_trend(const std::vector<double>& values,
                          const std::vector<double>& radii, const TrendParams& p) {
  if (values.empty() || values.size() != radii.size())
    throw std::invalid_argument("classify_trend: values/radii size mismatch");
  TrendStats st;
  const long n = static_cast<long>(values.size());
  st.min_along = *std::min_element(values.begin(), values.end());
  st.last = values.back();

  const long pw = std::min<long>(p.plateau_window, n);
  double mx = 0.0, mn = std::numeric_limits<double>::infinity(), sum = 0.0;
  for (long i = n - pw; i < n; ++i) {
    mx = std::max(mx, values[i]);
    mn = std::min(mn, values[i]);
    sum += values[i];
  }
  st.plateau_mean = sum / static_cast<double>(pw);
  st.plateau_ratio = mx == 0.0 ? 1.0
                   : mn > 0.0  ? mx / mn
                               : std::numeric_limits<double>::infinity();

  // least-squares slope of log(value) against log(1 - r) over the last
  // slope_window radii, ignoring values at the numerical floor
  const long sw = std::min<long>(p.slope_window, n);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long cnt = 0;
  for (long i = n - sw; i < n; ++i) {
    if (!(values[i] > p.mask_floor)) continue;
    const double x = std::log(1.0 - radii[i]);
    const double y = std::log(values[i]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++cnt;
  }
  if (cnt >= 2) {
    const double den = sxx - sx * sx / cnt;
    if (den > 0.0) {
      st.slope = (sxy - sx * sy / cnt) / den;
      st.slope_valid = true;
    }
  }

  // frozen decision order: dead window, then decay slope, then plateau
  if (mx <= p.tiny) {
    st.cls = Trend::vanishing;
    return st;
  }
  if (!st.slope_valid) {
    st.cls = Trend::vanishing;  // fewer than two points above the floor
    return st;
  }
  if (st.slope >= p.slope_min) {
    st.cls = Trend::vanishing;
    return st;
  }
  if (st.plateau_ratio <= p.plateau_factor && st.plateau_mean >= p.plateau_floor) {
    st.cls = Trend::plateaued;
    return st;
  }
  st.cls = Trend::indeterminate;
  return st;
}

// -------------------------------------------------------------- error bars

namespace {

// Frobenius bound on the rows dropped beyond row M of a hankel apply with
// input length L:  S^2 <= sum_{j=M+1}^{M+L} tail_l2(j)^2  (row j uses
// coefficients c(-j), c(-j-1), ...). Finite-band symbols are handled by
// counting the surviving rows directly.
double hankel_output_tail(const Symbol& f, long M, long L) {
  const DecayEnvelope& env = f.envelope();
  switch (env.kind) {
    case DecayEnvelope::Kind::finite: {
      const long bandn = f.band_lo() < 0 ? -f.band_lo() : 0;
      if (M >= bandn) return 0.0;
      return std::sqrt(static_cast<double>(bandn - M)) * f.side_l1_bound(true);
    }
    case DecayEnvelope::Kind::geometric: {
      const double A = env.A, rho = env.rho;
      double S = 0.0;
      if (A > 0.0 && rho > 0.0) {
        const double r2 = rho * rho;
        const double s = A * A *
            (std::pow(rho, 2.0 * static_cast<double>(M + 1)) -
             std::pow(rho, 2.0 * static_cast<double>(M + L + 1))) /
            ((1.0 - r2) * (1.0 - r2));
        S = std::sqrt(std::max(0.0, s));
      }
      if (f.envelope_from() > M) S += f.side_l1_bound(true);
      return S;
    }
    case DecayEnvelope::Kind::power: {
      double s = 0.0;
      for (long j = M + 1; j <= M + L; ++j) {
        const double t = env.tail_l2(j);
        s += t * t;
      }
      double S = std::sqrt(s);
      if (f.envelope_from() > M) S += f.side_l1_bound(true);
      return S;
    }
  }
  return 0.0;
}

// same bound for a toeplitz apply (rows beyond M use coefficients of degree
// >= M-L+1):  S^2 <= sum_{j=M-L+1}^{M} tail_l2(j)^2
double toeplitz_output_tail(const Symbol& f, long M, long L) {
  const DecayEnvelope& env = f.envelope();
  const long a = std::max<long>(1, M - L + 1);
  switch (env.kind) {
    case DecayEnvelope::Kind::finite: {
      const long cnt = std::max<long>(0, f.band_hi() + L - M);
      if (cnt == 0) return 0.0;
      return std::sqrt(static_cast<double>(cnt)) * f.side_l1_bound(false);
    }
    case DecayEnvelope::Kind::geometric: {
      const double A = env.A, rho = env.rho;
      double S = 0.0;
      if (A > 0.0 && rho > 0.0) {
        const double r2 = rho * rho;
        const double s = A * A *
            (std::pow(rho, 2.0 * static_cast<double>(a)) -
             std::pow(rho, 2.0 * static_cast<double>(M + 1))) /
            ((1.0 - r2) * (1.0 - r2));
        S = std::sqrt(std::max(0.0, s));
      }
      if (f.envelope_from() > a - 1) S += f.side_l1_bound(false);
      return S;
    }
    case DecayEnvelope::Kind::power: {
      double s = 0.0;
      for (long j = a; j <= M; ++j) {
        const double t = env.tail_l2(j);
        s += t * t;
      }
      double S = std::sqrt(s);
      if (f.envelope_from() > a - 1) S += f.side_l1_bound(false);
      return S;
    }
  }
  return 0.0;
}

}  // namespace

// ------------------------------------------------------------ point value

std::pair<double, double> hankel_kernel_norm(const Symbol& f, DiskPoint z, double eps) {
  if (f.is_analytic()) return {0.0, 0.0};
  require_window_certifiable(f, "hankel_kernel_norm");
  const Kernel kz = kernel(z, eps);
  const long N = kz.N, M = 4 * N;
  const ConvPlan pl = make_hankel_plan(f, N, M);
  const double v = conv_apply(pl, kz.coeffs.data).norm();
  const double bar = f.sup_norm_bound() * kz.tail + hankel_output_tail(f, M, N) +
                     f.coeff_defect();
  return {v, bar};
}

// ------------------------------------------------------------ sweep engine

namespace {

// per-(spec, radius) plan bundle; bars are angle-independent
struct SpecPlan {
  bool zero1 = false, zero2 = false;  // structurally zero factors (H of analytic)
  ConvPlan p1, p2;
  double bar1 = 0.0, bar2 = 0.0;
};

double hankel_vec_bar(const Symbol& f, double kernel_tail, long M, long L) {
  return f.sup_norm_bound() * kernel_tail + hankel_output_tail(f, M, L) +
         f.coeff_defect();
}

SpecPlan build_spec_plan(const QuantitySpec& q, long N, long M, double kernel_tail) {
  SpecPlan sp;
  switch (q.kind) {
    case QuantityKind::hankel_norm:
      sp.zero1 = q.a.is_analytic();
      if (!sp.zero1) {
        sp.p1 = make_hankel_plan(q.a, N, M);
        sp.bar1 = hankel_vec_bar(q.a, kernel_tail, M, N);
      }
      break;
    case QuantityKind::hankel_chain_norm:
      sp.zero1 = q.a.is_analytic() || q.b.is_zero();
      if (!sp.zero1) {
        sp.p1 = make_toeplitz_plan(q.b, N, M);
        sp.p2 = make_hankel_plan(q.a, M, M);
        const double sa = q.a.sup_norm_bound(), sb = q.b.sup_norm_bound();
        sp.bar1 = sa * sb * kernel_tail + sa * toeplitz_output_tail(q.b, M, N) +
                  hankel_output_tail(q.a, M, M) * sb +
                  q.a.coeff_defect() * sb + sa * q.b.coeff_defect();
      }
      break;
    case QuantityKind::adjoint_norm: {
      sp.zero1 = q.a.is_analytic();
      if (!sp.zero1) {
        const Symbol as = q.a.star();
        sp.p1 = make_hankel_plan(as, N, M);
        sp.bar1 = hankel_vec_bar(as, kernel_tail, M, N);
      }
      break;
    }
    case QuantityKind::norm_product: {
      const Symbol ac = q.a.conj();
      sp.zero1 = ac.is_analytic();
      sp.zero2 = q.b.is_analytic();
      if (!sp.zero1) {
        sp.p1 = make_hankel_plan(ac, N, M);
        sp.bar1 = hankel_vec_bar(ac, kernel_tail, M, N);
      }
      if (!sp.zero2) {
        sp.p2 = make_hankel_plan(q.b, N, M);
        sp.bar2 = hankel_vec_bar(q.b, kernel_tail, M, N);
      }
      break;
    }
    case QuantityKind::pair_inner_ratio:
      sp.zero1 = q.a.is_analytic();
      sp.zero2 = q.b.is_analytic();
      if (!sp.zero1) {
        sp.p1 = make_hankel_plan(q.a, N, M);
        sp.bar1 = hankel_vec_bar(q.a, kernel_tail, M, N);
      }
      if (!sp.zero2) {
        sp.p2 = make_hankel_plan(q.b, N, M);
        sp.bar2 = hankel_vec_bar(q.b, kernel_tail, M, N);
      }
      break;
  }
  return sp;
}

void require_spec_certifiable(const QuantitySpec& q) {
  switch (q.kind) {
    case QuantityKind::hankel_norm:
    case QuantityKind::adjoint_norm:
      if (!q.a.is_analytic()) require_window_certifiable(q.a, q.tag.c_str());
      break;
    case QuantityKind::hankel_chain_norm:
      if (!q.a.is_analytic()) {
        require_window_certifiable(q.a, q.tag.c_str());
        require_window_certifiable(q.b, q.tag.c_str());
      }
      break;
    case QuantityKind::norm_product:
    case QuantityKind::pair_inner_ratio:
      if (!q.a.is_analytic()) require_window_certifiable(q.a, q.tag.c_str());
      if (!q.b.is_analytic()) require_window_certifiable(q.b, q.tag.c_str());
      break;
  }
}

}  // namespace

std::vector<SweepCurve> radial_sweep(const std::vector<QuantitySpec>& specs,
                                     const RadialNet& net, const TrendParams& params) {
  net.validate();
  for (const QuantitySpec& q : specs) require_spec_certifiable(q);

  const long S = static_cast<long>(specs.size());
  const long A = static_cast<long>(net.angles.size());
  const long R = static_cast<long>(net.radii.size());

  std::vector<SweepCurve> curves(static_cast<std::size_t>(S * A));
  for (long s = 0; s < S; ++s)
    for (long a = 0; a < A; ++a) {
      SweepCurve& c = curves[static_cast<std::size_t>(s * A + a)];
      c.tag = specs[static_cast<std::size_t>(s)].tag;
      c.angle = net.angles[static_cast<std::size_t>(a)];
      c.radii = net.radii;
      c.values.assign(static_cast<std::size_t>(R), 0.0);
      c.error_bars.assign(static_cast<std::size_t>(R), 0.0);
      if (specs[static_cast<std::size_t>(s)].kind == QuantityKind::pair_inner_ratio)
        c.cvalues.assign(static_cast<std::size_t>(R), cplx(0.0, 0.0));
    }

  for (long ri = 0; ri < R; ++ri) {
    const double r = net.radii[static_cast<std::size_t>(ri)];
    const Kernel probe = kernel(DiskPoint(r, 0.0), net.kernel_eps);
    const long N = probe.N;
    const long M = 4 * N;
    const double kernel_tail = probe.tail;

    std::vector<SpecPlan> plans;
    plans.reserve(static_cast<std::size_t>(S));
    for (long s = 0; s < S; ++s)
      plans.push_back(build_spec_plan(specs[static_cast<std::size_t>(s)], N, M, kernel_tail));

    parallel_for(A, [&](long a) {
      const Kernel kz = kernel(DiskPoint(r, net.angles[static_cast<std::size_t>(a)]),
                               net.kernel_eps);
      const Vec& kv = kz.coeffs.data;

      // shared stage-one input spectra: every plan at this radius with input
      // length N has the same transform size, so each layout is transformed
      // exactly once per angle
      Vec spec_rev, spec_fwd, spec_rev_conj;
      auto rev_spec = [&](const ConvPlan& pl) -> const Vec& {
        if (spec_rev.size() == 0) spec_rev = conv_input_spectrum(pl, kv);
        return spec_rev;
      };
      auto fwd_spec = [&](const ConvPlan& pl) -> const Vec& {
        if (spec_fwd.size() == 0) spec_fwd = conv_input_spectrum(pl, kv);
        return spec_fwd;
      };
      auto rev_conj_spec = [&](const ConvPlan& pl) -> const Vec& {
        if (spec_rev_conj.size() == 0)
          spec_rev_conj = conv_input_spectrum(pl, kv.conjugate());
        return spec_rev_conj;
      };

      for (long s = 0; s < S; ++s) {
        const QuantitySpec& q = specs[static_cast<std::size_t>(s)];
        const SpecPlan& sp = plans[static_cast<std::size_t>(s)];
        SweepCurve& c = curves[static_cast<std::size_t>(s * A + a)];
        double value = 0.0, bar = 0.0;
        cplx cval(0.0, 0.0);

        switch (q.kind) {
          case QuantityKind::hankel_norm:
            if (!sp.zero1) {
              value = conv_with_spectrum(sp.p1, rev_spec(sp.p1)).norm();
              bar = sp.bar1;
            }
            break;
          case QuantityKind::adjoint_norm:
            if (!sp.zero1) {
              value = conv_with_spectrum(sp.p1, rev_conj_spec(sp.p1)).norm();
              bar = sp.bar1;
            }
            break;
          case QuantityKind::hankel_chain_norm:
            if (!sp.zero1) {
              const Vec mid = conv_with_spectrum(sp.p1, fwd_spec(sp.p1));
              value = conv_apply(sp.p2, mid).norm();
              bar = sp.bar1;
            }
            break;
          case QuantityKind::norm_product: {
            double v1 = 0.0, v2 = 0.0, b1 = 0.0, b2 = 0.0;
            if (!sp.zero1) {
              v1 = conv_with_spectrum(sp.p1, rev_spec(sp.p1)).norm();
              b1 = sp.bar1;
            }
            if (!sp.zero2) {
              v2 = conv_with_spectrum(sp.p2, rev_spec(sp.p2)).norm();
              b2 = sp.bar2;
            }
            value = v1 * v2;
            bar = v1 * b2 + v2 * b1 + b1 * b2;
            break;
          }
          case QuantityKind::pair_inner_ratio: {
            if (!sp.zero1) {
              const Vec u1 = conv_with_spectrum(sp.p1, rev_spec(sp.p1));
              const double n1 = u1.squaredNorm();
              if (n1 > 0.0) {
                Vec u2;
                if (!sp.zero2) u2 = conv_with_spectrum(sp.p2, rev_spec(sp.p2));
                else u2 = Vec::Zero(u1.size());
                cval = inner(u1, u2) / n1;
                value = std::abs(cval);
                bar = (sp.bar2 + value * sp.bar1) / std::max(std::sqrt(n1), 1e-300);
              }
            }
            break;
          }
        }

        c.values[static_cast<std::size_t>(ri)] = value;
        c.error_bars[static_cast<std::size_t>(ri)] = bar;
        if (!c.cvalues.empty()) c.cvalues[static_cast<std::size_t>(ri)] = cval;
      }
    });
  }

  for (SweepCurve& c : curves) c.stats = classify_trend(c.values, c.radii, params);
  return curves;
}

SweepCurve radial_sweep_single(const QuantitySpec& spec, const RadialNet& net,
                               double angle, const TrendParams& params) {
  RadialNet one = net;
  one.angles = {wrap_angle(angle)};
  return radial_sweep({spec}, one, params)[0];
}

// ---------------------------------------------------------------- verdicts

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::compact: return "compact";
    case Outcome::noncompact: return "noncompact";
    case Outcome::inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

void record_trend_thresholds(Verdict& v, const TrendParams& p) {
  v.thresholds["slope_min"] = p.slope_min;
  v.thresholds["tiny_floor"] = p.tiny;
  v.thresholds["mask_floor"] = p.mask_floor;
  v.thresholds["plateau_factor"] = p.plateau_factor;
  v.thresholds["plateau_floor"] = p.plateau_floor;
  v.thresholds["slope_window"] = static_cast<double>(p.slope_window);
  v.thresholds["plateau_window"] = static_cast<double>(p.plateau_window);
}

void finish_angle_outcome(Verdict& v, const char* what) {
  long pass = 0, fail = 0;
  for (const AngleCase& c : v.per_angle) {
    if (c.passed) ++pass;
    if (c.decisive_fail) ++fail;
  }
  const long total = static_cast<long>(v.per_angle.size());
  if (fail > 0) v.outcome = Outcome::noncompact;
  else if (pass == total) v.outcome = Outcome::compact;
  else v.outcome = Outcome::inconclusive;
  v.summary = strprintf("%s: %ld/%ld angles pass, %ld decisive failure%s -> %s",
                        what, pass, total, fail, fail == 1 ? "" : "s",
                        outcome_name(v.outcome));
}

}  // namespace

Verdict hartman_verdict(const Symbol& f, const std::vector<long>& sizes) {
  if (sizes.size() < 2)
    throw std::invalid_argument("hartman_verdict: need at least two window sizes");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 64) throw std::invalid_argument("hartman_verdict: sizes must be >= 64");
    if (i > 0 && sizes[i] <= sizes[i - 1])
      throw std::invalid_argument("hartman_verdict: sizes must be strictly increasing");
  }

  const double tau_c = 1e-3;   // counting / small-k level
  const double tau_n = 1e-2;   // noncompact floor for sigma_1
  const double stability = 0.10;
  const double zero_floor = 1e-12;

  Verdict v;
  v.thresholds["tau_c"] = tau_c;
  v.thresholds["tau_n"] = tau_n;
  v.thresholds["sigma1_stability"] = stability;
  v.thresholds["zero_floor"] = zero_floor;

  if (f.is_analytic()) {
    v.outcome = Outcome::compact;
    v.trivial = true;
    v.summary = "analytic symbol: the Hankel operator is zero";
    return v;
  }
  require_window_certifiable(f, "hartman_verdict");

  HartmanEvidence ev;
  ev.sizes = sizes;
  for (long N : sizes) {
    const std::vector<double> sv = hankel_svd(f, N);
    auto sig = [&](std::size_t k) {
      return k <= sv.size() ? sv[k - 1] : 0.0;
    };
    ev.sigma1.push_back(sig(1));
    ev.sigma10.push_back(sig(10));
    ev.sigma25.push_back(sig(25));
    ev.sigma50.push_back(sig(50));
    long cnt = 0;
    for (double s : sv)
      if (s >= tau_c) ++cnt;
    ev.count_above_tau_c.push_back(cnt);
  }
  v.hartman = ev;

  const std::size_t L = sizes.size();
  const double s1_last = ev.sigma1[L - 1];
  const long c_last = ev.count_above_tau_c[L - 1];
  const long c_prev = ev.count_above_tau_c[L - 2];

  if (s1_last <= zero_floor) {
    v.outcome = Outcome::compact;
    v.summary = strprintf("sigma_1(N=%ld) = %.3g: window spectra numerically zero",
                          sizes.back(), s1_last);
    return v;
  }

  const bool small_k = ev.sigma10[L - 1] <= tau_c || ev.sigma25[L - 1] <= tau_c ||
                       ev.sigma50[L - 1] <= tau_c;
  const bool stalled = c_last <= c_prev;
  if (small_k && stalled) {
    v.outcome = Outcome::compact;
    v.summary = strprintf(
        "tail singular values below %.0e and the %.0e-level count stalled "
        "(%ld -> %ld) across the last doubling",
        tau_c, tau_c, c_prev, c_last);
    return v;
  }

  const double s1_prev = ev.sigma1[L - 2];
  const bool stable =
      std::abs(s1_last - s1_prev) <= stability * std::max(s1_last, s1_prev);
  bool strictly_growing = true;
  for (std::size_t i = 0; i + 1 < L; ++i)
    if (ev.count_above_tau_c[i + 1] <= ev.count_above_tau_c[i]) strictly_growing = false;

  if (stable && s1_last >= tau_n && strictly_growing) {
    v.outcome = Outcome::noncompact;
    v.summary = strprintf(
        "sigma_1 stabilized at %.4g while the %.0e-level count keeps growing "
        "(%ld -> %ld)",
        s1_last, tau_c, c_prev, c_last);
    return v;
  }

  v.outcome = Outcome::inconclusive;
  v.summary = strprintf(
      "window spectra neither settle below %.0e nor stabilize: sigma_1 %.4g -> %.4g, "
      "count %ld -> %ld",
      tau_c, s1_prev, s1_last, c_prev, c_last);
  return v;
}

Verdict zheng_pair_verdict(const Symbol& f, const Symbol& g, const RadialNet& net,
                           const TrendParams& params) {
  Verdict v;
  record_trend_thresholds(v, params);

  if (f.conj().is_analytic() || g.is_analytic()) {
    v.outcome = Outcome::compact;
    v.trivial = true;
    v.summary = "structurally compact: one factor has zero Hankel part";
    return v;
  }

  QuantitySpec q{QuantityKind::norm_product, f, g, "product"};
  v.evidence = radial_sweep({q}, net, params);

  const long A = static_cast<long>(net.angles.size());
  v.per_angle.reserve(static_cast<std::size_t>(A));
  for (long a = 0; a < A; ++a) {
    AngleCase c;
    c.angle = net.angles[static_cast<std::size_t>(a)];
    const Trend t = v.evidence[static_cast<std::size_t>(a)].stats.cls;
    c.passed = (t == Trend::vanishing);
    c.case_id = c.passed ? 1 : 0;
    c.decisive_fail = (t == Trend::plateaued);
    v.per_angle.push_back(c);
  }
  finish_angle_outcome(v, "product of Hankel kernel norms");
  return v;
}

Verdict product_verdict(const Symbol& f, const Symbol& g, const RadialNet& net,
                        std::optional<Symbol> fg, const TrendParams& params) {
  Verdict v;
  record_trend_thresholds(v, params);
  v.thresholds["toeplitz_factor_sup"] = g.sup_norm_bound();

  if (f.is_analytic() || g.is_zero()) {
    v.outcome = Outcome::compact;
    v.trivial = true;
    v.summary = "structurally compact: the operator is zero";
    return v;
  }

  const Symbol pr = fg ? *fg : multiply(f, g);
  std::vector<QuantitySpec> specs = {
      {QuantityKind::hankel_norm, f, Symbol(), "Hf_kz"},
      {QuantityKind::hankel_norm, g, Symbol(), "Hg_kz"},
      {QuantityKind::hankel_norm, pr, Symbol(), "Hfg_kz"},
      {QuantityKind::hankel_chain_norm, f, g, "HfTg_kz"},
  };
  v.evidence = radial_sweep(specs, net, params);

  const long A = static_cast<long>(net.angles.size());
  auto cls = [&](long s, long a) {
    return v.evidence[static_cast<std::size_t>(s * A + a)].stats.cls;
  };
  v.per_angle.reserve(static_cast<std::size_t>(A));
  for (long a = 0; a < A; ++a) {
    AngleCase c;
    c.angle = net.angles[static_cast<std::size_t>(a)];
    const Trend hf = cls(0, a), hg = cls(1, a), hfg = cls(2, a);
    if (hf == Trend::vanishing) {
      c.passed = true;
      c.case_id = 1;
    } else if (hg == Trend::vanishing && hfg == Trend::vanishing) {
      c.passed = true;
      c.case_id = 2;
    } else if (hf == Trend::plateaued &&
               (hg == Trend::plateaued || hfg == Trend::plateaued)) {
      c.decisive_fail = true;
    }
    v.per_angle.push_back(c);
  }
  finish_angle_outcome(v, "two-case product criterion");
  return v;
}

double dilation_residual(const DilationSpec& spec, DiskPoint z, long N) {
  if (spec.terms.empty()) throw std::invalid_argument("dilation_residual: empty spec");
  if (N < 1) throw std::invalid_argument("dilation_residual: N must be >= 1");
  Mat K = Mat::Zero(N, N);
  for (const auto& [f, g] : spec.terms)
    K += hankel_window(f, N) * toeplitz_window(g, N);
  const Mat B = K.adjoint() * K;
  const Mat T = toeplitz_window(Symbol::mobius(z), N);
  const Mat R = B - T.adjoint() * B * T;
  return opnorm(R);
}

double dilation_conjugation_residual(const DilationSpec& spec, DiskPoint z, long N) {
  if (spec.terms.empty())
    throw std::invalid_argument("dilation_conjugation_residual: empty spec");
  if (N < 1) throw std::invalid_argument("dilation_conjugation_residual: N must be >= 1");
  Mat K = Mat::Zero(N, N);
  for (const auto& [f, g] : spec.terms)
    K += hankel_window(f, N) * toeplitz_window(g, N);
  const Symbol phi = Symbol::mobius(z);
  const Mat Tt = toeplitz_window(phi.tilde(), N);
  const Mat Tb = toeplitz_window(phi.conj(), N);
  const Mat R = K - Tt * K * Tb;
  return opnorm(R);
}

Verdict sum_product_verdict(const Symbol& f1, const Symbol& g1, const Symbol& f2,
                            const Symbol& g2, const RadialNet& net,
                            std::optional<Symbol> f1g1, std::optional<Symbol> f2g2,
                            const TrendParams& params) {
  const double t_stability = 0.25;
  const int t_window = 3;

  Verdict v;
  record_trend_thresholds(v, params);
  v.thresholds["t_stability"] = t_stability;
  v.thresholds["t_window"] = static_cast<double>(t_window);

  const bool term1_zero = f1.is_analytic() || g1.is_zero();
  const bool term2_zero = f2.is_analytic() || g2.is_zero();
  if (term1_zero && term2_zero) {
    v.outcome = Outcome::compact;
    v.trivial = true;
    v.summary = "structurally compact: both terms are zero operators";
    return v;
  }

  const Symbol p1 = f1g1 ? *f1g1 : multiply(f1, g1);
  const Symbol p2 = f2g2 ? *f2g2 : multiply(f2, g2);

  std::vector<QuantitySpec> specs = {
      {QuantityKind::hankel_norm, f1, Symbol(), "Hf1_kz"},
      {QuantityKind::hankel_norm, g1, Symbol(), "Hg1_kz"},
      {QuantityKind::hankel_norm, f2, Symbol(), "Hf2_kz"},
      {QuantityKind::hankel_norm, g2, Symbol(), "Hg2_kz"},
      {QuantityKind::hankel_norm, p1, Symbol(), "Hf1g1_kz"},
      {QuantityKind::hankel_norm, p2, Symbol(), "Hf2g2_kz"},
      {QuantityKind::pair_inner_ratio, f1, f2, "tz"},
  };
  v.evidence = radial_sweep(specs, net, params);

  const long A = static_cast<long>(net.angles.size());
  const long R = static_cast<long>(net.radii.size());
  auto cls = [&](long s, long a) {
    return v.evidence[static_cast<std::size_t>(s * A + a)].stats.cls;
  };
  auto van = [](Trend t) { return t == Trend::vanishing; };

  std::vector<SweepCurve> extra;  // cancellation-trio sweeps, appended at the end
  v.per_angle.reserve(static_cast<std::size_t>(A));

  for (long a = 0; a < A; ++a) {
    AngleCase c;
    c.angle = net.angles[static_cast<std::size_t>(a)];
    const Trend tf1 = cls(0, a), tg1 = cls(1, a), tf2 = cls(2, a), tg2 = cls(3, a);
    const Trend tp1 = cls(4, a), tp2 = cls(5, a);

    if (van(tf1) && van(tf2)) {
      c.passed = true;
      c.case_id = 1;
    } else if (van(tf1) && van(tg2) && van(tp2)) {
      c.passed = true;
      c.case_id = 2;
    } else if (van(tg1) && van(tp1) && van(tf2)) {
      c.passed = true;
      c.case_id = 3;
    } else if (van(tg1) && van(tg2) && van(tp1) && van(tp2)) {
      c.passed = true;
      c.case_id = 4;
    } else if (tf1 == Trend::plateaued) {
      // cancellation estimator: t_z = <H_{f1}k_z, H_{f2}k_z> / ||H_{f1}k_z||^2,
      // averaged over the last radii; c = -conj(t) is the only coefficient
      // that can cancel the f1-direction between the two terms
      const SweepCurve& tc = v.evidence[static_cast<std::size_t>(6 * A + a)];
      const SweepCurve& f1c = v.evidence[static_cast<std::size_t>(0 * A + a)];
      c.has_t = true;

      const long w = std::min<long>(t_window, R);
      cplx tbar(0.0, 0.0);
      for (long i = R - w; i < R; ++i) tbar += tc.cvalues[static_cast<std::size_t>(i)];
      tbar /= static_cast<double>(w);

      double maxdiff = 0.0;
      for (long i = R - w; i < R; ++i)
        for (long j = i + 1; j < R; ++j)
          maxdiff = std::max(maxdiff,
                             std::abs(tc.cvalues[static_cast<std::size_t>(i)] -
                                      tc.cvalues[static_cast<std::size_t>(j)]));
      c.t_stable = maxdiff <= t_stability * std::max(std::abs(tbar), 1e-12);

      const double delta = f1c.stats.min_along;
      if (delta > 0.0 && std::abs(tbar) > 1.0 / delta) {
        tbar *= (1.0 / delta) / std::abs(tbar);
        c.t_capped = true;
      }
      c.t = tbar;
      const cplx cc = -std::conj(tbar);
      c.c = cc;

      if (c.t_stable) {
        const Symbol s1 = add(scale(cc, f1), f2);
        const Symbol s2 = add(g1, scale(-cc, g2));
        bool trio_ok = true;
        std::vector<SweepCurve> trio;
        try {
          const Symbol s3 = multiply(f1, s2);
          RadialNet one = net;
          one.angles = {c.angle};
          trio = radial_sweep(
              {{QuantityKind::hankel_norm, s1, Symbol(), "trio_cf1f2"},
               {QuantityKind::hankel_norm, s2, Symbol(), "trio_g1cg2"},
               {QuantityKind::hankel_norm, s3, Symbol(), "trio_prod"}},
              one, params);
        } catch (const uncertifiable_error&) {
          trio_ok = false;  // cross product not certifiable: stays inconclusive
        }
        if (trio_ok) {
          const bool all_van = van(trio[0].stats.cls) && van(trio[1].stats.cls) &&
                               van(trio[2].stats.cls);
          const bool any_plat = trio[0].stats.cls == Trend::plateaued ||
                                trio[1].stats.cls == Trend::plateaued ||
                                trio[2].stats.cls == Trend::plateaued;
          if (all_van) {
            c.passed = true;
            c.case_id = 5;
          } else if (any_plat) {
            c.decisive_fail = true;  // stable estimator, residual still plateaus
          }
          for (SweepCurve& t : trio) extra.push_back(std::move(t));
        }
      }
    }

    if (!c.passed && !c.decisive_fail && van(tf1) && tf2 == Trend::plateaued)
      c.decisive_fail = true;  // f1-term dies, f2-term alone plateaus: no cancellation

    v.per_angle.push_back(c);
  }

  for (SweepCurve& t : extra) v.evidence.push_back(std::move(t));
  finish_angle_outcome(v, "five-case sum-of-products criterion");
  return v;
}

std::string format_verdict(const Verdict& v) {
  std::string out;
  out += strprintf("outcome: %s%s\n", outcome_name(v.outcome),
                   v.trivial ? " (structural)" : "");
  out += "summary: " + v.summary + "\n";
  if (!v.per_angle.empty()) {
    long pass = 0, fail = 0, open = 0;
    for (const AngleCase& c : v.per_angle) {
      if (c.passed) ++pass;
      else if (c.decisive_fail) ++fail;
      else ++open;
    }
    out += strprintf("angles: %zu probed, %ld pass, %ld decisive-fail, %ld open\n",
                     v.per_angle.size(), pass, fail, open);
    for (const AngleCase& c : v.per_angle) {
      if (!c.decisive_fail && !(c.has_t && c.passed)) continue;
      out += strprintf("  theta=%+.6f  %s  case=%d", c.angle,
                       c.passed ? "pass" : "FAIL", c.case_id);
      if (c.has_t)
        out += strprintf("  t=(%.4g,%.4g)%s%s", c.t.real(), c.t.imag(),
                         c.t_stable ? "" : " unstable", c.t_capped ? " capped" : "");
      out += "\n";
    }
  }
  if (v.hartman) {
    const HartmanEvidence& ev = *v.hartman;
    out += "window    sigma_1   sigma_10  sigma_25  sigma_50  count@tau_c\n";
    for (std::size_t i = 0; i < ev.sizes.size(); ++i)
      out += strprintf("%6ld  %9.3e %9.3e %9.3e %9.3e  %ld\n", ev.sizes[i],
                       ev.sigma1[i], ev.sigma10[i], ev.sigma25[i], ev.sigma50[i],
                       ev.count_above_tau_c[i]);
  }
  if (!v.thresholds.empty()) {
    out += "thresholds:";
    for (const auto& [k, val] : v.thresholds) out += strprintf(" %s=%g", k.c_str(), val);
    out += "\n";
  }
  return out;
}

}  // namespace hardylab
