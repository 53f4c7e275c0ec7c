// core/src/symbol.cpp
//
// Symbol payloads, built-in families, transforms, and certified algebra.

#include "hardylab/symbol.hpp"
#include "hardylab/fft.hpp"

#include <algorithm>
#include <cstdio>
#include <utility>

namespace hardylab {

namespace {

std::string fmt_num(double x) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

std::string fmt_cplx(cplx c) {
  if (c.imag() == 0.0) return fmt_num(c.real());
  char buf[96];
  std::snprintf(buf, sizeof(buf), "(%.6g%+.6gi)", c.real(), c.imag());
  return buf;
}

// wrap an angle to (-pi, pi]
double wrap_angle(double th) {
  double w = std::remainder(th, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

std::vector<double> merge_jumps(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out = a;
  out.insert(out.end(), b.begin(), b.end());
  for (double& t : out) t = wrap_angle(t);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double x, double y) { return std::abs(x - y) < 1e-12; }),
            out.end());
  return out;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

// sum_{n>=1} n^{-p}: partial sum plus integral tail bound (upper bound)
double zeta_upper(double p) {
  if (p <= 1.0) return kInf;
  double s = 0.0;
  const long cut = 200000;
  for (long n = 1; n <= cut; ++n) s += std::pow(static_cast<double>(n), -p);
  s += std::pow(static_cast<double>(cut), 1.0 - p) / (p - 1.0);
  return s;
}

// smallest W >= lo with geometric/power l1 tail <= tol (doubling search; capped)
long tail_l1_horizon(const DecayEnvelope& env, long lo, double tol, long cap) {
  long w = std::max<long>(lo, 1);
  while (w < cap && env.tail_l1(w) > tol) w *= 2;
  return std::min(w, cap);
}

// dominate A rho^n by C n^{-p}: C = A * max_n n^p rho^n
double geo_to_power(double A, double rho, double p) {
  if (rho <= 0.0) return A;
  double nstar = std::max(1.0, -p / std::log(rho));
  double k1 = std::pow(std::floor(nstar), p) * std::pow(rho, std::floor(nstar));
  double k2 = std::pow(std::ceil(nstar), p) * std::pow(rho, std::ceil(nstar));
  return A * std::max({k1, k2, std::pow(rho, 1.0)});
}

}  // namespace

// ------------------------------------------------------------------- Impl

struct Symbol::Impl {
  std::string name = "0";
  CoeffVector stored;            // finite data; degrees [stored.lo, stored.hi())
  Generator gen;                 // when set, coeff(n) == gen(n) for all n
  Evaluator evalf;               // optional boundary evaluator
  DecayEnvelope env = DecayEnvelope::finite(0);
  long env_from = 1;             // |c(n)| <= env.at(|n|) for |n| >= env_from
  double sup_bound = 0.0;        // certified ||f||_inf (may be +inf)
  double defect = 0.0;           // l1 bound on reported-vs-true coefficient error
  std::vector<double> jumps;
  bool analytic = false;
  bool coanalytic = false;
};

namespace {
const std::shared_ptr<const Symbol::Impl>& zero_impl() {
  static const std::shared_ptr<const Symbol::Impl> z = [] {
    auto i = std::make_shared<Symbol::Impl>();
    i->name = "0";
    i->analytic = i->coanalytic = true;
    i->evalf = [](double) { return cplx(0.0, 0.0); };
    return i;
  }();
  return z;
}
}  // namespace

struct SymbolBuilder {
  static Symbol wrap(std::shared_ptr<const Symbol::Impl> impl) {
    return Symbol(std::move(impl));
  }
};

Symbol::Symbol() : impl_(zero_impl()) {}
Symbol Symbol::zero() { return Symbol(); }

Symbol Symbol::constant(cplx c) {
  if (c == cplx(0.0, 0.0)) return zero();
  return trig_poly(0, {c});
}

Symbol Symbol::trig_poly(long lo, std::vector<cplx> coeffs) {
  // trim zero fringes so band metadata is tight
  size_t a = 0, b = coeffs.size();
  while (a < b && coeffs[a] == cplx(0.0, 0.0)) ++a;
  while (b > a && coeffs[b - 1] == cplx(0.0, 0.0)) --b;
  if (a == b) return zero();
  auto impl = std::make_shared<Impl>();
  Vec v(static_cast<long>(b - a));
  double l1 = 0.0;
  for (size_t i = a; i < b; ++i) {
    v[static_cast<long>(i - a)] = coeffs[i];
    l1 += std::abs(coeffs[i]);
  }
  impl->stored = CoeffVector(lo + static_cast<long>(a), std::move(v));
  const long blo = impl->stored.lo, bhi = impl->stored.hi() - 1;
  impl->env = DecayEnvelope::finite(std::max(std::abs(blo), std::abs(bhi)));
  impl->env_from = impl->env.band + 1;
  impl->sup_bound = l1;
  impl->analytic = blo >= 0;
  impl->coanalytic = bhi <= 0;
  impl->name = "trigpoly[" + std::to_string(blo) + ".." + std::to_string(bhi) + "]";
  CoeffVector sc = impl->stored;
  impl->evalf = [sc](double th) {
    cplx s(0.0, 0.0);
    for (long n = sc.lo; n < sc.hi(); ++n) s += sc.at(n) * std::polar(1.0, n * th);
    return s;
  };
  return SymbolBuilder::wrap(impl);
}

Symbol Symbol::trig_poly(const std::map<long, cplx>& coeffs) {
  if (coeffs.empty()) return zero();
  long lo = coeffs.begin()->first, hi = coeffs.rbegin()->first;
  std::vector<cplx> v(static_cast<size_t>(hi - lo + 1), cplx(0.0, 0.0));
  for (const auto& [n, c] : coeffs) v[static_cast<size_t>(n - lo)] = c;
  return trig_poly(lo, std::move(v));
}

Symbol Symbol::arc_indicator(double alpha, double beta) {
  const double len = beta - alpha - 2.0 * kPi * std::floor((beta - alpha) / (2.0 * kPi));
  if (!(len > 1e-12) || !(len < 2.0 * kPi - 1e-12))
    throw std::invalid_argument("arc_indicator: endpoints must be distinct mod 2pi");
  const double a = alpha, b = alpha + len;
  auto impl = std::make_shared<Impl>();
  impl->gen = [a, b, len](long n) -> cplx {
    if (n == 0) return cplx(len / (2.0 * kPi), 0.0);
    const double x = static_cast<double>(n);
    const cplx num = std::polar(1.0, -x * a) - std::polar(1.0, -x * b);
    return num / (cplx(0.0, 2.0 * kPi) * x);
  };
  impl->env = DecayEnvelope::power(1.0 / kPi, 1.0);
  impl->env_from = 1;
  impl->sup_bound = 1.0;
  impl->jumps = merge_jumps({a, b}, {});
  impl->evalf = [a, len](double th) {
    double u = th - a;
    u -= 2.0 * kPi * std::floor(u / (2.0 * kPi));
    return cplx(u < len ? 1.0 : 0.0, 0.0);
  };
  impl->name = "arc(" + fmt_num(wrap_angle(a)) + "," + fmt_num(wrap_angle(b)) + ")";
  return SymbolBuilder::wrap(impl);
}

Symbol Symbol::mobius(DiskPoint zp) {
  const cplx z = zp.value();
  const double az = zp.r;
  if (az == 0.0) {
    auto s = trig_poly(1, {cplx(-1.0, 0.0)});  // phi_0(w) = -w
    auto impl = std::make_shared<Impl>(*s.impl_);
    impl->name = "blaschke(0)";
    return SymbolBuilder::wrap(impl);
  }
  auto impl = std::make_shared<Impl>();
  const double one_m = 1.0 - az * az;
  const cplx zb = std::conj(z);
  impl->gen = [z, zb, one_m](long n) -> cplx {
    if (n == 0) return z;
    if (n < 1) return cplx(0.0, 0.0);
    return -one_m * std::pow(zb, static_cast<double>(n - 1));
  };
  impl->env = DecayEnvelope::geometric(one_m / az, az);
  impl->env_from = 1;
  impl->sup_bound = 1.0;  // phi_z is inner
  impl->analytic = true;
  impl->evalf = [z, zb](double th) {
    const cplx w = std::polar(1.0, th);
    return (z - w) / (1.0 - zb * w);
  };
  impl->name = "blaschke(" + fmt_cplx(z) + ")";
  return SymbolBuilder::wrap(impl);
}

Symbol Symbol::smooth_decay(double p) {
  if (!(p > 0.0)) throw std::invalid_argument("smooth_decay: need p > 0");
  auto impl = std::make_shared<Impl>();
  impl->gen = [p](long n) -> cplx {
    if (n >= 0) return cplx(0.0, 0.0);
    return cplx(std::pow(static_cast<double>(-n), -p), 0.0);
  };
  impl->env = DecayEnvelope::power(1.0, p);
  impl->env_from = 1;
  impl->sup_bound = zeta_upper(p);
  impl->coanalytic = true;
  impl->name = "smooth_decay(" + fmt_num(p) + ")";
  return SymbolBuilder::wrap(impl);
}

Symbol Symbol::from_generator(Generator gen, DecayEnvelope env, long env_from,
                              double sup_bound, std::string name,
                              double defect, std::vector<double> jumps, Evaluator evalf) {
  auto impl = std::make_shared<Impl>();
  impl->gen = std::move(gen);
  impl->env = env;
  impl->env_from = std::max<long>(env_from, 1);
  impl->sup_bound = sup_bound;
  impl->name = std::move(name);
  impl->defect = defect;
  impl->jumps = merge_jumps(std::move(jumps), {});
  impl->evalf = std::move(evalf);
  return SymbolBuilder::wrap(impl);
}

// ---------------------------------------------------------------- access

cplx Symbol::coeff(long n) const {
  if (impl_->gen) return impl_->gen(n);
  return impl_->stored.at(n);
}

CoeffVector Symbol::window(long lo, long hi) const {
  if (hi < lo) throw std::invalid_argument("Symbol::window: hi < lo");
  Vec v = Vec::Zero(hi - lo);
  if (impl_->gen) {
    for (long n = lo; n < hi; ++n) v[n - lo] = impl_->gen(n);
  } else {
    const CoeffVector& s = impl_->stored;
    const long a = std::max(lo, s.lo), b = std::min(hi, s.hi());
    for (long n = a; n < b; ++n) v[n - lo] = s.data[n - s.lo];
  }
  return CoeffVector(lo, std::move(v));
}

// ------------------------------------------------------------- transforms

namespace {

// shared plumbing for the three index/conjugation transforms
Symbol transform_symbol(const Symbol& f, const std::shared_ptr<const Symbol::Impl>& fi,
                        bool negate_index, bool conjugate, const char* tagname) {
  auto impl = std::make_shared<Symbol::Impl>();
  if (fi->gen) {
    Symbol fcopy = f;  // keep payload alive inside the closure
    impl->gen = [fcopy, negate_index, conjugate](long n) {
      cplx c = fcopy.coeff(negate_index ? -n : n);
      return conjugate ? std::conj(c) : c;
    };
  } else {
    const CoeffVector& s = fi->stored;
    if (s.size() > 0) {
      Vec v(s.size());
      for (long i = 0; i < s.size(); ++i) {
        cplx c = s.data[negate_index ? s.size() - 1 - i : i];
        v[i] = conjugate ? std::conj(c) : c;
      }
      long lo = negate_index ? -(s.hi() - 1) : s.lo;
      impl->stored = CoeffVector(lo, std::move(v));
    }
  }
  impl->env = fi->env;  // magnitudes are mirrored, bounds unchanged
  impl->env_from = fi->env_from;
  impl->sup_bound = fi->sup_bound;
  impl->defect = fi->defect;
  if (negate_index) {
    impl->analytic = fi->coanalytic;
    impl->coanalytic = fi->analytic;
    for (double t : fi->jumps) impl->jumps.push_back(wrap_angle(-t));
  } else {
    impl->analytic = fi->analytic;
    impl->coanalytic = fi->coanalytic;
    impl->jumps = fi->jumps;
  }
  std::sort(impl->jumps.begin(), impl->jumps.end());
  if (fi->evalf) {
    auto e = fi->evalf;
    // pointwise: conj(f) -> conj(f(th)); tilde -> f(-th); star -> conj(f(-th))
    const bool flip_theta = !(negate_index && conjugate);
    const bool cj = conjugate;
    impl->evalf = [e, flip_theta, cj](double th) {
      cplx v = e(flip_theta ? -th : th);
      return cj ? std::conj(v) : v;
    };
  }
  impl->name = std::string(tagname) + "(" + fi->name + ")";
  return SymbolBuilder::wrap(impl);
}

}  // namespace

Symbol Symbol::conj() const { return transform_symbol(*this, impl_, true, true, "conj"); }
Symbol Symbol::tilde() const { return transform_symbol(*this, impl_, true, false, "tilde"); }
Symbol Symbol::star() const { return transform_symbol(*this, impl_, false, true, "star"); }

// --------------------------------------------------------------- metadata

const std::string& Symbol::name() const { return impl_->name; }
double Symbol::sup_norm_bound() const { return impl_->sup_bound; }
const DecayEnvelope& Symbol::envelope() const { return impl_->env; }
long Symbol::envelope_from() const { return impl_->env_from; }
double Symbol::coeff_defect() const { return impl_->defect; }
const std::vector<double>& Symbol::jump_angles() const { return impl_->jumps; }
bool Symbol::is_zero() const { return !impl_->gen && impl_->stored.size() == 0; }
bool Symbol::is_analytic() const { return impl_->analytic; }
bool Symbol::is_coanalytic() const { return impl_->coanalytic; }
bool Symbol::is_finite_band() const { return !impl_->gen; }
long Symbol::band_lo() const { return impl_->stored.size() ? impl_->stored.lo : 0; }
long Symbol::band_hi() const { return impl_->stored.size() ? impl_->stored.hi() - 1 : 0; }

long Symbol::effective_degree(double tol) const {
  if (is_finite_band()) return std::max(std::abs(band_lo()), std::abs(band_hi()));
  long d = impl_->env_from;
  const long cap = 1L << 24;
  while (d < cap && impl_->env.tail_l2(d) > tol) d *= 2;
  return d;
}

bool Symbol::has_evaluator() const { return static_cast<bool>(impl_->evalf); }
cplx Symbol::eval(double theta) const {
  if (!impl_->evalf)
    throw std::logic_error("Symbol::eval: no boundary evaluator for " + impl_->name);
  return impl_->evalf(theta);
}

double Symbol::side_l1_bound(bool negative_side) const {
  if (is_finite_band()) {
    double s = 0.0;
    for (long n = impl_->stored.lo; n < impl_->stored.hi(); ++n) {
      if ((negative_side && n < 0) || (!negative_side && n > 0)) s += std::abs(impl_->stored.at(n));
    }
    return s;
  }
  if (negative_side && impl_->analytic) return 0.0;
  if (!negative_side && impl_->coanalytic) return 0.0;
  if (!impl_->env.l1_summable()) return kInf;
  double s = impl_->env.tail_l1(impl_->env_from);
  for (long n = 1; n < impl_->env_from; ++n)
    s += std::abs(coeff(negative_side ? -n : n));
  return s;
}

namespace {
double total_l1_bound(const Symbol& f) {
  double s = f.side_l1_bound(true);
  if (s == kInf) return kInf;
  double t = f.side_l1_bound(false);
  if (t == kInf) return kInf;
  return s + t + std::abs(f.coeff(0));
}
}  // namespace

// ----------------------------------------------------------------- algebra

Symbol add(const Symbol& f, const Symbol& g) {
  if (f.is_zero()) return g;
  if (g.is_zero()) return f;
  const auto& fi = f.impl_;
  const auto& gi = g.impl_;
  auto impl = std::make_shared<Symbol::Impl>();

  if (f.is_finite_band() && g.is_finite_band()) {
    std::map<long, cplx> m;
    for (long n = fi->stored.lo; n < fi->stored.hi(); ++n) m[n] += fi->stored.at(n);
    for (long n = gi->stored.lo; n < gi->stored.hi(); ++n) m[n] += gi->stored.at(n);
    Symbol out = Symbol::trig_poly(m);
    auto oi = std::make_shared<Symbol::Impl>(*out.impl_);
    oi->jumps = merge_jumps(fi->jumps, gi->jumps);
    oi->defect = fi->defect + gi->defect;
    oi->sup_bound = fi->sup_bound + gi->sup_bound;  // triangle ineq; tighter than l1 re-sum sometimes
    oi->name = "(" + fi->name + " + " + gi->name + ")";
    return SymbolBuilder::wrap(oi);
  }

  impl->gen = [f, g](long n) { return f.coeff(n) + g.coeff(n); };
  // envelope: pointwise sum, dominated within a single shape
  const DecayEnvelope &e1 = fi->env, &e2 = gi->env;
  impl->env_from = std::max(fi->env_from, gi->env_from);
  auto shape = [](const DecayEnvelope& e) { return e.kind; };
  using K = DecayEnvelope::Kind;
  if (shape(e1) == K::finite && shape(e2) == K::finite) {
    impl->env = DecayEnvelope::finite(std::max(e1.band, e2.band));
    impl->env_from = std::max({impl->env_from, e1.band + 1, e2.band + 1});
  } else if (shape(e1) == K::finite || shape(e2) == K::finite) {
    const DecayEnvelope& live = shape(e1) == K::finite ? e2 : e1;
    const DecayEnvelope& fin = shape(e1) == K::finite ? e1 : e2;
    impl->env = live;
    impl->env_from = std::max(impl->env_from, fin.band + 1);
  } else if (shape(e1) == K::power && shape(e2) == K::power) {
    impl->env = DecayEnvelope::power(e1.C + e2.C, std::min(e1.p, e2.p));
  } else if (shape(e1) == K::geometric && shape(e2) == K::geometric) {
    impl->env = DecayEnvelope::geometric(e1.A + e2.A, std::max(e1.rho, e2.rho));
  } else {
    const DecayEnvelope& pw = shape(e1) == K::power ? e1 : e2;
    const DecayEnvelope& ge = shape(e1) == K::power ? e2 : e1;
    impl->env = DecayEnvelope::power(pw.C + geo_to_power(ge.A, ge.rho, pw.p), pw.p);
  }
  impl->sup_bound = fi->sup_bound + gi->sup_bound;
  impl->defect = fi->defect + gi->defect;
  impl->jumps = merge_jumps(fi->jumps, gi->jumps);
  impl->analytic = fi->analytic && gi->analytic;
  impl->coanalytic = fi->coanalytic && gi->coanalytic;
  if (fi->evalf && gi->evalf) {
    auto ef = fi->evalf, eg = gi->evalf;
    impl->evalf = [ef, eg](double th) { return ef(th) + eg(th); };
  }
  impl->name = "(" + fi->name + " + " + gi->name + ")";
  return SymbolBuilder::wrap(impl);
}

Symbol scale(cplx a, const Symbol& f) {
  if (a == cplx(0.0, 0.0) || f.is_zero()) return Symbol::zero();
  const auto& fi = f.impl_;
  auto impl = std::make_shared<Symbol::Impl>(*fi);
  const double aa = std::abs(a);
  if (f.is_finite_band()) {
    impl->stored.data = (fi->stored.data * a).eval();
  } else {
    impl->gen = [f, a](long n) { return a * f.coeff(n); };
  }
  switch (impl->env.kind) {
    case DecayEnvelope::Kind::finite: break;
    case DecayEnvelope::Kind::power: impl->env.C *= aa; break;
    case DecayEnvelope::Kind::geometric: impl->env.A *= aa; break;
  }
  impl->sup_bound = fi->sup_bound * aa;
  impl->defect = fi->defect * aa;
  if (fi->evalf) {
    auto e = fi->evalf;
    impl->evalf = [e, a](double th) { return a * e(th); };
  }
  impl->name = fmt_cplx(a) + "*" + fi->name;
  return SymbolBuilder::wrap(impl);
}

namespace {

// envelope for h = f*g when f has finite band [bl,bh] and l1 mass Bf
DecayEnvelope env_product_finite(const DecayEnvelope& ge, long D, double Bf,
                                 long g_from, long& h_from) {
  using K = DecayEnvelope::Kind;
  switch (ge.kind) {
    case K::finite:
      h_from = ge.band + D + 1;
      return DecayEnvelope::finite(ge.band + D);
    case K::power:
      // |h(n)| <= Bf * C (n-D)^{-p} <= Bf C 2^p n^{-p} for n >= 2D
      h_from = std::max({2 * D, g_from + D, 1L});
      return DecayEnvelope::power(Bf * ge.C * std::pow(2.0, ge.p), ge.p);
    case K::geometric:
      h_from = g_from + D;
      return DecayEnvelope::geometric(Bf * ge.A * std::pow(ge.rho, static_cast<double>(-D)),
                                      ge.rho);
  }
  h_from = 1;
  return DecayEnvelope::finite(0);
}

}  // namespace

Symbol multiply(const Symbol& f, const Symbol& g) {
  if (f.is_zero() || g.is_zero()) return Symbol::zero();
  const auto& fi = f.impl_;
  const auto& gi = g.impl_;

  // exact convolution of two finite bands
  if (f.is_finite_band() && g.is_finite_band()) {
    const CoeffVector &a = fi->stored, &b = gi->stored;
    Vec cv = Vec::Zero(a.size() + b.size() - 1);
    for (long i = 0; i < a.size(); ++i)
      for (long j = 0; j < b.size(); ++j) cv[i + j] += a.data[i] * b.data[j];
    std::vector<cplx> coeffs(cv.data(), cv.data() + cv.size());
    Symbol out = Symbol::trig_poly(a.lo + b.lo, std::move(coeffs));
    auto oi = std::make_shared<Symbol::Impl>(*out.impl_);
    oi->jumps = merge_jumps(fi->jumps, gi->jumps);
    oi->sup_bound = std::min(oi->sup_bound, fi->sup_bound * gi->sup_bound);
    oi->defect = fi->defect * total_l1_bound(g) + total_l1_bound(f) * gi->defect;
    oi->name = "(" + fi->name + " * " + gi->name + ")";
    return SymbolBuilder::wrap(oi);
  }

  // one finite factor: exact lazy convolution over the finite band
  if (f.is_finite_band() || g.is_finite_band()) {
    const Symbol& fin = f.is_finite_band() ? f : g;
    const Symbol& oth = f.is_finite_band() ? g : f;
    const auto& ni = fin.impl_;
    const auto& oi = oth.impl_;
    auto impl = std::make_shared<Symbol::Impl>();
    CoeffVector band = ni->stored;
    impl->gen = [band, oth](long n) {
      cplx s(0.0, 0.0);
      for (long k = band.lo; k < band.hi(); ++k) s += band.at(k) * oth.coeff(n - k);
      return s;
    };
    const long D = std::max(std::abs(fin.band_lo()), std::abs(fin.band_hi()));
    const double Bf = [&] {
      double s = 0.0;
      for (long i = 0; i < band.size(); ++i) s += std::abs(band.data[i]);
      return s;
    }();
    impl->env = env_product_finite(oi->env, D, Bf, oi->env_from, impl->env_from);
    impl->sup_bound = ni->sup_bound * oi->sup_bound;
    // an exact factor (defect 0) contributes nothing even when the other
    // side has no l1 bound, so keep 0 * inf out of the arithmetic
    const double d1 = ni->defect == 0.0 ? 0.0 : ni->defect * total_l1_bound(oth);
    const double d2 = oi->defect == 0.0 ? 0.0 : Bf * oi->defect;
    impl->defect = d1 + d2;
    impl->jumps = merge_jumps(ni->jumps, oi->jumps);
    impl->analytic = ni->analytic && oi->analytic;
    impl->coanalytic = ni->coanalytic && oi->coanalytic;
    if (ni->evalf && oi->evalf) {
      auto e1 = ni->evalf, e2 = oi->evalf;
      impl->evalf = [e1, e2](double th) { return e1(th) * e2(th); };
    }
    impl->name = "(" + fi->name + " * " + gi->name + ")";
    return SymbolBuilder::wrap(impl);
  }

  // two infinite factors: need at least one l1-summable side to certify.
  const double B1f = total_l1_bound(f), B1g = total_l1_bound(g);
  if (B1f == kInf && B1g == kInf)
    throw uncertifiable_error(
        "multiply: neither factor has an l1-summable coefficient envelope (" + fi->name +
        ", " + gi->name + "); the product's coefficients cannot be certified");

  if (B1f < kInf && B1g < kInf) {
    // both summable: materialize a truncated convolution, record the defect
    const long cap = 1L << 16;
    const double tol_f = 5e-17 / std::max(1.0, B1g);
    const double tol_g = 5e-17 / std::max(1.0, B1f);
    long Wf = tail_l1_horizon(fi->env, fi->env_from, tol_f, cap);
    long Wg = tail_l1_horizon(gi->env, gi->env_from, tol_g, cap);
    Vec av = f.window(-Wf, Wf + 1).data;
    Vec bv = g.window(-Wg, Wg + 1).data;
    Vec cv = fft_linear_conv(av, bv);
    std::vector<cplx> coeffs(cv.data(), cv.data() + cv.size());
    Symbol out = Symbol::trig_poly(-(Wf + Wg), std::move(coeffs));
    auto oi2 = std::make_shared<Symbol::Impl>(*out.impl_);
    const double tail_f = fi->env.tail_l1(Wf + 1), tail_g = gi->env.tail_l1(Wg + 1);
    oi2->defect = tail_f * B1g + B1f * tail_g + fi->defect * B1g + B1f * gi->defect;
    oi2->sup_bound = std::min(oi2->sup_bound, fi->sup_bound * gi->sup_bound);
    oi2->jumps = merge_jumps(fi->jumps, gi->jumps);
    oi2->analytic = fi->analytic && gi->analytic;
    oi2->coanalytic = fi->coanalytic && gi->coanalytic;
    if (fi->evalf && gi->evalf) {
      auto e1 = fi->evalf, e2 = gi->evalf;
      oi2->evalf = [e1, e2](double th) { return e1(th) * e2(th); };
    }
    oi2->name = "(" + fi->name + " * " + gi->name + ")";
    return SymbolBuilder::wrap(oi2);
  }

  // exactly one summable factor: lazy adaptive convolution against it.
  const Symbol& s = B1f < kInf ? f : g;    // the summable factor
  const Symbol& u = B1f < kInf ? g : f;    // the merely bounded factor
  const auto& si = s.impl_;
  const auto& ui = u.impl_;
  const double Cu = std::min(ui->sup_bound, kInf);  // |u-coeff| <= ||u||_inf
  if (!(Cu < kInf))
    throw uncertifiable_error("multiply: factor " + ui->name + " has no finite sup bound");
  auto impl = std::make_shared<Symbol::Impl>();
  const double B1s = B1f < kInf ? B1f : B1g;
  Symbol scopy = s, ucopy = u;
  const DecayEnvelope senv = si->env;
  const long sfrom = si->env_from;
  impl->gen = [scopy, ucopy, senv, sfrom, Cu](long n) {
    // truncate the summable side so the dropped mass is ~2^{-|n|} * 1e-16
    const double tol = std::max(1e-300, 1e-16 * std::pow(2.0, -static_cast<double>(std::abs(n)))) /
                       std::max(1.0, Cu);
    long W = tail_l1_horizon(senv, sfrom, tol, 1L << 22);
    cplx acc(0.0, 0.0);
    for (long m = -W; m <= W; ++m) acc += scopy.coeff(m) * ucopy.coeff(n - m);
    return acc;
  };
  // |h(n)| <= B1s * env_u(n/2) + tail_s(n/2) * Cu; dominate in the u-shape
  using K = DecayEnvelope::Kind;
  if (ui->env.kind == K::power) {
    double C = B1s * ui->env.C * std::pow(2.0, ui->env.p);
    if (si->env.kind == K::geometric)
      C += geo_to_power(Cu * si->env.A / (1.0 - si->env.rho), std::sqrt(si->env.rho), ui->env.p);
    else
      C += Cu * si->env.C * std::pow(2.0, si->env.p);  // both power; p_s > 1 >= p_u here
    impl->env = DecayEnvelope::power(C, ui->env.p);
    impl->env_from = std::max({2 * ui->env_from, 2 * si->env_from, 2L});
  } else {
    // u geometric would be l1-summable, so it cannot reach this branch
    throw std::logic_error("multiply: unreachable envelope combination");
  }
  impl->sup_bound = si->sup_bound * ui->sup_bound;
  // adaptive truncation drops at most sum_n 2^{-|n|} * 1e-16 < 3e-16 of l1 mass;
  // defects on the factors themselves cannot be pushed through a non-summable
  // partner, so surface them as uncertified rather than underreport
  impl->defect = (si->defect > 0.0 || ui->defect > 0.0) ? kInf : 3e-16;
  impl->jumps = merge_jumps(si->jumps, ui->jumps);
  impl->analytic = si->analytic && ui->analytic;
  impl->coanalytic = si->coanalytic && ui->coanalytic;
  if (si->evalf && ui->evalf) {
    auto e1 = si->evalf, e2 = ui->evalf;
    impl->evalf = [e1, e2](double th) { return e1(th) * e2(th); };
  }
  impl->name = "(" + fi->name + " * " + gi->name + ")";
  return SymbolBuilder::wrap(impl);
}

// --------------------------------------------------------- riesz / kernel

ProjectionResult riesz_project(const Symbol& f) {
  const auto fi = f.is_finite_band();
  if (fi) {
    double drop2 = 0.0;
    std::map<long, cplx> keep;
    for (long n = f.band_lo(); n <= f.band_hi(); ++n) {
      cplx c = f.coeff(n);
      if (n < 0)
        drop2 += std::norm(c);
      else if (c != cplx(0.0, 0.0))
        keep[n] = c;
    }
    Symbol out = Symbol::trig_poly(keep);
    return {out, std::sqrt(drop2)};
  }
  if (f.is_analytic()) return {f, 0.0};
  // generator symbol: zero out the negative side; discarded mass from the
  // envelope tail plus explicitly summed small degrees
  Symbol fcopy = f;
  auto impl = std::make_shared<Symbol::Impl>();
  impl->gen = [fcopy](long n) { return n < 0 ? cplx(0.0, 0.0) : fcopy.coeff(n); };
  impl->env = f.impl_->env;
  impl->env_from = f.impl_->env_from;
  impl->analytic = true;
  impl->defect = f.impl_->defect;
  impl->jumps = f.impl_->jumps;
  // ||P f||_inf <= l1 of the kept side when certifiable, else unknown
  double l1pos = f.side_l1_bound(false);
  impl->sup_bound = l1pos < kInf ? l1pos + std::abs(f.coeff(0)) : kInf;
  impl->name = "riesz(" + f.impl_->name + ")";
  double drop2 = 0.0;
  for (long n = 1; n < f.envelope_from(); ++n) drop2 += std::norm(f.coeff(-n));
  double tail = f.envelope().tail_l2(f.envelope_from());
  double discarded = std::sqrt(drop2) + tail;
  return {SymbolBuilder::wrap(impl), discarded};
}

Kernel kernel(DiskPoint z, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("kernel: need 0 < eps < 1");
  const double r = z.r;
  long N = 1;
  if (r > 0.0) {
    N = static_cast<long>(std::ceil(std::log(eps) / std::log(r)));
    N = std::max<long>(N, 1);
    const long cap = 1L << 22;
    if (N > cap)
      throw std::invalid_argument("kernel: truncation length overflow (|z| too close to 1 for eps)");
  }
  Kernel K;
  K.N = N;
  const cplx zb = std::conj(z.value());
  const double scale = std::sqrt(1.0 - r * r);
  Vec v(N);
  cplx pw(1.0, 0.0);
  for (long n = 0; n < N; ++n) {
    v[n] = scale * pw;
    pw *= zb;
  }
  K.coeffs = CoeffVector(0, std::move(v));
  K.tail = r == 0.0 ? 0.0 : std::pow(r, static_cast<double>(N));
  return K;
}

}  // namespace hardylab
