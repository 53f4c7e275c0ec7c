// core/src/identities.cpp

#include "hardylab/identities.hpp"

#include "hardylab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace hardylab {

namespace {

constexpr double kLoserFloor = 1e-2;  // wrong readings must separate by this much

long certified_cols(long N, long margin, const char* what) {
  const long c = N - margin;
  if (c <= 0)
    throw std::invalid_argument(std::string(what) +
                                ": window too small for certified margin (N=" +
                                std::to_string(N) + ", margin=" + std::to_string(margin) + ")");
  return c;
}

double restricted_norm(const Mat& R, long cols) { return opnorm(R.leftCols(cols)); }

ResidualReport make_report(IdentityId id, long N, long margin, double res, double tol,
                           std::string note) {
  ResidualReport r;
  r.id = id;
  r.N = N;
  r.margin = margin;
  r.residual = res;
  r.tol = tol;
  r.pass = res <= tol;
  r.note = std::move(note);
  return r;
}

}  // namespace

const char* identity_name(IdentityId id) {
  switch (id) {
    case IdentityId::toeplitz_product: return "toeplitz_product";
    case IdentityId::hankel_product: return "hankel_product";
    case IdentityId::commute_via_f: return "commute_via_f";
    case IdentityId::commute_via_g: return "commute_via_g";
    case IdentityId::mobius_defect: return "mobius_defect";
    case IdentityId::mobius_flip_defect: return "mobius_flip_defect";
    case IdentityId::mobius_hankel_rank_one: return "mobius_hankel_rank_one";
    case IdentityId::hankel_adjoint: return "hankel_adjoint";
    case IdentityId::hankel_flip: return "hankel_flip";
    case IdentityId::dilation_expansion_f_form: return "dilation_expansion_f_form";
    case IdentityId::dilation_expansion_g_form: return "dilation_expansion_g_form";
    case IdentityId::dilation_exchange: return "dilation_exchange";
  }
  return "?";
}

ResidualReport identity_residual(IdentityId id, const Symbol& f, const Symbol& g,
                                 DiskPoint z, long N, double tol) {
  if (N < 4) throw std::invalid_argument("identity_residual: need N >= 4");
  const long df = f.is_zero() ? 0 : f.effective_degree();
  const long dg = g.is_zero() ? 0 : g.effective_degree();

  switch (id) {
    case IdentityId::toeplitz_product: {
      const long m = df + dg;
      const long cols = certified_cols(N, m, "toeplitz_product");
      Symbol fg = multiply(f, g);
      Mat R = toeplitz_window(fg, N) -
              (toeplitz_window(f, N) * toeplitz_window(g, N) +
               hankel_window(f.tilde(), N) * hankel_window(g, N));
      return make_report(id, N, m, restricted_norm(R, cols), tol,
                         "product window vs Toeplitz-product splitting, certified columns");
    }
    case IdentityId::hankel_product: {
      Symbol fg = multiply(f, g);
      Mat R = hankel_window(fg, N) -
              (hankel_window(f, N) * toeplitz_window(g, N) +
               toeplitz_window(f.tilde(), N) * hankel_window(g, N));
      return make_report(id, N, 0, opnorm(R), tol, "Hankel window of a product vs its splitting");
    }
    case IdentityId::commute_via_f: {
      if (!g.is_analytic())
        throw std::invalid_argument("commute_via_f: g must be analytic");
      Mat R = hankel_window(f, N) * toeplitz_window(g, N) -
              toeplitz_window(f.tilde(), N) * hankel_window(g, N);
      return make_report(id, N, 0, opnorm(R), tol,
                         "commutation reading with left-symbol coefficients (expected to fail)");
    }
    case IdentityId::commute_via_g: {
      if (!g.is_analytic())
        throw std::invalid_argument("commute_via_g: g must be analytic");
      Mat R = hankel_window(f, N) * toeplitz_window(g, N) -
              toeplitz_window(g.tilde(), N) * hankel_window(f, N);
      return make_report(id, N, 0, opnorm(R), tol,
                         "Hankel/Toeplitz commutation for analytic right symbol");
    }
    case IdentityId::mobius_defect: {
      Symbol phi = Symbol::mobius(z);
      Vec kz = kernel_window(z, N);
      Mat R = toeplitz_window(phi, N) * toeplitz_window(phi.conj(), N) -
              (Mat::Identity(N, N) - rank_one(kz, kz));
      return make_report(id, N, 0, opnorm(R), tol,
                         "Mobius Toeplitz product vs identity minus kernel projection");
    }
    case IdentityId::mobius_flip_defect: {
      Symbol phit = Symbol::mobius(z).tilde();
      Vec kzb = kernel_window(z.conj(), N);
      Mat T = toeplitz_window(phit, N);
      Mat R = T.adjoint() * T - (Mat::Identity(N, N) - rank_one(kzb, kzb));
      return make_report(id, N, 0, opnorm(R), tol,
                         "flipped-Mobius normal product vs identity minus conjugate-kernel projection");
    }
    case IdentityId::mobius_hankel_rank_one: {
      Symbol phib = Symbol::mobius(z).conj();
      Vec kz = kernel_window(z, N);
      Vec kzb = kernel_window(z.conj(), N);
      Mat R = hankel_window(phib, N) + rank_one(kzb, kz);
      return make_report(id, N, 0, opnorm(R), tol,
                         "Hankel window of conjugated Mobius symbol vs explicit rank-one");
    }
    case IdentityId::hankel_adjoint: {
      Mat R = hankel_window(f, N).adjoint() - hankel_window(f.star(), N);
      return make_report(id, N, 0, opnorm(R), tol, "window adjoint vs starred-symbol window");
    }
    case IdentityId::hankel_flip: {
      // column k of the Hankel window must equal the flipped anti-analytic
      // part of f * w^k; built through the symbol algebra (multiply +
      // riesz_project) rather than from the entry formula, so it actually
      // exercises the plumbing.
      const long cols = std::min<long>(N, 24);
      Mat A = hankel_window(f, N, cols);
      Mat B(N, cols);
      for (long k = 0; k < cols; ++k) {
        Symbol shifted = multiply(f, Symbol::trig_poly(k, {cplx(1.0, 0.0)}));
        ProjectionResult pr = riesz_project(shifted);
        Symbol anti = add(shifted, scale(cplx(-1.0, 0.0), pr.analytic));
        CoeffVector w = anti.window(-N, 0);
        for (long m = 0; m < N; ++m) B(m, k) = w.at(-m - 1);
      }
      return make_report(id, N, 0, opnorm(Mat(A - B)), tol,
                         "Hankel columns vs flipped anti-analytic parts of shifted symbols");
    }
    case IdentityId::dilation_expansion_f_form:
    case IdentityId::dilation_expansion_g_form: {
      const long m = dg;
      const long cols = certified_cols(N, m, "dilation_expansion");
      Symbol phi = Symbol::mobius(z);
      Mat Hf = hankel_window(f, N), Tg = toeplitz_window(g, N);
      Mat K = Hf * Tg;
      Mat Tphi = toeplitz_window(phi, N);
      Mat Tphit = toeplitz_window(phi.tilde(), N);
      Mat Tphib = toeplitz_window(phi.conj(), N);
      Vec kz = kernel_window(z, N);
      Vec kzb = kernel_window(z.conj(), N);
      Mat lhs = Tphit * K * Tphib;
      Mat rhs = K - rank_one(K * kz, kz);
      if (id == IdentityId::dilation_expansion_g_form) {
        Mat Hgs = hankel_window(g.star(), N);
        rhs += rank_one(Hf * kz, Tphi * (Hgs * kzb));
      } else {
        Mat Hfs = hankel_window(f.star(), N);
        Mat Hg = hankel_window(g, N);
        rhs += rank_one(Tphi * (Hfs * kzb), Hg * kz);
      }
      const char* note = id == IdentityId::dilation_expansion_g_form
                             ? "Mobius-conjugated H_f T_g vs rank-one-corrected expansion (right-symbol correction)"
                             : "Mobius-conjugated H_f T_g, correction misattributed to the left symbol (expected to fail)";
      return make_report(id, N, m, restricted_norm(Mat(lhs - rhs), cols), tol, note);
    }
    case IdentityId::dilation_exchange: {
      Symbol phi = Symbol::mobius(z);
      Mat K = hankel_window(f, N) * toeplitz_window(g, N);
      Vec kz = kernel_window(z, N);
      Vec kzb = kernel_window(z.conj(), N);
      Mat Hgs = hankel_window(g.star(), N);
      Mat R = K * toeplitz_window(phi, N) -
              (toeplitz_window(phi.tilde(), N) * K -
               rank_one(hankel_window(f, N) * kz, Hgs * kzb));
      return make_report(id, N, 0, opnorm(R), tol,
                         "Mobius exchange across H_f T_g with explicit rank-one correction");
    }
  }
  throw std::logic_error("identity_residual: unknown identity");
}

Adjudication adjudicate_commutation(const Symbol& f, const Symbol& g_analytic, long N) {
  Adjudication a;
  a.winner = IdentityId::commute_via_g;
  a.loser = IdentityId::commute_via_f;
  a.winner_residual = identity_residual(a.winner, f, g_analytic, DiskPoint(), N).residual;
  a.loser_residual = identity_residual(a.loser, f, g_analytic, DiskPoint(), N).residual;
  return a;
}

Adjudication adjudicate_dilation_expansion(const Symbol& f, const Symbol& g,
                                           DiskPoint z, long N) {
  Adjudication a;
  a.winner = IdentityId::dilation_expansion_g_form;
  a.loser = IdentityId::dilation_expansion_f_form;
  a.winner_residual = identity_residual(a.winner, f, g, z, N).residual;
  a.loser_residual = identity_residual(a.loser, f, g, z, N).residual;
  return a;
}

namespace {

Symbol random_trig_poly(Rng& rng, long deg, bool analytic, const char* tag) {
  std::map<long, cplx> c;
  for (long n = analytic ? 0 : -deg; n <= deg; ++n) c[n] = rng.ucplx(-1.0, 1.0);
  Symbol s = Symbol::trig_poly(c);
  (void)tag;
  return s;
}

}  // namespace

SuiteReport identity_suite(std::uint64_t seed, long trials, long N, long deg, double tol) {
  SuiteReport rep;
  rep.trials = trials;
  rep.N = N;
  rep.seed = seed;
  rep.tol = tol;
  rep.commute_loser_min = std::numeric_limits<double>::infinity();
  rep.dilation_loser_min = std::numeric_limits<double>::infinity();

  const IdentityId tracked[] = {
      IdentityId::toeplitz_product,  IdentityId::hankel_product,
      IdentityId::commute_via_g,     IdentityId::mobius_defect,
      IdentityId::mobius_flip_defect, IdentityId::mobius_hankel_rank_one,
      IdentityId::hankel_adjoint,    IdentityId::hankel_flip,
      IdentityId::dilation_expansion_g_form, IdentityId::dilation_exchange,
  };
  std::map<std::string, double> worst;
  for (IdentityId id : tracked) worst[identity_name(id)] = 0.0;

  Rng rng(seed);
  bool winners_ok = true;
  for (long t = 0; t < trials; ++t) {
    Symbol f = random_trig_poly(rng, deg, false, "f");
    Symbol g = random_trig_poly(rng, deg, false, "g");
    Symbol ga = random_trig_poly(rng, deg, true, "ga");
    DiskPoint z(0.6, 2.0 * kPi * rng.u01());

    for (IdentityId id : tracked) {
      const Symbol& gg = (id == IdentityId::commute_via_g) ? ga : g;
      ResidualReport r = identity_residual(id, f, gg, z, N, tol);
      worst[identity_name(id)] = std::max(worst[identity_name(id)], r.residual);
      winners_ok = winners_ok && r.pass;
    }
    Adjudication ac = adjudicate_commutation(f, ga, N);
    Adjudication ad = adjudicate_dilation_expansion(f, g, z, N);
    rep.commute_loser_min = std::min(rep.commute_loser_min, ac.loser_residual);
    rep.dilation_loser_min = std::min(rep.dilation_loser_min, ad.loser_residual);
  }
  rep.worst.assign(worst.begin(), worst.end());
  rep.all_pass = winners_ok && rep.commute_loser_min >= kLoserFloor &&
                 rep.dilation_loser_min >= kLoserFloor;
  return rep;
}

std::string format_suite_report(const SuiteReport& r) {
  char buf[160];
  std::string out;
  std::snprintf(buf, sizeof(buf), "identity suite: %ld trials, N=%ld, seed=%llu, tol=%.1e\n",
                r.trials, r.N, static_cast<unsigned long long>(r.seed), r.tol);
  out += buf;
  for (const auto& [name, res] : r.worst) {
    std::snprintf(buf, sizeof(buf), "  %-28s worst residual %.3e  %s\n", name.c_str(), res,
                  res <= r.tol ? "ok" : "FAIL");
    out += buf;
  }
  std::snprintf(buf, sizeof(buf),
                "  adjudication: commutation loser min %.3e, dilation loser min %.3e (floor %.0e)\n",
                r.commute_loser_min, r.dilation_loser_min, kLoserFloor);
  out += buf;
  std::snprintf(buf, sizeof(buf), "  overall: %s\n", r.all_pass ? "all identities verified" : "FAILURES present");
  out += buf;
  return out;
}

}  // namespace hardylab
