// core/include/hardylab/identities.hpp
//
// Finite-section verification of the operator identities the diagnostics
// rest on. Each identity is evaluated on an N x N window; truncation spill
// from symbol bandwidth is excluded by restricting the residual to its
// certified columns [0, N - margin), so a correct identity lands at
// floating-point roundoff and a wrong one shows an O(1) residual.
//
// Two identities ship in competing left/right-coefficient readings
// (commute_via_f vs commute_via_g, dilation_expansion_f_form vs _g_form);
// adjudicate() runs both and reports which reading wins numerically.

#pragma once

#include "hardylab/operators.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hardylab {

enum class IdentityId {
  toeplitz_product,          // T_{fg} = T_f T_g + H_{f~} H_g       (margin d_f + d_g)
  hankel_product,            // H_{fg} = H_f T_g + T_{f~} H_g       (margin 0)
  commute_via_f,             // H_f T_g = T_{f~} H_g   for analytic g  (wrong reading)
  commute_via_g,             // H_f T_g = T_{g~} H_f   for analytic g  (correct)
  mobius_defect,             // T_phi T_{conj phi} = I - k_z (x) k_z
  mobius_flip_defect,        // T_{phi~}^H T_{phi~} = I - k_zbar (x) k_zbar
  mobius_hankel_rank_one,    // H_{conj phi} = -k_zbar (x) k_z   (entrywise)
  hankel_adjoint,            // H_f^H = H_{f*}                   (entrywise)
  hankel_flip,               // hankel window = flip of anti-analytic part
  dilation_expansion_f_form, // Mobius-conjugated H_f T_g, correction built from f (wrong reading)
  dilation_expansion_g_form, // Mobius-conjugated H_f T_g, correction built from g (correct)
  dilation_exchange,         // (H_f T_g) T_phi = T_{phi~} (H_f T_g) - rank-one
};

const char* identity_name(IdentityId id);

struct ResidualReport {
  IdentityId id;
  long N = 0;
  long margin = 0;        // excluded columns on the right edge of the window
  double residual = 0.0;  // operator norm over the certified columns
  double tol = 0.0;       // certification threshold used for pass
  bool pass = false;
  std::string note;       // free-text: what was compared
};

// Evaluate one identity on an N x N window.
//  * product/commutation identities use (f, g); g must be analytic for the
//    commute_via_* pair.
//  * mobius/dilation identities additionally use the disk point z
//    (f, g ignored by the pure mobius ones).
ResidualReport identity_residual(IdentityId id, const Symbol& f, const Symbol& g,
                                 DiskPoint z, long N, double tol = 1e-12);

struct Adjudication {
  IdentityId winner;
  IdentityId loser;
  double winner_residual = 0.0;
  double loser_residual = 0.0;
};

// Run both readings of the commutation identity (g must be analytic).
Adjudication adjudicate_commutation(const Symbol& f, const Symbol& g_analytic, long N);
// Run both readings of the dilation expansion.
Adjudication adjudicate_dilation_expansion(const Symbol& f, const Symbol& g,
                                           DiskPoint z, long N);

struct SuiteReport {
  long trials = 0;
  long N = 0;
  std::uint64_t seed = 0;
  // worst certified residual seen per identity (keyed by identity_name)
  std::vector<std::pair<std::string, double>> worst;
  // adjudications: smallest loser residual seen (should stay O(1))
  double commute_loser_min = 0.0;
  double dilation_loser_min = 0.0;
  bool all_pass = false;
  double tol = 0.0;
};

// Randomized identity sweep: trig-poly instances of degree <= deg, Mobius
// points on |z| = 0.6. Residuals are certified-column operator norms.
SuiteReport identity_suite(std::uint64_t seed, long trials, long N, long deg,
                           double tol = 1e-12);

std::string format_suite_report(const SuiteReport& r);

}  // namespace hardylab
