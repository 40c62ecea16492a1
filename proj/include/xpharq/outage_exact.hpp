#pragma once

// Exact outage for one and two XP-HARQ rounds.
//
// The two-round outage is the sum of closed-form exponential terms minus the
// integral
//
//   phi(R1, R2) = e^{1/g1 + 1/g2} / g2 * int_{2^R2}^{2^{R1+R2}}
//                     exp(-2^{R1+R2} / (z g1) - z / g2) dz
//
// (g_k the linear average SNRs). phi is evaluated by adaptive quadrature by
// default; phi_foxh evaluates the same quantity as a difference of two
// incomplete H^{1,1}_{1,1} Mellin-Barnes contour integrals and serves as an
// independent cross-check.

#include "xpharq/harq_core.hpp"
#include "xpharq/quadrature.hpp"

namespace xpharq {

/// Single-round outage 1 - exp(-(2^R1 - 1) / snr_bar).
double outage_k1(double rate, double snr_bar);

IntegrationResult phi_quadrature(double r1, double r2, double snr_bar1,
                                 double snr_bar2, double tol = 1e-12);

/// Two-round XP-HARQ outage. Small excursions outside [0,1] (within tol)
/// are clamped; larger ones raise InternalConsistencyError.
OutageEstimate outage_k2_exact(const RateSchedule& rates,
                               const PowerProfile& powers, double tol = 1e-10);

/// Contour setup for the incomplete H^{1,1}_{1,1} evaluation.
struct FoxHParams11 {
  double contour_c = 0.5;
  double contour_halfspan = 60.0;
  int nodes = 64;
  /// Successive node doublings must agree to this relative tolerance.
  double refine_tol = 1e-8;
};

void validate(const FoxHParams11& params);

/// (1/2 pi i) int_{c-i inf}^{c+i inf} Gamma(s) Gamma(s+1, b) z^{-s} ds on the
/// truncated line Re s = c. With b = 0 this is 2 sqrt(z) K_1(2 sqrt(z)).
double incomplete_h11(double z, double b, const FoxHParams11& params = {});

/// phi through the incomplete Fox-H representation.
double phi_foxh(double r1, double r2, double snr_bar1, double snr_bar2,
                const FoxHParams11& params = {});

/// Two-round outage assembled with phi_foxh in place of phi_quadrature.
OutageEstimate outage_k2_foxh(const RateSchedule& rates,
                              const PowerProfile& powers,
                              const FoxHParams11& params = {});

}  // namespace xpharq
