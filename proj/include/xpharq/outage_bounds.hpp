#pragma once

// Outage bounds for general K:
//   prod_k Pr(I_k < R_k)  <=  P_out,K  <=  Pr(I_K^sum < R_K^sum).
// The upper bound is the HARQ-IR outage at the XP total rate.

#include <cstdint>

#include "xpharq/harq_core.hpp"

namespace xpharq {

double outage_lower(const RateSchedule& rates, const PowerProfile& powers);

/// Density of I = log2(1 + gamma) with gamma exponential of mean snr_bar.
double mutual_information_density(double t, double snr_bar);

/// Pr(sum_{k<=K} I_k < target_rate) by recursive convolution of the per-round
/// densities. K = powers.rounds() <= 4. The absolute error estimate is
/// returned as the uncertainty.
OutageEstimate ir_outage_quadrature(const PowerProfile& powers,
                                    double target_rate, double tol = 1e-9);

enum class UpperMethod { quadrature, monte_carlo };

struct UpperBoundBudget {
  double tol = 1e-9;                 // quadrature
  std::uint64_t trials = 1'000'000;  // Monte Carlo
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

OutageEstimate outage_upper_ir(const RateSchedule& rates,
                               const PowerProfile& powers,
                               UpperMethod method = UpperMethod::quadrature,
                               const UpperBoundBudget& budget = {});

/// (upper - lower) / upper.
double bound_gap(double lower, double upper);

}  // namespace xpharq
