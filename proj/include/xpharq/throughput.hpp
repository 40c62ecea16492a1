#pragma once

// Renewal-reward throughput from outage chains P_out,1..P_out,K (P_out,0 = 1).
//
//   XP:  eta = sum_k R_k^sum (P_{k-1} - P_k) / sum_{k=0}^{K-1} P_k
//   INR: eta = R_1 (1 - P_K) / sum_{k=0}^{K-1} P_k
//
// For INR the chain is Pr(I_k^sum < R_1): one message of rate R_1 is
// retransmitted with fresh redundancy.

#include <span>
#include <vector>

#include "xpharq/harq_core.hpp"
#include "xpharq/monte_carlo.hpp"

namespace xpharq {

double throughput_analytical(Scheme scheme, const RateSchedule& rates,
                             std::span<const double> outage_chain);

/// XP outage after each of rounds 1..K using the closed form (k = 1), the
/// exact two-round formula (k = 2) and nested quadrature (k = 3, 4).
std::vector<double> xp_outage_chain(const RateSchedule& rates,
                                    const PowerProfile& powers);

/// Pr(I_k^sum < R_1) for k = 1..K (K <= 4).
std::vector<double> inr_outage_chain(const RateSchedule& rates,
                                     const PowerProfile& powers);

}  // namespace xpharq
