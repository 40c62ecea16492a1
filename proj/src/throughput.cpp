#include "xpharq/throughput.hpp"

#include <sstream>

#include "xpharq/errors.hpp"
#include "xpharq/outage_bounds.hpp"
#include "xpharq/outage_exact.hpp"
#include "xpharq/quadrature.hpp"

namespace xpharq {

double throughput_analytical(Scheme scheme, const RateSchedule& rates,
                             std::span<const double> outage_chain) {
  const std::size_t K = rates.rounds();
  if (outage_chain.size() != K)
    throw ContractError("throughput_analytical: chain length must equal K");
  double previous = 1.0;
  for (double p : outage_chain) {
    if (!(p >= 0.0 && p <= 1.0))
      throw ContractError("throughput_analytical: chain values must lie in [0,1]");
    // Relative slack absorbs roundoff between different evaluation paths.
    if (p > previous * (1.0 + 1e-9)) {
      std::ostringstream os;
      os << "throughput_analytical: outage chain increases (" << previous << " -> "
         << p << ")";
      throw ContractError(os.str());
    }
    previous = p;
  }

  double slots = 1.0;  // P_0
  for (std::size_t k = 0; k + 1 < K; ++k) slots += outage_chain[k];

  if (scheme == Scheme::inr)
    return rates.rate(1) * (1.0 - outage_chain[K - 1]) / slots;

  double reward = 0.0;
  previous = 1.0;
  for (std::size_t k = 0; k < K; ++k) {
    reward += rates.cumulative_rates()[k] * (previous - outage_chain[k]);
    previous = outage_chain[k];
  }
  return reward / slots;
}

std::vector<double> xp_outage_chain(const RateSchedule& rates,
                                    const PowerProfile& powers) {
  require_same_rounds(rates, powers);
  if (rates.rounds() > kOracleMaxRounds)
    throw UnsupportedError("xp_outage_chain: K <= 4 only; use Monte Carlo beyond");
  std::vector<double> chain;
  for (std::size_t k = 1; k <= rates.rounds(); ++k) {
    if (k == 1)
      chain.push_back(outage_k1(rates.rate(1), powers.snr_bar(1)));
    else if (k == 2)
      chain.push_back(outage_k2_exact(rates.prefix(2), powers.prefix(2)).value);
    else
      chain.push_back(xp_outage_quadrature(rates.prefix(k), powers.prefix(k)).value);
  }
  return chain;
}

std::vector<double> inr_outage_chain(const RateSchedule& rates,
                                     const PowerProfile& powers) {
  require_same_rounds(rates, powers);
  std::vector<double> chain;
  for (std::size_t k = 1; k <= rates.rounds(); ++k)
    chain.push_back(ir_outage_quadrature(powers.prefix(k), rates.rate(1)).value);
  return chain;
}

}  // namespace xpharq
