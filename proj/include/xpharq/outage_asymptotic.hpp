#pragma once

// High-SNR behaviour of XP-HARQ outage.
//
// For K rounds the dominant term is
//
//   P_out,K ~ (prod_k 1/g_k) * hbar_{K,1}(1),
//
// where hbar_{K,K}(x) = 2^{R_K^sum} - x and
// hbar_{K,k}(x) = int_x^{2^{R_k^sum}} t^{-1} hbar_{K,k+1}(t) dt. Each hbar_{K,k}
// is (-1)^{K-k+1} x plus a polynomial of degree K-k in ln x; HbarTable holds
// those polynomial coefficients, built by a backward recursion from k = K.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "xpharq/harq_core.hpp"

namespace xpharq {

/// Leading-order phi for large average SNRs.
double phi_asymptotic(double r1, double r2, double snr_bar1, double snr_bar2);

/// (2^{R1+R2} R1 ln2 - (2^{R1} - 1)) / (g1 g2).
double outage_k2_asymptotic(const RateSchedule& rates, const PowerProfile& powers);

class HbarTable {
 public:
  std::size_t rounds() const noexcept { return coeffs_.size(); }
  /// c_{k,i}: k is 1-based, i in [0, K-k].
  double coeff(std::size_t k, std::size_t i) const;
  /// All coefficients of round k, lowest power of ln x first.
  std::span<const double> coeffs(std::size_t k) const;
  const RateSchedule& rates() const noexcept { return rates_; }

 private:
  friend HbarTable build_hbar_table(const RateSchedule& rates);
  HbarTable(RateSchedule rates, std::vector<std::vector<double>> coeffs)
      : rates_(std::move(rates)), coeffs_(std::move(coeffs)) {}

  RateSchedule rates_;
  std::vector<std::vector<double>> coeffs_;
};

/// Requires K >= 2.
HbarTable build_hbar_table(const RateSchedule& rates);

/// hbar_{K,k}(x), Horner evaluation in ln x. k is 1-based, x >= 1.
double hbar_eval(const HbarTable& table, std::size_t k, double x);

/// Dominant high-SNR outage term for general K >= 2.
double outage_asymptotic_general(const RateSchedule& rates,
                                 const PowerProfile& powers);

struct SlopeFit {
  std::vector<std::pair<double, double>> points;  // (snr_bar in dB, outage)
  double slope = 0.0;      // d log10(P) / d log10(snr_bar)
  double intercept = 0.0;  // log10(P) at snr_bar = 1

  double diversity_order() const noexcept { return -slope; }
};

/// Least-squares line through (log10 snr_bar, log10 outage). Input SNRs are
/// linear and must be strictly increasing; at least three points.
SlopeFit diversity_order_fit(std::span<const std::pair<double, double>> points);

}  // namespace xpharq
