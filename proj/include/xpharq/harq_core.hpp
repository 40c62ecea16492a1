#pragma once

// Domain types and per-realization protocol semantics shared by every
// outage/throughput module.
//
// Conventions:
//   * rates are in bits per channel use, indexed 1..K in prose, 0..K-1 in code
//   * SNRs are linear (never dB) inside the library
//   * outage after round k is the strict event I_k^sum < R_k^sum, so equality
//     counts as a successful decode

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace xpharq {

/// Per-round incremental rates R_1..R_K and their prefix sums.
class RateSchedule {
 public:
  explicit RateSchedule(std::vector<double> rates);
  RateSchedule(std::initializer_list<double> rates)
      : RateSchedule(std::vector<double>(rates)) {}

  std::size_t rounds() const noexcept { return rates_.size(); }
  /// Incremental rate of round k (1-based).
  double rate(std::size_t k) const;
  /// R_k^sum, the accumulated rate after round k (1-based).
  double cumulative(std::size_t k) const;
  double total() const noexcept { return cumulative_.back(); }

  std::span<const double> rates() const noexcept { return rates_; }
  std::span<const double> cumulative_rates() const noexcept {
    return cumulative_;
  }

  /// Schedule made of the first k rounds.
  RateSchedule prefix(std::size_t k) const;

  friend bool operator==(const RateSchedule&, const RateSchedule&) = default;

 private:
  std::vector<double> rates_;
  std::vector<double> cumulative_;
};

/// Average received SNR per round, linear scale.
class PowerProfile {
 public:
  explicit PowerProfile(std::vector<double> snr_bars);
  PowerProfile(std::initializer_list<double> snr_bars)
      : PowerProfile(std::vector<double>(snr_bars)) {}

  /// The same average SNR in each of `rounds` rounds.
  static PowerProfile uniform(std::size_t rounds, double snr_bar);
  /// Per-round SNRs given in dB.
  static PowerProfile from_db(std::span<const double> snr_db);

  std::size_t rounds() const noexcept { return snr_bars_.size(); }
  double snr_bar(std::size_t k) const;
  std::span<const double> snr_bars() const noexcept { return snr_bars_; }

  PowerProfile prefix(std::size_t k) const;

  friend bool operator==(const PowerProfile&, const PowerProfile&) = default;

 private:
  std::vector<double> snr_bars_;
};

/// One fading realization: instantaneous SNRs gamma_1..gamma_K.
class SnrRealization {
 public:
  explicit SnrRealization(std::vector<double> snrs);
  SnrRealization(std::initializer_list<double> snrs)
      : SnrRealization(std::vector<double>(snrs)) {}

  std::size_t rounds() const noexcept { return snrs_.size(); }
  std::span<const double> snrs() const noexcept { return snrs_; }

 private:
  std::vector<double> snrs_;
};

double db_to_linear(double db);
double linear_to_db(double linear);

/// I = log2(1 + snr).
double mutual_information(double snr);

/// Smallest round k (1-based) where the accumulated mutual information
/// reaches the accumulated rate; nullopt when every round is in outage.
std::optional<std::size_t> xp_success_round(const RateSchedule& rates,
                                            std::span<const double> snrs);
std::optional<std::size_t> xp_success_round(const RateSchedule& rates,
                                            const SnrRealization& real);

/// HARQ-IR outage: total mutual information after K rounds below R_K^sum.
bool ir_outage_event(const RateSchedule& rates, std::span<const double> snrs);
bool ir_outage_event(const RateSchedule& rates, const SnrRealization& real);

/// First round at which a HARQ-IR decoder with fixed target rate succeeds.
std::optional<std::size_t> ir_success_round(double target_rate,
                                            std::span<const double> snrs);

void require_same_rounds(const RateSchedule& rates, const PowerProfile& powers);

enum class Method {
  closed_form,
  exact_quadrature,
  fox_h,
  asymptotic,
  lower_bound,
  upper_quadrature,
  monte_carlo,
  oracle_quadrature,
};

std::string_view to_string(Method m);

/// A probability with the method that produced it and its uncertainty: an
/// absolute error bound for deterministic paths, a 95% half-width for MC.
struct OutageEstimate {
  double value = 0.0;
  Method method = Method::closed_form;
  double uncertainty = 0.0;
};

/// Clamp a probability that overshot [0,1] by at most `tol`; anything
/// further out is an InternalConsistencyError.
double clamp_probability(double p, double tol);

}  // namespace xpharq
