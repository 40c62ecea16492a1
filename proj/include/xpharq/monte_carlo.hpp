#pragma once

// Seeded Monte Carlo simulation of XP-HARQ and HARQ-IR (INR) cycles.
//
// Every trial draws its SNRs from its own Philox4x32-10 substream keyed by
// (seed, trial index), so any partition of the trial range over any number
// of workers produces the same counts. Summaries merge by addition.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "xpharq/harq_core.hpp"

namespace xpharq {

/// Philox4x32 with 10 rounds (Salmon et al., SC'11).
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter ctr, Key key);
};

/// Uniform stream for one trial: counter = (trial lo, trial hi, block, 0).
class TrialStream {
 public:
  TrialStream(std::uint64_t seed, std::uint64_t trial);

  /// Uniform on [0, 1) with 53 random bits.
  double next_uniform();

 private:
  Philox4x32::Key key_;
  Philox4x32::Counter ctr_;
  Philox4x32::Counter block_{};
  int used_ = 4;
};

/// Exponential SNR with mean snr_bar (Rayleigh power gain times snr_bar).
double sample_snr(double snr_bar, TrialStream& stream);

enum class Scheme { xp, inr };

std::string_view to_string(Scheme s);
Scheme parse_scheme(std::string_view text);

struct SimConfig {
  Scheme scheme;
  RateSchedule rates;
  PowerProfile powers;
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

struct SimSummary {
  std::uint64_t trials = 0;
  std::uint64_t outage_count = 0;
  std::vector<std::uint64_t> success_at_round;  // index k-1 for round k
  double delivered_rate_total = 0.0;
  std::uint64_t slots_total = 0;

  SimSummary& operator+=(const SimSummary& other);
};

/// Target rate of an INR decoder. HARQ-IR as the XP upper bound decodes at
/// the XP total rate R_K^sum; HARQ-IR as a throughput competitor carries a
/// single message of rate R_1.
enum class InrTarget { total_rate, first_rate };

/// Simulate cfg.trials cycles. XP cycles deliver R_k^sum when they succeed
/// at round k; INR cycles deliver the INR target rate.
SimSummary run_simulation(const SimConfig& cfg,
                          InrTarget inr_target = InrTarget::total_rate);

/// Outage fraction with a 95% Wald half-width. For INR the event is
/// sum_k I_k < R_K^sum.
OutageEstimate estimate_outage(const SimConfig& cfg);

struct ThroughputEstimate {
  double value = 0.0;
  double ci_half_width = 0.0;  // 95%, delta method on the reward ratio
  SimSummary summary;
};

/// Renewal-reward throughput: delivered rate over slots used.
ThroughputEstimate estimate_throughput(const SimConfig& cfg);

/// Expected number of failures is below this: estimates are unreliable.
inline constexpr double kRareEventFailures = 100.0;

}  // namespace xpharq
