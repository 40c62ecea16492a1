#include "xpharq/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "xpharq/errors.hpp"

namespace xpharq {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo,
                    std::uint32_t& hi) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(p);
  hi = static_cast<std::uint32_t>(p >> 32);
}

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter ctr, Key key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t lo0, hi0, lo1, hi1;
    mulhilo(kMul0, ctr[0], lo0, hi0);
    mulhilo(kMul1, ctr[2], lo1, hi1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

TrialStream::TrialStream(std::uint64_t seed, std::uint64_t trial)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      ctr_{static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32),
           0, 0} {}

double TrialStream::next_uniform() {
  if (used_ >= 4) {
    block_ = Philox4x32::generate(ctr_, key_);
    ++ctr_[2];
    used_ = 0;
  }
  const std::uint64_t bits =
      (static_cast<std::uint64_t>(block_[used_]) << 32) | block_[used_ + 1];
  used_ += 2;
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

double sample_snr(double snr_bar, TrialStream& stream) {
  return -snr_bar * std::log1p(-stream.next_uniform());
}

std::string_view to_string(Scheme s) { return s == Scheme::xp ? "xp" : "inr"; }

Scheme parse_scheme(std::string_view text) {
  if (text == "xp") return Scheme::xp;
  if (text == "inr" || text == "ir") return Scheme::inr;
  throw ContractError("unknown scheme '" + std::string(text) + "' (expected xp or inr)");
}

SimSummary& SimSummary::operator+=(const SimSummary& other) {
  if (success_at_round.size() < other.success_at_round.size())
    success_at_round.resize(other.success_at_round.size(), 0);
  trials += other.trials;
  outage_count += other.outage_count;
  for (std::size_t k = 0; k < other.success_at_round.size(); ++k)
    success_at_round[k] += other.success_at_round[k];
  delivered_rate_total += other.delivered_rate_total;
  slots_total += other.slots_total;
  return *this;
}

namespace {

// Counts only; rewards are attached after the merge so the floating-point
// total does not depend on how trials were split.
SimSummary simulate_range(const SimConfig& cfg, double inr_target,
                          std::uint64_t begin, std::uint64_t end) {
  const std::size_t K = cfg.rates.rounds();
  SimSummary s;
  s.success_at_round.assign(K, 0);
  std::vector<double> snrs(K);
  for (std::uint64_t trial = begin; trial < end; ++trial) {
    TrialStream stream(cfg.seed, trial);
    // All K draws are taken even if decoding stops early, so XP and INR runs
    // with the same seed see identical channels.
    for (std::size_t k = 0; k < K; ++k)
      snrs[k] = sample_snr(cfg.powers.snr_bars()[k], stream);
    const std::optional<std::size_t> round =
        cfg.scheme == Scheme::xp ? xp_success_round(cfg.rates, snrs)
                                 : ir_success_round(inr_target, snrs);
    if (round) {
      ++s.success_at_round[*round - 1];
      s.slots_total += *round;
    } else {
      ++s.outage_count;
      s.slots_total += K;
    }
  }
  s.trials = end - begin;
  return s;
}

double inr_rate(const RateSchedule& rates, InrTarget target) {
  return target == InrTarget::total_rate ? rates.total() : rates.rate(1);
}

// Delivered rate of a cycle that succeeds at round k (1-based).
double reward(const SimConfig& cfg, InrTarget target, std::size_t k) {
  return cfg.scheme == Scheme::xp ? cfg.rates.cumulative(k)
                                  : inr_rate(cfg.rates, target);
}

}  // namespace

SimSummary run_simulation(const SimConfig& cfg, InrTarget inr_target) {
  require_same_rounds(cfg.rates, cfg.powers);
  if (cfg.trials < 1) throw ContractError("SimConfig: trials must be >= 1");
  if (cfg.workers < 1) throw ContractError("SimConfig: workers must be >= 1");

  const double target = inr_rate(cfg.rates, inr_target);
  const std::uint64_t workers =
      std::min<std::uint64_t>(cfg.workers, cfg.trials);
  std::vector<SimSummary> parts(workers);
  std::vector<std::thread> pool;
  const std::uint64_t chunk = cfg.trials / workers;
  const std::uint64_t extra = cfg.trials % workers;
  std::uint64_t begin = 0;
  for (std::uint64_t w = 0; w < workers; ++w) {
    const std::uint64_t end = begin + chunk + (w < extra ? 1 : 0);
    if (workers == 1) {
      parts[w] = simulate_range(cfg, target, begin, end);
    } else {
      pool.emplace_back([&, w, begin, end] {
        parts[w] = simulate_range(cfg, target, begin, end);
      });
    }
    begin = end;
  }
  for (auto& t : pool) t.join();

  SimSummary total;
  total.success_at_round.assign(cfg.rates.rounds(), 0);
  for (const auto& p : parts) total += p;
  total.delivered_rate_total = 0.0;
  for (std::size_t k = 1; k <= cfg.rates.rounds(); ++k)
    total.delivered_rate_total +=
        static_cast<double>(total.success_at_round[k - 1]) * reward(cfg, inr_target, k);
  return total;
}

OutageEstimate estimate_outage(const SimConfig& cfg) {
  const SimSummary s = run_simulation(cfg, InrTarget::total_rate);
  const double n = static_cast<double>(s.trials);
  const double p = static_cast<double>(s.outage_count) / n;
  return {p, Method::monte_carlo, 1.96 * std::sqrt(p * (1.0 - p) / n)};
}

ThroughputEstimate estimate_throughput(const SimConfig& cfg) {
  ThroughputEstimate out;
  out.summary = run_simulation(cfg, InrTarget::first_rate);
  const SimSummary& s = out.summary;
  const double n = static_cast<double>(s.trials);
  const double eta = s.delivered_rate_total / static_cast<double>(s.slots_total);
  out.value = eta;

  // Var of the per-cycle residual X - eta Y, grouped by cycle outcome.
  const std::size_t K = cfg.rates.rounds();
  double residual_sq = static_cast<double>(s.outage_count) *
                       std::pow(eta * static_cast<double>(K), 2);
  for (std::size_t k = 1; k <= K; ++k) {
    const double x = reward(cfg, InrTarget::first_rate, k);
    const double r = x - eta * static_cast<double>(k);
    residual_sq += static_cast<double>(s.success_at_round[k - 1]) * r * r;
  }
  const double mean_slots = static_cast<double>(s.slots_total) / n;
  if (s.trials > 1) {
    const double var = residual_sq / (n - 1.0);
    out.ci_half_width = 1.96 * std::sqrt(var / n) / mean_slots;
  }
  return out;
}

}  // namespace xpharq
