#include "xpharq/harq_core.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "xpharq/errors.hpp"

namespace xpharq {

RateSchedule::RateSchedule(std::vector<double> rates) : rates_(std::move(rates)) {
  if (rates_.empty()) throw ContractError("rate schedule needs at least one round");
  cumulative_.reserve(rates_.size());
  double acc = 0.0;
  for (double r : rates_) {
    if (!(r > 0.0) || !std::isfinite(r)) {
      std::ostringstream os;
      os << "rates must be positive and finite, got " << r;
      throw DomainError(os.str());
    }
    acc += r;
    cumulative_.push_back(acc);
  }
}

double RateSchedule::rate(std::size_t k) const {
  if (k < 1 || k > rates_.size()) throw ContractError("round index out of range");
  return rates_[k - 1];
}

double RateSchedule::cumulative(std::size_t k) const {
  if (k < 1 || k > rates_.size()) throw ContractError("round index out of range");
  return cumulative_[k - 1];
}

RateSchedule RateSchedule::prefix(std::size_t k) const {
  if (k < 1 || k > rates_.size()) throw ContractError("prefix length out of range");
  return RateSchedule(std::vector<double>(rates_.begin(), rates_.begin() + k));
}

PowerProfile::PowerProfile(std::vector<double> snr_bars)
    : snr_bars_(std::move(snr_bars)) {
  if (snr_bars_.empty()) throw ContractError("power profile needs at least one round");
  for (double g : snr_bars_) {
    if (!(g > 0.0) || !std::isfinite(g)) {
      std::ostringstream os;
      os << "average SNR must be positive and finite, got " << g;
      throw DomainError(os.str());
    }
  }
}

PowerProfile PowerProfile::uniform(std::size_t rounds, double snr_bar) {
  return PowerProfile(std::vector<double>(rounds, snr_bar));
}

PowerProfile PowerProfile::from_db(std::span<const double> snr_db) {
  std::vector<double> lin;
  lin.reserve(snr_db.size());
  for (double db : snr_db) lin.push_back(db_to_linear(db));
  return PowerProfile(std::move(lin));
}

double PowerProfile::snr_bar(std::size_t k) const {
  if (k < 1 || k > snr_bars_.size()) throw ContractError("round index out of range");
  return snr_bars_[k - 1];
}

PowerProfile PowerProfile::prefix(std::size_t k) const {
  if (k < 1 || k > snr_bars_.size()) throw ContractError("prefix length out of range");
  return PowerProfile(std::vector<double>(snr_bars_.begin(), snr_bars_.begin() + k));
}

SnrRealization::SnrRealization(std::vector<double> snrs) : snrs_(std::move(snrs)) {
  for (double g : snrs_)
    if (!(g >= 0.0)) throw DomainError("instantaneous SNR must be nonnegative");
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

double mutual_information(double snr) {
  if (!(snr >= 0.0)) throw DomainError("mutual_information: negative SNR");
  return std::log2(1.0 + snr);
}

namespace {

void require_length(std::size_t expected, std::size_t got) {
  if (expected != got) {
    std::ostringstream os;
    os << "expected " << expected << " rounds, got " << got;
    throw ContractError(os.str());
  }
}

}  // namespace

std::optional<std::size_t> xp_success_round(const RateSchedule& rates,
                                            std::span<const double> snrs) {
  require_length(rates.rounds(), snrs.size());
  double info = 0.0;
  for (std::size_t k = 0; k < snrs.size(); ++k) {
    info += mutual_information(snrs[k]);
    if (!(info < rates.cumulative_rates()[k])) return k + 1;
  }
  return std::nullopt;
}

std::optional<std::size_t> xp_success_round(const RateSchedule& rates,
                                            const SnrRealization& real) {
  return xp_success_round(rates, real.snrs());
}

bool ir_outage_event(const RateSchedule& rates, std::span<const double> snrs) {
  require_length(rates.rounds(), snrs.size());
  double info = 0.0;
  for (double g : snrs) info += mutual_information(g);
  return info < rates.total();
}

bool ir_outage_event(const RateSchedule& rates, const SnrRealization& real) {
  return ir_outage_event(rates, real.snrs());
}

std::optional<std::size_t> ir_success_round(double target_rate,
                                            std::span<const double> snrs) {
  if (!(target_rate > 0.0)) throw DomainError("IR target rate must be positive");
  double info = 0.0;
  for (std::size_t k = 0; k < snrs.size(); ++k) {
    info += mutual_information(snrs[k]);
    if (!(info < target_rate)) return k + 1;
  }
  return std::nullopt;
}

void require_same_rounds(const RateSchedule& rates, const PowerProfile& powers) {
  require_length(rates.rounds(), powers.rounds());
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::closed_form: return "closed-form";
    case Method::exact_quadrature: return "exact";
    case Method::fox_h: return "fox-h";
    case Method::asymptotic: return "asymptotic";
    case Method::lower_bound: return "lower";
    case Method::upper_quadrature: return "upper";
    case Method::monte_carlo: return "mc";
    case Method::oracle_quadrature: return "oracle";
  }
  return "unknown";
}

double clamp_probability(double p, double tol) {
  if (p >= 0.0 && p <= 1.0) return p;
  if (p >= -tol && p < 0.0) return 0.0;
  if (p > 1.0 && p <= 1.0 + tol) return 1.0;
  std::ostringstream os;
  os.precision(17);
  os << "probability " << p << " outside [-" << tol << ", 1+" << tol << "]";
  throw InternalConsistencyError(os.str());
}

}  // namespace xpharq
