#include "xpharq/outage_asymptotic.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "xpharq/errors.hpp"

namespace xpharq {

double phi_asymptotic(double r1, double r2, double snr_bar1, double snr_bar2) {
  if (!(r1 > 0.0 && r2 > 0.0 && snr_bar1 > 0.0 && snr_bar2 > 0.0))
    throw DomainError("phi_asymptotic: rates and SNRs must be positive");
  const double total = std::exp2(r1 + r2);
  const double diff = std::exp(-std::expm1(r2 * std::numbers::ln2) / snr_bar2) *
                      -std::expm1(-(total - std::exp2(r2)) / snr_bar2);
  return std::exp(1.0 / snr_bar1) * diff -
         std::exp(1.0 / snr_bar1 + 1.0 / snr_bar2) * total * r1 *
             std::numbers::ln2 / (snr_bar1 * snr_bar2);
}

double outage_k2_asymptotic(const RateSchedule& rates, const PowerProfile& powers) {
  if (rates.rounds() != 2) throw ContractError("outage_k2_asymptotic: requires K = 2");
  require_same_rounds(rates, powers);
  const double r1 = rates.rate(1);
  const double coefficient = std::exp2(rates.total()) * r1 * std::numbers::ln2 -
                             std::expm1(r1 * std::numbers::ln2);
  return coefficient / (powers.snr_bar(1) * powers.snr_bar(2));
}

double HbarTable::coeff(std::size_t k, std::size_t i) const {
  const auto row = coeffs(k);
  if (i >= row.size()) throw ContractError("HbarTable: power index out of range");
  return row[i];
}

std::span<const double> HbarTable::coeffs(std::size_t k) const {
  if (k < 1 || k > coeffs_.size()) throw ContractError("HbarTable: k out of range");
  return coeffs_[k - 1];
}

HbarTable build_hbar_table(const RateSchedule& rates) {
  const std::size_t K = rates.rounds();
  if (K < 2) throw ContractError("build_hbar_table: requires K >= 2");

  std::vector<std::vector<double>> c(K);
  c[K - 1] = {std::exp2(rates.total())};
  for (std::size_t k = K - 1; k >= 1; --k) {
    // Row k (1-based) lives at index k-1 and has K-k+1 entries.
    const auto& next = c[k];
    const double log_bound = rates.cumulative(k) * std::numbers::ln2;
    const double sign = ((K - k) % 2 == 0) ? 1.0 : -1.0;
    std::vector<double> row(K - k + 1);
    double constant = sign * std::exp2(rates.cumulative(k));
    double log_power = log_bound;
    for (std::size_t i = 0; i + 1 <= K - k; ++i) {
      constant += next[i] * log_power / static_cast<double>(i + 1);
      log_power *= log_bound;
    }
    row[0] = constant;
    for (std::size_t i = 1; i <= K - k; ++i)
      row[i] = -next[i - 1] / static_cast<double>(i);
    c[k - 1] = std::move(row);
  }
  return HbarTable(rates, std::move(c));
}

double hbar_eval(const HbarTable& table, std::size_t k, double x) {
  const std::size_t K = table.rounds();
  if (k < 1 || k > K) throw ContractError("hbar_eval: k out of range");
  if (!(x >= 1.0)) throw DomainError("hbar_eval: x must be >= 1");
  const auto row = table.coeffs(k);
  const double log_x = std::log(x);
  double poly = 0.0;
  for (std::size_t i = row.size(); i-- > 0;) poly = poly * log_x + row[i];
  const double sign = ((K - k + 1) % 2 == 0) ? 1.0 : -1.0;
  return sign * x + poly;
}

double outage_asymptotic_general(const RateSchedule& rates,
                                 const PowerProfile& powers) {
  require_same_rounds(rates, powers);
  const HbarTable table = build_hbar_table(rates);
  double scale = 1.0;
  for (double g : powers.snr_bars()) scale /= g;
  return scale * hbar_eval(table, 1, 1.0);
}

SlopeFit diversity_order_fit(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw ContractError("diversity_order_fit: need >= 3 points");
  SlopeFit fit;
  double sx = 0.0, sy = 0.0;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto [snr, p] = points[i];
    if (!(snr > 0.0)) throw DomainError("diversity_order_fit: SNR must be positive");
    if (i > 0 && !(snr > points[i - 1].first))
      throw ContractError("diversity_order_fit: SNRs must be strictly increasing");
    if (!(p > 0.0)) {
      std::ostringstream os;
      os << "diversity_order_fit: outage must be positive, got " << p;
      throw DomainError(os.str());
    }
    xs.push_back(std::log10(snr));
    ys.push_back(std::log10(p));
    sx += xs.back();
    sy += ys.back();
    fit.points.emplace_back(10.0 * xs.back(), p);
  }
  const double n = static_cast<double>(xs.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

}  // namespace xpharq
