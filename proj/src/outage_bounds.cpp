#include "xpharq/outage_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "xpharq/errors.hpp"
#include "xpharq/monte_carlo.hpp"
#include "xpharq/outage_exact.hpp"
#include "xpharq/quadrature.hpp"

namespace xpharq {

double outage_lower(const RateSchedule& rates, const PowerProfile& powers) {
  require_same_rounds(rates, powers);
  double p = 1.0;
  for (std::size_t k = 1; k <= rates.rounds(); ++k)
    p *= outage_k1(rates.rate(k), powers.snr_bar(k));
  return p;
}

double mutual_information_density(double t, double snr_bar) {
  if (t < 0.0) return 0.0;
  const double grow = std::exp2(t);
  return std::numbers::ln2 * grow * std::exp(-(grow - 1.0) / snr_bar) / snr_bar;
}

namespace {

// Piecewise Chebyshev interpolant, panels bisected until the trailing
// coefficients are small relative to the panel's own magnitude.
class PiecewiseChebyshev {
 public:
  static constexpr int kDegree = 32;

  PiecewiseChebyshev(const std::function<double(double)>& f, double a, double b,
                     double rel_tol) {
    build(f, a, b, rel_tol, 0);
    std::sort(panels_.begin(), panels_.end(),
              [](const Panel& x, const Panel& y) { return x.a < y.a; });
  }

  double operator()(double x) const {
    auto it = std::upper_bound(panels_.begin(), panels_.end(), x,
                               [](double v, const Panel& p) { return v < p.a; });
    if (it != panels_.begin()) --it;
    const Panel& p = *it;
    const double u = std::clamp((2.0 * x - p.a - p.b) / (p.b - p.a), -1.0, 1.0);
    // Clenshaw recurrence.
    double b1 = 0.0, b2 = 0.0;
    for (int m = kDegree - 1; m >= 1; --m) {
      const double b0 = 2.0 * u * b1 - b2 + p.c[m];
      b2 = b1;
      b1 = b0;
    }
    return u * b1 - b2 + p.c[0];
  }

  std::size_t panels() const noexcept { return panels_.size(); }

 private:
  struct Panel {
    double a, b;
    std::vector<double> c;
  };

  void build(const std::function<double(double)>& f, double a, double b,
             double rel_tol, int depth) {
    std::vector<double> values(kDegree);
    double magnitude = 0.0;
    for (int j = 0; j < kDegree; ++j) {
      const double theta = std::numbers::pi * (j + 0.5) / kDegree;
      const double x = 0.5 * (a + b) + 0.5 * (b - a) * std::cos(theta);
      values[j] = f(x);
      magnitude = std::max(magnitude, std::abs(values[j]));
    }
    std::vector<double> c(kDegree);
    for (int m = 0; m < kDegree; ++m) {
      double s = 0.0;
      for (int j = 0; j < kDegree; ++j)
        s += values[j] * std::cos(std::numbers::pi * m * (j + 0.5) / kDegree);
      c[m] = 2.0 * s / kDegree;
    }
    c[0] *= 0.5;
    const double tail = std::abs(c[kDegree - 1]) + std::abs(c[kDegree - 2]) +
                        std::abs(c[kDegree - 3]);
    if (tail <= rel_tol * magnitude || magnitude == 0.0) {
      panels_.push_back({a, b, std::move(c)});
      return;
    }
    if (depth >= 24)
      throw ConvergenceError("IR CDF interpolation did not resolve", magnitude, tail);
    const double mid = 0.5 * (a + b);
    build(f, a, mid, rel_tol, depth + 1);
    build(f, mid, b, rel_tol, depth + 1);
  }

  std::vector<Panel> panels_;
};

constexpr double kPanelRelTol = 1e-11;
constexpr double kIntegralRelTol = 1e-13;

}  // namespace

OutageEstimate ir_outage_quadrature(const PowerProfile& powers,
                                    double target_rate, double tol) {
  const std::size_t K = powers.rounds();
  if (K > kOracleMaxRounds) {
    std::ostringstream os;
    os << "HARQ-IR quadrature supports K <= " << kOracleMaxRounds << ", got " << K;
    throw UnsupportedError(os.str());
  }
  if (!(target_rate > 0.0)) throw DomainError("IR target rate must be positive");
  if (!(tol > 0.0)) throw DomainError("ir_outage_quadrature: tol must be positive");

  const auto snr = powers.snr_bars();
  auto first_cdf = [g = snr[0]](double r) {
    return r <= 0.0 ? 0.0 : -std::expm1(-std::expm1(r * std::numbers::ln2) / g);
  };
  if (K == 1) {
    const double p = first_cdf(target_rate);
    return {p, Method::upper_quadrature, 4.0 * std::numeric_limits<double>::epsilon() * p};
  }

  // F_k(r) = int_0^r f_k(t) F_{k-1}(r - t) dt.
  double worst_error = 0.0;
  // Against an interpolated F_{k-1} the integrand carries the interpolant's
  // panel-edge jumps, so asking for more than kPanelRelTol only burns intervals.
  auto convolve = [&](const std::function<double(double)>& previous, double g,
                      double r, double rel_tol) {
    if (r <= 0.0) return 0.0;
    const IntegrationResult res = integrate_adaptive(
        [&](double t) { return mutual_information_density(t, g) * previous(r - t); },
        0.0, r, Tolerance{std::numeric_limits<double>::min(), rel_tol});
    worst_error = std::max(worst_error, res.abs_error_estimate / std::max(res.value, 1e-300));
    return res.value;
  };

  std::function<double(double)> cdf = first_cdf;
  std::vector<PiecewiseChebyshev> tables;
  tables.reserve(K);
  for (std::size_t k = 1; k + 1 < K; ++k) {
    const double g = snr[k];
    const double rel_tol = k == 1 ? kIntegralRelTol : kPanelRelTol;
    auto tabulated = [&, g, rel_tol, prev = cdf](double r) {
      return convolve(prev, g, r, rel_tol);
    };
    tables.emplace_back(tabulated, 0.0, target_rate, kPanelRelTol);
    const PiecewiseChebyshev* table = &tables.back();
    cdf = [table](double r) { return r <= 0.0 ? 0.0 : (*table)(r); };
  }
  worst_error = 0.0;
  const double p =
      convolve(cdf, snr[K - 1], target_rate, K == 2 ? kIntegralRelTol : kPanelRelTol);
  const double err =
      p * (worst_error + static_cast<double>(K - 1) * 10.0 * kPanelRelTol);
  if (err > tol)
    throw ConvergenceError("ir_outage_quadrature: tolerance not met", p, err);
  return {clamp_probability(p, tol), Method::upper_quadrature, err};
}

OutageEstimate outage_upper_ir(const RateSchedule& rates, const PowerProfile& powers,
                               UpperMethod method, const UpperBoundBudget& budget) {
  require_same_rounds(rates, powers);
  if (method == UpperMethod::quadrature)
    return ir_outage_quadrature(powers, rates.total(), budget.tol);
  SimConfig cfg{Scheme::inr, rates, powers, budget.trials, budget.seed, budget.workers};
  return estimate_outage(cfg);
}

double bound_gap(double lower, double upper) {
  if (!(upper > 0.0)) return 0.0;
  return (upper - lower) / upper;
}

}  // namespace xpharq
