#include "xpharq/outage_exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "xpharq/errors.hpp"
#include "xpharq/special_functions.hpp"

namespace xpharq {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << what << " must be positive and finite, got " << v;
    throw DomainError(os.str());
  }
}

}  // namespace

double outage_k1(double rate, double snr_bar) {
  require_positive(rate, "rate");
  require_positive(snr_bar, "snr_bar");
  return -std::expm1(-std::expm1(rate * std::numbers::ln2) / snr_bar);
}

IntegrationResult phi_quadrature(double r1, double r2, double snr_bar1,
                                 double snr_bar2, double tol) {
  require_positive(r1, "R1");
  require_positive(r2, "R2");
  require_positive(snr_bar1, "snr_bar1");
  require_positive(snr_bar2, "snr_bar2");
  if (!(tol > 0.0 && tol <= 1e-3))
    throw DomainError("phi_quadrature: tol must lie in (0, 1e-3]");

  const double lo = std::exp2(r2);
  const double hi = std::exp2(r1 + r2);
  const double offset = 1.0 / snr_bar1 + 1.0 / snr_bar2;
  auto integrand = [&](double z) {
    return std::exp(offset - hi / (z * snr_bar1) - z / snr_bar2) / snr_bar2;
  };
  // Aim near machine precision relative to phi: the two-round outage is a
  // small difference of phi and an O(phi) term at high SNR.
  IntegrationResult r = integrate_adaptive(
      integrand, lo, hi, Tolerance{std::numeric_limits<double>::min(), 1e-13});
  if (r.abs_error_estimate > tol)
    throw ConvergenceError("phi_quadrature: tolerance not reached", r.value,
                           r.abs_error_estimate);
  return r;
}

namespace {

// The closed-form part of the two-round outage: every term except -phi.
double k2_closed_terms(double r1, double r2, double g1, double g2) {
  const double first = outage_k1(r1, g1) * outage_k1(r2, g2);
  // e^{-(2^R2-1)/g2} - e^{-(2^{R1+R2}-1)/g2} without cancellation.
  const double gap = std::exp(-std::expm1(r2 * std::numbers::ln2) / g2) *
                     -std::expm1(-(std::exp2(r1 + r2) - std::exp2(r2)) / g2);
  return first + gap;
}

}  // namespace

OutageEstimate outage_k2_exact(const RateSchedule& rates,
                               const PowerProfile& powers, double tol) {
  if (rates.rounds() != 2) throw ContractError("outage_k2_exact: requires K = 2");
  require_same_rounds(rates, powers);
  const double r1 = rates.rate(1), r2 = rates.rate(2);
  const double g1 = powers.snr_bar(1), g2 = powers.snr_bar(2);

  const double closed = k2_closed_terms(r1, r2, g1, g2);
  const IntegrationResult phi = phi_quadrature(r1, r2, g1, g2, std::min(tol, 1e-3));
  const double p = closed - phi.value;
  const double roundoff =
      4.0 * std::numeric_limits<double>::epsilon() * (closed + phi.value);
  return {clamp_probability(p, tol), Method::exact_quadrature,
          phi.abs_error_estimate + roundoff};
}

void validate(const FoxHParams11& params) {
  if (!(params.contour_c > 0.0))
    throw DomainError("FoxHParams11: contour_c must be > 0");
  if (!(params.contour_halfspan > 0.0))
    throw DomainError("FoxHParams11: contour_halfspan must be > 0");
  if (params.nodes < 64) throw DomainError("FoxHParams11: nodes must be >= 64");
  if (!(params.refine_tol > 0.0))
    throw DomainError("FoxHParams11: refine_tol must be > 0");
}

namespace {

struct ContourValue {
  double value;
  double abs_content;  // same rule applied to |Re f|
};

// Trapezoid rule on t in [0, L] for (1/pi) int Re f(c + i t) dt; the
// integrand is conjugate-symmetric in t so the negative half is implied.
// `integrand` returns f(s) for s on the contour. Step is halved until two
// successive estimates agree to `refine_tol` relative, or until the change is
// at roundoff level for the integrand's absolute content (an exponentially
// small result from a cancelling integrand cannot do better).
template <class F>
ContourValue contour_integral(F&& integrand, const FoxHParams11& params) {
  validate(params);
  const double c = params.contour_c;
  const double span = params.contour_halfspan;
  int intervals = params.nodes;
  double h = span / intervals;

  double sum = 0.0, abs_sum = 0.0;
  auto add = [&](double t, double weight) {
    const double v = integrand(cplx(c, t)).real();
    sum += weight * v;
    abs_sum += weight * std::abs(v);
  };
  add(0.0, 0.5);
  add(span, 0.5);
  for (int j = 1; j < intervals; ++j) add(j * h, 1.0);
  double estimate = sum * h / std::numbers::pi;

  constexpr int kMaxDoublings = 10;
  constexpr double kRoundoff = 64.0 * std::numeric_limits<double>::epsilon();
  for (int level = 0; level < kMaxDoublings; ++level) {
    for (int j = 0; j < intervals; ++j) add((2 * j + 1) * 0.5 * h, 1.0);
    h *= 0.5;
    intervals *= 2;
    const double refined = sum * h / std::numbers::pi;
    const double content = abs_sum * h / std::numbers::pi;
    const double change = std::abs(refined - estimate);
    estimate = refined;
    if (change <= params.refine_tol * std::abs(refined) || change <= kRoundoff * content)
      return {refined, content};
  }
  throw ConvergenceError("contour integral did not settle under node refinement",
                         estimate, 0.0);
}

}  // namespace

double incomplete_h11(double z, double b, const FoxHParams11& params) {
  require_positive(z, "z");
  if (!(b >= 0.0)) throw DomainError("incomplete_h11: b must be >= 0");
  const double log_z = std::log(z);
  return contour_integral(
             [&](cplx s) {
               return gamma_complex(s) * upper_incomplete_gamma(s + 1.0, b) *
                      std::exp(-s * log_z);
             },
             params)
      .value;
}

namespace {

// phi and the roundoff scale of its contour integral, both with the prefactor.
ContourValue phi_foxh_detail(double r1, double r2, double snr_bar1, double snr_bar2,
                             const FoxHParams11& params) {
  require_positive(r1, "R1");
  require_positive(r2, "R2");
  require_positive(snr_bar1, "snr_bar1");
  require_positive(snr_bar2, "snr_bar2");
  const double z = std::exp2(r1 + r2) / (snr_bar1 * snr_bar2);
  const double b_lo = std::exp2(r2) / snr_bar2;
  const double b_hi = std::exp2(r1 + r2) / snr_bar2;
  const double log_z = std::log(z);
  // The difference is integrated as one contour so node refinement is judged
  // on phi itself rather than on the two larger H terms.
  const ContourValue h = contour_integral(
      [&](cplx s) {
        return gamma_complex(s) *
               (upper_incomplete_gamma(s + 1.0, b_lo) -
                upper_incomplete_gamma(s + 1.0, b_hi)) *
               std::exp(-s * log_z);
      },
      params);
  const double scale = std::exp(1.0 / snr_bar1 + 1.0 / snr_bar2);
  return {scale * h.value, scale * h.abs_content};
}

}  // namespace

double phi_foxh(double r1, double r2, double snr_bar1, double snr_bar2,
                const FoxHParams11& params) {
  return phi_foxh_detail(r1, r2, snr_bar1, snr_bar2, params).value;
}

OutageEstimate outage_k2_foxh(const RateSchedule& rates,
                              const PowerProfile& powers,
                              const FoxHParams11& params) {
  if (rates.rounds() != 2) throw ContractError("outage_k2_foxh: requires K = 2");
  require_same_rounds(rates, powers);
  const double r1 = rates.rate(1), r2 = rates.rate(2);
  const double g1 = powers.snr_bar(1), g2 = powers.snr_bar(2);
  const ContourValue phi = phi_foxh_detail(r1, r2, g1, g2, params);
  const double p = k2_closed_terms(r1, r2, g1, g2) - phi.value;
  // Node refinement settles phi to refine_tol relative, or to roundoff of
  // the contour's absolute content when phi is tiny.
  const double err =
      std::max(params.refine_tol * std::abs(phi.value),
               64.0 * std::numeric_limits<double>::epsilon() * phi.abs_content);
  return {clamp_probability(p, std::max(err, 1e-12)), Method::fox_h, err};
}

}  // namespace xpharq
