#pragma once

// Reference numerical machinery: adaptive 1-D quadrature and the nested
// integrals over the product variables x_k = prod_{l<=k} (1 + gamma_l).
// Everything here is the ground truth the analytical modules are checked
// against, so it depends only on harq_core.

#include <cstddef>
#include <functional>
#include <span>

#include "xpharq/harq_core.hpp"

namespace xpharq {

struct IntegrationResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  std::size_t evaluations = 0;
};

/// Stop when the error estimate is at most max(abs, rel * |value|).
struct Tolerance {
  double abs = 1e-10;
  double rel = 0.0;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 15-point Gauss-Kronrod quadrature on [a, b].
/// Throws ConvergenceError (with the best estimate) when the interval budget
/// runs out before the tolerance is met.
IntegrationResult integrate_adaptive(const Integrand& f, double a, double b,
                                     double tol);
IntegrationResult integrate_adaptive(const Integrand& f, double a, double b,
                                     Tolerance tol,
                                     std::size_t max_intervals = 2000);

/// Conditional density of x_k given x_{k-1}: x_k = x_{k-1} (1 + gamma_k)
/// with gamma_k exponential of mean snr_bar.
double transition_density(double x, double x_prev, double snr_bar);

/// Joint density of (x_1..x_K), zero outside 1 <= x_1 <= ... <= x_K.
double joint_density_x(std::span<const double> x, const PowerProfile& powers);

/// Exact XP-HARQ outage by nested quadrature over the ordered x-region.
/// The last coordinate is integrated in closed form. K <= 4.
OutageEstimate xp_outage_quadrature(const RateSchedule& rates,
                                    const PowerProfile& powers,
                                    double tol = 1e-10);

inline constexpr std::size_t kOracleMaxRounds = 4;

/// The polynomial-in-log coefficient function hbar_{K,k}(x) evaluated by
/// direct (K-k)-fold nested quadrature of its defining integral, i.e.
/// independently of the coefficient recursion. k is 1-based.
IntegrationResult hbar_nested_quadrature(const RateSchedule& rates,
                                         std::size_t k, double x,
                                         double rel_tol = 1e-10);

}  // namespace xpharq
