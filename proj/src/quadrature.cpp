#include "xpharq/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "xpharq/errors.hpp"

namespace xpharq {

namespace {

// Kronrod abscissae on [0,1) (odd indices are the embedded Gauss nodes) and
// the matching weights, from QUADPACK's qk15.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

double checked(const Integrand& f, double x) {
  const double y = f(x);
  if (!std::isfinite(y)) {
    std::ostringstream os;
    os << "integrand not finite at x=" << x;
    throw DomainError(os.str());
  }
  return y;
}

Segment gauss_kronrod15(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = checked(f, center);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  double resabs = std::abs(resk);
  std::array<double, 7> f1{}, f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = checked(f, center - dx);
    f2[j] = checked(f, center + dx);
    resk += kWgk[j] * (f1[j] + f2[j]);
    resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1[j] + f2[j]);
  }
  const double mean = resk * 0.5;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j)
    resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

  const double value = resk * half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
    err = std::max(50.0 * eps * resabs, err);
  return {a, b, value, err};
}

}  // namespace

IntegrationResult integrate_adaptive(const Integrand& f, double a, double b,
                                     double tol) {
  return integrate_adaptive(f, a, b, Tolerance{tol, 0.0});
}

IntegrationResult integrate_adaptive(const Integrand& f, double a, double b,
                                     Tolerance tol, std::size_t max_intervals) {
  if (!(a <= b)) throw ContractError("integrate_adaptive: requires a <= b");
  if (!(tol.abs >= 0.0) || !(tol.rel >= 0.0) || (tol.abs == 0.0 && tol.rel == 0.0))
    throw ContractError("integrate_adaptive: tolerance must be positive");
  if (a == b) return {0.0, 0.0, 0};

  std::vector<Segment> heap{gauss_kronrod15(f, a, b)};
  std::size_t evals = 15;
  double total = heap.front().value;
  double total_err = heap.front().error;

  // Running sums drift by about eps times the largest error ever seen, which
  // can sit above a tiny relative target; re-sum them now and then.
  auto resum = [&] {
    total = 0.0;
    total_err = 0.0;
    for (const Segment& s : heap) {
      total += s.value;
      total_err += s.error;
    }
  };
  auto target = [&] { return std::max(tol.abs, tol.rel * std::abs(total)); };
  std::size_t splits = 0;
  while (total_err > target()) {
    if (splits % 32 == 31) {
      resum();
      if (total_err <= target()) break;
    }
    if (heap.size() >= max_intervals) {
      resum();
      if (total_err <= target()) break;
      std::ostringstream os;
      os << "integrate_adaptive: tolerance not met after " << heap.size()
         << " intervals (error estimate " << total_err << ")";
      throw ConvergenceError(os.str(), total, total_err);
    }
    std::pop_heap(heap.begin(), heap.end());
    const Segment worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw ConvergenceError("integrate_adaptive: interval cannot be split further",
                             total, total_err);
    }
    const Segment left = gauss_kronrod15(f, worst.a, mid);
    const Segment right = gauss_kronrod15(f, mid, worst.b);
    evals += 30;
    ++splits;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end());
  }

  resum();
  return {total, total_err, evals};
}

double transition_density(double x, double x_prev, double snr_bar) {
  if (x < x_prev) return 0.0;
  return std::exp(-(x / x_prev - 1.0) / snr_bar) / (snr_bar * x_prev);
}

double joint_density_x(std::span<const double> x, const PowerProfile& powers) {
  if (x.size() != powers.rounds())
    throw ContractError("joint_density_x: dimension mismatch");
  double density = 1.0;
  double prev = 1.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] < prev) return 0.0;
    density *= transition_density(x[k], prev, powers.snr_bars()[k]);
    prev = x[k];
  }
  return density;
}

namespace {

struct NestedXp {
  std::span<const double> bounds;  // 2^{R_k^sum}
  std::span<const double> snr_bars;
  double rel;
  std::size_t evaluations = 0;
  double inner_error = 0.0;

  // Probability that rounds k..K all stay in outage given x_{k-1} = x_prev.
  double tail(std::size_t k, double x_prev, double level_rel) {
    const std::size_t K = bounds.size();
    const double upper = bounds[k];
    if (x_prev >= upper) return 0.0;
    if (k + 1 == K) {
      ++evaluations;
      return -std::expm1(-(upper / x_prev - 1.0) / snr_bars[k]);
    }
    const double width = upper - x_prev;
    const double inner_rel = level_rel * 0.1;
    auto integrand = [&](double u) {
      const double x = x_prev + width * u;
      return width * transition_density(x, x_prev, snr_bars[k]) *
             tail(k + 1, x, inner_rel);
    };
    const IntegrationResult r = integrate_adaptive(
        integrand, 0.0, 1.0,
        Tolerance{std::numeric_limits<double>::min(), level_rel});
    evaluations += r.evaluations;
    inner_error = std::max(inner_error, r.abs_error_estimate);
    return r.value;
  }
};

}  // namespace

OutageEstimate xp_outage_quadrature(const RateSchedule& rates,
                                    const PowerProfile& powers, double tol) {
  require_same_rounds(rates, powers);
  if (rates.rounds() > kOracleMaxRounds) {
    std::ostringstream os;
    os << "xp_outage_quadrature supports K <= " << kOracleMaxRounds << ", got "
       << rates.rounds();
    throw UnsupportedError(os.str());
  }
  if (!(tol > 0.0)) throw DomainError("xp_outage_quadrature: tol must be positive");

  std::vector<double> bounds;
  for (double c : rates.cumulative_rates()) bounds.push_back(std::exp2(c));

  NestedXp nest{bounds, powers.snr_bars(), std::min(1e-10, tol)};
  const double value = nest.tail(0, 1.0, nest.rel);
  // The outer relative target also bounds the absolute error by tol because
  // the value is a probability.
  const double err = std::max(nest.inner_error, nest.rel * std::abs(value));
  if (err > tol)
    throw ConvergenceError("xp_outage_quadrature: tolerance not met", value, err);
  return {clamp_probability(value, tol), Method::oracle_quadrature, err};
}

namespace {

struct NestedHbar {
  std::span<const double> bounds;
  std::size_t evaluations = 0;
  double max_error = 0.0;

  // hbar_{K,k}(x) with 0-based k.
  double eval(std::size_t k, double x, double level_rel) {
    const std::size_t K = bounds.size();
    if (k + 1 == K) return bounds[K - 1] - x;
    const double upper = bounds[k];
    const double width = upper - x;
    const double inner_rel = level_rel * 0.1;
    auto integrand = [&](double u) {
      const double t = x + width * u;
      return width / t * eval(k + 1, t, inner_rel);
    };
    const IntegrationResult r = integrate_adaptive(
        integrand, 0.0, 1.0,
        Tolerance{std::numeric_limits<double>::min(), level_rel});
    evaluations += r.evaluations;
    max_error = std::max(max_error, r.abs_error_estimate);
    return r.value;
  }
};

}  // namespace

IntegrationResult hbar_nested_quadrature(const RateSchedule& rates,
                                         std::size_t k, double x,
                                         double rel_tol) {
  const std::size_t K = rates.rounds();
  if (K < 2) throw ContractError("hbar_nested_quadrature: requires K >= 2");
  if (k < 1 || k > K) throw ContractError("hbar_nested_quadrature: k out of range");
  if (!(x > 0.0)) throw DomainError("hbar_nested_quadrature: x must be positive");
  std::vector<double> bounds;
  for (double c : rates.cumulative_rates()) bounds.push_back(std::exp2(c));
  NestedHbar nest{bounds};
  const double value = nest.eval(k - 1, x, rel_tol);
  return {value, nest.max_error, nest.evaluations};
}

}  // namespace xpharq
