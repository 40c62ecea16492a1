// Acceptance suite: one PASS/FAIL line per criterion, exit code = failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "commands.hpp"
#include "sweep_config.hpp"
#include "xpharq/monte_carlo.hpp"
#include "xpharq/outage_asymptotic.hpp"
#include "xpharq/outage_bounds.hpp"
#include "xpharq/outage_exact.hpp"
#include "xpharq/quadrature.hpp"
#include "xpharq/special_functions.hpp"
#include "xpharq/throughput.hpp"

using namespace xpharq;

namespace {

constexpr double ln2 = std::numbers::ln2;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double sigma(double p, double n) { return std::sqrt(p * (1 - p) / n); }

struct Outcome {
  bool ok = true;
  std::string detail;
};

void fail(Outcome& o, const std::string& why) {
  if (o.ok) o.detail = why;
  o.ok = false;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

// 1: exact / fox-h / nested oracle agree, and each sits within 3 sigma of MC
Outcome exact_triangulation() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  double worst_pair = 0, worst_z = 0;
  for (auto r : {RateSchedule{1, 1}, RateSchedule{1, 2}, RateSchedule{2, 1}}) {
    for (double db : {0.0, 10.0, 20.0}) {
      const auto g = PowerProfile::uniform(2, db_to_linear(db));
      const double ex = outage_k2_exact(r, g).value;
      const double fh = outage_k2_foxh(r, g).value;
      const double orc = xp_outage_quadrature(r, g).value;
      const double pair = std::max({rel(ex, fh), rel(ex, orc), rel(fh, orc)});
      worst_pair = std::max(worst_pair, pair);
      if (pair > 1e-6)
        fail(o, fmt("R=(%g,%g) %g dB: paths differ by %.3g", r.rate(1), r.rate(2), db, pair));
      const double n = 1e6;
      const double mc = estimate_outage(SimConfig{Scheme::xp, r, g, 1'000'000, 1, 1}).value;
      for (double v : {ex, fh, orc}) {
        const double z = std::abs(mc - v) / sigma(v, n);
        worst_z = std::max(worst_z, z);
        if (z > 3)
          fail(o, fmt("R=(%g,%g) %g dB: MC off by %.2f sigma", r.rate(1), r.rate(2), db, z));
      }
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs >= 30) fail(o, fmt("runtime %.1f s", secs));
  if (o.ok)
    o.detail = fmt("max pairwise rel %.2g, max MC |z| %.2f, %.1f s", worst_pair, worst_z,
                   secs);
  return o;
}

// 2: snr^2 P_out,2 approaches 4 ln2 - 1
Outcome asymptotic_coefficient() {
  Outcome o;
  const double c = 4 * ln2 - 1;
  auto scaled = [](double db) {
    const double g = db_to_linear(db);
    return g * g * outage_k2_exact(RateSchedule{1, 1}, PowerProfile{g, g}).value;
  };
  const double v40 = scaled(40), v60 = scaled(60);
  if (rel(v40, c) > 0.03) fail(o, fmt("40 dB: %.6f vs %.6f", v40, c));
  if (rel(v60, c) > 0.01) fail(o, fmt("60 dB: %.6f vs %.6f", v60, c));
  if (o.ok)
    o.detail = fmt("40 dB %.6f (%.2g), 60 dB %.7f (%.2g)", v40, rel(v40, c), v60, rel(v60, c));
  return o;
}

// 3: coefficient recursion against nested quadrature
Outcome hbar_recursion() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> rate(0.25, 3.0);
  double worst = 0;
  for (int i = 0; i < 20; ++i) {
    const std::size_t K = 2 + i % 4;
    std::vector<double> r(K);
    for (auto& v : r) v = rate(rng);
    const RateSchedule rs(r);
    const double table = hbar_eval(build_hbar_table(rs), 1, 1.0);
    const double nested = hbar_nested_quadrature(rs, 1, 1.0).value;
    worst = std::max(worst, rel(table, nested));
    if (rel(table, nested) > 1e-8) fail(o, fmt("K=%g: rel %.3g", K, rel(table, nested)));
  }
  const double v = hbar_eval(build_hbar_table(RateSchedule{1, 1, 1}), 1, 1.0);
  const double closed = 12 * ln2 * ln2 - 4 * ln2 + 1;
  if (std::abs(v - closed) > 1e-9 * closed) fail(o, fmt("(1,1,1): %.12f", v));
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs >= 60) fail(o, fmt("runtime %.1f s", secs));
  if (o.ok) o.detail = fmt("max rel %.2g, hbar_3(1)=%.10f, %.1f s", worst, v, secs);
  return o;
}

// 4: lower <= exact <= upper, MC inside the widened bracket
Outcome bound_sandwich() {
  Outcome o;
  int points = 0;
  for (auto r : {RateSchedule{1, 1, 1}, RateSchedule{1, 0.5, 0.5}}) {
    for (double db = 0; db <= 40; db += 5) {
      const auto g = PowerProfile::uniform(3, db_to_linear(db));
      const double lo = outage_lower(r, g);
      const double xp = xp_outage_quadrature(r, g).value;
      const double up = outage_upper_ir(r, g).value;
      const double n = 1e5;
      const double mc = estimate_outage(SimConfig{Scheme::xp, r, g, 100'000, 2, 1}).value;
      // sigma at the reference probability: p-hat is 0 at high SNR
      const double s = sigma(xp, n);
      if (!(lo <= xp && xp <= up))
        fail(o, fmt("R2=%g %g dB: %.3g <= %.3g <= %.3g broken", r.rate(2), db, lo, xp) +
                    fmt(" (upper %.3g)", up));
      if (mc < lo - 3 * s || mc > up + 3 * s)
        fail(o, fmt("R2=%g %g dB: MC %.3g outside bracket", r.rate(2), db, mc));
      ++points;
    }
  }
  if (o.ok) o.detail = fmt("%g points, ordering and MC bracket hold", points);
  return o;
}

// 5: high-SNR slope
Outcome diversity_order() {
  Outcome o;
  std::vector<std::pair<double, double>> k2, k3;
  for (double db = 50; db <= 70; db += 5) {
    const double g = db_to_linear(db);
    k2.emplace_back(g, outage_k2_exact(RateSchedule{1, 1}, PowerProfile{g, g}).value);
    k3.emplace_back(
        g, xp_outage_quadrature(RateSchedule{1, 1, 1}, PowerProfile::uniform(3, g)).value);
  }
  const double d2 = diversity_order_fit(k2).diversity_order();
  const double d3 = diversity_order_fit(k3).diversity_order();
  if (std::abs(d2 - 2) > 0.1) fail(o, fmt("K=2 d=%.4f", d2));
  if (std::abs(d3 - 3) > 0.15) fail(o, fmt("K=3 d=%.4f", d3));
  if (o.ok) o.detail = fmt("K=2 d=%.5f, K=3 d=%.5f", d2, d3);
  return o;
}

// 6: throughput dominance at 20 dB, R_2.. = 2
Outcome throughput_dominance() {
  Outcome o;
  const double g = db_to_linear(20);
  std::string detail;
  for (std::size_t K : {2u, 3u}) {
    double xp_max = 0, inr_max = 0;
    for (double r1 = 0.5; r1 <= 4.0 + 1e-9; r1 += 0.5) {
      std::vector<double> rv(K, 2.0);
      rv[0] = r1;
      const RateSchedule r(rv);
      const auto p = PowerProfile::uniform(K, g);
      const double xp = throughput_analytical(Scheme::xp, r, xp_outage_chain(r, p));
      const double inr = throughput_analytical(Scheme::inr, r, inr_outage_chain(r, p));
      if (xp < inr) fail(o, fmt("K=%g R1=%g: XP %.5f < INR %.5f", K, r1, xp, inr));
      for (auto [s, a] : {std::pair{Scheme::xp, xp}, std::pair{Scheme::inr, inr}}) {
        const auto mc = estimate_throughput(SimConfig{s, r, p, 100'000, 7, 1});
        if (std::abs(mc.value - a) > mc.ci_half_width)
          fail(o, fmt("K=%g R1=%g: MC %.5f vs analytical %.5f", K, r1, mc.value, a) +
                      fmt(" (CI %.2g)", mc.ci_half_width));
      }
      xp_max = std::max(xp_max, xp);
      inr_max = std::max(inr_max, inr);
    }
    if (!(xp_max > inr_max)) fail(o, fmt("K=%g: max XP %.5f <= max INR %.5f", K, xp_max, inr_max));
    detail += fmt("K=%g max XP %.4f vs INR %.4f; ", K, xp_max, inr_max);
  }
  if (o.ok) o.detail = detail + "MC inside 95% CI at all 32 points";
  return o;
}

// 7: special-function identities
Outcome special_functions() {
  Outcome o;
  double worst = 0;
  for (int i = 0; i <= 100; ++i) {
    const double x = 0.1 * i;
    const double e = rel(upper_incomplete_gamma(1.0, x).real(), std::exp(-x));
    worst = std::max(worst, e);
  }
  if (worst > 1e-12) fail(o, fmt("Gamma(1,x): rel %.3g", worst));
  const double x = 1e-6;
  const double g0 = upper_incomplete_gamma(0.0, x).real() + std::log(x);
  if (std::abs(g0 + std::numbers::egamma) > 1e-4) fail(o, fmt("Gamma(0,x)+ln x = %.8f", g0));
  double worst_h = 0;
  for (double z : {0.25, 1.0, 4.0}) {
    const double ref = 2 * std::sqrt(z) * std::cyl_bessel_k(1.0, 2 * std::sqrt(z));
    worst_h = std::max(worst_h, rel(incomplete_h11(z, 0.0), ref));
  }
  if (worst_h > 1e-6) fail(o, fmt("Fox-H degenerate rel %.3g", worst_h));
  if (o.ok)
    o.detail = fmt("Gamma(1,x) rel %.2g, Gamma(0,1e-6)+ln x=%.7f, Fox-H/Bessel rel %.2g",
                   worst, g0, worst_h);
  return o;
}

// 8: sweep CSV does not depend on the worker count
Outcome determinism() {
  Outcome o;
  const auto cfg = cli::parse_sweep_config(
      "quantity = outage\naxis = snr_db\nstart = 0\nstop = 40\nstep = 5\n"
      "rates = 1,1,1\nmethods = lower,upper,mc,asymptotic,oracle\nschemes = xp,inr\n"
      "trials = 20000\nseed = 5\n");
  const std::string one = cli::run_sweep(cfg, 5, 1);
  const std::string four = cli::run_sweep(cfg, 5, 4);
  if (one != four) fail(o, "CSV differs between 1 and 4 workers");
  if (o.ok) o.detail = fmt("%g CSV bytes identical for 1 and 4 workers", one.size());
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"exact-path triangulation (K=2)", exact_triangulation},
      {"asymptotic coefficient 4 ln2 - 1", asymptotic_coefficient},
      {"hbar recursion vs nested quadrature", hbar_recursion},
      {"bound sandwich (K=3)", bound_sandwich},
      {"diversity order", diversity_order},
      {"throughput dominance", throughput_dominance},
      {"special-function identities", special_functions},
      {"sweep determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s criterion %zu: %s -- %s\n", o.ok ? "PASS" : "FAIL", i + 1,
                criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
    if (!o.ok) ++failures;
  }
  return failures;
}
