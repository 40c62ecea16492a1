#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <numbers>

#include "xpharq/errors.hpp"
#include "xpharq/monte_carlo.hpp"
#include "xpharq/outage_bounds.hpp"
#include "xpharq/outage_exact.hpp"

using namespace xpharq;

namespace {

// Composite 5-point Gauss-Legendre with a fixed number of panels.
template <class F>
double composite_gl5(F f, double a, double b, int panels) {
  static constexpr std::array<double, 5> x{0.0, 0.5384693101056831, -0.5384693101056831,
                                           0.9061798459386640, -0.9061798459386640};
  static constexpr std::array<double, 5> w{0.5688888888888889, 0.4786286704993665,
                                           0.4786286704993665, 0.2369268850561891,
                                           0.2369268850561891};
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (int j = 0; j < 5; ++j) sum += w[j] * f(mid + 0.5 * h * x[j]);
  }
  return 0.5 * h * sum;
}

double phi_reference(double r1, double r2, double g1, double g2, int panels) {
  const double hi = std::exp2(r1 + r2);
  return composite_gl5(
      [&](double z) {
        return std::exp(1 / g1 + 1 / g2 - hi / (z * g1) - z / g2) / g2;
      },
      std::exp2(r2), hi, panels);
}

}  // namespace

TEST_CASE("single-round outage") {
  CHECK(outage_k1(1, 10) == doctest::Approx(0.0951626).epsilon(1e-6));
  CHECK(outage_k1(1, 1) == doctest::Approx(0.6321206).epsilon(1e-6));
  CHECK(outage_k1(1e-300, 10) < 1e-300);
  CHECK_THROWS_AS(outage_k1(0, 10), DomainError);
  CHECK_THROWS_AS(outage_k1(1, 0), DomainError);
  CHECK_THROWS_AS(outage_k1(1, -3), DomainError);
}

TEST_CASE("phi quadrature against a fixed-order composite rule") {
  for (auto [r1, r2, g] : {std::array<double, 3>{1, 1, 10}, {0.5, 2, 1}, {3, 1, 100},
                           {2, 3, 10}}) {
    const double coarse = phi_reference(r1, r2, g, g, 400);
    const double fine = phi_reference(r1, r2, g, g, 4000);
    REQUIRE(std::abs(coarse - fine) <= 1e-13 * fine);
    const auto v = phi_quadrature(r1, r2, g, g, 1e-12);
    CHECK(std::abs(v.value - fine) <= 1e-12 * fine);
    CHECK(v.abs_error_estimate <= 1e-12);
  }
}

TEST_CASE("phi quadrature edge cases") {
  CHECK(phi_quadrature(1e-14, 1, 10, 10).value < 1e-13);
  CHECK_THROWS_AS(phi_quadrature(1, 1, 10, 10, 0.0), DomainError);
  CHECK_THROWS_AS(phi_quadrature(1, 1, 10, 10, 0.1), DomainError);
  CHECK_THROWS_AS(phi_quadrature(-1, 1, 10, 10), DomainError);
}

TEST_CASE("two-round exact outage agrees with Monte Carlo") {
  const RateSchedule r{1, 1};
  const auto g = PowerProfile::uniform(2, 10);
  const auto exact = outage_k2_exact(r, g);
  CHECK(exact.method == Method::exact_quadrature);
  CHECK(exact.value == doctest::Approx(0.0154602058).epsilon(1e-9));
  CHECK(exact.uncertainty < 1e-12);
  const auto mc = estimate_outage(SimConfig{Scheme::xp, r, g, 1'000'000, 11, 1});
  const double sigma = std::sqrt(exact.value * (1 - exact.value) / 1e6);
  CHECK(std::abs(mc.value - exact.value) <= 3 * sigma);
}

TEST_CASE("two-round exact outage with a vanishing first rate") {
  CHECK(outage_k2_exact(RateSchedule{1e-12, 1}, PowerProfile{10, 10}).value < 1e-12);
}

TEST_CASE("exact outage input checks") {
  CHECK_THROWS_AS(outage_k2_exact(RateSchedule{1, 1, 1}, PowerProfile::uniform(3, 10)),
                  ContractError);
  CHECK_THROWS_AS(outage_k2_exact(RateSchedule{1, 1}, PowerProfile{10}), ContractError);
}

TEST_CASE("property: exact outage stays in [0,1] and is monotone") {
  const std::array<double, 5> rates{0.25, 0.5, 1, 2, 3};
  const std::array<double, 5> snrs{0.1, 1, 10, 100, 1e4};
  for (double r1 : rates)
    for (double r2 : rates)
      for (std::size_t i = 0; i < snrs.size(); ++i) {
        const double p = outage_k2_exact(RateSchedule{r1, r2}, PowerProfile{snrs[i], snrs[i]})
                             .value;
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        if (i + 1 < snrs.size()) {
          const double g = snrs[i + 1];
          CHECK(outage_k2_exact(RateSchedule{r1, r2}, PowerProfile{g, snrs[i]}).value <= p);
          CHECK(outage_k2_exact(RateSchedule{r1, r2}, PowerProfile{snrs[i], g}).value <= p);
        }
        CHECK(outage_k2_exact(RateSchedule{r1 * 1.3, r2}, PowerProfile{snrs[i], snrs[i]})
                  .value >= p);
        CHECK(outage_k2_exact(RateSchedule{r1, r2 * 1.3}, PowerProfile{snrs[i], snrs[i]})
                  .value >= p);
      }
}

TEST_CASE("property: lower <= exact <= upper for two rounds") {
  for (double r1 : {0.5, 1.0, 2.0})
    for (double r2 : {0.5, 1.0, 2.0})
      for (double db : {0.0, 10.0, 20.0, 30.0}) {
        const RateSchedule r{r1, r2};
        const auto g = PowerProfile::uniform(2, db_to_linear(db));
        const double p = outage_k2_exact(r, g).value;
        CHECK(outage_lower(r, g) <= p);
        CHECK(p <= outage_upper_ir(r, g).value * (1 + 1e-9));
      }
}

TEST_CASE("Fox-H degenerate case is a Bessel function") {
  for (double z : {0.25, 1.0, 4.0}) {
    const double ref = 2 * std::sqrt(z) * std::cyl_bessel_k(1.0, 2 * std::sqrt(z));
    CHECK(std::abs(incomplete_h11(z, 0.0) - ref) <= 1e-6 * ref);
  }
}

TEST_CASE("Fox-H phi agrees with the quadrature path") {
  const std::array<double, 4> rates{0.5, 1, 2, 3};
  for (double r1 : rates)
    for (double r2 : rates)
      for (double g : {1.0, 10.0, 100.0}) {
        const double q = phi_quadrature(r1, r2, g, g).value;
        const double h = phi_foxh(r1, r2, g, g);
        CAPTURE(r1);
        CAPTURE(r2);
        CAPTURE(g);
        CHECK(std::abs(h - q) <= 1e-6 * std::max(1.0, std::abs(q)));
      }
  const auto e = outage_k2_foxh(RateSchedule{1, 1}, PowerProfile{10, 10});
  CHECK(e.method == Method::fox_h);
  CHECK(e.value == doctest::Approx(0.0154602058).epsilon(1e-8));
}

TEST_CASE("Fox-H phi vanishes for a dominated integrand") {
  // very low SNR: z large, both H terms are negligible
  const double q = phi_quadrature(1, 1, 0.02, 0.02).value;
  const double h = phi_foxh(1, 1, 0.02, 0.02);
  CHECK(std::abs(h) < 1e-6);
  CHECK(std::abs(h - q) < 1e-6);
}

TEST_CASE("Fox-H parameter validation") {
  FoxHParams11 p;
  CHECK_NOTHROW(validate(p));
  p.nodes = 63;
  CHECK_THROWS_AS(validate(p), DomainError);
  p = {};
  p.contour_c = 0.0;
  CHECK_THROWS_AS(validate(p), DomainError);
  p = {};
  p.refine_tol = 0.0;
  CHECK_THROWS_AS(validate(p), DomainError);
  CHECK_THROWS_AS(incomplete_h11(1.0, 0.0, FoxHParams11{0.5, 60, 32, 1e-8}), DomainError);
}
