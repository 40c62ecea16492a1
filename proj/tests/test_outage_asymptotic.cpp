#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "xpharq/errors.hpp"
#include "xpharq/outage_asymptotic.hpp"
#include "xpharq/outage_exact.hpp"
#include "xpharq/quadrature.hpp"

using namespace xpharq;

namespace {
constexpr double ln2 = std::numbers::ln2;
}

TEST_CASE("asymptotic phi converges to the quadrature value") {
  const double q = phi_quadrature(1, 1, 1e4, 1e4).value;
  CHECK(std::abs(phi_asymptotic(1, 1, 1e4, 1e4) - q) < 0.01 * q);
  CHECK(phi_asymptotic(1e-12, 1, 100, 100) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("asymptotic phi equals its four-term residue form") {
  // e^{1/g1+1/g2} [Gamma(1,b_lo) - Gamma(0,b_lo) z - Gamma(1,b_hi) + Gamma(0,b_hi) z]
  // with Gamma(1,x) = e^{-x} and Gamma(0,x) ~ -ln x
  const double g1 = 100, g2 = 100, r1 = 1, r2 = 1;
  const double z = std::exp2(r1 + r2) / (g1 * g2);
  const double blo = std::exp2(r2) / g2, bhi = std::exp2(r1 + r2) / g2;
  const double four_terms = std::exp(1 / g1 + 1 / g2) *
                            (std::exp(-blo) + std::log(blo) * z - std::exp(-bhi) -
                             std::log(bhi) * z);
  CHECK(phi_asymptotic(r1, r2, g1, g2) == doctest::Approx(four_terms).epsilon(1e-12));
}

TEST_CASE("two-round asymptotic outage") {
  const double c = 4 * ln2 - 1;
  CHECK(outage_k2_asymptotic(RateSchedule{1, 1}, PowerProfile{1, 1}) ==
        doctest::Approx(c).epsilon(1e-14));
  for (double g : {10.0, 1e3, 1e6})
    CHECK(outage_k2_asymptotic(RateSchedule{1, 1}, PowerProfile{g, 2 * g}) * 2 * g * g ==
          doctest::Approx(c).epsilon(1e-13));
  CHECK_THROWS_AS(outage_k2_asymptotic(RateSchedule{1}, PowerProfile{1}), ContractError);
}

TEST_CASE("hbar table for two rounds") {
  const auto t = build_hbar_table(RateSchedule{1, 1});
  CHECK(t.rounds() == 2);
  CHECK(t.coeff(2, 0) == 4.0);
  CHECK(t.coeff(1, 1) == doctest::Approx(-4.0));
  CHECK(t.coeff(1, 0) == doctest::Approx(4 * ln2 - 2).epsilon(1e-14));
  CHECK(hbar_eval(t, 2, 1.0) == doctest::Approx(3.0));
  CHECK(hbar_eval(t, 1, 1.0) == doctest::Approx(4 * ln2 - 1).epsilon(1e-14));
}

TEST_CASE("hbar table for three unit rates") {
  const auto t = build_hbar_table(RateSchedule{1, 1, 1});
  CHECK(t.coeff(3, 0) == 8.0);
  CHECK(t.coeff(2, 1) == doctest::Approx(-8.0));
  CHECK(t.coeff(2, 0) == doctest::Approx(16 * ln2 - 4).epsilon(1e-14));
  CHECK(t.coeff(1, 2) == doctest::Approx(4.0));
  CHECK(t.coeff(1, 1) == doctest::Approx(4 - 16 * ln2).epsilon(1e-14));
  CHECK(t.coeff(1, 0) == doctest::Approx(12 * ln2 * ln2 - 4 * ln2 + 2).epsilon(1e-14));
  const double closed = 12 * ln2 * ln2 - 4 * ln2 + 1;
  CHECK(std::abs(hbar_eval(t, 1, 1.0) - closed) < 1e-12);
  CHECK(std::abs(hbar_nested_quadrature(RateSchedule{1, 1, 1}, 1, 1.0).value - closed) <
        1e-9);
}

TEST_CASE("hbar table errors") {
  CHECK_THROWS_AS(build_hbar_table(RateSchedule{1}), ContractError);
  const auto t = build_hbar_table(RateSchedule{1, 1});
  CHECK_THROWS_AS(hbar_eval(t, 0, 1.0), ContractError);
  CHECK_THROWS_AS(hbar_eval(t, 3, 1.0), ContractError);
  CHECK_THROWS_AS(hbar_eval(t, 1, 0.5), DomainError);
  CHECK_THROWS_AS(t.coeff(1, 2), ContractError);
}

TEST_CASE("property: recursion matches nested quadrature on random schedules") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> rate(0.25, 3.0);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t K = 2 + trial % 4;
    std::vector<double> r(K);
    for (auto& v : r) v = rate(rng);
    const RateSchedule rs(r);
    const double table = hbar_eval(build_hbar_table(rs), 1, 1.0);
    const double nested = hbar_nested_quadrature(rs, 1, 1.0).value;
    CAPTURE(K);
    CHECK(std::abs(table - nested) <= 1e-8 * std::abs(nested));
    CHECK(table > 0.0);
  }
}

TEST_CASE("property: induction identity") {
  // int_x^{2^{R_k^sum}} t^{-1} hbar_{K,k+1}(t) dt = hbar_{K,k}(x)
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> rate(0.25, 2.5), frac(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t K = 2 + trial % 4;
    std::vector<double> r(K);
    for (auto& v : r) v = rate(rng);
    const RateSchedule rs(r);
    const auto t = build_hbar_table(rs);
    const std::size_t k = 1 + trial % (K - 1);
    const double upper = std::exp2(rs.cumulative(k));
    const double x = 1.0 + frac(rng) * (upper - 1.0);
    const double lhs = integrate_adaptive(
                           [&](double s) { return hbar_eval(t, k + 1, s) / s; }, x, upper,
                           Tolerance{1e-14, 1e-13})
                           .value;
    CHECK(lhs == doctest::Approx(hbar_eval(t, k, x)).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("general asymptotic outage") {
  CHECK(outage_asymptotic_general(RateSchedule{1, 1}, PowerProfile{100, 100}) ==
        doctest::Approx((4 * ln2 - 1) / 1e4).epsilon(1e-13));
  CHECK(outage_asymptotic_general(RateSchedule{1, 1, 1}, PowerProfile::uniform(3, 100)) ==
        doctest::Approx(3.9928474e-6).epsilon(1e-7));
  const double g = 1e6;
  const double exact = xp_outage_quadrature(RateSchedule{1, 1, 1}, PowerProfile::uniform(3, g))
                           .value;
  CHECK(std::abs(outage_asymptotic_general(RateSchedule{1, 1, 1},
                                           PowerProfile::uniform(3, g)) /
                     exact -
                 1) < 0.05);
}

TEST_CASE("diversity order fit") {
  std::vector<std::pair<double, double>> pts;
  for (double db = 0; db <= 40; db += 10) {
    const double g = db_to_linear(db);
    pts.emplace_back(g, 3.7 / (g * g));
  }
  const auto fit = diversity_order_fit(pts);
  CHECK(fit.diversity_order() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(std::log10(3.7)).epsilon(1e-12));
  CHECK(fit.points.size() == 5);

  std::vector<std::pair<double, double>> k3;
  for (double db = 50; db <= 70; db += 5) {
    const double g = db_to_linear(db);
    k3.emplace_back(g, outage_asymptotic_general(RateSchedule{1, 2, 0.5},
                                                 PowerProfile::uniform(3, g)));
  }
  CHECK(std::abs(diversity_order_fit(k3).diversity_order() - 3.0) < 1e-9);

  std::vector<std::pair<double, double>> k2;
  for (double db = 50; db <= 70; db += 5) {
    const double g = db_to_linear(db);
    k2.emplace_back(g, outage_k2_exact(RateSchedule{1, 1}, PowerProfile{g, g}).value);
  }
  CHECK(std::abs(diversity_order_fit(k2).diversity_order() - 2.0) < 0.1);
}

TEST_CASE("diversity order fit input checks") {
  std::vector<std::pair<double, double>> two{{1, 0.1}, {10, 0.01}};
  CHECK_THROWS_AS(diversity_order_fit(two), ContractError);
  std::vector<std::pair<double, double>> zero{{1, 0.1}, {10, 0.0}, {100, 0.001}};
  CHECK_THROWS_AS(diversity_order_fit(zero), DomainError);
  std::vector<std::pair<double, double>> unordered{{10, 0.1}, {1, 0.01}, {100, 0.001}};
  CHECK_THROWS_AS(diversity_order_fit(unordered), ContractError);
}
