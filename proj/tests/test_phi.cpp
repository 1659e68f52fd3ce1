#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "finsler/errors.hpp"
#include "finsler/phi.hpp"
#include "oracles.hpp"

using namespace finsler;

TEST_CASE("randers type is rejected") {
  CHECK_THROWS_AS(MetricParams(1.0, 2.0, 2.0, 0.1), InvalidArgument);
  CHECK_NOTHROW(MetricParams(1.0, 2.0, 1.9, 0.1));
}

TEST_CASE("square families have the closed form 1 + eps s +/- s^2") {
  for (const double eps : {0.0, 0.5, 2.0}) {
    const PhiSolution plus = solve_phi(MetricParams(2, 0, -3, eps), 0.9, 1e-12);
    const PhiSolution minus =
        solve_phi(MetricParams(-2, 0, 3, eps), 0.6, 1e-12);
    for (double s = -0.55; s <= 0.55; s += 0.11) {
      CHECK(plus.phi(s) == doctest::Approx(1 + eps * s + s * s).epsilon(1e-13));
      CHECK(plus.dphi(s) == doctest::Approx(eps + 2 * s).epsilon(1e-13));
      CHECK(plus.ddphi(s) == doctest::Approx(2.0).epsilon(1e-13));
      CHECK(minus.phi(s) ==
            doctest::Approx(1 + eps * s - s * s).epsilon(1e-13));
      CHECK(minus.ddphi(s) == doctest::Approx(-2.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("taylor coefficients match the numeric solution at small s") {
  const MetricParams p(1.2, -0.7, 0.4, 0.15);
  const auto c = taylor_phi(p);
  CHECK(c[0] == 1.0);
  CHECK(c[1] == p.epsilon);
  CHECK(c[2] == doctest::Approx(p.k1 / 2).epsilon(1e-15));
  CHECK(c[3] == 0.0);
  const PhiSolution phi = solve_phi(p, 0.3, 1e-10);
  for (const double s : {0.01, 0.02, -0.015}) {
    double taylor = 0.0, sp = 1.0;
    for (const double ck : c) {
      taylor += ck * sp;
      sp *= s;
    }
    CHECK(std::abs(phi.phi(s) - taylor) < 1e-9 * std::abs(s));
  }
}

TEST_CASE("numeric solutions agree with a fixed-step RK4 oracle") {
  std::mt19937 rng(411);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  int done = 0;
  while (done < 12) {
    const double k1 = U(rng), k2 = U(rng), k3 = U(rng);
    if (std::abs(k2 - k1 * k3) < 0.05) continue;
    const MetricParams p(k1, k2, k3, 0.3 * U(rng));
    const double r = regularity_range(p);
    const double s_max = 0.5 * std::min(std::sqrt(r), 1.0);
    PhiSolution phi = solve_phi(p, s_max, 1e-8);
    auto rhs = [&](double s, const oracles::Vec& y) {
      return oracles::Vec{y[1], (p.k1 + p.k2 * s * s) * (y[0] - s * y[1]) /
                                    p.f1(s)};
    };
    for (const double s : {0.3 * s_max, 0.77 * s_max, -0.9 * s_max}) {
      const auto y = oracles::rk4(rhs, 0.0, s, {1.0, p.epsilon}, 4000);
      CHECK(phi.phi(s) == doctest::Approx(y[0]).epsilon(1e-9));
      CHECK(phi.dphi(s) == doctest::Approx(y[1]).epsilon(1e-8));
      CHECK(phi.residual(s) < 1e-7);
    }
    ++done;
  }
}

TEST_CASE("phi - s phi' matches its closed quadrature form") {
  const MetricParams p(0.8, 0.5, -0.3, 0.1);
  const PhiSolution phi = solve_phi(p, 0.7, 1e-10);
  for (double s = -0.65; s <= 0.65; s += 0.13)
    CHECK(phi.phi_minus_s_dphi(s) ==
          doctest::Approx(phi.phi_minus_s_dphi_closed(s)).epsilon(1e-9));
}

TEST_CASE("regularity range closed examples") {
  CHECK(regularity_range(MetricParams(2, 0, -3, 0)) ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(regularity_range(MetricParams(-2, 0, 3, 0)) ==
        doctest::Approx(0.5).epsilon(1e-10));
  // k2 < 0 with k1 = 1, k3 = 0: positive root of 1 + t - t^2.
  CHECK(regularity_range(MetricParams(1, -1, 0, 0)) ==
        doctest::Approx((1 + std::sqrt(5.0)) / 2).epsilon(1e-10));
}

TEST_CASE("b_hat of the square families") {
  const PhiSolution plus = solve_phi(MetricParams(2, 0, -3, 2), 0.99, 1e-12);
  CHECK(b_hat(plus) == doctest::Approx(1.0).epsilon(1e-8));
  const PhiSolution minus = solve_phi(MetricParams(-2, 0, 3, 0), 0.7, 1e-12);
  CHECK(b_hat(minus) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-8));
}

TEST_CASE("direct regularity supremum on explicit phi") {
  auto one = [](double) { return 0.0; };
  CHECK(regularity_sup_direct([](double s) { return 1 + s; },
                              [](double) { return 1.0; }, one) ==
        doctest::Approx(1.0).epsilon(1e-6));
  CHECK(regularity_sup_direct([](double s) { return (1 + s) * (1 + s); },
                              [](double s) { return 2 * (1 + s); },
                              [](double) { return 2.0; }) ==
        doctest::Approx(1.0).epsilon(1e-6));
  CHECK(regularity_sup_direct([](double s) { return 1 + s * s; },
                              [](double s) { return 2 * s; },
                              [](double) { return 2.0; }) ==
        doctest::Approx(1.0).epsilon(1e-6));
  CHECK(regularity_sup_direct([](double s) { return 1 - s * s; },
                              [](double s) { return -2 * s; },
                              [](double) { return -2.0; }) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("evaluation outside the solved range throws") {
  const PhiSolution phi = solve_phi(MetricParams(1, -1, 0, 0.1), 0.4, 1e-10);
  CHECK_THROWS_AS(phi.phi(0.5), OutOfRegularRange);
}
