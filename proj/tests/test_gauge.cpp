#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "finsler/errors.hpp"
#include "finsler/gauge.hpp"
#include "oracles.hpp"

using namespace finsler;

namespace {

// Residuals of the gauge ODE system at B, with derivatives taken by central
// differences of the triple.
std::array<double, 3> ode_residual(const UvwGauge& g, double B, double h) {
  const auto p = g.params();
  const auto c = g.eval(B), lo = g.eval(B - h), hi = g.eval(B + h);
  const double q = p.f1_t(B);
  const double du = (hi.u - lo.u) / (2 * h);
  const double dv = (hi.v - lo.v) / (2 * h);
  const double dw = (hi.w - lo.w) / (2 * h);
  return {du - (c.v - p.k1 * c.u) / q,
          dv - (c.u * (p.k2 * c.u - p.k3 * c.v - 2 * p.k1 * c.v) +
                2 * c.v * c.v) /
                   (c.u * q),
          dw - c.w * (3 * c.v - p.k3 * c.u - 2 * p.k1 * c.u) / (2 * c.u * q)};
}

}  // namespace

TEST_CASE("square-family closed forms solve the gauge ODE system") {
  for (const int sign : {+1, -1}) {
    const UvwGauge g = square_gauge(sign, sign > 0 ? 0.8 : 0.4);
    for (double B = 0.05; B < (sign > 0 ? 0.75 : 0.35); B += 0.1) {
      const auto r = ode_residual(g, B, 1e-5);
      CHECK(std::abs(r[0]) < 1e-8);
      CHECK(std::abs(r[1]) < 1e-8);
      CHECK(std::abs(r[2]) < 1e-8);
      const auto c = g.eval(B);
      const double e = sign > 0 ? 1 - B : 1 + B;
      CHECK(c.u == doctest::Approx(e * e).epsilon(1e-13));
      CHECK(c.v == doctest::Approx(0.0).epsilon(1e-13));
      CHECK(c.w == doctest::Approx(std::sqrt(e)).epsilon(1e-13));
    }
  }
}

TEST_CASE("canonical gauge solves the ODE system and starts at (1,k1+k3,1)") {
  const MetricParams p(1.0, -1.0, 0.0, 0.0);
  const UvwGauge g = canonical_gauge(p, 1.2);
  const auto c0 = g.eval(0.0);
  CHECK(c0.u == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c0.v == doctest::Approx(p.k1 + p.k3).epsilon(1e-12));
  CHECK(c0.w == doctest::Approx(1.0).epsilon(1e-12));
  for (double B = 0.1; B <= 1.1; B += 0.2) {
    const auto r = ode_residual(g, B, 1e-5);
    CHECK(std::abs(r[0]) < 1e-7);
    CHECK(std::abs(r[1]) < 1e-7);
    CHECK(std::abs(r[2]) < 1e-7);
  }
}

TEST_CASE("numeric IVP matches the canonical closed form") {
  const MetricParams p(0.7, 0.9, -0.4, 0.0);
  const UvwGauge can = canonical_gauge(p, 0.8);
  const UvwGauge ivp =
      solve_gauge_ivp(p, 1.0, p.k1 + p.k3, 1.0, 0.8, 1e-12);
  for (double B = 0.0; B <= 0.8; B += 0.08) {
    const auto a = can.eval(B), b = ivp.eval(B);
    CHECK(a.u == doctest::Approx(b.u).epsilon(1e-9));
    CHECK(a.v == doctest::Approx(b.v).epsilon(1e-9));
    CHECK(a.w == doctest::Approx(b.w).epsilon(1e-9));
  }
}

TEST_CASE("gauge-change covariance: scaled initial data scales the triple") {
  const MetricParams p(0.5, -0.6, 0.3, 0.0);
  const UvwGauge can = canonical_gauge(p, 0.6);
  const UvwGauge scaled =
      solve_gauge_ivp(p, 2.0, 2.0 * (p.k1 + p.k3), 3.0, 0.6, 1e-12);
  for (double B = 0.0; B <= 0.6; B += 0.1) {
    const auto a = can.eval(B), b = scaled.eval(B);
    CHECK(b.u == doctest::Approx(2.0 * a.u).epsilon(1e-9));
    CHECK(b.v == doctest::Approx(2.0 * a.v).epsilon(1e-9));
    CHECK(b.w == doctest::Approx(3.0 * a.w).epsilon(1e-9));
    // the rho-norm relation stays strictly increasing in the scaled gauge
    if (B > 0.0)
      CHECK(scaled.norm_relation(B) > scaled.norm_relation(B - 0.1));
  }
}

TEST_CASE("norm relation inversion round trips") {
  const UvwGauge plus = square_gauge(+1, 0.9);
  for (double B = 0.0; B <= 0.85; B += 0.05) {
    // closed form for sign +: w^2 B/(u+vB) = B/(1-B)
    CHECK(plus.norm_relation(B) == doctest::Approx(B / (1 - B)).epsilon(1e-12));
    CHECK(invert_norm_relation(plus.norm_relation(B), plus) ==
          doctest::Approx(B).epsilon(1e-10));
  }
  const UvwGauge minus = square_gauge(-1, 0.45);
  for (double B = 0.0; B <= 0.45; B += 0.05)
    CHECK(minus.norm_relation(B) ==
          doctest::Approx(B / (1 + B)).epsilon(1e-12));
  const UvwGauge can = canonical_gauge(MetricParams(1.1, 0.4, -0.2, 0), 0.7);
  for (double target : {0.01, 0.1, 0.3}) {
    const double B = invert_norm_relation(target, can);
    CHECK(can.norm_relation(B) == doctest::Approx(target).epsilon(1e-10));
  }
  CHECK_THROWS_AS(invert_norm_relation(1e9, can), TargetOutOfRange);
}

TEST_CASE("transform and inverse transform round trip") {
  const UvwGauge g = canonical_gauge(MetricParams(0.9, -0.5, 0.2, 0), 0.5);
  const double B = 0.3, alpha_sq = 1.7, beta = 0.4;
  const auto [h_sq, rho] = transform(alpha_sq, beta, B, g);
  const auto [a2, b2] = inverse_transform(h_sq, rho, B, g);
  CHECK(a2 == doctest::Approx(alpha_sq).epsilon(1e-12));
  CHECK(b2 == doctest::Approx(beta).epsilon(1e-12));
}

TEST_CASE("sigma matches direct quadrature of its integrand") {
  const MetricParams p(0.6, 0.8, -0.1, 0.0);
  const UvwGauge g = canonical_gauge(p, 0.9);
  for (double B : {0.1, 0.45, 0.85}) {
    const double direct = finsler::num::integrate(
        [&](double t) { return 0.5 * (p.k2 * t + p.k3) / p.f1_t(t); }, 0.0, B,
        1e-13);
    CHECK(g.sigma(B) == doctest::Approx(direct).epsilon(1e-10));
    // and u = e^{2 sigma}, w = sqrt(q) e^{sigma} in this gauge
    const auto c = g.eval(B);
    CHECK(c.u == doctest::Approx(std::exp(2 * direct)).epsilon(1e-9));
    CHECK(c.w ==
          doctest::Approx(std::sqrt(p.f1_t(B)) * std::exp(direct))
              .epsilon(1e-9));
  }
}
