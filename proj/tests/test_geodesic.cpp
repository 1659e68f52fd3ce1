#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "finsler/errors.hpp"
#include "finsler/geodesic.hpp"
#include "oracles.hpp"

using namespace finsler;

namespace {

NavigationBundle make_bundle(const MetricParams& p, double mu, double k,
                             std::vector<double> xi) {
  return NavigationBundle(SphereData(mu, k, std::move(xi)), p,
                          canonical_gauge(p));
}

double dist(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("spray terms satisfy their defining relations") {
  const MetricParams p(1.0, -1.0, 0.0, 0.2);
  const PhiSolution phi = solve_phi(p, 0.6, 1e-10);
  const double s = 0.31, b_sq = 0.2;
  const auto st = spray_terms(phi, s, b_sq);
  const double denom = phi.phi(s) - s * phi.dphi(s);
  CHECK(st.Q == doctest::Approx(phi.dphi(s) / denom).epsilon(1e-11));
  CHECK(st.Qprime ==
        doctest::Approx(phi.ddphi(s) * phi.phi(s) / (denom * denom))
            .epsilon(1e-10));
  CHECK(st.Delta ==
        doctest::Approx(1 + s * st.Q + (b_sq - s * s) * st.Qprime)
            .epsilon(1e-11));
  CHECK(st.Theta ==
        doctest::Approx((st.Q - s * st.Qprime) / (2 * st.Delta))
            .epsilon(1e-11));
  CHECK(st.Psi == doctest::Approx(st.Qprime / (2 * st.Delta)).epsilon(1e-11));
}

TEST_CASE("round-metric geodesics are great circles closing at 2 pi/sqrt(mu)") {
  const double mu = 1.6;
  const Point x0 = {0.2, -0.1, 0.05};
  const Point y0 = {0.4, 1.0, -0.3};
  const GeodesicPath path =
      integrate_geodesic_h(x0, y0, 2 * M_PI / std::sqrt(mu), mu, 1e-11, 401);
  const auto& first = path.samples.front();
  const auto& last = path.samples.back();
  CHECK(dist(first.p, last.p) < 1e-8);
  // every sample lies in span{p(0), dp(0)} (the great-circle plane)
  const auto& p0 = first.p;
  const auto& d0 = first.dp;
  const double pp = num::dot(p0, p0), dd = num::dot(d0, d0),
               pd = num::dot(p0, d0);
  for (const auto& smp : path.samples) {
    // projection residual of smp.p onto span{p0, d0}
    const double a =
        (num::dot(smp.p, p0) * dd - num::dot(smp.p, d0) * pd) /
        (pp * dd - pd * pd);
    const double b =
        (num::dot(smp.p, d0) * pp - num::dot(smp.p, p0) * pd) /
        (pp * dd - pd * pd);
    Point res = smp.p;
    for (std::size_t i = 0; i < res.size(); ++i)
      res[i] -= a * p0[i] + b * d0[i];
    CHECK(num::norm(res) < 1e-7);
  }
}

TEST_CASE("projective factor is 1-homogeneous and reduces when delta = 0") {
  const MetricParams p(2, 0, -3, 0);
  const auto bundle = make_bundle(p, 1.0, 0.25, {0.07, -0.12});
  const Point x = {0.15, 0.22};
  const Point y = {0.8, -0.5};
  const double P = projective_factor(x, y, bundle);
  for (const double lam : {0.5, 3.0}) {
    Point ly = y;
    for (double& v : ly) v *= lam;
    CHECK(projective_factor(x, ly, bundle) ==
          doctest::Approx(lam * P).epsilon(1e-10));
  }
  // delta = 0: the metric is the round one up to scale, P = -mu<x,y>/w2
  const auto flat = make_bundle(p, 1.3, 0.0, {0.0, 0.0});
  const double w2 = 1 + 1.3 * num::dot(x, x);
  CHECK(projective_factor(x, y, flat) ==
        doctest::Approx(-1.3 * num::dot(x, y) / w2).epsilon(1e-10));
}

TEST_CASE("spray equals P y^i against the Euler-Lagrange oracle") {
  std::mt19937 rng(314);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const MetricParams p(1.0, -1.0, 0.0, 0.2);
  const auto bundle = make_bundle(p, 1.0, 0.22, {0.06, -0.03});
  for (int trial = 0; trial < 6; ++trial) {
    const Point x = {0.3 * U(rng), 0.3 * U(rng)};
    Point y = {U(rng), U(rng)};
    if (num::norm(y) < 0.3) y[0] += 0.5;
    const double P = projective_factor(x, y, bundle);
    const auto G = oracles::spray_fd(x, y, bundle, 2e-4);
    // a projectively flat spray: G^i = P y^i with straight-line geodesics
    CHECK(G[0] == doctest::Approx(P * y[0]).epsilon(5e-4));
    CHECK(G[1] == doctest::Approx(P * y[1]).epsilon(5e-4));
  }
}

TEST_CASE("closed geodesic of the round sphere has period 2 pi/sqrt(mu)") {
  const double mu = 1.3;
  const auto bundle =
      make_bundle(MetricParams(2, 0, -3, 0), mu, 0.0, {0.0, 0.0});
  const auto cg = closed_geodesic({0.1, -0.2}, {0.3, 1.0}, bundle, 1e-12);
  CHECK(cg.period == doctest::Approx(2 * M_PI / std::sqrt(mu)).epsilon(1e-9));
  CHECK(cg.closure_error < 1e-8);
}

TEST_CASE("pole-to-pole and equatorial lengths agree for generic families") {
  const MetricParams p(1.0, -1.0, 0.0, 0.2);
  const double mu = 1.2, delta = 0.15;
  const double L1 = length_L1(p, mu, delta, 1e-12);
  const double L2 = length_L2(p, mu, delta);
  CHECK(std::abs(L1 - L2) / L2 < 1e-8);
  CHECK(series_L(p, mu, delta) == doctest::Approx(L2).epsilon(1e-4));
}

TEST_CASE("square-gauge length closed form") {
  const double mu = 1.5;
  CHECK(length_square(+1, mu, 0.0) ==
        doctest::Approx(2 * M_PI / std::sqrt(mu)).epsilon(1e-13));
  const double d = 0.2;
  CHECK(length_square(+1, mu, d) ==
        doctest::Approx(2 * M_PI / std::sqrt(mu) +
                        8 * M_PI * d * d / (mu * mu * std::sqrt(mu)))
            .epsilon(1e-13));
  CHECK(length_square(-1, mu, d) ==
        doctest::Approx(2 * M_PI / std::sqrt(mu) -
                        8 * M_PI * d * d / (mu * mu * std::sqrt(mu)))
            .epsilon(1e-13));
  // sign - requires mu^2 > 12 delta^2
  CHECK_THROWS_AS(length_square(-1, 1.0, 0.5), OutOfRegularRange);
}

TEST_CASE("ambient norm agrees with the chart norm") {
  const auto bundle =
      make_bundle(MetricParams(2, 0, -3, 2), 1.0, 0.2, {0.05, -0.1});
  std::mt19937 rng(88);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const Point x = {0.4 * U(rng), 0.4 * U(rng)};
    const Point y = {U(rng), U(rng) + 1.2};
    const Point p = chart::to_ambient(x, 1.0);
    const Point dp = chart::to_ambient_velocity(x, y, 1.0);
    CHECK(ambient_finsler_norm(p, dp, bundle) ==
          doctest::Approx(finsler_norm(x, y, bundle)).epsilon(1e-10));
  }
}

TEST_CASE("geodesic integration crosses chart boundaries") {
  // start near the chart edge heading outward; the path must keep going and
  // stay on the ambient sphere
  const auto bundle =
      make_bundle(MetricParams(2, 0, -3, 0), 1.0, 0.2, {0.05, 0.0});
  const GeodesicPath path =
      integrate_geodesic({0.45, 0.0}, {1.0, 0.2}, 9.0, bundle, 1e-10, 301);
  CHECK(path.samples.size() == 301);
  for (const auto& smp : path.samples)
    CHECK(num::dot(smp.p, smp.p) == doctest::Approx(1.0).epsilon(1e-8));
}
