#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "doctest.h"
#include "finsler/errors.hpp"
#include "finsler/sphere.hpp"

using namespace finsler;

namespace {

Point rand_point(std::mt19937& rng, int n, double scale) {
  std::uniform_real_distribution<double> U(-scale, scale);
  Point x(n);
  for (double& v : x) v = U(rng);
  return x;
}

NavigationBundle make_bundle(double mu, double k, std::vector<double> xi) {
  const MetricParams p(2, 0, -3, 0);
  return NavigationBundle(SphereData(mu, k, std::move(xi)), p,
                          canonical_gauge(p));
}

}  // namespace

TEST_CASE("metric matrix reproduces the squared norm and inverts") {
  std::mt19937 rng(71);
  const double mu = 1.4;
  for (int trial = 0; trial < 10; ++trial) {
    const Point x = rand_point(rng, 3, 0.5);
    const Point y = rand_point(rng, 3, 1.0);
    const auto H = h_metric(x, mu, 3);
    const auto Hinv = h_metric_inverse(x, mu, 3);
    double quad = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) quad += H[i * 3 + j] * y[i] * y[j];
    CHECK(quad == doctest::Approx(h_sq_eval(x, y, mu)).epsilon(1e-12));
    Eigen::Map<const Eigen::Matrix3d> A(H.data()), B(Hinv.data());
    CHECK(((A * B) - Eigen::Matrix3d::Identity()).norm() < 1e-12);
  }
}

TEST_CASE("christoffel symbols match finite differences of the metric") {
  const double mu = 0.9;
  const Point x = {0.21, -0.34};
  const int n = 2;
  const double eps = 1e-6;
  const auto Hinv = h_metric_inverse(x, mu, n);
  auto dH = [&](int dir, int i, int j) {
    Point xp = x, xm = x;
    xp[dir] += eps;
    xm[dir] -= eps;
    return (h_metric(xp, mu, n)[i * n + j] - h_metric(xm, mu, n)[i * n + j]) /
           (2 * eps);
  };
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double fd = 0.0;
        for (int l = 0; l < n; ++l)
          fd += 0.5 * Hinv[k * n + l] *
                (dH(i, j, l) + dH(j, i, l) - dH(l, i, j));
        CHECK(h_christoffel(x, mu, k, i, j) ==
              doctest::Approx(fd).epsilon(1e-6));
      }
}

TEST_CASE("delta is constant over the chart") {
  const SphereData d(1.2, 0.3, {0.15, -0.08, 0.2});
  std::mt19937 rng(99);
  const double d0 = delta_of(d);
  for (int trial = 0; trial < 25; ++trial) {
    const Point x = rand_point(rng, 3, 0.6);
    CHECK(delta_at(x, d) == doctest::Approx(d0).epsilon(1e-11));
  }
}

TEST_CASE("pole finding: generic, centered, and at-infinity data") {
  SUBCASE("generic data: gradient vanishes, |c| = delta/sqrt(mu)") {
    const SphereData d(1.0, 0.4, {0.1, -0.2});
    const auto poles = find_c_poles(d);
    for (const Pole* p : {&poles.P, &poles.Q}) {
      if (!p->x) continue;
      CHECK(std::sqrt(grad_c_norm_sq(*p->x, d)) < 1e-9);
      CHECK(std::abs(p->c_value) ==
            doctest::Approx(delta_of(d) / std::sqrt(d.mu)).epsilon(1e-9));
    }
  }
  SUBCASE("xi = 0 puts a pole at the chart origin") {
    const SphereData d(2.0, 0.5, {0.0, 0.0});
    const auto poles = find_c_poles(d);
    const bool origin_P = poles.P.x && num::norm(*poles.P.x) < 1e-12;
    const bool origin_Q = poles.Q.x && num::norm(*poles.Q.x) < 1e-12;
    CHECK((origin_P || origin_Q));
  }
  SUBCASE("k = 0, xi = e1 puts both poles at infinity") {
    const SphereData d(1.0, 0.0, {0.3, 0.0});
    const auto poles = find_c_poles(d);
    CHECK_FALSE(poles.P.x);
    CHECK_FALSE(poles.Q.x);
    CHECK(std::abs(poles.P.c_value) ==
          doctest::Approx(delta_of(d) / std::sqrt(d.mu)).epsilon(1e-10));
  }
  SUBCASE("vanishing data is rejected") {
    CHECK_THROWS_AS(find_c_poles(SphereData(1.0, 0.0, {0.0, 0.0})),
                    DegenerateField);
  }
}

TEST_CASE("ambient lift round trips") {
  std::mt19937 rng(123);
  const double mu = 1.7;
  for (int trial = 0; trial < 10; ++trial) {
    const Point x = rand_point(rng, 3, 0.5);
    const Point v = rand_point(rng, 3, 1.0);
    const Point p = chart::to_ambient(x, mu);
    CHECK(num::dot(p, p) == doctest::Approx(1.0 / mu).epsilon(1e-12));
    const Point dp = chart::to_ambient_velocity(x, v, mu);
    CHECK(num::dot(p, dp) == doctest::Approx(0.0).epsilon(1e-12));
    const Point xb = chart::from_ambient(p, mu);
    const Point vb = chart::from_ambient_velocity(p, dp, mu);
    for (int i = 0; i < 3; ++i) {
      CHECK(xb[i] == doctest::Approx(x[i]).epsilon(1e-11));
      CHECK(vb[i] == doctest::Approx(v[i]).epsilon(1e-10));
    }
  }
}

TEST_CASE("ambient functional represents c and round trips") {
  const SphereData d(1.3, 0.25, {0.12, -0.3});
  const auto a = chart::ambient_functional(d);
  std::mt19937 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Point x = rand_point(rng, 2, 0.5);
    const Point p = chart::to_ambient(x, d.mu);
    CHECK(num::dot(a, p) == doctest::Approx(c_eval(x, d)).epsilon(1e-11));
  }
  const SphereData back = chart::data_from_functional(a, d.mu);
  CHECK(back.k == doctest::Approx(d.k).epsilon(1e-12));
  CHECK(back.xi[0] == doctest::Approx(d.xi[0]).epsilon(1e-12));
  CHECK(back.xi[1] == doctest::Approx(d.xi[1]).epsilon(1e-12));
}

TEST_CASE("reconstruction is consistent with the gauge norm relation") {
  const auto bundle = make_bundle(1.0, 0.3, {0.1, -0.05});
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const Point x = rand_point(rng, 2, 0.4);
    const Point y = rand_point(rng, 2, 1.0);
    const auto rec = reconstruct(x, y, bundle);
    const double delta = bundle.delta();
    const double mu = bundle.sphere().mu;
    const double target =
        4.0 * (delta * delta - mu * rec.c * rec.c) / (mu * mu);
    CHECK(bundle.gauge().norm_relation(rec.B) ==
          doctest::Approx(std::max(target, 0.0)).epsilon(1e-9));
    // h^2 = u alpha^2 + v beta^2 at the recovered point
    CHECK(rec.h_sq == doctest::Approx(rec.gauge.u * rec.alpha * rec.alpha +
                                      rec.gauge.v * rec.beta * rec.beta)
                          .epsilon(1e-9));
    CHECK(rec.s == doctest::Approx(rec.beta / rec.alpha).epsilon(1e-12));
  }
}

TEST_CASE("finsler norm is positively 1-homogeneous in y") {
  const auto bundle = make_bundle(1.1, 0.2, {0.05, 0.1});
  const Point x = {0.12, -0.2};
  const Point y = {0.7, 0.4};
  const double F = finsler_norm(x, y, bundle);
  CHECK(F > 0.0);
  for (const double lam : {0.5, 2.0, 7.3}) {
    Point ly = y;
    for (double& v : ly) v *= lam;
    CHECK(finsler_norm(x, ly, bundle) ==
          doctest::Approx(lam * F).epsilon(1e-11));
  }
}

TEST_CASE("bundle rejects navigation data exceeding the regular range") {
  // F0- family: delta above the admissibility threshold must be refused.
  const MetricParams p(-2, 0, 3, 0);
  const double mu = 1.0;
  auto try_delta = [&](double delta) {
    const double k = 2 * delta / std::sqrt(mu);
    return NavigationBundle(SphereData(mu, k, {0.0, 0.0}), p,
                            square_gauge(-1, 0.499));
  };
  CHECK_THROWS_AS(try_delta(0.29), RegularityViolated);
  CHECK_NOTHROW(try_delta(0.20));
}

TEST_CASE("with_sphere keeps invariants and rejects non-isometric data") {
  const auto bundle = make_bundle(1.0, 0.3, {0.1, 0.0});
  // rotating the functional preserves delta
  const auto a = chart::ambient_functional(bundle.sphere());
  std::vector<double> a_rot = {a[1], a[0], a[2]};
  const auto rotated =
      bundle.with_sphere(chart::data_from_functional(a_rot, 1.0));
  CHECK(rotated.delta() == doctest::Approx(bundle.delta()).epsilon(1e-12));
  CHECK_THROWS_AS(bundle.with_sphere(SphereData(1.0, 0.9, {0.1, 0.0})),
                  InvalidArgument);
}
