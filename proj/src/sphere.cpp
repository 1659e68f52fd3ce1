#include "finsler/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "finsler/errors.hpp"

namespace finsler {

namespace {

double dot(const Point& a, const Point& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm_sq(const Point& a) { return dot(a, a); }

}  // namespace

SphereData::SphereData(double mu_, double k_, std::vector<double> xi_)
    : mu(mu_), k(k_), xi(std::move(xi_)) {
  if (!(mu > 0)) throw InvalidArgument("SphereData: mu must be positive");
  if (xi.size() < 2) throw InvalidArgument("SphereData: dimension must be >= 2");
}

double h_sq_eval(const Point& x, const Point& y, double mu) {
  const double w2 = 1.0 + mu * norm_sq(x);
  const double xy = dot(x, y);
  return (w2 * norm_sq(y) - mu * xy * xy) / (w2 * w2);
}

double h_eval(const Point& x, const Point& y, double mu) {
  return std::sqrt(std::max(h_sq_eval(x, y, mu), 0.0));
}

std::vector<double> h_metric(const Point& x, double mu, int n) {
  const double w2 = 1.0 + mu * norm_sq(x);
  std::vector<double> m(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m[i * n + j] = ((i == j ? w2 : 0.0) - mu * x[i] * x[j]) / (w2 * w2);
  return m;
}

std::vector<double> h_metric_inverse(const Point& x, double mu, int n) {
  const double w2 = 1.0 + mu * norm_sq(x);
  std::vector<double> m(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m[i * n + j] = w2 * ((i == j ? 1.0 : 0.0) + mu * x[i] * x[j]);
  return m;
}

double h_christoffel(const Point& x, double mu, int k, int i, int j) {
  const double w2 = 1.0 + mu * norm_sq(x);
  return -mu * ((k == i ? x[j] : 0.0) + (k == j ? x[i] : 0.0)) / w2;
}

double c_eval(const Point& x, const SphereData& d) {
  const double w2 = 1.0 + d.mu * norm_sq(x);
  return (-d.k + d.mu * dot(d.xi, x)) / (2.0 * std::sqrt(w2));
}

std::vector<double> grad_c_cov(const Point& x, const SphereData& d) {
  const int n = d.dim();
  const double w2 = 1.0 + d.mu * norm_sq(x);
  const double num = d.k - d.mu * dot(d.xi, x);
  const double fac = d.mu / (2.0 * std::pow(w2, 1.5));
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = fac * (d.xi[i] * w2 + num * x[i]);
  return g;
}

double c0_eval(const Point& x, const Point& y, const SphereData& d) {
  return dot(grad_c_cov(x, d), y);
}

double grad_c_norm_sq(const Point& x, const SphereData& d) {
  const int n = d.dim();
  const std::vector<double> ci = grad_c_cov(x, d);
  const std::vector<double> hinv = h_metric_inverse(x, d.mu, n);
  double s = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += hinv[i * n + j] * ci[i] * ci[j];
  return s;
}

double delta_at(const Point& x, const SphereData& d) {
  const double c = c_eval(x, d);
  return std::sqrt(std::max(grad_c_norm_sq(x, d) + d.mu * c * c, 0.0));
}

double delta_of(const SphereData& d) {
  return delta_at(Point(d.dim(), 0.0), d);
}

Poles find_c_poles(const SphereData& d) {
  const int n = d.dim();
  const double delta = delta_of(d);
  if (delta < 1e-14)
    throw DegenerateField("find_c_poles: c is constant (delta = 0)");
  const double pole_c = delta / std::sqrt(d.mu);

  const double g = std::sqrt(norm_sq(d.xi));
  if (g < 1e-14) {
    // c has its critical point at the chart origin; the antipode is outside.
    Point origin(n, 0.0);
    Pole P{origin, {}, c_eval(origin, d)};
    Pole Q{std::nullopt, {}, -P.c_value};
    return {P, Q};
  }

  std::vector<double> dir(n);
  for (int i = 0; i < n; ++i) dir[i] = d.xi[i] / g;
  // Axial component of grad c at r*dir, up to a positive factor.
  auto axial = [&](double r) {
    Point x(n);
    for (int i = 0; i < n; ++i) x[i] = r * dir[i];
    return dot(grad_c_cov(x, d), dir);
  };

  double lo = -1.0, hi = 1.0;
  bool bracketed = false;
  for (int it = 0; it < 30; ++it) {
    if ((axial(lo) > 0) != (axial(hi) > 0)) {
      bracketed = true;
      break;
    }
    lo *= 2;
    hi *= 2;
  }
  if (!bracketed) {
    // Both vanishing points sit on the chart's boundary sphere at infinity.
    std::vector<double> neg(n);
    for (int i = 0; i < n; ++i) neg[i] = -dir[i];
    Pole P{std::nullopt, dir, pole_c};
    Pole Q{std::nullopt, neg, -pole_c};
    return {P, Q};
  }
  const double r = num::bisect(axial, lo, hi, 0.0, 1e-14);
  Point xp(n);
  for (int i = 0; i < n; ++i) xp[i] = r * dir[i];
  Pole P{xp, {}, c_eval(xp, d)};
  Pole Q{std::nullopt, {}, -P.c_value};
  return {P, Q};
}

namespace chart {

Point to_ambient(const Point& x, double mu) {
  const int n = static_cast<int>(x.size());
  const double rt = std::sqrt(1.0 + mu * norm_sq(x));
  Point p(n + 1);
  for (int i = 0; i < n; ++i) p[i] = x[i] / rt;
  p[n] = 1.0 / (std::sqrt(mu) * rt);
  return p;
}

Point to_ambient_velocity(const Point& x, const Point& v, double mu) {
  const int n = static_cast<int>(x.size());
  const double w2 = 1.0 + mu * norm_sq(x);
  const double rt = std::sqrt(w2);
  const double xv = dot(x, v);
  Point dp(n + 1);
  for (int i = 0; i < n; ++i)
    dp[i] = v[i] / rt - mu * xv * x[i] / (w2 * rt);
  dp[n] = -mu * xv / (std::sqrt(mu) * w2 * rt);
  return dp;
}

Point from_ambient(const Point& p, double mu) {
  const int n = static_cast<int>(p.size()) - 1;
  if (!(p[n] > 0))
    throw ChartExit("from_ambient: point is outside the chart hemisphere");
  Point x(n);
  for (int i = 0; i < n; ++i) x[i] = p[i] / (std::sqrt(mu) * p[n]);
  return x;
}

Point from_ambient_velocity(const Point& p, const Point& dp, double mu) {
  const int n = static_cast<int>(p.size()) - 1;
  const double rm = std::sqrt(mu);
  Point v(n);
  for (int i = 0; i < n; ++i)
    v[i] = dp[i] / (rm * p[n]) - p[i] * dp[n] / (rm * p[n] * p[n]);
  return v;
}

std::vector<double> ambient_functional(const SphereData& d) {
  const int n = d.dim();
  std::vector<double> a(n + 1);
  for (int i = 0; i < n; ++i) a[i] = 0.5 * d.mu * d.xi[i];
  a[n] = -0.5 * d.k * std::sqrt(d.mu);
  return a;
}

SphereData data_from_functional(const std::vector<double>& a, double mu) {
  const int n = static_cast<int>(a.size()) - 1;
  std::vector<double> xi(n);
  for (int i = 0; i < n; ++i) xi[i] = 2.0 * a[i] / mu;
  return SphereData(mu, -2.0 * a[n] / std::sqrt(mu), xi);
}

}  // namespace chart

NavigationBundle::NavigationBundle(SphereData sphere, MetricParams params,
                                   UvwGauge gauge)
    : sphere_(std::move(sphere)),
      params_(params),
      gauge_(std::move(gauge)),
      delta_(delta_of(sphere_)),
      b_sq_max_(0.0),
      phi_(solve_phi(params, 1e-3, 1e-9)) {
  const auto& gp = gauge_.params();
  if (gp.k1 != params_.k1 || gp.k2 != params_.k2 || gp.k3 != params_.k3)
    throw InvalidArgument("NavigationBundle: gauge/params family mismatch");
  const double mu = sphere_.mu;
  const double target = 4.0 * delta_ * delta_ / (mu * mu);
  try {
    b_sq_max_ = invert_norm_relation(target, gauge_);
  } catch (const TargetOutOfRange&) {
    throw RegularityViolated(
        "NavigationBundle: recovered b^2 leaves the gauge range (mu, delta "
        "inadmissible for this family)");
  }
  const double reg = regularity_range(params_);
  if (!(b_sq_max_ < reg))
    throw RegularityViolated(
        "NavigationBundle: recovered b^2 reaches the regular-range supremum");
  if (b_sq_max_ > 0)
    phi_ = solve_phi(params_, std::sqrt(b_sq_max_), 1e-9);
}

NavigationBundle NavigationBundle::with_sphere(SphereData s) const {
  // delta, b_sq_max and phi are rotation invariants, so reuse them instead of
  // re-running the full construction.
  NavigationBundle b(*this);
  b.sphere_ = std::move(s);
  b.delta_ = delta_of(b.sphere_);
  if (std::abs(b.delta_ - delta_) > 1e-8 * (1.0 + delta_))
    throw InvalidArgument("with_sphere: navigation data is not isometric");
  return b;
}

Reconstruction reconstruct_core(double h_sq, double c, double c0,
                                const NavigationBundle& bundle) {
  const double mu = bundle.sphere().mu;
  Reconstruction r;
  r.h_sq = h_sq;
  r.c = c;
  r.c0 = c0;
  const double delta = bundle.delta();
  const double target =
      std::max(4.0 * (delta * delta - mu * r.c * r.c) / (mu * mu), 0.0);
  try {
    r.B = invert_norm_relation(target, bundle.gauge());
  } catch (const TargetOutOfRange&) {
    throw OutOfRegularRange("reconstruct: recovered b^2 leaves the gauge range");
  }
  r.gauge = bundle.gauge().eval(r.B);
  r.beta = 2.0 * r.c0 / (mu * r.gauge.w);
  const double alpha_sq =
      (r.h_sq - 4.0 * r.gauge.v * r.c0 * r.c0 / (mu * mu * r.gauge.w * r.gauge.w)) /
      r.gauge.u;
  if (!(alpha_sq > 0))
    throw NonPositiveResult("reconstruct: alpha^2 is not positive");
  r.alpha = std::sqrt(alpha_sq);
  r.s = r.beta / r.alpha;
  return r;
}

Reconstruction reconstruct(const Point& x, const Point& y,
                           const NavigationBundle& bundle) {
  const SphereData& d = bundle.sphere();
  return reconstruct_core(h_sq_eval(x, y, d.mu), c_eval(x, d),
                          c0_eval(x, y, d), bundle);
}

double finsler_norm(const Point& x, const Point& y,
                    const NavigationBundle& bundle) {
  const Reconstruction r = reconstruct(x, y, bundle);
  double s = r.s;
  const double sm = bundle.phi().s_max();
  s = std::clamp(s, -sm, sm);
  return r.alpha * bundle.phi().phi(s);
}

}  // namespace finsler
