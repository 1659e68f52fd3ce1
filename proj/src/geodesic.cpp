#include "finsler/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "finsler/errors.hpp"

namespace finsler {

namespace {

double dot(const Point& a, const Point& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm_sq(const Point& a) { return dot(a, a); }

using Mat = std::vector<double>;  // row-major square

Mat identity(int n) {
  Mat m(n * n, 0.0);
  for (int i = 0; i < n; ++i) m[i * n + i] = 1.0;
  return m;
}

Point matvec(const Mat& m, const Point& v) {
  const int n = static_cast<int>(v.size());
  Point r(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r[i] += m[i * n + j] * v[j];
  return r;
}

Mat mul(const Mat& a, const Mat& b, int n) {
  Mat r(n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const double aik = a[i * n + k];
      for (int j = 0; j < n; ++j) r[i * n + j] += aik * b[k * n + j];
    }
  return r;
}

Mat transpose(const Mat& a, int n) {
  Mat r(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r[j * n + i] = a[i * n + j];
  return r;
}

// Rotation taking unit vector a to unit vector b:
//   Q = I - (a+b)(a+b)^T/(1+<a,b>) + 2 b a^T.
Mat rotation_between(const Point& a, const Point& b) {
  const int n = static_cast<int>(a.size());
  const double ab = dot(a, b);
  if (ab < -0.5) {
    // Nearly antipodal: go through an intermediate direction.
    Point m(n, 0.0);
    int k = 0;
    for (int i = 1; i < n; ++i)
      if (std::abs(a[i]) < std::abs(a[k])) k = i;
    m[k] = 1.0;
    const double ma = dot(m, a);
    for (int i = 0; i < n; ++i) m[i] -= ma * a[i];
    const double mn = std::sqrt(norm_sq(m));
    for (int i = 0; i < n; ++i) m[i] /= mn;
    return mul(rotation_between(m, b), rotation_between(a, m), n);
  }
  Mat q = identity(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      q[i * n + j] -= (a[i] + b[i]) * (a[j] + b[j]) / (1.0 + ab);
      q[i * n + j] += 2.0 * b[i] * a[j];
    }
  return q;
}

}  // namespace

SprayTerms spray_terms(const PhiSolution& phi, double s, double b_sq) {
  const double p = phi.phi(s);
  const double dp = phi.dphi(s);
  const double ddp = phi.ddphi(s);
  const double pm = phi.phi_minus_s_dphi(s);
  if (!(pm > 0))
    throw OutOfRegularRange("spray_terms: phi - s phi' is not positive");
  SprayTerms st;
  st.Q = dp / pm;
  st.Qprime = ddp * p / (pm * pm);
  st.Delta = 1.0 + s * st.Q + (b_sq - s * s) * st.Qprime;
  st.Theta = (st.Q - s * st.Qprime) / (2.0 * st.Delta);
  st.Psi = st.Qprime / (2.0 * st.Delta);
  return st;
}

ProjectiveData projective_data(const Point& x, const Point& y,
                               const NavigationBundle& bundle) {
  const SphereData& d = bundle.sphere();
  const MetricParams& p = bundle.params();
  const double mu = d.mu;
  ProjectiveData pd;
  pd.rec = reconstruct(x, y, bundle);
  const double u = pd.rec.gauge.u, v = pd.rec.gauge.v, w = pd.rec.gauge.w;
  const double w2 = 1.0 + mu * norm_sq(x);
  const double rt = std::sqrt(w2);
  const double m = d.k - mu * dot(d.xi, x);  // = -2 c sqrt(w2)
  const double xy = dot(x, y);
  const double xiy = dot(d.xi, y);

  pd.tau = m / rt * u / w;
  pd.theta = (p.k1 * u - v) * pd.tau / u * pd.rec.beta - mu * xy / w2;
  // tau0 = tau_{x^k} y^k.  The (b^2)-derivative part reduces to
  // tau^2 (k3 u - v) beta / u via the gauge ODEs and (b^2)_0 = 2 tau beta q;
  // the explicit part carries a common u/(w sqrt(w2)) factor.
  pd.tau0 = pd.tau * pd.tau * (p.k3 * u - v) / u * pd.rec.beta -
            mu * u / (w * rt) * (m * xy / w2 + xiy);
  pd.theta0 =
      (p.k1 * u - v) / u *
          (pd.tau * pd.tau * pd.rec.alpha * pd.rec.alpha +
           pd.tau0 * pd.rec.beta + 2.0 * pd.tau * pd.theta * pd.rec.beta) +
      (p.k1 * p.k3 - 2.0 * p.k2 + (p.k3 + 2.0 * p.k1) * v / u -
       2.0 * v * v / (u * u)) *
          pd.tau * pd.tau * pd.rec.beta * pd.rec.beta -
      mu * (w2 * norm_sq(y) - 2.0 * mu * xy * xy) / (w2 * w2);

  const double s = pd.rec.s;
  const PhiSolution& phi = bundle.phi();
  const double sc = std::clamp(s, -phi.s_max(), phi.s_max());
  pd.P = pd.theta + 0.5 * pd.tau *
                        (p.f1(sc) * phi.dphi(sc) / phi.phi(sc) -
                         (p.k1 + p.k2 * sc * sc) * sc) *
                        pd.rec.alpha;
  return pd;
}

double projective_factor(const Point& x, const Point& y,
                         const NavigationBundle& bundle) {
  return projective_data(x, y, bundle).P;
}

double ambient_finsler_norm(const Point& p, const Point& dp,
                            const NavigationBundle& bundle) {
  const SphereData& d = bundle.sphere();
  const double mu = d.mu;
  // Project onto the tangent space of the sphere |p| = 1/sqrt(mu).
  Point dpt = dp;
  const double pp = dot(p, dp) * mu;
  for (std::size_t i = 0; i < dpt.size(); ++i) dpt[i] -= pp * p[i];
  const std::vector<double> a = chart::ambient_functional(d);
  const Reconstruction r =
      reconstruct_core(norm_sq(dpt), dot(a, p), dot(a, dpt), bundle);
  const PhiSolution& phi = bundle.phi();
  const double s = std::clamp(r.s, -phi.s_max(), phi.s_max());
  return r.alpha * phi.phi(s);
}

namespace {

GeodesicPath integrate_impl(const Point& x0, const Point& y0, double T,
                            double mu, const NavigationBundle* bundle,
                            double tol, int n_samples, ParamKind kind) {
  if (norm_sq(y0) == 0)
    throw InvalidArgument("integrate_geodesic: zero initial velocity");
  if (!(T > 0)) throw InvalidArgument("integrate_geodesic: T must be > 0");
  if (!(tol > 0)) throw InvalidArgument("integrate_geodesic: tol must be > 0");
  if (n_samples < 2)
    throw InvalidArgument("integrate_geodesic: need at least 2 samples");
  const int n = static_cast<int>(x0.size());
  const int na = n + 1;

  Point x = x0, v = y0;
  const double speed = (kind == ParamKind::FArclength)
                           ? finsler_norm(x, v, *bundle)
                           : h_eval(x, v, mu);
  if (!(speed > 0))
    throw InvalidArgument("integrate_geodesic: degenerate initial velocity");
  for (double& c : v) c /= speed;

  Mat R = identity(na);  // original ambient frame = R * current frame
  NavigationBundle cur = bundle ? *bundle
                                : NavigationBundle(
                                      SphereData(mu, 0, Point(n, 0.0)),
                                      MetricParams(1, 1, 0, 0),
                                      canonical_gauge(MetricParams(1, 1, 0, 0),
                                                      0.0));
  const bool use_f = (bundle != nullptr);

  auto recenter = [&]() {
    const Point pa = chart::to_ambient(x, mu);
    const Point dpa = chart::to_ambient_velocity(x, v, mu);
    Point ua(na);
    const double rm = std::sqrt(mu);
    for (int i = 0; i < na; ++i) ua[i] = rm * pa[i];
    Point e(na, 0.0);
    e[n] = 1.0;
    const Mat q = rotation_between(ua, e);
    const Point pn = matvec(q, pa), dpn = matvec(q, dpa);
    x = chart::from_ambient(pn, mu);
    v = chart::from_ambient_velocity(pn, dpn, mu);
    R = mul(R, transpose(q, na), na);
    if (use_f) {
      const Point a = chart::ambient_functional(cur.sphere());
      cur = cur.with_sphere(chart::data_from_functional(matvec(q, a), mu));
    }
  };

  num::Rhs rhs = [&](double, const num::Vec& y, num::Vec& dy) {
    Point xx(y.begin(), y.begin() + n), vv(y.begin() + n, y.end());
    double P;
    if (use_f) {
      P = projective_factor(xx, vv, cur);
    } else {
      P = -mu * dot(xx, vv) / (1.0 + mu * norm_sq(xx));
    }
    dy.resize(2 * n);
    for (int i = 0; i < n; ++i) {
      dy[i] = vv[i];
      dy[n + i] = -2.0 * P * vv[i];
    }
  };
  std::function<bool(double, const num::Vec&)> adm =
      [n, mu](double, const num::Vec& y) {
        double r2 = 0;
        for (int i = 0; i < n; ++i) r2 += y[i] * y[i];
        return mu * r2 < 2.0;
      };

  GeodesicPath path;
  path.kind = kind;
  path.mu = mu;
  path.samples.reserve(n_samples);
  const double dt_out = T / (n_samples - 1);
  int next_out = 0;

  auto emit = [&](double t, const Point& xx, const Point& vv) {
    path.samples.push_back(
        {t, matvec(R, chart::to_ambient(xx, mu)),
         matvec(R, chart::to_ambient_velocity(xx, vv, mu))});
  };

  double t = 0.0;
  if (mu * norm_sq(x) > 0.25) recenter();
  emit(0.0, x, v);
  ++next_out;

  int guard = 0;
  while (t < T * (1.0 - 1e-15)) {
    if (++guard > 1000000)
      throw NonConvergence("integrate_geodesic: segment budget exhausted");
    if (mu * norm_sq(x) > 0.25) recenter();
    const double hs = std::max(h_eval(x, v, mu), 1e-12);
    const double dt = std::min(0.25 / (std::sqrt(mu) * hs), T - t);
    num::Vec y0v(2 * n);
    std::copy(x.begin(), x.end(), y0v.begin());
    std::copy(v.begin(), v.end(), y0v.begin() + n);
    const num::DenseSolution seg =
        num::integrate_dense(rhs, t, t + dt, y0v, tol, 1e-13, nullptr, &adm);
    while (next_out < n_samples && next_out * dt_out <= t + dt * (1 + 1e-14)) {
      const double to = std::min(next_out * dt_out, t + dt);
      num::Vec ys;
      seg.eval(to, ys);
      emit(to, Point(ys.begin(), ys.begin() + n),
           Point(ys.begin() + n, ys.end()));
      ++next_out;
    }
    num::Vec ye;
    seg.eval(t + dt, ye);
    x.assign(ye.begin(), ye.begin() + n);
    v.assign(ye.begin() + n, ye.end());
    t += dt;
  }
  return path;
}

}  // namespace

GeodesicPath integrate_geodesic_h(const Point& x0, const Point& y0, double T,
                                  double mu, double tol, int n_samples) {
  return integrate_impl(x0, y0, T, mu, nullptr, tol, n_samples,
                        ParamKind::HArclength);
}

GeodesicPath integrate_geodesic(const Point& x0, const Point& y0, double T,
                                const NavigationBundle& bundle, double tol,
                                int n_samples) {
  return integrate_impl(x0, y0, T, bundle.sphere().mu, &bundle, tol, n_samples,
                        ParamKind::FArclength);
}

double circle_f_length(const Point& p0, const Point& q0,
                       const NavigationBundle& bundle, double tol) {
  const double mu = bundle.sphere().mu;
  const double rm = std::sqrt(mu);
  auto f = [&](double t) {
    const double c = std::cos(rm * t), s = std::sin(rm * t);
    Point p(p0.size()), dp(p0.size());
    for (std::size_t i = 0; i < p0.size(); ++i) {
      p[i] = p0[i] * c + q0[i] * s / rm;
      dp[i] = -rm * p0[i] * s + q0[i] * c;
    }
    return ambient_finsler_norm(p, dp, bundle);
  };
  const double period = 2.0 * std::numbers::pi / rm;
  // Quarter-period split keeps the adaptive quadrature honest near the poles.
  double total = 0;
  for (int k = 0; k < 4; ++k)
    total += num::integrate(f, k * period / 4, (k + 1) * period / 4, tol / 4);
  return total;
}

ClosedGeodesic closed_geodesic(const Point& x0, const Point& y0,
                               const NavigationBundle& bundle, double tol) {
  const double mu = bundle.sphere().mu;
  // Estimate the period from the F-length of the underlying great circle.
  const Point p0 = chart::to_ambient(x0, mu);
  Point q0 = chart::to_ambient_velocity(x0, y0, mu);
  const double hn = h_eval(x0, y0, mu);
  if (!(hn > 0)) throw InvalidArgument("closed_geodesic: zero velocity");
  for (double& c : q0) c /= hn;
  const double est = circle_f_length(p0, q0, bundle, 1e-10);

  const int n_samples = 8193;
  const GeodesicPath path = integrate_geodesic(x0, y0, 1.15 * est, bundle, tol,
                                               n_samples);
  const Point d0 = path.samples.front().dp;  // F-unit initial direction
  auto ev = [&](const GeodesicSample& s) {
    double f = 0;
    for (std::size_t i = 0; i < d0.size(); ++i)
      f += (s.p[i] - p0[i]) * d0[i];
    return f;
  };
  auto evd = [&](const GeodesicSample& s) {
    double f = 0;
    for (std::size_t i = 0; i < d0.size(); ++i) f += s.dp[i] * d0[i];
    return f;
  };
  const double near_sq = 0.25 / mu;
  for (std::size_t i = 1; i + 1 < path.samples.size(); ++i) {
    const GeodesicSample& a = path.samples[i];
    const GeodesicSample& b = path.samples[i + 1];
    double da = 0;
    for (std::size_t j = 0; j < p0.size(); ++j)
      da += (a.p[j] - p0[j]) * (a.p[j] - p0[j]);
    if (da > near_sq) continue;
    const double fa = ev(a), fb = ev(b);
    if (!(fa < 0 && fb >= 0)) continue;
    // Cubic Hermite root of the event function on [a.t, b.t].
    const double h = b.t - a.t;
    const double ga = evd(a) * h, gb = evd(b) * h;
    double u = fa / (fa - fb);  // secant start
    for (int it = 0; it < 60; ++it) {
      const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
      const double h10 = u * (1 - u) * (1 - u);
      const double h01 = u * u * (3 - 2 * u);
      const double h11 = u * u * (u - 1);
      const double val = h00 * fa + h10 * ga + h01 * fb + h11 * gb;
      const double der = 6 * u * (u - 1) * (fa - fb) +
                         (3 * u * u - 4 * u + 1) * ga + (3 * u * u - 2 * u) * gb;
      if (der == 0) break;
      const double step = val / der;
      u -= step;
      u = std::clamp(u, 0.0, 1.0);
      if (std::abs(step) < 1e-15) break;
    }
    const double period = a.t + u * h;
    // Hermite-interpolated position at the crossing.
    double err_sq = 0;
    for (std::size_t j = 0; j < p0.size(); ++j) {
      const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
      const double h10 = u * (1 - u) * (1 - u);
      const double h01 = u * u * (3 - 2 * u);
      const double h11 = u * u * (u - 1);
      const double pj = h00 * a.p[j] + h10 * h * a.dp[j] + h01 * b.p[j] +
                        h11 * h * b.dp[j];
      err_sq += (pj - p0[j]) * (pj - p0[j]);
    }
    return {period, std::sqrt(err_sq), path};
  }
  throw NonConvergence("closed_geodesic: no closure event found");
}

double length_L1(const MetricParams& params, double mu, double delta,
                 double tol) {
  if (!(mu > 0)) throw InvalidArgument("length_L1: mu must be positive");
  if (delta < 0) throw InvalidArgument("length_L1: delta must be >= 0");
  if (!(tol > 0)) throw InvalidArgument("length_L1: tol must be positive");
  const double b_max = 4.0 * delta * delta / (mu * mu);
  if (!(b_max < regularity_range(params)))
    throw OutOfRegularRange("length_L1: b^2 range exceeds the regular range");
  if (delta == 0) return 2.0 * std::numbers::pi / std::sqrt(mu);
  const UvwGauge gauge = canonical_gauge(params, b_max);
  const PhiSolution phi =
      solve_phi(params, std::max(std::sqrt(b_max), 1e-3), 1e-10);
  const double rm = std::sqrt(mu);
  auto f = [&](double t) {
    const double s = -2.0 * delta * std::sin(rm * t) / mu;
    const double B = s * s;
    return phi.phi(s) /
           (std::sqrt(params.f1_t(B)) * std::exp(gauge.sigma(B)));
  };
  const double period = 2.0 * std::numbers::pi / rm;
  double total = 0;
  for (int k = 0; k < 4; ++k)
    total += num::integrate(f, k * period / 4, (k + 1) * period / 4, tol / 4);
  return total;
}

double length_L2(const MetricParams& params, double mu, double delta) {
  if (!(mu > 0)) throw InvalidArgument("length_L2: mu must be positive");
  if (delta < 0) throw InvalidArgument("length_L2: delta must be >= 0");
  const double b_max = 4.0 * delta * delta / (mu * mu);
  if (!(b_max < regularity_range(params)))
    throw OutOfRegularRange("length_L2: b^2 range exceeds the regular range");
  const double expo = 0.5 * num::integrate(
                                [&params](double th) {
                                  return (params.k2 * th + params.k3) /
                                         params.f1_t(th);
                                },
                                0.0, b_max, 1e-13);
  return 2.0 * std::numbers::pi / std::sqrt(mu) * std::exp(-expo);
}

double series_L(const MetricParams& params, double mu, double delta) {
  if (!(mu > 0)) throw InvalidArgument("series_L: mu must be positive");
  const double pi = std::numbers::pi;
  const double d2 = delta * delta;
  return 2.0 * pi / std::sqrt(mu) - 4.0 * params.k3 * pi * d2 / (mu * mu * std::sqrt(mu)) +
         4.0 *
             (3.0 * params.k3 * params.k3 + 2.0 * params.k1 * params.k3 -
              2.0 * params.k2) *
             pi * d2 * d2 / (mu * mu * mu * mu * std::sqrt(mu));
}

double length_square(int sign, double mu, double delta) {
  if (sign != 1 && sign != -1)
    throw InvalidArgument("length_square: sign must be +1 or -1");
  if (!(mu > 0)) throw InvalidArgument("length_square: mu must be positive");
  if (delta < 0) throw InvalidArgument("length_square: delta must be >= 0");
  if (sign == -1 && !(mu * mu > 12.0 * delta * delta))
    throw OutOfRegularRange(
        "length_square: sign - requires mu^2 > 12 delta^2");
  const double pi = std::numbers::pi;
  return 2.0 * pi / std::sqrt(mu) +
         sign * 8.0 * pi * delta * delta / (mu * mu * std::sqrt(mu));
}

}  // namespace finsler
