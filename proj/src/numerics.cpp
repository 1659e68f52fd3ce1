#include "finsler/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "finsler/errors.hpp"

namespace finsler::num {

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                 e3 = 500.0 / 1113 - 7571.0 / 16695,
                 e4 = 125.0 / 192 - 393.0 / 640,
                 e5 = -2187.0 / 6784 + 92097.0 / 339200,
                 e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

// Quintic Hermite basis on [0,1]: value/1st/2nd derivative data at both ends.
struct QuinticBasis {
  double h00, h01, h02, h10, h11, h12;
};

QuinticBasis quintic(double u) {
  const double u2 = u * u, u3 = u2 * u, u4 = u3 * u, u5 = u4 * u;
  return {1 - 10 * u3 + 15 * u4 - 6 * u5,
          u - 6 * u3 + 8 * u4 - 3 * u5,
          0.5 * u2 - 1.5 * u3 + 1.5 * u4 - 0.5 * u5,
          10 * u3 - 15 * u4 + 6 * u5,
          -4 * u3 + 7 * u4 - 3 * u5,
          0.5 * u3 - u4 + 0.5 * u5};
}

QuinticBasis quintic_deriv(double u) {
  const double u2 = u * u, u3 = u2 * u, u4 = u3 * u;
  return {-30 * u2 + 60 * u3 - 30 * u4,
          1 - 18 * u2 + 32 * u3 - 15 * u4,
          u - 4.5 * u2 + 6 * u3 - 2.5 * u4,
          30 * u2 - 60 * u3 + 30 * u4,
          -12 * u2 + 28 * u3 - 15 * u4,
          1.5 * u2 - 4 * u3 + 2.5 * u4};
}

}  // namespace

std::size_t DenseSolution::interval(double t) const {
  const bool fwd = t_.back() >= t_.front();
  auto cmp = [fwd](double a, double b) { return fwd ? a < b : a > b; };
  std::size_t lo = 0, hi = t_.size() - 1;
  while (hi - lo > 1) {
    std::size_t mid = (lo + hi) / 2;
    if (cmp(t, t_[mid]))
      hi = mid;
    else
      lo = mid;
  }
  return lo;
}

void DenseSolution::eval(double t, Vec& out) const {
  if (t_.size() == 1) {
    out = y_[0];
    return;
  }
  const std::size_t i = interval(t);
  const double h = t_[i + 1] - t_[i];
  const double u = (t - t_[i]) / h;
  const QuinticBasis q = quintic(u);
  const std::size_t n = y_[i].size();
  out.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = q.h00 * y_[i][k] + q.h01 * h * f_[i][k] +
             q.h02 * h * h * f2_[i][k] + q.h10 * y_[i + 1][k] +
             q.h11 * h * f_[i + 1][k] + q.h12 * h * h * f2_[i + 1][k];
  }
}

void DenseSolution::eval_deriv(double t, Vec& out) const {
  if (t_.size() == 1) {
    out = f_[0];
    return;
  }
  const std::size_t i = interval(t);
  const double h = t_[i + 1] - t_[i];
  const double u = (t - t_[i]) / h;
  const QuinticBasis q = quintic_deriv(u);
  const std::size_t n = y_[i].size();
  out.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = (q.h00 * y_[i][k] + q.h01 * h * f_[i][k] +
              q.h02 * h * h * f2_[i][k] + q.h10 * y_[i + 1][k] +
              q.h11 * h * f_[i + 1][k] + q.h12 * h * h * f2_[i + 1][k]) /
             h;
  }
}

double DenseSolution::eval(double t, std::size_t component) const {
  Vec tmp;
  eval(t, tmp);
  return tmp[component];
}

double DenseSolution::eval_deriv(double t, std::size_t component) const {
  Vec tmp;
  eval_deriv(t, tmp);
  return tmp[component];
}

DenseSolution integrate_dense(
    const Rhs& rhs, double t0, double t1, Vec y0, double rtol, double atol,
    const Rhs* second_deriv,
    const std::function<bool(double, const Vec&)>* admissible) {
  if (rtol <= 0 || atol < 0) throw InvalidArgument("integrate_dense: bad tolerances");
  const std::size_t n = y0.size();
  const double dir = (t1 >= t0) ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);

  DenseSolution sol;
  Vec k1v(n), k2v(n), k3v(n), k4v(n), k5v(n), k6v(n), k7v(n);
  Vec ytmp(n), ynew(n), yerr(n), f2(n);

  auto eval_f2 = [&](double t, const Vec& y, const Vec& f, Vec& out) {
    if (second_deriv) {
      (*second_deriv)(t, y, out);
      return;
    }
    const double eps = 3e-6 * (1.0 + std::abs(t));
    Vec yp(n), ym(n), fp(n), fm(n);
    for (std::size_t i = 0; i < n; ++i) {
      yp[i] = y[i] + eps * f[i];
      ym[i] = y[i] - eps * f[i];
    }
    rhs(t + eps, yp, fp);
    rhs(t - eps, ym, fm);
    for (std::size_t i = 0; i < n; ++i) out[i] = (fp[i] - fm[i]) / (2 * eps);
  };

  double t = t0;
  Vec y = y0;
  rhs(t, y, k1v);
  eval_f2(t, y, k1v, f2);
  sol.t_.push_back(t);
  sol.y_.push_back(y);
  sol.f_.push_back(k1v);
  sol.f2_.push_back(f2);

  if (span == 0.0) return sol;

  double h = dir * std::min(1e-2 * (span + 1.0), span);
  const double hmin = span * 1e-14 + 1e-300;
  int rejected_in_a_row = 0;
  const int max_steps = 4000000;

  for (int step = 0; step < max_steps; ++step) {
    if ((t - t1) * dir >= 0) break;
    if ((t + h - t1) * dir > 0) h = t1 - t;

    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1v[i];
    rhs(t + c2 * h, ytmp, k2v);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a31 * k1v[i] + a32 * k2v[i]);
    rhs(t + c3 * h, ytmp, k3v);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a41 * k1v[i] + a42 * k2v[i] + a43 * k3v[i]);
    rhs(t + c4 * h, ytmp, k4v);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a51 * k1v[i] + a52 * k2v[i] + a53 * k3v[i] +
                            a54 * k4v[i]);
    rhs(t + c5 * h, ytmp, k5v);
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a61 * k1v[i] + a62 * k2v[i] + a63 * k3v[i] +
                            a64 * k4v[i] + a65 * k5v[i]);
    rhs(t + h, ytmp, k6v);
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + h * (b1 * k1v[i] + b3 * k3v[i] + b4 * k4v[i] +
                            b5 * k5v[i] + b6 * k6v[i]);
    rhs(t + h, ynew, k7v);

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = h * (e1 * k1v[i] + e3 * k3v[i] + e4 * k4v[i] +
                            e5 * k5v[i] + e6 * k6v[i] + e7 * k7v[i]);
      const double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err += (e / sc) * (e / sc);
    }
    err = std::sqrt(err / n);

    if (err <= 1.0) {
      t += h;
      y = ynew;
      k1v = k7v;  // FSAL
      eval_f2(t, y, k1v, f2);
      if (admissible && !(*admissible)(t, y))
        throw SolutionLeavesAdmissibleRegion(
            "integrate_dense: solution left the admissible region at t=" +
            std::to_string(t));
      sol.t_.push_back(t);
      sol.y_.push_back(y);
      sol.f_.push_back(k1v);
      sol.f2_.push_back(f2);
      rejected_in_a_row = 0;
      const double fac = std::clamp(0.9 * std::pow(err + 1e-30, -0.2), 0.2, 5.0);
      h *= fac;
    } else {
      if (++rejected_in_a_row > 60 || std::abs(h) < hmin)
        throw NonConvergence("integrate_dense: step control failed at t=" +
                             std::to_string(t));
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
    }
  }
  if ((t - t1) * dir < 0)
    throw NonConvergence("integrate_dense: step budget exhausted");
  return sol;
}

namespace {

// Kronrod-15 abscissae/weights and the embedded Gauss-7 weights.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

void gk15(const std::function<double(double)>& f, double a, double b,
          double& result, double& err) {
  const double c = 0.5 * (a + b), hl = 0.5 * (b - a);
  const double fc = f(c);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double x = hl * kXgk[j];
    const double f1 = f(c - x), f2v = f(c + x);
    resk += kWgk[j] * (f1 + f2v);
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2v);
  }
  result = resk * hl;
  err = std::abs((resk - resg) * hl);
}

void adapt(const std::function<double(double)>& f, double a, double b,
           double tol, int depth, double& acc) {
  double r, e;
  gk15(f, a, b, r, e);
  if (e <= tol || depth >= 21) {
    acc += r;
    return;
  }
  const double m = 0.5 * (a + b);
  adapt(f, a, m, 0.5 * tol, depth + 1, acc);
  adapt(f, m, b, 0.5 * tol, depth + 1, acc);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  if (tol <= 0) throw InvalidArgument("integrate: tol must be positive");
  if (a == b) return 0.0;
  double acc = 0.0;
  adapt(f, a, b, tol, 0, acc);
  return acc;
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double ftol, double xtol) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0))
    throw InvalidArgument("bisect: endpoints do not bracket a root");
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (std::abs(fm) < ftol || hi - lo < xtol * (1.0 + std::abs(mid)))
      return mid;
    if ((fm > 0) == (fhi > 0)) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

double golden_min(const std::function<double(double)>& f, double a, double b,
                  double xtol) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = f(x1), f2v = f(x2);
  while (b - a > xtol * (1.0 + std::abs(a) + std::abs(b))) {
    if (f1 < f2v) {
      b = x2;
      x2 = x1;
      f2v = f1;
      x1 = b - gr * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2v;
      x2 = a + gr * (b - a);
      f2v = f(x2);
    }
  }
  return 0.5 * (a + b);
}

Simplex2Result nelder_mead2(const std::function<double(double, double)>& f,
                            std::array<double, 2> start, double scale,
                            double xtol, int max_iter) {
  struct Pt {
    std::array<double, 2> x;
    double v;
  };
  std::array<Pt, 3> s;
  s[0] = {start, f(start[0], start[1])};
  s[1] = {{start[0] + scale, start[1]}, 0};
  s[2] = {{start[0], start[1] + scale}, 0};
  s[1].v = f(s[1].x[0], s[1].x[1]);
  s[2].v = f(s[2].x[0], s[2].x[1]);

  auto order = [&] {
    std::sort(s.begin(), s.end(), [](const Pt& a, const Pt& b) { return a.v < b.v; });
  };
  order();
  for (int it = 0; it < max_iter; ++it) {
    const double size = std::max(
        std::abs(s[1].x[0] - s[0].x[0]) + std::abs(s[1].x[1] - s[0].x[1]),
        std::abs(s[2].x[0] - s[0].x[0]) + std::abs(s[2].x[1] - s[0].x[1]));
    if (size < xtol) break;
    const std::array<double, 2> cen = {0.5 * (s[0].x[0] + s[1].x[0]),
                                       0.5 * (s[0].x[1] + s[1].x[1])};
    auto at = [&](double fac) -> Pt {
      std::array<double, 2> x = {cen[0] + fac * (s[2].x[0] - cen[0]),
                                 cen[1] + fac * (s[2].x[1] - cen[1])};
      return {x, f(x[0], x[1])};
    };
    Pt refl = at(-1.0);
    if (refl.v < s[0].v) {
      Pt exp_ = at(-2.0);
      s[2] = (exp_.v < refl.v) ? exp_ : refl;
    } else if (refl.v < s[1].v) {
      s[2] = refl;
    } else {
      Pt con = at(0.5);
      if (con.v < s[2].v) {
        s[2] = con;
      } else {
        for (int i = 1; i < 3; ++i) {
          s[i].x[0] = 0.5 * (s[i].x[0] + s[0].x[0]);
          s[i].x[1] = 0.5 * (s[i].x[1] + s[0].x[1]);
          s[i].v = f(s[i].x[0], s[i].x[1]);
        }
      }
    }
    order();
  }
  return {s[0].x, s[0].v};
}

}  // namespace finsler::num
