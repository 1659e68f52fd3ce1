// Independent reference implementations used only by the tests: a fixed-step
// RK4 integrator and a finite-difference geodesic spray built straight from
// the Euler-Lagrange equations of F^2.
#ifndef TESTS_ORACLES_HPP
#define TESTS_ORACLES_HPP

#include <cmath>
#include <functional>
#include <vector>

#include "finsler/sphere.hpp"

namespace oracles {

using Vec = std::vector<double>;

// Classic fixed-step RK4 from t0 to t1 in n_steps.
inline Vec rk4(const std::function<Vec(double, const Vec&)>& f, double t0,
               double t1, Vec y, int n_steps) {
  const double h = (t1 - t0) / n_steps;
  Vec k1, k2, k3, k4, tmp(y.size());
  for (int i = 0; i < n_steps; ++i) {
    const double t = t0 + i * h;
    k1 = f(t, y);
    for (std::size_t j = 0; j < y.size(); ++j) tmp[j] = y[j] + 0.5 * h * k1[j];
    k2 = f(t + 0.5 * h, tmp);
    for (std::size_t j = 0; j < y.size(); ++j) tmp[j] = y[j] + 0.5 * h * k2[j];
    k3 = f(t + 0.5 * h, tmp);
    for (std::size_t j = 0; j < y.size(); ++j) tmp[j] = y[j] + h * k3[j];
    k4 = f(t + h, tmp);
    for (std::size_t j = 0; j < y.size(); ++j)
      y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
  }
  return y;
}

// Geodesic spray coefficients G^i of F at (x, y) by finite differences of
// the Euler-Lagrange form:
//   G^i = (1/4) g^{il} ( [F^2]_{x^k y^l} y^k - [F^2]_{x^l} ),
// with g_ij = (1/2) d^2 F^2 / dy^i dy^j.  Everything second-order centered.
inline Vec spray_fd(const finsler::Point& x, const finsler::Point& y,
                    const finsler::NavigationBundle& bundle, double eps) {
  const int n = static_cast<int>(x.size());
  auto L = [&](const finsler::Point& xx, const finsler::Point& yy) {
    const double F = finsler::finsler_norm(xx, yy, bundle);
    return F * F;
  };
  // g_ij
  std::vector<double> g(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      finsler::Point ypp = y, ypm = y, ymp = y, ymm = y;
      ypp[i] += eps; ypp[j] += eps;
      ypm[i] += eps; ypm[j] -= eps;
      ymp[i] -= eps; ymp[j] += eps;
      ymm[i] -= eps; ymm[j] -= eps;
      const double d2 =
          (L(x, ypp) - L(x, ypm) - L(x, ymp) + L(x, ymm)) / (4 * eps * eps);
      g[i * n + j] = g[j * n + i] = 0.5 * d2;
    }
  // rhs_l = [F^2]_{x^k y^l} y^k - [F^2]_{x^l}
  Vec rhs(n);
  for (int l = 0; l < n; ++l) {
    double mixed = 0.0;
    for (int k = 0; k < n; ++k) {
      finsler::Point xp = x, xm = x, yp = y, ym = y;
      xp[k] += eps; xm[k] -= eps;
      yp[l] += eps; ym[l] -= eps;
      const double d2 = (L(xp, yp) - L(xp, ym) - L(xm, yp) + L(xm, ym)) /
                        (4 * eps * eps);
      mixed += d2 * y[k];
    }
    finsler::Point xp = x, xm = x;
    xp[l] += eps; xm[l] -= eps;
    rhs[l] = mixed - (L(xp, y) - L(xm, y)) / (2 * eps);
  }
  // Solve g G = rhs / 4 (tiny n: Gaussian elimination with partial pivot).
  std::vector<double> a = g;
  Vec b = rhs;
  for (double& v : b) v *= 0.25;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
    for (int cc = 0; cc < n; ++cc) std::swap(a[col * n + cc], a[piv * n + cc]);
    std::swap(b[col], b[piv]);
    for (int r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / a[col * n + col];
      for (int cc = col; cc < n; ++cc) a[r * n + cc] -= f * a[col * n + cc];
      b[r] -= f * b[col];
    }
  }
  Vec G(n);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int cc = r + 1; cc < n; ++cc) s -= a[r * n + cc] * G[cc];
    G[r] = s / a[r * n + r];
  }
  return G;
}

}  // namespace oracles

#endif
