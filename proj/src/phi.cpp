#include "finsler/phi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "finsler/errors.hpp"

namespace finsler {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Minimum of the quadratic 1 + A t + k2 t^2 on [0, tmax].
double quad_min(double A, double k2, double tmax) {
  double m = std::min(1.0, 1.0 + A * tmax + k2 * tmax * tmax);
  if (k2 > 0) {
    const double tv = -A / (2 * k2);
    if (tv > 0 && tv < tmax) m = std::min(m, 1.0 + A * tv + k2 * tv * tv);
  }
  return m;
}

}  // namespace

MetricParams::MetricParams(double k1_, double k2_, double k3_, double eps_)
    : k1(k1_), k2(k2_), k3(k3_), epsilon(eps_) {
  if (!std::isfinite(k1) || !std::isfinite(k2) || !std::isfinite(k3) ||
      !std::isfinite(epsilon))
    throw InvalidArgument("MetricParams: non-finite value");
  if (std::abs(k2 - k1 * k3) <= 1e-12 * (1.0 + std::abs(k1 * k3)))
    throw InvalidArgument("MetricParams: k2 == k1*k3 is Randers type");
}

const num::DenseSolution& PhiSolution::half(double s) const {
  if (std::abs(s) > s_max_ * (1.0 + 1e-9) + 1e-12)
    throw OutOfRegularRange("phi: |s| exceeds the solved range");
  return s >= 0 ? *right_ : *left_;
}

double PhiSolution::phi(double s) const {
  switch (form_) {
    case PhiForm::SquarePlus:
      return 1.0 + params_.epsilon * s + s * s;
    case PhiForm::SquareMinus:
      return 1.0 + params_.epsilon * s - s * s;
    case PhiForm::Numeric:
      return half(s).eval(s, 0);
  }
  return 0.0;
}

double PhiSolution::dphi(double s) const {
  switch (form_) {
    case PhiForm::SquarePlus:
      return params_.epsilon + 2.0 * s;
    case PhiForm::SquareMinus:
      return params_.epsilon - 2.0 * s;
    case PhiForm::Numeric:
      return half(s).eval(s, 1);
  }
  return 0.0;
}

double PhiSolution::ddphi(double s) const {
  switch (form_) {
    case PhiForm::SquarePlus:
      return 2.0;
    case PhiForm::SquareMinus:
      return -2.0;
    case PhiForm::Numeric:
      return half(s).eval_deriv(s, 1);
  }
  return 0.0;
}

double PhiSolution::phi_minus_s_dphi(double s) const {
  switch (form_) {
    case PhiForm::SquarePlus:
      return 1.0 - s * s;
    case PhiForm::SquareMinus:
      return 1.0 + s * s;
    case PhiForm::Numeric: {
      num::Vec y;
      half(s).eval(s, y);
      return y[0] - s * y[1];
    }
  }
  return 0.0;
}

double PhiSolution::residual(double s) const {
  return std::abs(params_.f1(s) * ddphi(s) -
                  (params_.k1 + params_.k2 * s * s) * phi_minus_s_dphi(s));
}

double PhiSolution::phi_minus_s_dphi_closed(double s) const {
  const auto& p = params_;
  const double integral = num::integrate(
      [&p](double r) { return (p.k1 + p.k2 * r) / p.f1_t(r); }, 0.0, s * s,
      1e-14);
  return std::exp(-0.5 * integral);
}

PhiSolution solve_phi(const MetricParams& params, double s_max, double tol) {
  if (tol <= 0) throw InvalidArgument("solve_phi: tol must be positive");
  if (!(s_max > 0)) throw InvalidArgument("solve_phi: s_max must be positive");
  if (quad_min(params.k1 + params.k3, params.k2, s_max * s_max) <= 0)
    throw DenominatorVanishes(
        "solve_phi: 1+(k1+k3)s^2+k2 s^4 vanishes on the interval");

  if (params.is_square_plus())
    return PhiSolution(params, s_max, PhiForm::SquarePlus);
  if (params.is_square_minus())
    return PhiSolution(params, s_max, PhiForm::SquareMinus);

  const double k1 = params.k1, k2 = params.k2;
  auto rhs = [&params, k1, k2](double s, const num::Vec& y, num::Vec& dy) {
    dy.resize(2);
    dy[0] = y[1];
    dy[1] = (k1 + k2 * s * s) * (y[0] - s * y[1]) / params.f1(s);
  };
  // (phi'', phi''') with phi''' from differentiating the ODE.
  auto d2 = [&params, k1, k2](double s, const num::Vec& y, num::Vec& dd) {
    dd.resize(2);
    const double f1 = params.f1(s);
    const double q = k1 + k2 * s * s;
    const double pm = y[0] - s * y[1];
    const double ddp = q * pm / f1;
    dd[0] = ddp;
    dd[1] = (2 * k2 * s * pm - q * s * ddp - params.f1_deriv(s) * ddp) / f1;
  };
  num::Rhs rhs_fn = rhs;
  num::Rhs d2_fn = d2;
  const double rtol = std::min(tol, 1e-12);

  PhiSolution sol(params, s_max, PhiForm::Numeric);
  sol.right_ = std::make_shared<num::DenseSolution>(num::integrate_dense(
      rhs_fn, 0.0, s_max, {1.0, params.epsilon}, rtol, 1e-14, &d2_fn));
  sol.left_ = std::make_shared<num::DenseSolution>(num::integrate_dense(
      rhs_fn, 0.0, -s_max, {1.0, params.epsilon}, rtol, 1e-14, &d2_fn));

  // Residual sweep and the exponential-integral cross-check for phi - s phi'.
  for (int i = 0; i <= 1000; ++i) {
    const double s = -s_max + 2.0 * s_max * i / 1000.0;
    if (sol.residual(s) >= tol)
      throw NonConvergence("solve_phi: ODE residual above tol at s=" +
                           std::to_string(s));
  }
  for (int i = 0; i <= 32; ++i) {
    const double s = -s_max + 2.0 * s_max * i / 32.0;
    const double a = sol.phi_minus_s_dphi(s);
    const double b = sol.phi_minus_s_dphi_closed(s);
    if (!(a > 0) || std::abs(a - b) > 1e-8 * std::abs(b))
      throw NonConvergence("solve_phi: phi - s phi' cross-check failed");
  }
  return sol;
}

std::array<double, 5> taylor_phi(const MetricParams& p) {
  return {1.0, p.epsilon, 0.5 * p.k1, 0.0,
          p.k2 / 12.0 - p.k1 * p.k1 / 8.0 - p.k1 * p.k3 / 12.0};
}

namespace {

// The b^2 regularity predicate of the two-case characterization.
bool regular_at(const MetricParams& p, double t) {
  const double A = p.k1 + p.k3;
  const bool S = (1.0 + p.k1 * t > 0) && (p.f1_t(t) > 0);
  if (!S) return false;
  if (p.k2 <= 0) return true;
  if (A >= 0) return true;
  if (A + 2 * p.k2 * t <= 0 && p.f1_t(t) > 0) return true;
  if (A + 2 * p.k2 * t > 0 && 4 * p.k2 - A * A > 0) return true;
  return false;
}

// Smallest positive t at which the predicate can switch off: roots of the
// linear and quadratic factors, plus the T-subset switch point for k2 > 0.
std::vector<double> failure_candidates(const MetricParams& p) {
  std::vector<double> c;
  const double A = p.k1 + p.k3;
  if (p.k1 < 0) c.push_back(-1.0 / p.k1);
  if (p.k2 != 0) {
    const double disc = A * A - 4 * p.k2;
    if (disc >= 0) {
      const double sq = std::sqrt(disc);
      for (double r : {(-A - sq) / (2 * p.k2), (-A + sq) / (2 * p.k2)})
        if (r > 0) c.push_back(r);
    }
  } else if (A < 0) {
    c.push_back(-1.0 / A);
  }
  if (p.k2 > 0 && A < 0) c.push_back(-A / (2 * p.k2));
  return c;
}

}  // namespace

double regularity_range(const MetricParams& p) {
  if (!regular_at(p, 1e-12))
    throw NotRegularAtZero("regularity_range: conditions fail near b^2 = 0");

  double bound = kInf;
  for (double c : failure_candidates(p))
    if (!regular_at(p, c * (1 + 1e-9) + 1e-12)) bound = std::min(bound, c);

  double range = kInf;
  if (std::isfinite(bound)) {
    // Locate the onset of failure: coarse scan, then bisection.
    const double hi = bound + 0.5;
    double last_good = 0.0, first_bad = -1.0;
    const double step = 1e-4;
    for (double t = step; t <= hi; t += step) {
      if (!regular_at(p, t)) {
        first_bad = t;
        break;
      }
      last_good = t;
    }
    if (first_bad < 0) {
      range = hi;  // candidates were spurious
    } else {
      double lo = last_good, hb = first_bad;
      while (hb - lo > 1e-12) {
        const double mid = 0.5 * (lo + hb);
        (regular_at(p, mid) ? lo : hb) = mid;
      }
      range = 0.5 * (lo + hb);
    }
  }

  // Verify phi > 0 on the resulting s-range; shrink to the first zero if any.
  const double s_ver = std::isfinite(range)
                           ? std::sqrt(range) * (1.0 - 1e-4)
                           : 10.0;
  PhiSolution phi = solve_phi(p, s_ver, 1e-6);
  const int n = 2000;
  for (int half = 0; half < 2; ++half) {
    double prev_s = 0.0, prev_v = 1.0;
    for (int i = 1; i <= n; ++i) {
      const double s = (half == 0 ? 1.0 : -1.0) * s_ver * i / n;
      const double v = phi.phi(s);
      if (v <= 0) {
        const double z = num::bisect(
            [&phi](double x) { return phi.phi(x); }, prev_s, s, 0.0, 1e-13);
        range = std::min(range, z * z);
        break;
      }
      prev_s = s;
      prev_v = v;
    }
    (void)prev_v;
  }
  return range;
}

double b_hat(const PhiSolution& phi) {
  return std::sqrt(regularity_range(phi.params()));
}

double regularity_sup_direct(const std::function<double(double)>& phi,
                             const std::function<double(double)>& dphi,
                             const std::function<double(double)>& ddphi,
                             double b_probe_max) {
  auto worst = [&](double b) {
    double m = kInf;
    const int n = 800;
    for (int i = -n; i <= n; ++i) {
      const double s = b * i / n;
      const double p = phi(s);
      const double pm = p - s * dphi(s);
      const double third = pm + (b * b - s * s) * ddphi(s);
      m = std::min({m, p, pm, third});
    }
    return m;
  };
  auto ok = [&](double b) { return worst(b) > 0; };

  if (!ok(1e-6)) return 0.0;
  double first_bad = -1.0;
  const double step = b_probe_max / 800.0;
  double last_good = 1e-6;
  for (double b = step; b <= b_probe_max; b += step) {
    if (!ok(b)) {
      first_bad = b;
      break;
    }
    last_good = b;
  }
  if (first_bad < 0) return b_probe_max;
  double lo = last_good, hi = first_bad;
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace finsler
