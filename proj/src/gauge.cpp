#include "finsler/gauge.hpp"

#include <cmath>
#include <string>

#include "finsler/errors.hpp"

namespace finsler {

namespace {

void check_denominator(const MetricParams& p, double t_max) {
  const int n = 256;
  for (int i = 0; i <= n; ++i) {
    const double t = t_max * i / n;
    if (p.f1_t(t) <= 0)
      throw DenominatorVanishes(
          "gauge: 1+(k1+k3)t+k2 t^2 vanishes on [0, t_max]");
  }
}

}  // namespace

double UvwGauge::sigma(double B) const {
  if (ivp_ && kind_ == GaugeKind::Canonical) return ivp_->eval(B, 0);
  const MetricParams& p = params_;
  return 0.5 * num::integrate(
                   [&p](double t) { return (p.k2 * t + p.k3) / p.f1_t(t); },
                   0.0, B, 1e-13);
}

UvwGauge::Triple UvwGauge::eval(double B) const {
  if (B < -1e-12 || B > t_max_ * (1 + 1e-12) + 1e-12)
    throw OutOfRegularRange("UvwGauge::eval: B outside [0, t_max]");
  B = std::max(B, 0.0);
  switch (kind_) {
    case GaugeKind::Canonical: {
      const double s = sigma(B);
      const double u = std::exp(2 * s);
      return {u, (params_.k1 + params_.k3 + params_.k2 * B) * u,
              std::sqrt(params_.f1_t(B)) * std::exp(s)};
    }
    case GaugeKind::Square: {
      const double m = 1.0 - sign_ * B;
      return {m * m, 0.0, std::sqrt(m)};
    }
    case GaugeKind::NumericIvp: {
      num::Vec y;
      ivp_->eval(B, y);
      return {y[0], y[1], y[2]};
    }
  }
  return {0, 0, 0};
}

double UvwGauge::norm_relation(double B) const {
  const Triple g = eval(B);
  return g.w * g.w * B / (g.u + g.v * B);
}

UvwGauge canonical_gauge(const MetricParams& params, double t_max) {
  if (t_max < 0) throw InvalidArgument("canonical_gauge: t_max < 0");
  check_denominator(params, t_max);
  UvwGauge g(GaugeKind::Canonical, params, t_max, 0);
  if (t_max > 0) {
    // Cache sigma as a dense antiderivative; eval() is on every hot path.
    num::Rhs rhs = [params](double t, const num::Vec&, num::Vec& dy) {
      dy.resize(1);
      dy[0] = 0.5 * (params.k2 * t + params.k3) / params.f1_t(t);
    };
    g.ivp_ = std::make_shared<num::DenseSolution>(
        num::integrate_dense(rhs, 0.0, t_max, {0.0}, 1e-13, 1e-15));
  }
  return g;
}

UvwGauge canonical_gauge(const MetricParams& params) {
  double r = regularity_range(params);
  if (!std::isfinite(r)) r = 1e6;
  return canonical_gauge(params, 0.999 * r);
}

UvwGauge square_gauge(int sign, double t_max) {
  if (sign != 1 && sign != -1)
    throw InvalidArgument("square_gauge: sign must be +1 or -1");
  if (t_max < 0 || (sign == 1 && t_max >= 1.0) ||
      (sign == -1 && t_max >= 0.5))
    throw OutOfRegularRange("square_gauge: t_max outside the regular range");
  const MetricParams p(sign == 1 ? 2.0 : -2.0, 0.0, sign == 1 ? -3.0 : 3.0,
                       0.0);
  return UvwGauge(GaugeKind::Square, p, t_max, sign);
}

UvwGauge solve_gauge_ivp(const MetricParams& params, double u0, double v0,
                         double w0, double t_max, double tol) {
  if (tol <= 0) throw InvalidArgument("solve_gauge_ivp: tol must be positive");
  if (!(u0 > 0)) throw InvalidArgument("solve_gauge_ivp: u0 must be positive");
  if (w0 == 0) throw InvalidArgument("solve_gauge_ivp: w0 must be nonzero");
  if (t_max < 0) throw InvalidArgument("solve_gauge_ivp: t_max < 0");
  check_denominator(params, t_max);

  const double k1 = params.k1, k2 = params.k2, k3 = params.k3;
  num::Rhs rhs = [&params, k1, k2, k3](double t, const num::Vec& y,
                                       num::Vec& dy) {
    const double q = params.f1_t(t);
    const double u = y[0], v = y[1], w = y[2];
    dy.resize(3);
    dy[0] = (v - k1 * u) / q;
    dy[1] = (u * (k2 * u - k3 * v - 2 * k1 * v) + 2 * v * v) / (u * q);
    dy[2] = w * (3 * v - k3 * u - 2 * k1 * u) / (2 * u * q);
  };
  const double wsign = (w0 > 0) ? 1.0 : -1.0;
  std::function<bool(double, const num::Vec&)> adm =
      [wsign](double, const num::Vec& y) {
        return y[0] > 0 && wsign * y[2] > 0;
      };

  UvwGauge g(GaugeKind::NumericIvp, params, t_max, 0);
  g.ivp_ = std::make_shared<num::DenseSolution>(
      num::integrate_dense(rhs, 0.0, t_max, {u0, v0, w0},
                           std::min(tol, 1e-12), 1e-14, nullptr, &adm));
  return g;
}

std::pair<double, double> transform(double alpha_sq, double beta, double B,
                                    const UvwGauge& gauge) {
  if (!(alpha_sq > 0)) throw InvalidArgument("transform: alpha_sq must be > 0");
  const UvwGauge::Triple g = gauge.eval(B);
  const double h_sq = g.u * alpha_sq + g.v * beta * beta;
  if (!(h_sq > 0))
    throw NonPositiveResult("transform: h^2 is not positive");
  return {h_sq, g.w * beta};
}

std::pair<double, double> inverse_transform(double h_sq, double rho, double B,
                                            const UvwGauge& gauge) {
  const UvwGauge::Triple g = gauge.eval(B);
  return {(h_sq - g.v / (g.w * g.w) * rho * rho) / g.u, rho / g.w};
}

double invert_norm_relation(double target, const UvwGauge& gauge) {
  if (target < 0)
    throw TargetOutOfRange("invert_norm_relation: target < 0");
  if (target == 0) return 0.0;
  const double top = gauge.norm_relation(gauge.t_max());
  if (target > top * (1 + 1e-12))
    throw TargetOutOfRange(
        "invert_norm_relation: target above the range supremum " +
        std::to_string(top));
  if (target >= top) return gauge.t_max();
  return num::bisect(
      [&gauge, target](double B) { return gauge.norm_relation(B) - target; },
      0.0, gauge.t_max(), 1e-12);
}

}  // namespace finsler
