#ifndef FINSLER_GAUGE_HPP
#define FINSLER_GAUGE_HPP

#include <memory>
#include <utility>

#include "finsler/numerics.hpp"
#include "finsler/phi.hpp"

namespace finsler {

enum class GaugeKind { Canonical, Square, NumericIvp };

// A deformation triple (u, v, w) of t = b^2 solving the gauge ODE system:
//   u' = (v - k1 u) / q,
//   v' = [u(k2 u - k3 v - 2 k1 v) + 2 v^2] / (u q),
//   w' = w (3v - k3 u - 2 k1 u) / (2 u q),      q = 1 + (k1+k3) t + k2 t^2.
// Canonical and square-family closed forms are provided alongside a numeric
// IVP representation.
class UvwGauge {
 public:
  struct Triple {
    double u, v, w;
  };

  GaugeKind kind() const { return kind_; }
  const MetricParams& params() const { return params_; }
  double t_max() const { return t_max_; }
  int sign() const { return sign_; }  // square gauges only (+1 / -1)

  Triple eval(double B) const;
  // w^2 B / (u + v B), the squared rho-norm as a function of B.
  double norm_relation(double B) const;
  // sigma(B) = 1/2 int_0^B (k2 t + k3)/q(t) dt (canonical gauge).
  double sigma(double B) const;

 private:
  friend UvwGauge canonical_gauge(const MetricParams&, double);
  friend UvwGauge square_gauge(int, double);
  friend UvwGauge solve_gauge_ivp(const MetricParams&, double, double, double,
                                  double, double);
  UvwGauge(GaugeKind k, MetricParams p, double t_max, int sign)
      : kind_(k), params_(p), t_max_(t_max), sign_(sign) {}

  GaugeKind kind_;
  MetricParams params_;
  double t_max_;
  int sign_ = 0;
  std::shared_ptr<const num::DenseSolution> ivp_;
};

UvwGauge canonical_gauge(const MetricParams& params, double t_max);
// Canonical gauge on [0, 0.999 * regularity_range(params)].
UvwGauge canonical_gauge(const MetricParams& params);

// (u, v, w) = ((1 -/+ B)^2, 0, sqrt(1 -/+ B)) for the square families
// (k1, k2, k3) = (+/-2, 0, -/+3).  sign = +1 or -1.
UvwGauge square_gauge(int sign, double t_max);

UvwGauge solve_gauge_ivp(const MetricParams& params, double u0, double v0,
                         double w0, double t_max, double tol);

// h^2 = u alpha^2 + v beta^2, rho = w beta.
std::pair<double, double> transform(double alpha_sq, double beta, double B,
                                    const UvwGauge& gauge);
// alpha^2 = (h^2 - (v/w^2) rho^2)/u, beta = rho/w.
std::pair<double, double> inverse_transform(double h_sq, double rho, double B,
                                            const UvwGauge& gauge);

// Unique B in [0, t_max] with w^2(B) B/(u(B)+v(B) B) = target (bisection; the
// relation is strictly increasing on the regular range).
double invert_norm_relation(double target, const UvwGauge& gauge);

}  // namespace finsler

#endif
