#ifndef FINSLER_PHI_HPP
#define FINSLER_PHI_HPP

#include <array>
#include <functional>
#include <memory>

#include "finsler/numerics.hpp"

namespace finsler {

// Constants (k1, k2, k3) of the defining second-order ODE
//   {1+(k1+k3)s^2+k2 s^4} phi'' = (k1+k2 s^2) {phi - s phi'},   phi(0)=1,
// plus the initial slope epsilon = phi'(0).  Randers type (k2 == k1*k3) is
// rejected at construction.
struct MetricParams {
  double k1, k2, k3, epsilon;

  MetricParams(double k1_, double k2_, double k3_, double eps_);

  double f1(double s) const {
    const double s2 = s * s;
    return 1.0 + (k1 + k3) * s2 + k2 * s2 * s2;
  }
  // d f1 / d s
  double f1_deriv(double s) const {
    return 2.0 * (k1 + k3) * s + 4.0 * k2 * s * s * s;
  }
  // The same quartic as a function of t = s^2 (also the b^2 denominator of
  // the gauge ODEs).
  double f1_t(double t) const { return 1.0 + (k1 + k3) * t + k2 * t * t; }

  bool is_square_plus() const { return k1 == 2.0 && k2 == 0.0 && k3 == -3.0; }
  bool is_square_minus() const { return k1 == -2.0 && k2 == 0.0 && k3 == 3.0; }
};

enum class PhiForm { SquarePlus, SquareMinus, Numeric };

// An evaluable model of phi, phi', phi'' on [-s_max, s_max]: a closed form for
// the square families, a dense ODE solution otherwise.
class PhiSolution {
 public:
  const MetricParams& params() const { return params_; }
  double s_max() const { return s_max_; }
  PhiForm form() const { return form_; }

  double phi(double s) const;
  double dphi(double s) const;
  double ddphi(double s) const;
  // phi - s phi', evaluated without cancellation through the interpolant.
  double phi_minus_s_dphi(double s) const;
  // |{f1} phi'' - (k1+k2 s^2){phi - s phi'}| with phi'' taken from the
  // interpolant (not from the ODE identity), so the residual is a genuine
  // accuracy measure for numeric solutions.
  double residual(double s) const;
  // Closed form exp(-1/2 int_0^{s^2} (k1+k2 r)/(1+(k1+k3)r+k2 r^2) dr)
  // for phi - s phi'.
  double phi_minus_s_dphi_closed(double s) const;

 private:
  friend PhiSolution solve_phi(const MetricParams&, double, double);
  PhiSolution(MetricParams p, double s_max, PhiForm form)
      : params_(p), s_max_(s_max), form_(form) {}

  const num::DenseSolution& half(double s) const;  // range-checked

  MetricParams params_;
  double s_max_;
  PhiForm form_;
  std::shared_ptr<const num::DenseSolution> right_, left_;  // numeric halves
};

PhiSolution solve_phi(const MetricParams& params, double s_max, double tol);

// Taylor data (c0..c4) of phi at s = 0:
//   (1, eps, k1/2, 0, k2/12 - k1^2/8 - k1 k3/12).
std::array<double, 5> taylor_phi(const MetricParams& params);

// Supremum of b^2 on which F is regular (case analysis on the sign of k2),
// with phi > 0 verified on the resulting s-range.  May be +infinity.
double regularity_range(const MetricParams& params);

// The metric-independent regularity constant b-hat of the family.
double b_hat(const PhiSolution& phi);

// Regularity supremum for an explicitly given phi, checked directly against
// the three positivity inequalities (works for Randers-type phi as well).
double regularity_sup_direct(const std::function<double(double)>& phi,
                             const std::function<double(double)>& dphi,
                             const std::function<double(double)>& ddphi,
                             double b_probe_max = 4.0);

}  // namespace finsler

#endif
