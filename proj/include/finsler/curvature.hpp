#ifndef FINSLER_CURVATURE_HPP
#define FINSLER_CURVATURE_HPP

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "finsler/geodesic.hpp"
#include "finsler/sphere.hpp"

namespace finsler {

// Exact polynomial quotient (4 f1 - f2^2)/s^2, a polynomial in s^2 (the
// constant terms cancel), with f2 = k2 s^4 - k1 s^2 - 2:
//   4 k3 + (8 k2 - k1^2) s^2 + 2 k1 k2 s^4 - k2^2 s^6.
double quotient_4f1_f2sq(const MetricParams& p, double s);

// Two-variable reduction R(s, t) of the flag curvature, t = c^2; u, v, w are
// evaluated at B(t) solving w^2 B/(u + v B) = 4(delta^2 - mu t)/mu^2.
double R_eval(double s, double t, const PhiSolution& phi, const UvwGauge& gauge,
              double mu, double delta);
// Variant on the domain {0 <= t <= t_o, |s| <= t}: u, v, w at t^2 and the
// t-factor replaced by A = (delta^2 - (mu^2/4) w^2 t^2/(u + v t^2))/mu.
double R_tilde_eval(double s, double t, const PhiSolution& phi,
                    const UvwGauge& gauge, double mu, double delta);

// Flag curvature at (x, y): closed form assembled from the projective data,
// finite differences of the projective factor, and the cross-checked numeric
// route (closed vs FD within 1e-4, otherwise aborts with a diagnostic).
double flag_curvature_closed(const Point& x, const Point& y,
                             const NavigationBundle& bundle);
double flag_curvature_fd(const Point& x, const Point& y,
                         const NavigationBundle& bundle);
double flag_curvature_numeric(const Point& x, const Point& y,
                              const NavigationBundle& bundle);

enum class DomainKind { D, DTilde };

// Compact parameter domain of the curvature reduction.
struct CurvatureDomain {
  DomainKind kind;
  double mu, delta;
  double t_max;  // delta^2/mu for D, t_o for DTilde
  UvwGauge gauge;

  double s_bound(double t) const;  // sqrt(B(t)) for D, t for DTilde
};
CurvatureDomain domain_D(const UvwGauge& gauge, double mu, double delta);
CurvatureDomain domain_D_tilde(const UvwGauge& gauge, double mu, double delta);

struct CriticalPoint {
  std::string piece;
  double s, t, value;
};
struct FlagCurvatureReport {
  double min, max;
  double argmin_s, argmin_t, argmax_s, argmax_t;
  std::string method;  // "Grid+Refine" or "ClosedForm"
  std::vector<CriticalPoint> boundary_diagnostics;
};

// Grid scan (grid x grid) + simplex refinement from the best cells + 1-D
// searches along every boundary piece.
FlagCurvatureReport extrema(const CurvatureDomain& domain,
                            const std::function<double(double, double)>& eval,
                            int grid = 801);
FlagCurvatureReport extrema_R(const PhiSolution& phi, const UvwGauge& gauge,
                              double mu, double delta, int grid = 801);
FlagCurvatureReport extrema_R_tilde(const PhiSolution& phi,
                                    const UvwGauge& gauge, double mu,
                                    double delta, int grid = 801);

// Closed-form flag curvature of the square families (sign = +1 or -1) as a
// function of the slope s and the value c of the conformal scalar.
double square_K_closed(int sign, double eps, double mu, double delta, double s,
                       double c);

enum class SquareVariant { SquarePlus2, ZeroPlus, ZeroMinus };
// (min, max) of the flag curvature over the sphere:
//   SquarePlus2: ((sqrt(4d^2+m^2)-/+2d)^3/(m sqrt(4d^2+m^2)))
//   ZeroPlus:    ((m^2-8d^2)/m, (m^2+4d^2)^4/(m (m^2+8d^2)^3))
//   ZeroMinus:   (m^5(m^2-16d^2)/(m^2-8d^2)^3, (m^2-4d^2)^4/(m (m^2-8d^2)^3)),
// the last requiring m^2 > 12 d^2.
std::pair<double, double> closed_form_extrema(SquareVariant variant, double mu,
                                              double delta);

}  // namespace finsler

#endif
