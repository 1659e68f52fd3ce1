#ifndef FINSLER_GEODESIC_HPP
#define FINSLER_GEODESIC_HPP

#include <vector>

#include "finsler/sphere.hpp"

namespace finsler {

// Scalar spray quantities of an (alpha,beta)-metric at slope s with norm b^2:
//   Q = phi'/(phi - s phi'),  Theta = (Q - s Q')/(2 Delta),
//   Psi = Q'/(2 Delta),       Delta = 1 + s Q + (b^2 - s^2) Q'.
struct SprayTerms {
  double Q, Qprime, Theta, Psi, Delta;
};
SprayTerms spray_terms(const PhiSolution& phi, double s, double b_sq);

// Projective-factor building blocks at (x, y) in the chart, all derived from
// the reconstruction:
//   tau    = (k - mu<xi,x>)/sqrt(1+mu|x|^2) * u/w  (= -2 c u / w),
//   theta  = (k1 u - v) tau beta / u - mu<x,y>/(1+mu|x|^2),
//   tau0   = tau_{x^i} y^i,   theta0 = theta_{x^i} y^i   (closed forms),
//   P      = theta + tau {f1 phi'/phi - (k1 + k2 s^2) s} alpha / 2.
struct ProjectiveData {
  Reconstruction rec;
  double tau, theta, tau0, theta0, P;
};
ProjectiveData projective_data(const Point& x, const Point& y,
                               const NavigationBundle& bundle);
double projective_factor(const Point& x, const Point& y,
                         const NavigationBundle& bundle);

enum class ParamKind { HArclength, FArclength };

// Samples live on the ambient sphere |p| = 1/sqrt(mu) so a path remains a
// single object across chart re-centerings.
struct GeodesicSample {
  double t;
  Point p, dp;
};
struct GeodesicPath {
  ParamKind kind;
  double mu;
  std::vector<GeodesicSample> samples;
};

GeodesicPath integrate_geodesic_h(const Point& x0, const Point& y0, double T,
                                  double mu, double tol,
                                  int n_samples = 1001);
GeodesicPath integrate_geodesic(const Point& x0, const Point& y0, double T,
                                const NavigationBundle& bundle, double tol,
                                int n_samples = 1001);

// F(p, dp) evaluated directly on the ambient sphere (no chart needed).
double ambient_finsler_norm(const Point& p, const Point& dp,
                            const NavigationBundle& bundle);

// Integrate the F-geodesic from (x0, y0) until it returns to its starting
// point; period equals the F-length of the closed geodesic.
struct ClosedGeodesic {
  double period;
  double closure_error;  // ambient distance |p(period) - p(0)|
  GeodesicPath path;
};
ClosedGeodesic closed_geodesic(const Point& x0, const Point& y0,
                               const NavigationBundle& bundle, double tol);

// F-length of the h-great circle through ambient p0 with h-unit ambient
// tangent q0, by adaptive quadrature.
double circle_f_length(const Point& p0, const Point& q0,
                       const NavigationBundle& bundle, double tol);

// Closed-geodesic lengths for the canonical gauge: quadrature along the
// pole-to-pole family (L1), closed form for the equatorial family (L2), and
// the small-delta series through delta^4.
double length_L1(const MetricParams& params, double mu, double delta,
                 double tol);
double length_L2(const MetricParams& params, double mu, double delta);
double series_L(const MetricParams& params, double mu, double delta);
// Square-gauge closed form 2 pi/sqrt(mu) +/- 8 pi delta^2/(mu^2 sqrt(mu)).
double length_square(int sign, double mu, double delta);

}  // namespace finsler

#endif
