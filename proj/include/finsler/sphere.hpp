#ifndef FINSLER_SPHERE_HPP
#define FINSLER_SPHERE_HPP

#include <optional>
#include <vector>

#include "finsler/gauge.hpp"
#include "finsler/phi.hpp"

namespace finsler {

using Point = std::vector<double>;

// Navigation data in the projective chart of the curvature-mu sphere:
//   h = sqrt((1+mu|x|^2)|y|^2 - mu<x,y>^2) / (1+mu|x|^2),
//   c = (-k + mu<xi,x>) / (2 sqrt(1+mu|x|^2)).
// delta = sqrt(||grad c||_h^2 + mu c^2) is derived, never stored.
struct SphereData {
  double mu;
  double k;
  std::vector<double> xi;

  SphereData(double mu_, double k_, std::vector<double> xi_);
  int dim() const { return static_cast<int>(xi.size()); }
};

double h_sq_eval(const Point& x, const Point& y, double mu);
double h_eval(const Point& x, const Point& y, double mu);

// Metric matrix h_ij and its inverse h^ij (row-major n x n).
std::vector<double> h_metric(const Point& x, double mu, int n);
std::vector<double> h_metric_inverse(const Point& x, double mu, int n);
// Christoffel symbol Gamma^k_{ij} of h (projective chart closed form).
double h_christoffel(const Point& x, double mu, int k, int i, int j);

double c_eval(const Point& x, const SphereData& data);
// Coordinate partials c_i.
std::vector<double> grad_c_cov(const Point& x, const SphereData& data);
double c0_eval(const Point& x, const Point& y, const SphereData& data);
// ||grad c||_h^2 = h^{ij} c_i c_j.
double grad_c_norm_sq(const Point& x, const SphereData& data);
double delta_at(const Point& x, const SphereData& data);
double delta_of(const SphereData& data);

// A vanishing point of grad c.  When the point lies outside the chart the
// location is reported as a chart direction (empty when it is the antipode of
// an in-chart pole).
struct Pole {
  std::optional<Point> x;
  std::vector<double> direction_at_infinity;
  double c_value;
};
struct Poles {
  Pole P, Q;
};
Poles find_c_poles(const SphereData& data);

// Conversions between the chart and the ambient sphere |p| = 1/sqrt(mu) in
// R^{n+1}; c lifts to the linear functional <a, p>.
namespace chart {
Point to_ambient(const Point& x, double mu);
Point to_ambient_velocity(const Point& x, const Point& v, double mu);
Point from_ambient(const Point& p, double mu);  // requires p.back() > 0
Point from_ambient_velocity(const Point& p, const Point& dp, double mu);
std::vector<double> ambient_functional(const SphereData& data);
SphereData data_from_functional(const std::vector<double>& a, double mu);
}  // namespace chart

// Navigation data + metric family + gauge, validated jointly: the largest
// recovered B stays inside the regular range of the family.
class NavigationBundle {
 public:
  NavigationBundle(SphereData sphere, MetricParams params, UvwGauge gauge);

  const SphereData& sphere() const { return sphere_; }
  const MetricParams& params() const { return params_; }
  const UvwGauge& gauge() const { return gauge_; }
  const PhiSolution& phi() const { return phi_; }
  double delta() const { return delta_; }
  double b_sq_max() const { return b_sq_max_; }

  // Bundle with the same family/gauge but rotated navigation data (used for
  // chart re-centering during geodesic integration).
  NavigationBundle with_sphere(SphereData s) const;

 private:
  SphereData sphere_;
  MetricParams params_;
  UvwGauge gauge_;
  double delta_;
  double b_sq_max_;
  PhiSolution phi_;
};

struct Reconstruction {
  double h_sq, c, c0;
  double B;                // recovered ||beta||_alpha^2
  UvwGauge::Triple gauge;  // (u, v, w) at B
  double alpha, beta, s;
};

// Reconstruction from the chart-free scalars (h^2, c, c_0); used both by the
// chart evaluator below and by ambient-sphere evaluation.
Reconstruction reconstruct_core(double h_sq, double c, double c0,
                                const NavigationBundle& bundle);
Reconstruction reconstruct(const Point& x, const Point& y,
                           const NavigationBundle& bundle);
// F(x, y) = alpha * phi(beta/alpha).
double finsler_norm(const Point& x, const Point& y,
                    const NavigationBundle& bundle);

}  // namespace finsler

#endif
