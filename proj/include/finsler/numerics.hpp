#ifndef FINSLER_NUMERICS_HPP
#define FINSLER_NUMERICS_HPP

#include <array>
#include <functional>
#include <vector>

namespace finsler::num {

using Vec = std::vector<double>;
using Rhs = std::function<void(double t, const Vec& y, Vec& dydt)>;

// Dense solution of an IVP: node data at every accepted step plus quintic
// Hermite interpolation in between.  Second derivatives at the nodes come
// either from a user callback or from a directional finite difference of the
// right-hand side.
class DenseSolution {
 public:
  double t_begin() const { return t_.front(); }
  double t_end() const { return t_.back(); }
  std::size_t dim() const { return y_.empty() ? 0 : y_.front().size(); }

  void eval(double t, Vec& out) const;
  void eval_deriv(double t, Vec& out) const;
  double eval(double t, std::size_t component) const;
  double eval_deriv(double t, std::size_t component) const;

  const std::vector<double>& nodes() const { return t_; }
  const Vec& node_state(std::size_t i) const { return y_[i]; }

 private:
  friend DenseSolution integrate_dense(const Rhs&, double, double, Vec,
                                       double, double, const Rhs*,
                                       const std::function<bool(double, const Vec&)>*);
  std::size_t interval(double t) const;

  std::vector<double> t_;
  std::vector<Vec> y_, f_, f2_;
};

// Adaptive Dormand-Prince 5(4).  `second_deriv`, when given, supplies y'' for
// the dense output; otherwise it is approximated by a directional difference
// of `rhs`.  `admissible`, when given, is checked at every accepted node and a
// SolutionLeavesAdmissibleRegion is thrown on failure.
DenseSolution integrate_dense(
    const Rhs& rhs, double t0, double t1, Vec y0, double rtol, double atol,
    const Rhs* second_deriv = nullptr,
    const std::function<bool(double, const Vec&)>* admissible = nullptr);

// Adaptive Gauss-Kronrod 7/15 with interval bisection, absolute tolerance.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol);

// Bisection for monotone root bracketing; returns x with f(x) ~ 0.
// Iterates until |f| < ftol or the bracket shrinks below xtol.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double ftol, double xtol = 1e-15);

// Golden-section minimizer on [a, b].
double golden_min(const std::function<double(double)>& f, double a, double b,
                  double xtol);

// Nelder-Mead in two variables.
struct Simplex2Result {
  std::array<double, 2> x;
  double value;
};
Simplex2Result nelder_mead2(const std::function<double(double, double)>& f,
                            std::array<double, 2> start, double scale,
                            double xtol, int max_iter = 500);

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Vec& a);

}  // namespace finsler::num

#endif
