#include "finsler/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "finsler/curvature.hpp"
#include "finsler/errors.hpp"
#include "finsler/gauge.hpp"
#include "finsler/geodesic.hpp"
#include "finsler/phi.hpp"
#include "finsler/sphere.hpp"

namespace finsler {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

struct Check {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (detail.tellp() > 0) detail << "; ";
      detail << what;
    }
  }
  AcceptanceResult result(int id, const std::string& name) {
    return {id, name, pass, pass ? "ok" : detail.str()};
  }
};

// Square-family helpers.
MetricParams square_params(int sign, double eps) {
  return MetricParams(sign > 0 ? 2.0 : -2.0, 0.0, sign > 0 ? -3.0 : 3.0, eps);
}

UvwGauge square_gauge_for(int sign, double mu, double delta) {
  const double target = 4.0 * delta * delta / (mu * mu);
  const double B =
      (sign > 0) ? target / (1.0 + target) : target / (1.0 - target);
  const double cap = (sign > 0) ? 1.0 : 0.5;
  const double t_max = std::min(B * 1.001 + 1e-9, 0.999 * cap);
  return square_gauge(sign, t_max);
}

SquareVariant variant_of(int sign, double eps) {
  if (sign > 0 && eps == 2.0) return SquareVariant::SquarePlus2;
  if (sign > 0) return SquareVariant::ZeroPlus;
  return SquareVariant::ZeroMinus;
}

// Criterion 1: numerical extrema of the two-variable reduction over its
// compact domain match the closed-form extrema of the square families.
AcceptanceResult crit_square_extrema() {
  Check ck;
  const double cases[][2] = {{1.0, 0.05}, {1.0, 0.1}, {2.0, 0.2}};
  struct V {
    int sign;
    double eps;
  } variants[] = {{1, 2.0}, {1, 0.0}, {-1, 0.0}};
  for (const auto& mc : cases) {
    const double mu = mc[0], delta = mc[1];
    for (const V& v : variants) {
      if (v.sign < 0 && !(mu * mu > 12.0 * delta * delta)) continue;
      const MetricParams p = square_params(v.sign, v.eps);
      const UvwGauge g = square_gauge_for(v.sign, mu, delta);
      const double t_o = std::sqrt(invert_norm_relation(
          4.0 * delta * delta / (mu * mu), g));
      const PhiSolution phi = solve_phi(p, std::max(t_o * 1.01, 1e-3), 1e-10);
      const FlagCurvatureReport rep = extrema_R_tilde(phi, g, mu, delta, 401);
      const auto [lo, hi] = closed_form_extrema(variant_of(v.sign, v.eps), mu,
                                                delta);
      ck.require(std::abs(rep.min - lo) <= 1e-6 * std::abs(lo),
                 "min mismatch sign=" + std::to_string(v.sign) +
                     " eps=" + fmt(v.eps) + " mu=" + fmt(mu) +
                     " delta=" + fmt(delta) + ": " + fmt(rep.min) + " vs " +
                     fmt(lo));
      ck.require(std::abs(rep.max - hi) <= 1e-6 * std::abs(hi),
                 "max mismatch sign=" + std::to_string(v.sign) +
                     " eps=" + fmt(v.eps) + " mu=" + fmt(mu) +
                     " delta=" + fmt(delta) + ": " + fmt(rep.max) + " vs " +
                     fmt(hi));
    }
  }
  return ck.result(1, "square-family curvature extrema vs closed forms");
}

// Criterion 2: the minimum curvature of the eps=2 square family stays
// positive across an admissible (mu, delta) grid.
AcceptanceResult crit_positivity() {
  Check ck;
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) {
      const double mu = 0.5 + 2.5 * i / 19.0;
      const double delta = 1.0 * j / 19.0;
      const double lo =
          closed_form_extrema(SquareVariant::SquarePlus2, mu, delta).first;
      ck.require(lo > 0, "min <= 0 at mu=" + fmt(mu) + " delta=" + fmt(delta));
    }
  return ck.result(2, "positive lower curvature bound for the eps=2 family");
}

// Criterion 3: the two closed-geodesic length integrals agree.
AcceptanceResult crit_L1_L2() {
  Check ck;
  std::mt19937 rng(20240817);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  int done = 0;
  while (done < 50) {
    const double k1 = uni(rng), k2 = uni(rng), k3 = uni(rng);
    if (std::abs(k2 - k1 * k3) < 0.05) continue;
    const double eps = 0.3 * uni(rng);
    const double mu = 1.25 + 0.75 * uni(rng);
    MetricParams p(k1, k2, k3, eps);
    const double reg = regularity_range(p);
    const double b_max =
        std::min(0.3, 0.5 * std::min(reg, 1.0)) * (0.55 + 0.45 * uni(rng));
    const double delta = 0.5 * mu * std::sqrt(b_max);
    const double L1 = length_L1(p, mu, delta, 1e-12);
    const double L2 = length_L2(p, mu, delta);
    ck.require(std::abs(L1 - L2) / L2 < 1e-8,
               "L1/L2 mismatch at k=(" + fmt(k1) + "," + fmt(k2) + "," +
                   fmt(k3) + ") eps=" + fmt(eps) + " mu=" + fmt(mu) +
                   " delta=" + fmt(delta) + ": " + fmt(L1) + " vs " + fmt(L2));
    ++done;
  }
  return ck.result(3, "pole-to-pole and equatorial lengths agree");
}

// Criterion 4: the small-delta series captures the length through delta^4.
AcceptanceResult crit_series_order() {
  Check ck;
  const MetricParams sets[] = {MetricParams(2, 0, -3, 0),
                               MetricParams(0, 1, 1, 0)};
  for (const MetricParams& p : sets) {
    double lo = 0, hi = 0;
    bool first = true;
    for (double delta : {0.1, 0.05, 0.025}) {
      const double r =
          (length_L2(p, 1.0, delta) - series_L(p, 1.0, delta)) /
          std::pow(delta, 6);
      if (first || r < lo) lo = r;
      if (first || r > hi) hi = r;
      first = false;
    }
    const double scale = std::max(std::abs(lo), std::abs(hi));
    ck.require(scale > 0 && (hi - lo) / scale < 0.2,
               "remainder/delta^6 varies by " +
                   fmt(scale > 0 ? (hi - lo) / scale : 0.0) + " for k=(" +
                   fmt(p.k1) + "," + fmt(p.k2) + "," + fmt(p.k3) + ")");
  }
  return ck.result(4, "length series remainder is order delta^6");
}

// Criterion 5: an integrated pole-to-pole closed geodesic of the square model
// reproduces the closed-form length.
AcceptanceResult crit_square_geodesic_length() {
  Check ck;
  const double mu = 1.0, delta = 0.1;
  for (int sign : {1, -1}) {
    const SphereData d(mu, 2.0 * delta / std::sqrt(mu), {0.0, 0.0});
    const NavigationBundle bundle(d, square_params(sign, sign > 0 ? 2.0 : 0.0),
                                  square_gauge_for(sign, mu, delta));
    // The origin is a vanishing point of grad c; any direction gives a
    // pole-to-pole great circle.
    const ClosedGeodesic cg =
        closed_geodesic({0.0, 0.0}, {1.0, 0.0}, bundle, 1e-11);
    const double expect = length_square(sign, mu, delta);
    ck.require(std::abs(cg.period - expect) / expect < 1e-5,
               "length mismatch sign=" + std::to_string(sign) + ": " +
                   fmt(cg.period) + " vs " + fmt(expect));
    ck.require(cg.closure_error < 1e-6,
               "geodesic fails to close, err=" + fmt(cg.closure_error));
  }
  return ck.result(5, "integrated square-model geodesic length");
}

NavigationBundle generic_bundle(const MetricParams& p, double mu, double k,
                                const std::vector<double>& xi) {
  return NavigationBundle(SphereData(mu, k, xi), p, canonical_gauge(p));
}

// Criterion 6: the pointwise curvature assembly agrees with the two-variable
// reduction.
AcceptanceResult crit_curvature_routes() {
  Check ck;
  std::mt19937 rng(993214);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  struct S {
    MetricParams p;
    double k;
  } sets[] = {
      {MetricParams(1, -1, 0, 0.2), 0.25},  {MetricParams(0, 1, 1, 0.1), 0.3},
      {MetricParams(2, 0, -3, 2.0), 0.25},  {MetricParams(2, 0, -3, 0.0), 0.25},
      {MetricParams(-2, 0, 3, 0.0), 0.25},
  };
  for (const S& s : sets) {
    const double mu = 1.0;
    const NavigationBundle bundle =
        generic_bundle(s.p, mu, s.k, {0.05, -0.04});
    const double delta = bundle.delta();
    const PhiSolution& phi = bundle.phi();
    for (int i = 0; i < 40; ++i) {
      Point x = {0.4 * uni(rng), 0.4 * uni(rng)};
      Point y = {uni(rng), uni(rng)};
      if (y[0] == 0 && y[1] == 0) y[0] = 1;
      const double K = flag_curvature_numeric(x, y, bundle);
      const Reconstruction r = reconstruct(x, y, bundle);
      const double R = R_eval(std::clamp(r.s, -phi.s_max(), phi.s_max()),
                              r.c * r.c, phi, bundle.gauge(), mu, delta);
      ck.require(std::abs(K - R) <= 1e-4 * (1.0 + std::abs(K)),
                 "K vs R mismatch for k=(" + fmt(s.p.k1) + "," + fmt(s.p.k2) +
                     "," + fmt(s.p.k3) + "): " + fmt(K) + " vs " + fmt(R));
    }
  }
  return ck.result(6, "pointwise curvature matches the (s,t) reduction");
}

// Criterion 7: delta = 0 degenerates to the round sphere.
AcceptanceResult crit_riemannian_degeneration() {
  Check ck;
  const double mu = 1.3;
  const MetricParams p(2, 0, -3, 0);
  const NavigationBundle bundle =
      NavigationBundle(SphereData(mu, 0.0, {0.0, 0.0}), p, canonical_gauge(p));
  std::mt19937 rng(5150);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    Point x = {0.6 * uni(rng), 0.6 * uni(rng)};
    Point y = {uni(rng), uni(rng)};
    if (y[0] == 0 && y[1] == 0) y[0] = 1;
    const double K = flag_curvature_closed(x, y, bundle);
    ck.require(std::abs(K - mu) < 1e-9,
               "K != mu at sample " + std::to_string(i) + ": " + fmt(K));
  }
  const ClosedGeodesic cg =
      closed_geodesic({0.1, -0.2}, {0.3, 1.0}, bundle, 1e-12);
  const double expect = 2.0 * std::numbers::pi / std::sqrt(mu);
  ck.require(std::abs(cg.period - expect) < 1e-9,
             "closed-geodesic length " + fmt(cg.period) + " vs " + fmt(expect));
  return ck.result(7, "delta=0 degenerates to constant curvature mu");
}

// Criterion 8: numeric gauge solutions match the closed forms.
AcceptanceResult crit_gauge_crosscheck() {
  Check ck;
  {
    const MetricParams p(1, -1, 0, 0);
    const double t_max = 1.0;
    const UvwGauge closed = canonical_gauge(p, t_max);
    const UvwGauge ivp =
        solve_gauge_ivp(p, 1.0, p.k1 + p.k3, 1.0, t_max, 1e-12);
    for (int i = 0; i <= 50; ++i) {
      const double B = t_max * i / 50.0;
      const auto a = closed.eval(B), b = ivp.eval(B);
      ck.require(std::abs(a.u - b.u) < 1e-8 && std::abs(a.v - b.v) < 1e-8 &&
                     std::abs(a.w - b.w) < 1e-8,
                 "canonical mismatch at B=" + fmt(B));
    }
  }
  for (int sign : {1, -1}) {
    const MetricParams p = square_params(sign, 0);
    const double t_max = sign > 0 ? 0.9 : 0.45;
    const UvwGauge closed = square_gauge(sign, t_max);
    const UvwGauge ivp = solve_gauge_ivp(p, 1.0, 0.0, 1.0, t_max, 1e-12);
    for (int i = 0; i <= 50; ++i) {
      const double B = t_max * i / 50.0;
      const auto a = closed.eval(B), b = ivp.eval(B);
      ck.require(std::abs(a.u - b.u) < 1e-8 && std::abs(a.v - b.v) < 1e-8 &&
                     std::abs(a.w - b.w) < 1e-8,
                 "square mismatch sign=" + std::to_string(sign) +
                     " at B=" + fmt(B));
    }
  }
  return ck.result(8, "gauge ODE solutions match closed forms");
}

// Criterion 9: the regularity table and the square-minus admissibility bound.
AcceptanceResult crit_regularity_table() {
  Check ck;
  struct Row {
    const char* name;
    double expect;
    std::function<double(double)> phi, dphi, ddphi;
  };
  const Row rows[] = {
      {"1+s", 1.0, [](double s) { return 1.0 + s; },
       [](double) { return 1.0; }, [](double) { return 0.0; }},
      {"(1+s)^2", 1.0, [](double s) { return (1.0 + s) * (1.0 + s); },
       [](double s) { return 2.0 * (1.0 + s); }, [](double) { return 2.0; }},
      {"1+s^2", 1.0, [](double s) { return 1.0 + s * s; },
       [](double s) { return 2.0 * s; }, [](double) { return 2.0; }},
      {"1-s^2", 1.0 / std::sqrt(2.0), [](double s) { return 1.0 - s * s; },
       [](double s) { return -2.0 * s; }, [](double) { return -2.0; }},
  };
  for (const Row& r : rows) {
    const double b = regularity_sup_direct(r.phi, r.dphi, r.ddphi);
    ck.require(std::abs(b - r.expect) < 1e-6,
               std::string("b-hat for ") + r.name + ": " + fmt(b) + " vs " +
                   fmt(r.expect));
  }
  // The family-level constant agrees for the non-Randers rows.
  ck.require(std::abs(b_hat(solve_phi(MetricParams(2, 0, -3, 2), 0.5, 1e-9)) -
                      1.0) < 1e-6,
             "family b-hat for (1+s)^2");
  ck.require(std::abs(b_hat(solve_phi(MetricParams(-2, 0, 3, 0), 0.5, 1e-9)) -
                      1.0 / std::sqrt(2.0)) < 1e-6,
             "family b-hat for 1-s^2");

  auto try_minus = [](double delta) {
    const double mu = 1.0;
    const SphereData d(mu, 2.0 * delta / std::sqrt(mu), {0.0, 0.0});
    NavigationBundle(d, square_params(-1, 0.0),
                     square_gauge(-1, 0.499));
  };
  bool rejected = false;
  try {
    try_minus(0.29);  // 12 delta^2 = 1.0092 > mu^2
  } catch (const RegularityViolated&) {
    rejected = true;
  }
  ck.require(rejected, "mu^2 <= 12 delta^2 was not rejected");
  bool accepted = true;
  try {
    try_minus(0.28);  // 12 delta^2 = 0.9408 < mu^2
  } catch (const Error&) {
    accepted = false;
  }
  ck.require(accepted, "mu^2 > 12 delta^2 was rejected");
  return ck.result(9, "regularity constants and square-minus admissibility");
}

// Criterion 10: conformal-data identities of the navigation model.
AcceptanceResult crit_conformal_invariants() {
  Check ck;
  const double mu = 1.0;
  const SphereData d(mu, 0.3, {0.2, -0.1});
  const MetricParams p(2, 0, -3, 0);
  const NavigationBundle bundle(d, p, canonical_gauge(p));
  std::mt19937 rng(777001);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);

  double mean = 0, m2 = 0;
  std::vector<double> deltas;
  for (int i = 0; i < 100; ++i) {
    const Point x = {uni(rng), uni(rng)};
    deltas.push_back(delta_at(x, d));
  }
  for (double v : deltas) mean += v;
  mean /= deltas.size();
  for (double v : deltas) m2 += (v - mean) * (v - mean);
  ck.require(std::sqrt(m2 / deltas.size()) < 1e-10,
             "delta is not constant, std=" + fmt(std::sqrt(m2 / deltas.size())));

  for (int i = 0; i < 50; ++i) {
    const Point x = {0.8 * uni(rng), 0.8 * uni(rng)};
    const Point y = {uni(rng), uni(rng)};
    const double w2 = 1.0 + mu * (x[0] * x[0] + x[1] * x[1]);
    const double m = d.k - mu * (d.xi[0] * x[0] + d.xi[1] * x[1]);
    const double xy = x[0] * y[0] + x[1] * y[1];
    const double xiy = d.xi[0] * y[0] + d.xi[1] * y[1];
    const Reconstruction r = reconstruct(x, y, bundle);
    const double res39 =
        m * xy + w2 * (xiy - r.gauge.w * std::sqrt(w2) * r.beta);
    ck.require(std::abs(res39) < 1e-10 * (1.0 + std::abs(m * xy)),
               "closed-1-form identity residual " + fmt(res39));
    const double res40 =
        r.h_sq - (r.gauge.u * r.alpha * r.alpha + r.gauge.v * r.beta * r.beta);
    ck.require(std::abs(res40) < 1e-10 * (1.0 + r.h_sq),
               "norm-splitting identity residual " + fmt(res40));
  }

  // c_{i|j} + mu c h_{ij} = 0 and p_{i|j} + 2 c h_{ij} = 0 (p_i = 2 c_i/mu),
  // with the coordinate derivative taken by central differences.
  const double eps = 1e-6;
  for (int i = 0; i < 10; ++i) {
    const Point x = {0.7 * uni(rng), 0.7 * uni(rng)};
    const double c = c_eval(x, d);
    const std::vector<double> h = h_metric(x, mu, 2);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        Point xp = x, xm = x;
        xp[b] += eps;
        xm[b] -= eps;
        const double dcab = (grad_c_cov(xp, d)[a] - grad_c_cov(xm, d)[a]) /
                            (2.0 * eps);
        double cov = dcab;
        const std::vector<double> ci = grad_c_cov(x, d);
        for (int k = 0; k < 2; ++k)
          cov -= h_christoffel(x, mu, k, a, b) * ci[k];
        const double res25 = cov + mu * c * h[a * 2 + b];
        ck.require(std::abs(res25) < 1e-5, "hessian identity " + fmt(res25));
        const double res24 = 2.0 * cov / mu + 2.0 * c * h[a * 2 + b];
        ck.require(std::abs(res24) < 1e-5, "conformal identity " + fmt(res24));
      }
  }
  return ck.result(10, "conformal navigation-data identities");
}

// Criterion 11: optimizer-located boundary critical points of the eps=0
// square families sit at the predicted (s1, t1).
AcceptanceResult crit_boundary_critical_points() {
  Check ck;
  const double mu = 1.0, delta = 0.1;
  for (int sign : {1, -1}) {
    const MetricParams p = square_params(sign, 0.0);
    const UvwGauge g = square_gauge_for(sign, mu, delta);
    const double t_o = std::sqrt(invert_norm_relation(
        4.0 * delta * delta / (mu * mu), g));
    const PhiSolution phi = solve_phi(p, std::max(t_o * 1.01, 1e-3), 1e-10);
    const FlagCurvatureReport rep = extrema_R_tilde(phi, g, mu, delta, 401);
    const double t1 =
        std::sqrt(2.0) * delta /
        std::sqrt(mu * mu + (sign > 0 ? 6.0 : -6.0) * delta * delta);
    bool found_t1 = false, found_s1 = false;
    for (const CriticalPoint& cp : rep.boundary_diagnostics) {
      if (cp.piece.rfind("s=+t", 0) == 0 || cp.piece.rfind("s=-t", 0) == 0) {
        if (std::abs(cp.t - t1) < 1e-8) found_t1 = true;
      }
      if (cp.piece.rfind("t=t_o", 0) == 0) {
        if (std::abs(cp.s) < 1e-8) found_s1 = true;
      }
    }
    ck.require(found_t1, "edge critical point t1 not found for sign=" +
                             std::to_string(sign) + " (t1=" + fmt(t1) + ")");
    ck.require(found_s1, "edge critical point s1=0 not found for sign=" +
                             std::to_string(sign));
  }
  return ck.result(11, "boundary critical points match the predictions");
}

}  // namespace

std::vector<AcceptanceResult> run_acceptance() {
  std::vector<AcceptanceResult> out;
  auto run = [&out](AcceptanceResult (*fn)(), int id, const char* name) {
    try {
      out.push_back(fn());
    } catch (const std::exception& e) {
      out.push_back({id, name, false, std::string("exception: ") + e.what()});
    }
  };
  run(crit_square_extrema, 1, "square-family curvature extrema vs closed forms");
  run(crit_positivity, 2, "positive lower curvature bound for the eps=2 family");
  run(crit_L1_L2, 3, "pole-to-pole and equatorial lengths agree");
  run(crit_series_order, 4, "length series remainder is order delta^6");
  run(crit_square_geodesic_length, 5, "integrated square-model geodesic length");
  run(crit_curvature_routes, 6, "pointwise curvature matches the (s,t) reduction");
  run(crit_riemannian_degeneration, 7, "delta=0 degenerates to constant curvature mu");
  run(crit_gauge_crosscheck, 8, "gauge ODE solutions match closed forms");
  run(crit_regularity_table, 9, "regularity constants and square-minus admissibility");
  run(crit_conformal_invariants, 10, "conformal navigation-data identities");
  run(crit_boundary_critical_points, 11, "boundary critical points match the predictions");
  return out;
}

bool all_passed(const std::vector<AcceptanceResult>& results) {
  for (const AcceptanceResult& r : results)
    if (!r.pass) return false;
  return true;
}

}  // namespace finsler
