#include "finsler/curvature.hpp"

#include <algorithm>
#include <cmath>

#include "finsler/errors.hpp"

namespace finsler {

namespace {

double norm(const Point& a) {
  double s = 0;
  for (double c : a) s += c * c;
  return std::sqrt(s);
}

// Common brace structure of the two-variable curvature reductions: the value
// is brace_factor * t_like + mu_term, with (u,v,w) and the t-like factor
// supplied by the caller.
double R_core(double s, double t_like, const UvwGauge::Triple& g,
              const PhiSolution& phi, const MetricParams& p, double mu) {
  const double ph = phi.phi(s);
  const double dph = phi.dphi(s);
  const double s2 = s * s;
  const double f1 = p.f1(s);
  const double f2 = p.k2 * s2 * s2 - p.k1 * s2 - 2.0;
  const double f3 = 3.0 * p.k2 * s2 + p.k1 + 3.0 * p.k3;
  const double q4 = quotient_4f1_f2sq(p, s);
  const double brace =
      3.0 * g.u * (f1 * f1 * dph * dph / (ph * ph) + q4) +
      2.0 * (g.u * f3 - g.v) * (f2 - f1 * s * dph / ph);
  return g.u / (ph * ph * g.w * g.w) * brace * t_like +
         mu * g.u * (f1 * s * dph - f2 * ph) / (2.0 * ph * ph * ph);
}

}  // namespace

double quotient_4f1_f2sq(const MetricParams& p, double s) {
  const double s2 = s * s;
  return 4.0 * p.k3 + (8.0 * p.k2 - p.k1 * p.k1) * s2 +
         2.0 * p.k1 * p.k2 * s2 * s2 - p.k2 * p.k2 * s2 * s2 * s2;
}

double R_eval(double s, double t, const PhiSolution& phi, const UvwGauge& gauge,
              double mu, double delta) {
  const double t_top = delta * delta / mu;
  if (t < -1e-12 || t > t_top * (1 + 1e-9) + 1e-12)
    throw OutsideDomain("R_eval: t outside [0, delta^2/mu]");
  t = std::clamp(t, 0.0, t_top);
  const double target = 4.0 * (delta * delta - mu * t) / (mu * mu);
  double B;
  try {
    B = invert_norm_relation(target, gauge);
  } catch (const TargetOutOfRange&) {
    throw OutsideDomain("R_eval: B(t) leaves the gauge range");
  }
  if (s * s > B * (1 + 1e-9) + 1e-12)
    throw OutsideDomain("R_eval: s^2 exceeds B(t)");
  return R_core(s, t, gauge.eval(B), phi, phi.params(), mu);
}

double R_tilde_eval(double s, double t, const PhiSolution& phi,
                    const UvwGauge& gauge, double mu, double delta) {
  if (t < -1e-12 || std::abs(s) > std::abs(t) * (1 + 1e-9) + 1e-12)
    throw OutsideDomain("R_tilde_eval: need 0 <= |s| <= t");
  t = std::max(t, 0.0);
  const UvwGauge::Triple g = gauge.eval(t * t);
  const double rel = g.w * g.w * t * t / (g.u + g.v * t * t);
  const double A = (delta * delta - mu * mu / 4.0 * rel) / mu;
  if (A < -1e-9 * (1 + delta * delta))
    throw OutsideDomain("R_tilde_eval: t exceeds t_o");
  return R_core(s, std::max(A, 0.0), g, phi, phi.params(), mu);
}

double flag_curvature_closed(const Point& x, const Point& y,
                             const NavigationBundle& bundle) {
  const ProjectiveData pd = projective_data(x, y, bundle);
  const MetricParams& p = bundle.params();
  const double mu = bundle.sphere().mu;
  const PhiSolution& phis = bundle.phi();
  const double s = std::clamp(pd.rec.s, -phis.s_max(), phis.s_max());
  const double ph = phis.phi(s);
  const double dph = phis.dphi(s);
  const double s2 = s * s;
  const double f1 = p.f1(s);
  const double al = pd.rec.alpha;
  const double tau2 = pd.tau * pd.tau;
  return (pd.theta * pd.theta - pd.theta0) / (al * al * ph * ph) +
         0.5 / (ph * ph) *
             ((p.k1 + p.k2 * s2) * s - f1 * dph / ph) * pd.tau0 / al -
         f1 * (p.k1 + 2.0 * p.k3 + 3.0 * p.k2 * s2) * s * tau2 * dph /
             (2.0 * ph * ph * ph) +
         3.0 * f1 * f1 * tau2 * dph * dph / (4.0 * ph * ph * ph * ph) +
         (4.0 * p.k2 - p.k1 * p.k1 + 2.0 * p.k2 * (p.k1 + 2.0 * p.k3) * s2 +
          3.0 * p.k2 * p.k2 * s2 * s2) *
             s2 * tau2 / (4.0 * ph * ph);
}

double flag_curvature_fd(const Point& x, const Point& y,
                         const NavigationBundle& bundle) {
  const double P = projective_factor(x, y, bundle);
  const double yn = norm(y);
  if (!(yn > 0)) throw InvalidArgument("flag_curvature_fd: zero vector");
  const double eps = 1e-6 * (1.0 + norm(x));
  Point xp = x, xm = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xp[i] += eps * y[i] / yn;
    xm[i] -= eps * y[i] / yn;
  }
  const double P0 = (projective_factor(xp, y, bundle) -
                     projective_factor(xm, y, bundle)) /
                    (2.0 * eps) * yn;
  const double F = finsler_norm(x, y, bundle);
  return (P * P - P0) / (F * F);
}

double flag_curvature_numeric(const Point& x, const Point& y,
                              const NavigationBundle& bundle) {
  const double kc = flag_curvature_closed(x, y, bundle);
  const double kf = flag_curvature_fd(x, y, bundle);
  if (std::abs(kc - kf) > 1e-4 * (1.0 + std::abs(kc)))
    throw NonConvergence(
        "flag_curvature_numeric: closed-form and finite-difference routes "
        "disagree: " +
        std::to_string(kc) + " vs " + std::to_string(kf));
  return kc;
}

double CurvatureDomain::s_bound(double t) const {
  if (kind == DomainKind::DTilde) return t;
  const double target = 4.0 * (delta * delta - mu * t) / (mu * mu);
  return std::sqrt(
      invert_norm_relation(std::max(target, 0.0), gauge));
}

CurvatureDomain domain_D(const UvwGauge& gauge, double mu, double delta) {
  if (!(mu > 0)) throw InvalidArgument("domain_D: mu must be positive");
  if (delta < 0) throw EmptyDomain("domain_D: delta must be >= 0");
  // B(0) must exist inside the gauge range.
  invert_norm_relation(4.0 * delta * delta / (mu * mu), gauge);
  return {DomainKind::D, mu, delta, delta * delta / mu, gauge};
}

CurvatureDomain domain_D_tilde(const UvwGauge& gauge, double mu, double delta) {
  if (!(mu > 0)) throw InvalidArgument("domain_D_tilde: mu must be positive");
  if (delta < 0) throw EmptyDomain("domain_D_tilde: delta must be >= 0");
  const double t_o = std::sqrt(
      invert_norm_relation(4.0 * delta * delta / (mu * mu), gauge));
  return {DomainKind::DTilde, mu, delta, t_o, gauge};
}

namespace {

struct LineResult {
  double x, value;
  bool interior;
};

// Scan + golden-section extremum of f on [a, b]; maximize if max is set.
LineResult line_extremum(const std::function<double(double)>& f, double a,
                         double b, bool want_max) {
  const int n = 600;
  auto g = [&](double x) { return want_max ? -f(x) : f(x); };
  int best = 0;
  double best_v = g(a);
  for (int i = 1; i <= n; ++i) {
    const double v = g(a + (b - a) * i / n);
    if (v < best_v) {
      best_v = v;
      best = i;
    }
  }
  const double lo = a + (b - a) * std::max(best - 1, 0) / n;
  const double hi = a + (b - a) * std::min(best + 1, n) / n;
  double x = a + (b - a) * best / n;
  double gx = best_v;
  const bool interior = best != 0 && best != n;
  const double improve = 1e-12 * (1.0 + std::abs(gx));
  if (lo < hi) {
    // Golden section is value-limited near an extremum; only accept it when
    // it genuinely improves on the scan node (flat extrema keep the node,
    // which the symmetric scan grid places exactly).
    const double xg = num::golden_min(g, lo, hi, 1e-13);
    const double gg = g(xg);
    if (gg < gx - improve) {
      x = xg;
      gx = gg;
    }
  }
  if (interior) {
    // Polish the location by bisecting the finite-difference derivative, but
    // only when the bracket signs stand clear of the FD noise floor.
    const double fh = 1e-6 * (1.0 + std::abs(x));
    auto der = [&](double z) { return (g(z + fh) - g(z - fh)) / (2.0 * fh); };
    const double w = 1e-4 * (b - a);
    const double dl = std::max(a, x - w), dh = std::min(b, x + w);
    const double noise = 1e-13 * (1.0 + std::abs(gx)) / fh;
    if (dl < dh) {
      const double da = der(dl), db = der(dh);
      if (da < -noise && db > noise) {
        const double xb = num::bisect(der, dl, dh, 0.0, 1e-13);
        if (g(xb) < gx + improve) x = xb;
      }
    }
  }
  return {x, f(x), interior};
}

}  // namespace

FlagCurvatureReport extrema(const CurvatureDomain& domain,
                            const std::function<double(double, double)>& eval,
                            int grid) {
  if (domain.t_max < 0) throw EmptyDomain("extrema: empty domain");
  FlagCurvatureReport rep;
  rep.method = "Grid+Refine";
  const double T = domain.t_max;

  if (T == 0.0) {
    rep.min = rep.max = eval(0.0, 0.0);
    rep.argmin_s = rep.argmax_s = 0.0;
    rep.argmin_t = rep.argmax_t = 0.0;
    return rep;
  }

  // Box coordinates: sg in [-1,1] scaled by s_bound(t), tf in [0,1].
  auto box_eval = [&](double sg, double tf) {
    const double t = std::clamp(tf, 0.0, 1.0) * T;
    const double sb = domain.s_bound(t);
    return eval(std::clamp(sg, -1.0, 1.0) * sb, t);
  };

  struct Cell {
    double v, sg, tf;
  };
  std::vector<Cell> mins, maxs;
  double vmin = 0, vmax = 0;
  double amin_sg = 0, amin_tf = 0, amax_sg = 0, amax_tf = 0;
  bool first = true;
  for (int j = 0; j < grid; ++j) {
    const double tf = static_cast<double>(j) / (grid - 1);
    for (int i = 0; i < grid; ++i) {
      const double sg = -1.0 + 2.0 * i / (grid - 1);
      const double v = box_eval(sg, tf);
      if (first || v < vmin) {
        vmin = v;
        amin_sg = sg;
        amin_tf = tf;
      }
      if (first || v > vmax) {
        vmax = v;
        amax_sg = sg;
        amax_tf = tf;
      }
      first = false;
      mins.push_back({v, sg, tf});
      maxs.push_back({v, sg, tf});
    }
  }
  auto keep_best = [](std::vector<Cell>& c, bool want_max) {
    std::partial_sort(c.begin(), c.begin() + std::min<std::size_t>(5, c.size()),
                      c.end(), [want_max](const Cell& a, const Cell& b) {
                        return want_max ? a.v > b.v : a.v < b.v;
                      });
    c.resize(std::min<std::size_t>(5, c.size()));
  };
  keep_best(mins, false);
  keep_best(maxs, true);

  auto refine = [&](const std::vector<Cell>& starts, bool want_max, double& v,
                    double& arg_sg, double& arg_tf) {
    auto fn = [&](double a, double b) {
      const double val = box_eval(a, b);
      return want_max ? -val : val;
    };
    for (const Cell& c : starts) {
      const num::Simplex2Result r = num::nelder_mead2(
          fn, {c.sg, c.tf}, 2.0 / (grid - 1), 1e-12);
      const double val = want_max ? -r.value : r.value;
      if ((want_max && val > v) || (!want_max && val < v)) {
        v = val;
        arg_sg = std::clamp(r.x[0], -1.0, 1.0);
        arg_tf = std::clamp(r.x[1], 0.0, 1.0);
      }
    }
  };
  refine(mins, false, vmin, amin_sg, amin_tf);
  refine(maxs, true, vmax, amax_sg, amax_tf);

  // Boundary pieces, searched separately.
  struct Piece {
    std::string name;
    std::function<double(double)> f;       // value along the piece
    std::function<double(double)> to_s, to_t;
    double a, b;
  };
  std::vector<Piece> pieces;
  if (domain.kind == DomainKind::DTilde) {
    pieces.push_back({"s=+t", [&](double t) { return eval(t, t); },
                      [](double t) { return t; }, [](double t) { return t; },
                      0.0, T});
    pieces.push_back({"s=-t", [&](double t) { return eval(-t, t); },
                      [](double t) { return -t; }, [](double t) { return t; },
                      0.0, T});
    pieces.push_back({"t=t_o", [&](double s) { return eval(s, T); },
                      [](double s) { return s; }, [T](double) { return T; },
                      -T, T});
  } else {
    const double sb0 = domain.s_bound(0.0);
    pieces.push_back({"t=0", [&](double s) { return eval(s, 0.0); },
                      [](double s) { return s; }, [](double) { return 0.0; },
                      -sb0, sb0});
    const double sbT = domain.s_bound(T);
    if (sbT > 0)
      pieces.push_back({"t=t_max", [&](double s) { return eval(s, T); },
                        [](double s) { return s; }, [T](double) { return T; },
                        -sbT, sbT});
    pieces.push_back({"s=+bound",
                      [&](double t) { return eval(domain.s_bound(t), t); },
                      [&](double t) { return domain.s_bound(t); },
                      [](double t) { return t; }, 0.0, T});
    pieces.push_back({"s=-bound",
                      [&](double t) { return eval(-domain.s_bound(t), t); },
                      [&](double t) { return -domain.s_bound(t); },
                      [](double t) { return t; }, 0.0, T});
  }
  for (const Piece& p : pieces) {
    for (bool want_max : {false, true}) {
      const LineResult r = line_extremum(p.f, p.a, p.b, want_max);
      const double s = p.to_s(r.x), t = p.to_t(r.x);
      if (r.interior)
        rep.boundary_diagnostics.push_back(
            {p.name + (want_max ? " (max)" : " (min)"), s, t, r.value});
      if (r.value < vmin) {
        vmin = r.value;
        amin_sg = (domain.s_bound(t) > 0) ? s / domain.s_bound(t) : 0.0;
        amin_tf = t / T;
      }
      if (r.value > vmax) {
        vmax = r.value;
        amax_sg = (domain.s_bound(t) > 0) ? s / domain.s_bound(t) : 0.0;
        amax_tf = t / T;
      }
    }
  }

  rep.min = vmin;
  rep.max = vmax;
  rep.argmin_t = amin_tf * T;
  rep.argmin_s = amin_sg * domain.s_bound(rep.argmin_t);
  rep.argmax_t = amax_tf * T;
  rep.argmax_s = amax_sg * domain.s_bound(rep.argmax_t);
  return rep;
}

FlagCurvatureReport extrema_R(const PhiSolution& phi, const UvwGauge& gauge,
                              double mu, double delta, int grid) {
  const CurvatureDomain dom = domain_D(gauge, mu, delta);
  // B(t) is shared along grid rows; memoize the last inversion.
  double last_t = -1, last_B = 0;
  auto ev = [&, phi, gauge, mu, delta](double s, double t) mutable {
    if (t != last_t) {
      const double target = 4.0 * (delta * delta - mu * t) / (mu * mu);
      last_B = invert_norm_relation(std::max(target, 0.0), gauge);
      last_t = t;
    }
    if (s * s > last_B) s = (s > 0 ? 1 : -1) * std::sqrt(last_B);
    return R_core(s, t, gauge.eval(last_B), phi, phi.params(), mu);
  };
  return extrema(dom, ev, grid);
}

FlagCurvatureReport extrema_R_tilde(const PhiSolution& phi,
                                    const UvwGauge& gauge, double mu,
                                    double delta, int grid) {
  const CurvatureDomain dom = domain_D_tilde(gauge, mu, delta);
  auto ev = [phi, gauge, mu, delta](double s, double t) {
    return R_tilde_eval(s, t, phi, gauge, mu, delta);
  };
  return extrema(dom, ev, grid);
}

double square_K_closed(int sign, double eps, double mu, double delta, double s,
                       double c) {
  if (sign != 1 && sign != -1)
    throw InvalidArgument("square_K_closed: sign must be +1 or -1");
  const double sg = sign;
  const double s2 = s * s, c2 = c * c, d2 = delta * delta;
  const double phi = 1.0 + eps * s + sg * s2;
  const double num =
      6.0 * mu * (eps * eps - 4.0 * sg) * (1.0 - sg * s2) * (1.0 - sg * s2) *
          c2 +
      (mu * mu + 4.0 * sg * d2) *
          (sg * eps * s2 * s + 6.0 * sg * s2 + 3.0 * eps * s + 2.0) * phi;
  const double base = mu / 4.0 + sg * d2 / mu - sg * c2;
  const double den =
      128.0 / (mu * mu) * base * base * base * phi * phi * phi * phi;
  if (den == 0) throw DenominatorVanishes("square_K_closed: denominator is 0");
  return num / den;
}

std::pair<double, double> closed_form_extrema(SquareVariant variant, double mu,
                                              double delta) {
  if (!(mu > 0))
    throw InvalidArgument("closed_form_extrema: mu must be positive");
  if (delta < 0)
    throw InvalidArgument("closed_form_extrema: delta must be >= 0");
  const double m2 = mu * mu, d2 = delta * delta;
  switch (variant) {
    case SquareVariant::SquarePlus2: {
      const double r = std::sqrt(4.0 * d2 + m2);
      const double lo = (r - 2.0 * delta), hi = (r + 2.0 * delta);
      return {lo * lo * lo / (mu * r), hi * hi * hi / (mu * r)};
    }
    case SquareVariant::ZeroPlus: {
      const double q = m2 + 8.0 * d2;
      const double p = m2 + 4.0 * d2;
      return {(m2 - 8.0 * d2) / mu, p * p * p * p / (mu * q * q * q)};
    }
    case SquareVariant::ZeroMinus: {
      if (!(m2 > 12.0 * d2))
        throw RegularityViolated(
            "closed_form_extrema: ZeroMinus requires mu^2 > 12 delta^2");
      const double q = m2 - 8.0 * d2;
      const double p = m2 - 4.0 * d2;
      return {mu * m2 * m2 * (m2 - 16.0 * d2) / (q * q * q),
              p * p * p * p / (mu * q * q * q)};
    }
  }
  throw InvalidArgument("closed_form_extrema: unknown variant");
}

}  // namespace finsler
