// Batch command-line surface for the sphere-metric engine.
//
// Subcommands: phi (solve/taylor/regularity), gauge (canonical/square/ivp),
// length compare, curvature (extrema/grid/closed-form), geodesic trace,
// verify.  Output is JSON (schema 1) or CSV with 17 significant digits.
// Exit codes: 0 success, 2 validation error, 3 numerical failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "finsler/acceptance.hpp"
#include "finsler/curvature.hpp"
#include "finsler/errors.hpp"
#include "finsler/gauge.hpp"
#include "finsler/geodesic.hpp"
#include "finsler/phi.hpp"
#include "finsler/sphere.hpp"

namespace {

using nlohmann::json;

void diag(const std::string& level, const std::string& kv) {
  std::cerr << level << " " << kv << "\n";
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Output {
  std::string format = "json";
  std::string path;

  void emit(const json& j, const std::vector<std::string>& csv_header,
            const std::vector<std::vector<double>>& csv_rows) const {
    std::ostringstream os;
    if (format == "json") {
      os << j.dump(2) << "\n";
    } else {
      for (std::size_t i = 0; i < csv_header.size(); ++i)
        os << (i ? "," : "") << csv_header[i];
      os << "\n";
      for (const auto& row : csv_rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
          os << (i ? "," : "") << g17(row[i]);
        os << "\n";
      }
    }
    if (path.empty()) {
      std::cout << os.str();
    } else {
      std::ofstream f(path, std::ios::binary);
      if (!f) throw finsler::InvalidArgument("cannot open output file " + path);
      f << os.str();
    }
  }
};

struct ParamOpts {
  double k1 = 2, k2 = 0, k3 = -3, epsilon = 0;
  finsler::MetricParams params() const {
    return finsler::MetricParams(k1, k2, k3, epsilon);
  }
  void add_to(CLI::App* app) {
    app->add_option("--k1", k1, "ODE constant k1");
    app->add_option("--k2", k2, "ODE constant k2");
    app->add_option("--k3", k3, "ODE constant k3");
    app->add_option("--epsilon", epsilon, "initial slope phi'(0)");
  }
};

// delta is meaningless without saying which gauge normalizes it.
void require_gauge_tag(const CLI::App* cmd, const CLI::Option* delta_opt,
                       const CLI::Option* gauge_opt) {
  if (delta_opt->count() > 0 && gauge_opt->count() == 0)
    throw finsler::InvalidArgument(
        std::string(cmd->get_name()) +
        ": --gauge tag is mandatory when --delta is supplied");
}

finsler::UvwGauge make_gauge(const std::string& kind, int sign,
                             const finsler::MetricParams& p, double mu,
                             double delta) {
  if (kind == "canonical") return finsler::canonical_gauge(p);
  if (kind == "square") {
    const double target = 4.0 * delta * delta / (mu * mu);
    const double B =
        (sign > 0) ? target / (1.0 + target) : target / (1.0 - target);
    const double cap = (sign > 0) ? 1.0 : 0.5;
    return finsler::square_gauge(sign,
                                 std::min(B * 1.001 + 1e-9, 0.999 * cap));
  }
  throw finsler::InvalidArgument("unknown gauge kind: " + kind);
}

int cmd_phi(const std::string& mode, const ParamOpts& po, double s_max,
            double tol, int samples, const Output& out) {
  const finsler::MetricParams p = po.params();
  json j{{"schema", 1}, {"command", "phi"}, {"mode", mode}};
  j["params"] = {{"k1", p.k1}, {"k2", p.k2}, {"k3", p.k3},
                 {"epsilon", p.epsilon}};
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  if (mode == "taylor") {
    const auto c = finsler::taylor_phi(p);
    j["taylor"] = std::vector<double>(c.begin(), c.end());
    header = {"order", "coefficient"};
    for (std::size_t i = 0; i < c.size(); ++i)
      rows.push_back({static_cast<double>(i), c[i]});
  } else if (mode == "regularity") {
    const double r = finsler::regularity_range(p);
    const finsler::PhiSolution phi = finsler::solve_phi(
        p, std::isfinite(r) ? 0.999 * std::sqrt(r) : 1.0, tol);
    j["regularity_range_b_sq"] = r;
    j["b_hat"] = finsler::b_hat(phi);
    header = {"regularity_range_b_sq", "b_hat"};
    rows.push_back({r, finsler::b_hat(phi)});
  } else {  // solve
    const finsler::PhiSolution phi = finsler::solve_phi(p, s_max, tol);
    header = {"s", "phi", "dphi", "ddphi", "residual"};
    json table = json::array();
    for (int i = 0; i < samples; ++i) {
      const double s = -s_max + 2.0 * s_max * i / (samples - 1);
      std::vector<double> row = {s, phi.phi(s), phi.dphi(s), phi.ddphi(s),
                                 phi.residual(s)};
      rows.push_back(row);
      table.push_back({{"s", row[0]},
                       {"phi", row[1]},
                       {"dphi", row[2]},
                       {"ddphi", row[3]},
                       {"residual", row[4]}});
    }
    j["samples"] = table;
  }
  out.emit(j, header, rows);
  return 0;
}

int cmd_gauge(const std::string& kind, int sign, const ParamOpts& po,
              double t_max, double tol, double u0, double v0, double w0,
              int samples, const Output& out) {
  const finsler::MetricParams p =
      (kind == "square")
          ? finsler::MetricParams(sign > 0 ? 2 : -2, 0, sign > 0 ? -3 : 3, 0)
          : po.params();
  finsler::UvwGauge g =
      (kind == "canonical") ? finsler::canonical_gauge(p, t_max)
      : (kind == "square")
          ? finsler::square_gauge(sign, t_max)
          : finsler::solve_gauge_ivp(p, u0, v0, w0, t_max, tol);
  json j{{"schema", 1}, {"command", "gauge"}, {"kind", kind}};
  j["params"] = {{"k1", p.k1}, {"k2", p.k2}, {"k3", p.k3}};
  j["t_max"] = g.t_max();
  std::vector<std::string> header = {"B", "u", "v", "w", "norm_relation"};
  std::vector<std::vector<double>> rows;
  json table = json::array();
  for (int i = 0; i < samples; ++i) {
    const double B = g.t_max() * i / (samples - 1);
    const auto t = g.eval(B);
    rows.push_back({B, t.u, t.v, t.w, g.norm_relation(B)});
    table.push_back({{"B", B},
                     {"u", t.u},
                     {"v", t.v},
                     {"w", t.w},
                     {"norm_relation", g.norm_relation(B)}});
  }
  j["samples"] = table;
  out.emit(j, header, rows);
  return 0;
}

int cmd_length_compare(const ParamOpts& po, double mu, double delta,
                       const std::string& gauge_kind, int sign, double tol,
                       bool geodesic_oracle, const Output& out) {
  json j{{"schema", 1}, {"command", "length-compare"}};
  j["mu"] = mu;
  j["delta"] = delta;
  j["gauge"] = gauge_kind;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  if (gauge_kind == "canonical") {
    const finsler::MetricParams p = po.params();
    const double L1 = finsler::length_L1(p, mu, delta, tol);
    const double L2 = finsler::length_L2(p, mu, delta);
    const double S = finsler::series_L(p, mu, delta);
    j["L1"] = L1;
    j["L2"] = L2;
    j["series"] = S;
    j["L1_minus_L2"] = L1 - L2;
    header = {"L1", "L2", "series", "L1_minus_L2"};
    rows.push_back({L1, L2, S, L1 - L2});
  } else {
    const double L = finsler::length_square(sign, mu, delta);
    j["closed_form"] = L;
    header = {"closed_form"};
    std::vector<double> row = {L};
    if (geodesic_oracle) {
      const finsler::SphereData d(mu, 2.0 * delta / std::sqrt(mu), {0.0, 0.0});
      const finsler::NavigationBundle bundle(
          d, finsler::MetricParams(sign > 0 ? 2 : -2, 0, sign > 0 ? -3 : 3, 0),
          make_gauge("square", sign, po.params(), mu, delta));
      const finsler::ClosedGeodesic cg =
          finsler::closed_geodesic({0.0, 0.0}, {1.0, 0.0}, bundle, 1e-11);
      j["geodesic_length"] = cg.period;
      j["closure_error"] = cg.closure_error;
      header.push_back("geodesic_length");
      header.push_back("closure_error");
      row.push_back(cg.period);
      row.push_back(cg.closure_error);
    }
    rows.push_back(row);
  }
  out.emit(j, header, rows);
  return 0;
}

finsler::SquareVariant parse_variant(const std::string& v) {
  if (v == "square-plus") return finsler::SquareVariant::SquarePlus2;
  if (v == "zero-plus") return finsler::SquareVariant::ZeroPlus;
  if (v == "zero-minus") return finsler::SquareVariant::ZeroMinus;
  throw finsler::InvalidArgument("unknown variant: " + v);
}

int cmd_curvature_extrema(const std::string& variant, const ParamOpts& po,
                          double mu, double delta,
                          const std::string& gauge_kind, int grid,
                          const Output& out) {
  json j{{"schema", 1}, {"command", "curvature-extrema"}};
  j["mu"] = mu;
  j["delta"] = delta;
  finsler::FlagCurvatureReport rep;
  if (!variant.empty()) {
    const finsler::SquareVariant v = parse_variant(variant);
    const int sign = (v == finsler::SquareVariant::ZeroMinus) ? -1 : 1;
    const double eps = (v == finsler::SquareVariant::SquarePlus2) ? 2.0 : 0.0;
    const finsler::MetricParams p(sign > 0 ? 2 : -2, 0, sign > 0 ? -3 : 3,
                                  eps);
    const finsler::UvwGauge g = make_gauge("square", sign, p, mu, delta);
    const double t_o = std::sqrt(finsler::invert_norm_relation(
        4.0 * delta * delta / (mu * mu), g));
    const finsler::PhiSolution phi =
        finsler::solve_phi(p, std::max(t_o * 1.01, 1e-3), 1e-10);
    rep = finsler::extrema_R_tilde(phi, g, mu, delta, grid);
    const auto [lo, hi] = finsler::closed_form_extrema(v, mu, delta);
    j["closed_form"] = {{"min", lo}, {"max", hi}};
    j["variant"] = variant;
  } else {
    const finsler::MetricParams p = po.params();
    finsler::UvwGauge g = make_gauge(gauge_kind, 1, p, mu, delta);
    const double b_top = 4.0 * delta * delta / (mu * mu);
    const finsler::PhiSolution phi = finsler::solve_phi(
        p, std::max(std::sqrt(finsler::invert_norm_relation(b_top, g)), 1e-3),
        1e-10);
    rep = finsler::extrema_R(phi, g, mu, delta, grid);
  }
  j["min"] = rep.min;
  j["max"] = rep.max;
  j["argmin"] = {{"s", rep.argmin_s}, {"t", rep.argmin_t}};
  j["argmax"] = {{"s", rep.argmax_s}, {"t", rep.argmax_t}};
  j["method"] = rep.method;
  json diags = json::array();
  for (const auto& cp : rep.boundary_diagnostics)
    diags.push_back(
        {{"piece", cp.piece}, {"s", cp.s}, {"t", cp.t}, {"value", cp.value}});
  j["boundary_diagnostics"] = diags;
  out.emit(j, {"min", "max", "argmin_s", "argmin_t", "argmax_s", "argmax_t"},
           {{rep.min, rep.max, rep.argmin_s, rep.argmin_t, rep.argmax_s,
             rep.argmax_t}});
  return 0;
}

int cmd_curvature_grid(const ParamOpts& po, double mu, double delta,
                       const std::string& gauge_kind, int grid,
                       const Output& out) {
  const finsler::MetricParams p = po.params();
  finsler::UvwGauge g = make_gauge(gauge_kind, 1, p, mu, delta);
  const finsler::CurvatureDomain dom = finsler::domain_D(g, mu, delta);
  const double b_top = dom.s_bound(0.0);
  const finsler::PhiSolution phi =
      finsler::solve_phi(p, std::max(b_top, 1e-3), 1e-10);
  json j{{"schema", 1}, {"command", "curvature-grid"}};
  std::vector<std::string> header = {"s", "t", "R"};
  std::vector<std::vector<double>> rows;
  json table = json::array();
  for (int i = 0; i < grid; ++i) {
    const double t = dom.t_max * i / std::max(grid - 1, 1);
    const double sb = dom.s_bound(t);
    for (int k = 0; k < grid; ++k) {
      const double s = -sb + 2.0 * sb * k / std::max(grid - 1, 1);
      const double R = finsler::R_eval(s, t, phi, g, mu, delta);
      rows.push_back({s, t, R});
      table.push_back({{"s", s}, {"t", t}, {"R", R}});
    }
  }
  j["samples"] = table;
  out.emit(j, header, rows);
  return 0;
}

int cmd_curvature_closed_form(double mu, double delta, const Output& out) {
  json j{{"schema", 1}, {"command", "curvature-closed-form"}};
  j["mu"] = mu;
  j["delta"] = delta;
  std::vector<std::string> header = {"variant", "min", "max"};
  std::vector<std::vector<double>> rows;
  json table = json::array();
  const std::pair<std::string, finsler::SquareVariant> vs[] = {
      {"square-plus", finsler::SquareVariant::SquarePlus2},
      {"zero-plus", finsler::SquareVariant::ZeroPlus},
      {"zero-minus", finsler::SquareVariant::ZeroMinus}};
  int idx = 0;
  for (const auto& [name, v] : vs) {
    try {
      const auto [lo, hi] = finsler::closed_form_extrema(v, mu, delta);
      table.push_back({{"variant", name}, {"min", lo}, {"max", hi}});
      rows.push_back({static_cast<double>(idx), lo, hi});
    } catch (const finsler::RegularityViolated&) {
      diag("WARN", "variant=" + name + " reason=inadmissible");
    }
    ++idx;
  }
  j["table"] = table;
  out.emit(j, header, rows);
  return 0;
}

int cmd_geodesic(const ParamOpts& po, double mu, double k,
                 std::vector<double> xi, double delta_override,
                 const std::string& gauge_kind, int sign,
                 std::vector<double> x0, std::vector<double> y0, double T,
                 double tol, int samples, const Output& out) {
  if (xi.empty()) xi = {0.0, 0.0};
  if (x0.empty()) x0 = std::vector<double>(xi.size(), 0.0);
  if (y0.empty()) {
    y0 = std::vector<double>(xi.size(), 0.0);
    y0[0] = 1.0;
  }
  if (delta_override >= 0 && k == 0 &&
      std::all_of(xi.begin(), xi.end(), [](double c) { return c == 0; }))
    k = 2.0 * delta_override / std::sqrt(mu);
  const finsler::SphereData d(mu, k, xi);
  const double delta = finsler::delta_of(d);
  const finsler::MetricParams p = po.params();
  const finsler::NavigationBundle bundle(
      d, p, make_gauge(gauge_kind, sign, p, mu, delta));
  const finsler::GeodesicPath path =
      finsler::integrate_geodesic(x0, y0, T, bundle, tol, samples);
  json j{{"schema", 1}, {"command", "geodesic-trace"}};
  j["mu"] = mu;
  j["delta"] = delta;
  std::vector<std::string> header = {"t"};
  const int na = static_cast<int>(xi.size()) + 1;
  for (int i = 0; i < na; ++i) header.push_back("p" + std::to_string(i));
  for (int i = 0; i < na; ++i) header.push_back("dp" + std::to_string(i));
  std::vector<std::vector<double>> rows;
  json table = json::array();
  for (const auto& s : path.samples) {
    std::vector<double> row = {s.t};
    row.insert(row.end(), s.p.begin(), s.p.end());
    row.insert(row.end(), s.dp.begin(), s.dp.end());
    rows.push_back(row);
    table.push_back({{"t", s.t}, {"p", s.p}, {"dp", s.dp}});
  }
  j["samples"] = table;
  out.emit(j, header, rows);
  return 0;
}

int cmd_verify(const Output& out) {
  const auto results = finsler::run_acceptance();
  json j{{"schema", 1}, {"command", "verify"}};
  json table = json::array();
  std::vector<std::vector<double>> rows;
  for (const auto& r : results) {
    std::printf("[%s] %2d %s%s%s\n", r.pass ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.pass ? "" : ": ",
                r.pass ? "" : r.detail.c_str());
    table.push_back({{"id", r.id},
                     {"name", r.name},
                     {"pass", r.pass},
                     {"detail", r.detail}});
    rows.push_back({static_cast<double>(r.id), r.pass ? 1.0 : 0.0});
  }
  j["results"] = table;
  j["all_passed"] = finsler::all_passed(results);
  if (!out.path.empty()) out.emit(j, {"id", "pass"}, rows);
  return finsler::all_passed(results) ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical engine for projectively flat sphere metrics"};
  app.set_config("--config", "", "read options from a config file");
  Output out;
  app.add_option("--format", out.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--output", out.path, "output file (default: stdout)");

  ParamOpts po;
  double mu = 1.0, delta = -1.0, tol = 1e-10, s_max = 0.5, t_max = 0.5;
  double u0 = 1.0, v0 = 0.0, w0 = 1.0, T = 6.28, k = 0.0;
  int samples = 101, sign = 1, grid = 801;
  std::string gauge_kind, phi_mode = "solve", gauge_mode = "canonical";
  std::string variant;
  std::vector<double> xi, x0, y0;

  auto* cphi = app.add_subcommand("phi", "defining ODE solution");
  po.add_to(cphi);
  cphi->add_option("--mode", phi_mode, "solve|taylor|regularity")
      ->check(CLI::IsMember({"solve", "taylor", "regularity"}));
  cphi->add_option("--s-max", s_max, "half-width of the s interval");
  cphi->add_option("--tol", tol, "solver tolerance");
  cphi->add_option("--samples", samples, "sample count");

  auto* cgauge = app.add_subcommand("gauge", "deformation triples (u,v,w)");
  po.add_to(cgauge);
  cgauge->add_option("--kind", gauge_mode, "canonical|square|ivp")
      ->check(CLI::IsMember({"canonical", "square", "ivp"}));
  cgauge->add_option("--sign", sign, "square-family sign (+1/-1)");
  cgauge->add_option("--t-max", t_max, "range in B = b^2");
  cgauge->add_option("--tol", tol, "IVP tolerance");
  cgauge->add_option("--u0", u0, "IVP u(0)");
  cgauge->add_option("--v0", v0, "IVP v(0)");
  cgauge->add_option("--w0", w0, "IVP w(0)");
  cgauge->add_option("--samples", samples, "sample count");

  auto* clength = app.add_subcommand("length", "closed-geodesic lengths");
  auto* ccompare = clength->add_subcommand("compare", "L1 vs L2 vs series");
  po.add_to(ccompare);
  ccompare->add_option("--mu", mu, "sectional curvature");
  auto* lc_delta = ccompare->add_option("--delta", delta, "conformal constant");
  auto* lc_gauge =
      ccompare->add_option("--gauge", gauge_kind, "canonical|square")
          ->check(CLI::IsMember({"canonical", "square"}));
  ccompare->add_option("--sign", sign, "square-family sign");
  ccompare->add_option("--tol", tol, "quadrature tolerance");
  bool geodesic_oracle = false;
  ccompare->add_flag("--geodesic-oracle", geodesic_oracle,
                     "also integrate a pole-to-pole geodesic");

  auto* ccurv = app.add_subcommand("curvature", "flag curvature");
  auto* cext = ccurv->add_subcommand("extrema", "extrema over the domain");
  po.add_to(cext);
  cext->add_option("--variant", variant,
                   "square-plus|zero-plus|zero-minus (square shortcut)");
  cext->add_option("--mu", mu, "sectional curvature");
  auto* ce_delta = cext->add_option("--delta", delta, "conformal constant");
  auto* ce_gauge = cext->add_option("--gauge", gauge_kind, "canonical|square")
                       ->check(CLI::IsMember({"canonical", "square"}));
  cext->add_option("--grid", grid, "grid resolution");
  auto* cgrid = ccurv->add_subcommand("grid", "R(s,t) grid export");
  po.add_to(cgrid);
  cgrid->add_option("--mu", mu, "sectional curvature");
  auto* cg_delta = cgrid->add_option("--delta", delta, "conformal constant");
  auto* cg_gauge = cgrid->add_option("--gauge", gauge_kind, "canonical|square")
                       ->check(CLI::IsMember({"canonical", "square"}));
  cgrid->add_option("--grid", grid, "grid resolution");
  auto* cclosed =
      ccurv->add_subcommand("closed-form", "square-family extrema table");
  cclosed->add_option("--mu", mu, "sectional curvature");
  auto* cc_delta = cclosed->add_option("--delta", delta, "conformal constant");

  auto* cgeo = app.add_subcommand("geodesic", "geodesic tracing");
  auto* ctrace = cgeo->add_subcommand("trace", "integrate and sample");
  po.add_to(ctrace);
  ctrace->add_option("--mu", mu, "sectional curvature");
  ctrace->add_option("--k", k, "conformal data constant k");
  ctrace->add_option("--xi", xi, "conformal data vector xi");
  auto* gt_delta = ctrace->add_option(
      "--delta", delta, "conformal constant (shortcut for k=2 delta/sqrt(mu))");
  auto* gt_gauge = ctrace->add_option("--gauge", gauge_kind,
                                      "canonical|square")
                       ->check(CLI::IsMember({"canonical", "square"}));
  ctrace->add_option("--sign", sign, "square-family sign");
  ctrace->add_option("--x0", x0, "initial chart point");
  ctrace->add_option("--y0", y0, "initial velocity");
  ctrace->add_option("--T", T, "parameter length");
  ctrace->add_option("--tol", tol, "integrator tolerance");
  ctrace->add_option("--samples", samples, "sample count");

  auto* cverify =
      app.add_subcommand("verify", "run the full acceptance suite");

  app.require_subcommand(1);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help / the parse diagnostic
    return code == 0 ? 0 : 2;
  }

  try {
    if (cphi->parsed()) {
      diag("INFO", "command=phi mode=" + phi_mode);
      return cmd_phi(phi_mode, po, s_max, tol, samples, out);
    }
    if (cgauge->parsed()) {
      diag("INFO", "command=gauge kind=" + gauge_mode);
      return cmd_gauge(gauge_mode, sign, po, t_max, tol, u0, v0, w0, samples,
                       out);
    }
    if (ccompare->parsed()) {
      require_gauge_tag(ccompare, lc_delta, lc_gauge);
      if (delta < 0)
        throw finsler::InvalidArgument("length compare: --delta is required");
      diag("INFO", "command=length-compare gauge=" + gauge_kind);
      return cmd_length_compare(po, mu, delta, gauge_kind, sign, tol,
                                geodesic_oracle, out);
    }
    if (cext->parsed()) {
      if (!variant.empty() && ce_gauge->count() == 0)
        gauge_kind = "square";  // the variant implies its own gauge
      else
        require_gauge_tag(cext, ce_delta, ce_gauge);
      if (delta < 0)
        throw finsler::InvalidArgument("curvature extrema: --delta required");
      if (variant.empty() && gauge_kind.empty())
        throw finsler::InvalidArgument(
            "curvature extrema: need --variant or --gauge");
      diag("INFO", "command=curvature-extrema");
      return cmd_curvature_extrema(variant, po, mu, delta, gauge_kind, grid,
                                   out);
    }
    if (cgrid->parsed()) {
      require_gauge_tag(cgrid, cg_delta, cg_gauge);
      if (delta < 0 || gauge_kind.empty())
        throw finsler::InvalidArgument(
            "curvature grid: --delta and --gauge required");
      diag("INFO", "command=curvature-grid");
      return cmd_curvature_grid(po, mu, delta, gauge_kind,
                                std::min(grid, 201), out);
    }
    if (cclosed->parsed()) {
      (void)cc_delta;
      if (delta < 0)
        throw finsler::InvalidArgument("curvature closed-form: --delta required");
      diag("INFO", "command=curvature-closed-form");
      return cmd_curvature_closed_form(mu, delta, out);
    }
    if (ctrace->parsed()) {
      require_gauge_tag(ctrace, gt_delta, gt_gauge);
      if (gauge_kind.empty()) gauge_kind = "canonical";
      diag("INFO", "command=geodesic-trace");
      return cmd_geodesic(po, mu, k, xi, delta, gauge_kind, sign, x0, y0, T,
                          tol, samples, out);
    }
    if (cverify->parsed()) {
      diag("INFO", "command=verify");
      return cmd_verify(out);
    }
  } catch (const finsler::InvalidArgument& e) {
    diag("ERROR", std::string("kind=validation message=\"") + e.what() + "\"");
    return 2;
  } catch (const finsler::Error& e) {
    diag("ERROR", std::string("kind=numerical message=\"") + e.what() + "\"");
    return 3;
  } catch (const std::exception& e) {
    diag("ERROR", std::string("kind=internal message=\"") + e.what() + "\"");
    return 3;
  }
  return 2;
}
