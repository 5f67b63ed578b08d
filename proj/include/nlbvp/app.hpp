// Copyright the nlbvp authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "nlbvp/expression.hpp"
#include "nlbvp/io.hpp"
#include "nlbvp/solver.hpp"

namespace nlbvp::app
{

enum ExitCode : int
{
  kOk = 0,
  kConfig = 1,
  kMathDomain = 2,
  kInternal = 3,
};

struct Options
{
  std::optional<std::string> config;
  std::optional<std::string> action;
  std::string out = "out";
  int jobs = 1;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
};

/// Invariant tolerances used by `verify`.
struct Tolerances
{
  double green_elliptic = 1e-12;
  double green = 1e-10;
  double prop24 = 1e-9;
  double fidelity = 1e-9;
  double w_symmetry = 1e-10;
  double real_spectrum = 1e-9;
  double oracle = 1e-10;
  double correspondence = 1e-6;
};

inline Coefficient coefficient_from_json(const json &c, const char *name, double fallback)
{
  if (!c.contains(name))
  {
    return constant_coefficient(fallback);
  }
  const json &v = c.at(name);
  if (v.is_number())
  {
    return constant_coefficient(v.get<double>());
  }
  if (v.is_string())
  {
    Expression e(v.get<std::string>());
    return [e](double x, double y) { return e(x, y); };
  }
  fail(ErrorKind::ConfigError, std::string("coeff.") + name + " must be a number or an expression string");
}

inline std::pair<double, double> interval_from_json(const json &j, std::pair<double, double> fallback)
{
  if (j.is_null())
  {
    return fallback;
  }
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
  {
    fail(ErrorKind::ConfigError, "intervals must be [lo, hi]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline EllipticTriple problem_from_json(const json &p)
{
  if (!p.is_object())
  {
    fail(ErrorKind::ConfigError, "\"problem\" must be an object");
  }
  const int d = p.value("dim", 0);
  const json coeff = p.value("coeff", json::object());
  DiscreteElliptic de;
  if (d == 1)
  {
    if (!p.contains("n") || !p.at("n").is_number_integer())
    {
      fail(ErrorKind::ConfigError, "problem.n must be an integer for dim 1");
    }
    auto [lo, hi] = interval_from_json(p.value("domain", json()), {0.0, 1.0});
    de = build_1d(p.at("n").get<int>(), coefficient_from_json(coeff, "p", 1.0),
                  coefficient_from_json(coeff, "a", 0.0), lo, hi);
  }
  else if (d == 2)
  {
    int nx = 0, ny = 0;
    const json &n = p.at("n");
    if (n.is_number_integer())
    {
      nx = ny = n.get<int>();
    }
    else if (n.is_array() && n.size() == 2)
    {
      nx = n[0].get<int>();
      ny = n[1].get<int>();
    }
    else
    {
      fail(ErrorKind::ConfigError, "problem.n must be an integer or [nx, ny] for dim 2");
    }
    const json dom = p.value("domain", json());
    std::pair<double, double> xr{0.0, 1.0}, yr{0.0, 1.0};
    if (!dom.is_null())
    {
      if (!dom.is_array() || dom.size() != 2)
      {
        fail(ErrorKind::ConfigError, "problem.domain must be [[x0, x1], [y0, y1]] for dim 2");
      }
      xr = interval_from_json(dom[0], xr);
      yr = interval_from_json(dom[1], yr);
    }
    de = build_2d(nx, ny, coefficient_from_json(coeff, "a11", 1.0), coefficient_from_json(coeff, "a22", 1.0),
                  coefficient_from_json(coeff, "a", 0.0), xr.first, xr.second, yr.first, yr.second);
  }
  else
  {
    fail(ErrorKind::ConfigError, "problem.dim must be 1 or 2");
  }
  std::optional<double> eta;
  const json e = p.value("eta", json("auto"));
  if (e.is_number())
  {
    eta = e.get<double>();
  }
  else if (!(e.is_string() && e.get<std::string>() == "auto"))
  {
    fail(ErrorKind::ConfigError, "problem.eta must be \"auto\" or a number");
  }
  return EllipticTriple(std::move(de), eta);
}

/// `g` is the boundary dimension used to expand scalar coefficients (-1 when unknown).
inline OperatorFunction tau_from_json(const json &t, Eigen::Index g)
{
  if (!t.is_object() || !t.contains("kind"))
  {
    fail(ErrorKind::ConfigError, "\"tau\" must be an object with a \"kind\"");
  }
  const std::string kind = t.at("kind").get<std::string>();
  auto mats = [&](const char *key) {
    if (!t.contains(key) || !t.at(key).is_array())
    {
      fail(ErrorKind::ConfigError, std::string("tau.") + key + " must be a list");
    }
    std::vector<Mat> out;
    for (std::size_t i = 0; i < t.at(key).size(); ++i)
    {
      out.push_back(io::matrix_from_json(t.at(key)[i], std::string("tau.") + key + "[" + std::to_string(i) + "]", g));
    }
    return out;
  };
  if (kind == "rational")
  {
    return RationalNevanlinna(mats("alpha"), mats("beta"));
  }
  if (kind == "constant")
  {
    return ConstantFunction(io::matrix_from_json(t.at("theta"), "tau.theta", g));
  }
  if (kind == "representation")
  {
    Mat gamma = io::matrix_from_json(t.at("gamma"), "tau.gamma");
    const Eigen::Index n = gamma.rows();
    Mat G = t.contains("gram") ? io::matrix_from_json(t.at("gram"), "tau.gram", n) : Mat(Mat::Identity(n, n));
    Mat J = t.contains("J") ? io::matrix_from_json(t.at("J"), "tau.J", n) : Mat();
    KreinSpace H(G, J);
    LinearRelation A0 = t.contains("A0_basis")
                            ? LinearRelation(H, io::matrix_from_json(t.at("A0_basis"), "tau.A0_basis"))
                            : LinearRelation::graph(H, io::matrix_from_json(t.at("A0"), "tau.A0", n));
    const cplx l0 = io::complex_from_json(t.at("lambda0"), "tau.lambda0");
    Mat C = io::matrix_from_json(t.at("C"), "tau.C", gamma.cols());
    return RepresentationForm(A0, gamma, l0, C);
  }
  fail(ErrorKind::ConfigError, "unknown tau.kind \"" + kind + "\"");
}

inline Window window_from_json(const json &cfg)
{
  Window w{-5.0, 5.0, 0.5, 5.0};
  if (cfg.contains("window"))
  {
    const json &j = cfg.at("window");
    auto re = interval_from_json(j.value("re", json()), {w.re_lo, w.re_hi});
    auto im = interval_from_json(j.value("im", json()), {w.im_lo, w.im_hi});
    w = {re.first, re.second, im.first, im.second};
    require(w.im_lo > 0.0 && w.im_hi >= w.im_lo, ErrorKind::ConfigError, "window.im must be a positive range");
  }
  return w;
}

/// Runtime state shared by all actions.
struct Context
{
  json cfg;
  Options opt;
  Tolerances tol;
  std::filesystem::path out;

  std::uint64_t seed() const
  {
    if (opt.seed)
    {
      return *opt.seed;
    }
    if (cfg.contains("seed"))
    {
      const json &s = cfg.at("seed");
      if (!s.is_number_integer() || s.get<long long>() < 0)
      {
        fail(ErrorKind::ConfigError, "seed must be a non-negative integer");
      }
      return s.get<std::uint64_t>();
    }
    fail(ErrorKind::ConfigError, "a seed is required for randomized inputs (config \"seed\" or --seed)");
  }

  EllipticTriple problem() const
  {
    if (!cfg.contains("problem"))
    {
      fail(ErrorKind::ConfigError, "missing \"problem\"");
    }
    return problem_from_json(cfg.at("problem"));
  }

  OperatorFunction tau(Eigen::Index g) const
  {
    if (!cfg.contains("tau"))
    {
      fail(ErrorKind::ConfigError, "missing \"tau\"");
    }
    return tau_from_json(cfg.at("tau"), g);
  }
};

inline json check_entry(const std::string &name, double value, double tol)
{
  const bool pass = value <= tol;
  return json{{"name", name}, {"value", value}, {"tol", tol}, {"pass", pass}};
}

inline json bool_entry(const std::string &name, bool pass)
{
  return json{{"name", name}, {"pass", pass}};
}

inline bool is_nevanlinna_rational(const OperatorFunction &tau)
{
  return std::holds_alternative<RationalNevanlinna>(tau);
}

/// Linearization used for resolvent comparisons: explicit block operator for
/// rational tau, otherwise coupling with the realized triple.
inline Linearization linearize(const EllipticTriple &et, const OperatorFunction &tau, const Context &ctx)
{
  if (const auto *r = std::get_if<RationalNevanlinna>(&tau))
  {
    return build_linearization_rational(et, *r);
  }
  RealizeOptions ro;
  ro.seed = ctx.seed();
  ro.window = window_from_json(ctx.cfg);
  return build_linearization(et, realize(tau, ro).triple);
}

/// Linearization used for eigenvalues: Hilbert-space operators where available.
inline Linearization linearize_for_eigen(const EllipticTriple &et, const OperatorFunction &tau, const Context &ctx)
{
  if (const auto *c = std::get_if<ConstantFunction>(&tau))
  {
    return build_fixed_extension(et, c->theta);
  }
  return linearize(et, tau, ctx);
}

inline Vec rhs_from_config(const Context &ctx, const EllipticTriple &et)
{
  const json r = ctx.cfg.value("rhs", json{{"kind", "random"}});
  const std::string kind = r.value("kind", "random");
  const auto &nodes = et.disc().interior;
  if (kind == "random")
  {
    Rng rng(ctx.seed() ^ 0x5eedULL);
    return rng.vector(et.n_I());
  }
  if (kind == "expression")
  {
    Expression re(r.value("re", "0"));
    Expression im(r.value("im", "0"));
    Vec g(et.n_I());
    for (std::size_t i = 0; i < nodes.size(); ++i)
    {
      g(static_cast<Eigen::Index>(i)) = cplx(re(nodes[i].x, nodes[i].y), im(nodes[i].x, nodes[i].y));
    }
    return g;
  }
  if (kind == "file")
  {
    Vec g = io::read_vector_csv(r.at("path").get<std::string>());
    if (g.size() != et.n_I())
    {
      fail(ErrorKind::ConfigError, "rhs file has " + std::to_string(g.size()) + " entries, expected " +
                                       std::to_string(et.n_I()));
    }
    return g;
  }
  fail(ErrorKind::ConfigError, "unknown rhs.kind \"" + kind + "\"");
}

inline void write_solution(const std::filesystem::path &path, const EllipticTriple &et, const Vec &f)
{
  io::CsvWriter csv(path.string());
  const bool two = et.disc().dim == 2;
  if (two)
  {
    csv.header({"x", "y", "re", "im"});
  }
  else
  {
    csv.header({"x", "re", "im"});
  }
  const auto &nodes = et.disc().interior;
  for (std::size_t i = 0; i < nodes.size(); ++i)
  {
    const cplx v = f(static_cast<Eigen::Index>(i));
    if (two)
    {
      csv.row({nodes[i].x, nodes[i].y, v.real(), v.imag()});
    }
    else
    {
      csv.row({nodes[i].x, v.real(), v.imag()});
    }
  }
}

inline json action_solve(const Context &ctx)
{
  EllipticTriple et = ctx.problem();
  OperatorFunction tau = ctx.tau(et.n_B());
  if (!ctx.cfg.contains("lambda"))
  {
    fail(ErrorKind::ConfigError, "solve needs \"lambda\"");
  }
  const cplx l = io::complex_from_json(ctx.cfg.at("lambda"), "lambda");
  const Vec g = rhs_from_config(ctx, et);
  SolveReport r = krein_resolve(et, tau, l, g);
  SolveReport d = direct_solve(et, tau, l, g);
  json rep{{"action", "solve"},
           {"lambda", io::to_json(l)},
           {"in_U", r.in_U},
           {"sigma_min", r.sigma_min},
           {"residuals", json{{"pde", r.pde_residual}, {"boundary", r.bc_residual}}},
           {"oracle", json{{"direct_solve", linalg::rel_diff(r.f, d.f)}}}};
  try
  {
    const Linearization lin = linearize(et, tau, ctx);
    rep["oracle"]["compressed_resolvent"] = linalg::rel_diff(r.f, compressed_resolvent(lin, l, g));
  }
  catch (const Error &e)
  {
    rep["oracle"]["compressed_resolvent"] = nullptr;
    rep["oracle"]["compressed_resolvent_error"] = e.what();
  }
  rep["solution_norm"] = r.f.norm();
  write_solution(ctx.out / "solution.csv", et, r.f);
  return rep;
}

inline std::pair<double, double> eigen_window(const Context &ctx)
{
  if (!ctx.cfg.contains("eigen_window"))
  {
    fail(ErrorKind::ConfigError, "eigen needs \"eigen_window\": [lo, hi]");
  }
  auto w = interval_from_json(ctx.cfg.at("eigen_window"), {0.0, 0.0});
  require(w.second > w.first, ErrorKind::ConfigError, "eigen_window must satisfy lo < hi");
  return w;
}

struct EigenOutcome
{
  json report;
  bool ok = false;
};

inline EigenOutcome run_eigen(const Context &ctx, const EllipticTriple &et, const OperatorFunction &tau,
                              bool write_files)
{
  auto [lo, hi] = eigen_window(ctx);
  const int grid = ctx.cfg.value("grid", 400);
  const Linearization lin = linearize_for_eigen(et, tau, ctx);
  ScanResult sc = homogeneous_scan(et, tau, lo, hi, grid, ctx.opt.jobs);
  CorrespondenceReport cr = eigen_correspondence(lin, et, tau, lo, hi, sc.roots, ctx.tol.correspondence);

  json eig = json::array();
  for (const auto &e : cr.eigen)
  {
    Check u = in_U(et, tau, cplx(e.lambda.real(), 0.0));
    eig.push_back(json{{"lambda", io::to_json(e.lambda)},
                       {"sigma_min", u.residual},
                       {"f_fraction", e.f_fraction},
                       {"pde_residual", e.pde_residual},
                       {"bc_residual", e.bc_residual},
                       {"root_distance", e.root_distance},
                       {"pass", e.ok}});
  }
  json roots = json::array();
  for (std::size_t i = 0; i < sc.roots.size(); ++i)
  {
    roots.push_back(json{{"lambda", sc.roots[i]}, {"sigma_min", sc.root_sigma[i]},
                         {"eigenvalue_distance", cr.root_distance[i]}});
  }
  EigenOutcome out;
  out.ok = cr.ok();
  out.report = json{{"window", json::array({lo, hi})},
                    {"linearization", json{{"size", lin.size()}, {"hilbert", lin.hilbert},
                                           {"w_symmetry", lin.w_symmetry_residual()}}},
                    {"eigenvalues", eig},
                    {"scan_roots", roots},
                    {"scan_violations", sc.violations.size()},
                    {"tol", ctx.tol.correspondence},
                    {"correspondence", out.ok}};
  if (write_files)
  {
    io::CsvWriter ecsv((ctx.out / "eigenvalues.csv").string());
    ecsv.header({"lambda_re", "lambda_im", "sigma_min", "root_distance"});
    for (const auto &e : cr.eigen)
    {
      Check u = in_U(et, tau, cplx(e.lambda.real(), 0.0));
      ecsv.row({e.lambda.real(), e.lambda.imag(), u.residual, e.root_distance});
    }
    io::CsvWriter scsv((ctx.out / "scan.csv").string());
    scsv.header({"lambda", "sigma_min", "negatives"});
    for (const auto &s : sc.samples)
    {
      scsv.row({s.lambda, s.sigma_min, static_cast<double>(s.negatives)});
    }
  }
  return out;
}

inline json action_eigen(const Context &ctx, bool &ok)
{
  EllipticTriple et = ctx.problem();
  OperatorFunction tau = ctx.tau(et.n_B());
  EigenOutcome e = run_eigen(ctx, et, tau, true);
  ok = true;
  json rep{{"action", "eigen"}};
  rep.update(e.report);
  return rep;
}

inline json prop24_json(const Prop24Report &r)
{
  return json{{"id1", r.id1}, {"gambar", r.gambar}, {"id2", r.id2}, {"rep", r.rep}};
}

inline json action_realize(const Context &ctx, bool &ok)
{
  Eigen::Index g = -1;
  if (ctx.cfg.contains("problem"))
  {
    g = ctx.problem().n_B();
  }
  OperatorFunction tau = ctx.tau(g);
  const Window w = window_from_json(ctx.cfg);
  RealizeOptions ro;
  ro.seed = ctx.seed();
  ro.window = w;
  if (ctx.cfg.contains("theta"))
  {
    ro.theta = io::complex_from_json(ctx.cfg.at("theta"), "theta");
  }
  Realization R = realize(tau, ro);
  const std::vector<cplx> probes = sample_points(10, ctx.seed() + 1, w);
  double fid = 0.0;
  for (cplx l : probes)
  {
    fid = std::max(fid, linalg::rel_diff(weyl(R.triple, l), eval(tau, l)));
  }
  const Prop24Report p = verify_prop24(R.triple, probes);
  const double green = R.triple.green_residual();
  ok = green <= ctx.tol.green && p.max() <= ctx.tol.prop24 && fid <= ctx.tol.fidelity;
  json rep{{"action", "realize"},
           {"path", R.path},
           {"ghat_dim", R.ghat_dim},
           {"theta", io::to_json(R.theta)},
           {"signature", json::array({R.triple.state().signature().first, R.triple.state().signature().second})},
           {"ordinary", is_ordinary(R.triple)},
           {"green", green},
           {"prop24", prop24_json(p)},
           {"weyl_fidelity", fid},
           {"pass", ok},
           {"triple", io::triple_to_json(R.triple)}};
  if (R.gamma_mismatch)
  {
    rep["kernel_gamma_mismatch"] = *R.gamma_mismatch;
  }
  return rep;
}

/// Invariant suites for a problem + tau pair; `ok` is false when any check fails.
inline json run_verify(const Context &ctx, bool &ok)
{
  const Tolerances &T = ctx.tol;
  EllipticTriple et = ctx.problem();
  OperatorFunction tau = ctx.tau(et.n_B());
  const Window w = window_from_json(ctx.cfg);
  const std::uint64_t seed = ctx.seed();
  const int nprobe = ctx.cfg.value("probes", 20);
  const std::vector<cplx> probes = sample_points(static_cast<std::size_t>(std::max(nprobe, 10)), seed, w);
  const std::vector<cplx> ten(probes.begin(), probes.begin() + 10);
  json checks = json::array();

  checks.push_back(check_entry("elliptic.symmetry", et.disc().symmetry_residual(), 1e-13));
  checks.push_back(check_entry("elliptic.green", et.triple().green_residual(), T.green_elliptic));
  checks.push_back(check_entry("elliptic.prop24", verify_prop24(et.triple(), ten).max(), T.prop24));

  RealizeOptions ro;
  ro.seed = seed;
  ro.window = w;
  Realization R = realize(tau, ro);
  checks.push_back(check_entry("realized.green", R.triple.green_residual(), T.green));
  checks.push_back(check_entry("realized.prop24", verify_prop24(R.triple, ten).max(), T.prop24));
  double fid = 0.0;
  for (cplx l : ten)
  {
    fid = std::max(fid, linalg::rel_diff(weyl(R.triple, l), eval(tau, l)));
  }
  checks.push_back(check_entry("realized.weyl_fidelity", fid, T.fidelity));

  const Linearization lin = linearize(et, tau, ctx);
  checks.push_back(check_entry("linearization.w_symmetry", lin.w_symmetry_residual(), T.w_symmetry));
  if (lin.hilbert)
  {
    checks.push_back(
        check_entry("linearization.real_spectrum", symmetrized_spectrum(lin).imag().cwiseAbs().maxCoeff(),
                    T.real_spectrum));
  }

  // oracle battery
  std::vector<double> kd(probes.size()), kc(probes.size()), dc(probes.size());
  Rng rng(seed ^ 0xabcdefULL);
  std::vector<Vec> rhs;
  for (std::size_t i = 0; i < probes.size(); ++i)
  {
    rhs.push_back(rng.vector(et.n_I()));
  }
  parallel_for(probes.size(), ctx.opt.jobs, [&](std::size_t i) {
    const Vec fk = krein_resolve(et, tau, probes[i], rhs[i]).f;
    const Vec fd = direct_solve(et, tau, probes[i], rhs[i]).f;
    const Vec fc = compressed_resolvent(lin, probes[i], rhs[i]);
    kd[i] = linalg::rel_diff(fk, fd);
    kc[i] = linalg::rel_diff(fk, fc);
    dc[i] = linalg::rel_diff(fd, fc);
  });
  double worst = 0.0;
  for (std::size_t i = 0; i < probes.size(); ++i)
  {
    worst = std::max({worst, kd[i], kc[i], dc[i]});
  }
  checks.push_back(check_entry("oracle.equivalence", worst, T.oracle));

  if (is_nevanlinna_rational(tau))
  {
    const int nu = ctx.cfg.value("u_probes", 50);
    const std::vector<cplx> up = sample_points(static_cast<std::size_t>(nu), seed + 7, w);
    std::vector<char> inside(up.size(), 0);
    parallel_for(up.size(), ctx.opt.jobs, [&](std::size_t i) { inside[i] = in_U(et, tau, up[i]).holds; });
    checks.push_back(bool_entry("solvability.nonreal_probes", std::all_of(inside.begin(), inside.end(),
                                                                          [](char c) { return c != 0; })));
  }

  json rep{{"action", "verify"}, {"checks", checks}};
  if (ctx.cfg.contains("eigen_window"))
  {
    EigenOutcome e = run_eigen(ctx, et, tau, true);
    checks.push_back(bool_entry("eigen.correspondence", e.ok));
    rep["checks"] = checks;
    rep["eigen"] = e.report;
  }
  ok = true;
  for (const auto &c : checks)
  {
    ok = ok && c.at("pass").get<bool>();
  }
  rep["pass"] = ok;
  return rep;
}

/// Canned problems: constant, lambda-linear and rational m = 2 boundary functions
/// on the 1D Laplacian with 99 interior nodes.
inline std::vector<std::pair<std::string, json>> demo_configs()
{
  const json problem = json{{"dim", 1}, {"n", 99}, {"domain", json::array({0.0, 1.0})},
                            {"coeff", json{{"p", 1.0}, {"a", 0.0}}}, {"eta", "auto"}};
  const json window = json{{"re", json::array({-5.0, 5.0})}, {"im", json::array({0.5, 5.0})}};
  std::vector<std::pair<std::string, json>> out;
  out.emplace_back("constant",
                   json{{"problem", problem},
                        {"tau", json{{"kind", "constant"},
                                     {"theta", json::array({json::array({json::array({2.0, 0.0}), json::array({0.5, 0.0})}),
                                                            json::array({json::array({0.5, 0.0}), json::array({-1.0, 0.0})})})}}},
                        {"window", window},
                        {"eigen_window", json::array({-30.0, 9.0})},
                        {"lambda", json::array({1.0, 1.0})},
                        {"seed", 11}});
  out.emplace_back("lambda_linear",
                   json{{"problem", problem},
                        {"tau", json{{"kind", "rational"}, {"alpha", json::array({0.0})}, {"beta", json::array({1.0})}}},
                        {"window", window},
                        {"eigen_window", json::array({-30.0, 9.0})},
                        {"lambda", json::array({1.0, 1.0})},
                        {"seed", 12}});
  out.emplace_back("rational",
                   json{{"problem", problem},
                        {"tau", json{{"kind", "rational"}, {"alpha", json::array({0.0, 20.0})},
                                     {"beta", json::array({1.0, 1.0})}}},
                        {"window", window},
                        {"eigen_window", json::array({-30.0, 9.0})},
                        {"lambda", json::array({1.0, 1.0})},
                        {"seed", 13}});
  return out;
}

inline json action_demo(const Context &base, bool &ok)
{
  ok = true;
  json summary{{"action", "demo"}, {"problems", json::array()}};
  for (const auto &[name, cfg] : demo_configs())
  {
    Context ctx = base;
    ctx.cfg = cfg;
    ctx.out = base.out / name;
    std::filesystem::create_directories(ctx.out);
    bool vok = false;
    json v = run_verify(ctx, vok);
    io::write_json_file((ctx.out / "report.json").string(), v);
    const SolveReport s = krein_resolve(ctx.problem(), ctx.tau(2), io::complex_from_json(cfg.at("lambda"), "lambda"),
                                        rhs_from_config(ctx, ctx.problem()));
    write_solution(ctx.out / "solution.csv", ctx.problem(), s.f);
    ok = ok && vok;
    summary["problems"].push_back(json{{"name", name}, {"pass", vok}});
  }
  summary["pass"] = ok;
  return summary;
}

inline int exit_code_for(ErrorKind k)
{
  return (k == ErrorKind::ConfigError || k == ErrorKind::IOError) ? kConfig : kMathDomain;
}

/// Executes one action and writes its artifacts; returns the process exit code.
inline int run(const Options &opt, std::ostream &log = std::cerr)
{
  Context ctx;
  ctx.cfg = json::object();
  ctx.opt = opt;
  ctx.out = opt.out;
  auto write_error = [&](const std::string &kind, const std::string &msg) {
    try
    {
      std::filesystem::create_directories(ctx.out);
      io::write_json_file((ctx.out / "report.json").string(),
                          json{{"action", opt.action.value_or("")}, {"error", json{{"kind", kind}, {"message", msg}}}});
    }
    catch (...)
    {
    }
  };
  try
  {
    if (opt.jobs < 1)
    {
      fail(ErrorKind::ConfigError, "--jobs must be positive");
    }
    if (opt.config)
    {
      ctx.cfg = io::read_json_file(*opt.config);
      if (!ctx.cfg.is_object())
      {
        fail(ErrorKind::ConfigError, "config must be a JSON object");
      }
    }
    std::string action = opt.action.value_or(ctx.cfg.value("action", std::string()));
    if (action.empty())
    {
      fail(ErrorKind::ConfigError, "no action given (--action or config \"action\")");
    }
    ctx.opt.action = action;
    if (opt.tol)
    {
      require(*opt.tol > 0.0, ErrorKind::ConfigError, "--tol must be positive");
      ctx.tol.correspondence = *opt.tol;
    }
    else if (ctx.cfg.contains("tol"))
    {
      ctx.tol.correspondence = ctx.cfg.at("tol").get<double>();
    }
    if (action != "demo" && !opt.config)
    {
      fail(ErrorKind::ConfigError, "--config is required for action " + action);
    }
    std::filesystem::create_directories(ctx.out);
    bool ok = true;
    json rep;
    if (action == "solve")
      rep = action_solve(ctx);
    else if (action == "eigen")
      rep = action_eigen(ctx, ok);
    else if (action == "realize")
      rep = action_realize(ctx, ok);
    else if (action == "verify")
      rep = run_verify(ctx, ok);
    else if (action == "demo")
      rep = action_demo(ctx, ok);
    else
      fail(ErrorKind::ConfigError, "unknown action \"" + action + "\"");
    io::write_json_file((ctx.out / "report.json").string(), rep);
    if (!ok)
    {
      log << "invariant check failed; see " << (ctx.out / "report.json").string() << '\n';
      return kInternal;
    }
    return kOk;
  }
  catch (const Error &e)
  {
    log << "error: " << e.what() << '\n';
    write_error(to_string(e.kind()), e.what());
    return exit_code_for(e.kind());
  }
  catch (const nlohmann::json::exception &e)
  {
    log << "config error: " << e.what() << '\n';
    write_error("ConfigError", e.what());
    return kConfig;
  }
  catch (const std::filesystem::filesystem_error &e)
  {
    log << "io error: " << e.what() << '\n';
    return kConfig;
  }
  catch (const std::exception &e)
  {
    log << "internal error: " << e.what() << '\n';
    write_error("Internal", e.what());
    return kInternal;
  }
}

}  // namespace nlbvp::app
