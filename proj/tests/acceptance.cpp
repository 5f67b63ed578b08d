// Copyright the nlbvp authors.
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one PASS/FAIL line per criterion. Reference values are
// computed here with plain Eigen code, not through the library's own helpers.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "nlbvp/nlbvp.hpp"

using namespace nlbvp;

namespace
{

// pinned tolerances
constexpr double kGreenTol = 1e-10;
constexpr double kProp24Tol = 1e-9;
constexpr double kFidelityTol = 1e-9;
constexpr double kConstantTol = 1e-12;
constexpr double kOracleTol = 1e-10;
constexpr double kWSymTol = 1e-10;
constexpr double kRealSpecTol = 1e-9;
constexpr double kCorrTol = 1e-6;
constexpr double kDiscTol = 1e-3;
constexpr double kOrderMin = 1.8;

const Window kWindow{-5.0, 5.0, 0.5, 5.0};

int failures = 0;
std::map<int, std::string> lines;

void report(int id, bool pass, const std::string &what, const std::string &detail)
{
  lines[id] = std::string(pass ? "PASS" : "FAIL") + " criterion " + std::to_string(id) + ": " + what + " (" + detail + ")";
  failures += pass ? 0 : 1;
}

std::string sci(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

double rel(const Mat &a, const Mat &b)
{
  const double s = a.norm() + b.norm();
  return s == 0.0 ? 0.0 : (a - b).norm() / s;
}

// Right singular vectors for singular values below tol * sigma_max.
Mat kernel_of(const Mat &A, double tol = 1e-10)
{
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullV);
  const auto &s = svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > tol * smax)
  {
    ++r;
  }
  return svd.matrixV().rightCols(A.cols() - r);
}

double green_oracle(const BoundaryTriple &bt)
{
  const Eigen::Index n = bt.n();
  const Mat &P = bt.param();
  const Mat F = P.topRows(n), Fp = P.bottomRows(n);
  const Mat &G = bt.state().gram();
  const Mat &Gb = bt.boundary_gram();
  const Mat a = F.adjoint() * G * Fp, b = Fp.adjoint() * G * F;
  const Mat c = bt.G0().adjoint() * Gb * bt.G1(), d = bt.G1().adjoint() * Gb * bt.G0();
  return (a - b - c + d).norm() / (a.norm() + b.norm() + c.norm() + d.norm());
}

struct Weyl
{
  Mat gamma, M;
};

Weyl weyl_oracle(const BoundaryTriple &bt, cplx l)
{
  const Eigen::Index n = bt.n();
  const Mat &P = bt.param();
  const Mat N = kernel_of(P.bottomRows(n) - l * P.topRows(n));
  const Mat X = N * (bt.G0() * N).fullPivLu().inverse();
  return {P.topRows(n) * X, bt.G1() * X};
}

Mat a0_resolvent_oracle(const BoundaryTriple &bt, cplx l)
{
  const Eigen::Index n = bt.n();
  const Mat B = bt.param() * kernel_of(bt.G0());
  return B.topRows(n) * (B.bottomRows(n) - l * B.topRows(n)).fullPivLu().inverse();
}

// id1 and id2 recomputed from first principles over consecutive sample pairs.
double prop24_oracle(const BoundaryTriple &bt, const std::vector<cplx> &pts)
{
  double worst = 0.0;
  const Mat &G = bt.state().gram();
  const Mat GbInv = bt.boundary_gram().inverse();
  for (std::size_t i = 0; i < pts.size(); ++i)
  {
    const cplx l = pts[i], m = pts[(i + 1) % pts.size()];
    const Weyl wl = weyl_oracle(bt, l), wm = weyl_oracle(bt, m);
    const Mat t = (l - m) * a0_resolvent_oracle(bt, l) * wm.gamma;
    worst = std::max(worst, (wl.gamma - wm.gamma - t).norm() / (wl.gamma.norm() + wm.gamma.norm() + t.norm()));
    const Mat q = (l - std::conj(m)) * GbInv * wm.gamma.adjoint() * G * wl.gamma;
    worst = std::max(worst, (wl.M - wm.M.adjoint() - q).norm() / (wl.M.norm() + wm.M.norm() + q.norm()));
  }
  return worst;
}

Mat psd_root(const Mat &B)
{
  Eigen::SelfAdjointEigenSolver<Mat> es(B);
  RVec d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * d.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

Mat rational_oracle(const std::vector<Mat> &alpha, const std::vector<Mat> &beta, cplx l)
{
  Mat v = alpha[0] + l * beta[0];
  for (std::size_t i = 1; i < alpha.size(); ++i)
  {
    const Mat r = psd_root(beta[i]);
    const Mat D = alpha[i] - l * Mat::Identity(alpha[i].rows(), alpha[i].cols());
    v += r * D.inverse() * r;
  }
  return v;
}

// C + gamma^+ ((l - Re l0) + (l - l0)(l - conj l0)(A0 - l)^{-1}) gamma for an operator A0.
Mat representation_oracle(const Mat &A0, const Mat &G, const Mat &gamma, cplx l0, const Mat &C, cplx l)
{
  const Eigen::Index n = A0.rows();
  const Mat I = Mat::Identity(n, n);
  const Mat R = (A0 - l * I).inverse();
  return C + gamma.adjoint() * G * ((l - l0.real()) * I + (l - l0) * (l - std::conj(l0)) * R) * gamma;
}

struct Named
{
  std::string name;
  BoundaryTriple bt;
};

struct RealizedCase
{
  std::string name;
  BoundaryTriple bt;
  std::function<Mat(cplx)> oracle;
};

std::vector<RealizedCase> realized_cases()
{
  std::vector<RealizedCase> out;
  Rng rng(2024);

  // strict representation form over a Krein space with signature (2, 2)
  {
    Mat J = Mat::Identity(4, 4);
    J(2, 2) = J(3, 3) = -1.0;
    KreinSpace H(J, J);
    const Mat A = J * rng.hermitian(4);  // J-selfadjoint
    const Mat gam = rng.complex(4, 2);
    const cplx l0(0.3, 1.2);
    const Mat C = rng.hermitian(2);
    RepresentationForm rf(LinearRelation::graph(H, A), gam, l0, C);
    Realization R = realize(rf, RealizeOptions{{}, {}, {}, 1, kWindow});
    out.push_back({"strict/" + R.path, R.triple, [=](cplx l) { return representation_oracle(A, J, gam, l0, C, l); }});
  }
  // seeded non-strict 3x3 (rank-2 gamma)
  {
    KreinSpace H = KreinSpace::hilbert(4);
    const Mat A = rng.hermitian(4);
    const Mat g2 = rng.complex(4, 2);
    Mat gam(4, 3);
    gam << g2, g2 * Vec::Ones(2);
    const cplx l0(-0.4, 0.9);
    const Mat C = rng.hermitian(3);
    RepresentationForm rf(LinearRelation::graph(H, A), gam, l0, C);
    const Mat G = Mat::Identity(4, 4);
    Realization R = realize(rf, RealizeOptions{{}, {}, {}, 2, kWindow});
    out.push_back({"3x3/" + R.path, R.triple, [=](cplx l) { return representation_oracle(A, G, gam, l0, C, l); }});
  }
  // diag(lambda, 5) through the pipeline
  {
    KreinSpace H = KreinSpace::hilbert(1);
    Mat W(2, 1);
    W << 0.0, 1.0;  // A0 = {0} x C
    Mat gam(1, 2);
    gam << 1.0, 0.0;
    const cplx l0(0.0, 1.0);
    Mat C = Mat::Zero(2, 2);
    C(1, 1) = 5.0;
    RepresentationForm rf(LinearRelation(H, W), gam, l0, C);
    Realization R = realize(rf, RealizeOptions{{}, {}, {}, 3, kWindow});
    out.push_back({"diag/" + R.path, R.triple, [](cplx l) {
                     Mat d = Mat::Zero(2, 2);
                     d(0, 0) = l;
                     d(1, 1) = 5.0;
                     return d;
                   }});
  }
  // diag(lambda, 5) by an explicit coupling
  {
    KreinSpace H = KreinSpace::hilbert(1);
    Mat W(2, 1);
    W << 0.0, 1.0;
    RepresentationForm lin(LinearRelation(H, W), Mat::Ones(1, 1), cplx(0.0, 1.0), Mat::Zero(1, 1));
    BoundaryTriple ts = realize_strict(lin);
    BoundaryTriple tc = realize_constant(5.0 * Mat::Identity(1, 1), cplx(0.0, 8.0));
    BoundaryTriple bt = couple(ts, tc, Mat::Zero(1, 1), Mat::Zero(1, 1));
    out.push_back({"diag/couple", bt, [](cplx l) {
                     Mat d = Mat::Zero(2, 2);
                     d(0, 0) = l;
                     d(1, 1) = 5.0;
                     return d;
                   }});
  }
  // rational g = 2, m = 3
  {
    std::vector<Mat> a{rng.hermitian(2), rng.hermitian(2), rng.hermitian(2)};
    std::vector<Mat> b{rng.psd(2, 2), rng.psd(2, 1), rng.psd(2, 2)};
    RationalNevanlinna tau(a, b);
    Realization R = realize(tau, RealizeOptions{{}, {}, {}, 4, kWindow});
    out.push_back({"rational/" + R.path, R.triple, [=](cplx l) { return rational_oracle(a, b, l); }});
  }
  // constant
  {
    Mat Th(2, 2);
    Th << 1.0, 0.0, 0.0, -1.0;
    out.push_back({"constant", realize_constant(Th, cplx(0.0, 2.0)), [=](cplx) { return Th; }});
  }
  return out;
}

void criteria_1_to_3(const std::vector<RealizedCase> &cases, const std::vector<Named> &elliptic)
{
  const std::vector<cplx> pts = sample_points(10, 77, kWindow);
  double green = 0.0, prop = 0.0, fid = 0.0;
  std::string gworst, pworst, fworst;
  auto track = [](double v, double &worst, std::string &who, const std::string &name) {
    if (!(v <= worst))
    {
      worst = v;
      who = name;
    }
  };
  std::vector<Named> all = elliptic;
  for (const auto &c : cases)
  {
    all.push_back({c.name, c.bt});
  }
  for (const auto &t : all)
  {
    track(green_oracle(t.bt), green, gworst, t.name);
    const double p = std::max(verify_prop24(t.bt, pts).max(), prop24_oracle(t.bt, pts));
    track(p, prop, pworst, t.name);
  }
  for (const auto &c : cases)
  {
    for (cplx l : pts)
    {
      track(rel(weyl(c.bt, l), c.oracle(l)), fid, fworst, c.name);
    }
  }
  report(1, green <= kGreenTol, "Green identity over a full basis of T",
         std::to_string(all.size()) + " triples, worst " + sci(green) + " [" + gworst + "] tol " + sci(kGreenTol));
  report(2, prop <= kProp24Tol, "gamma-field and Weyl-function identities at 10 points",
         "worst " + sci(prop) + " [" + pworst + "] tol " + sci(kProp24Tol));
  report(3, fid <= kFidelityTol, "realized Weyl function reproduces tau",
         std::to_string(cases.size()) + " realizations, worst " + sci(fid) + " [" + fworst + "] tol " +
             sci(kFidelityTol));
}

void criterion_4()
{
  Rng rng(404);
  std::vector<std::pair<Mat, cplx>> inst;
  Mat Th(2, 2);
  Th << 1.0, 0.0, 0.0, -1.0;
  inst.emplace_back(Th, cplx(0.0, 2.0));
  inst.emplace_back(rng.hermitian(3), cplx(0.5, -1.5));
  inst.emplace_back(Mat::Zero(1, 1), cplx(0.0, 1.0));
  const std::vector<cplx> pts = sample_points(10, 405, kWindow);
  double res = 0.0, wey = 0.0;
  bool sig = true;
  for (const auto &[Theta, th] : inst)
  {
    const Eigen::Index g = Theta.rows();
    BoundaryTriple bt = realize_constant(Theta, th);
    const auto s = bt.state().signature();
    sig = sig && s.first == g && s.second == g;
    for (cplx l : pts)
    {
      const Mat I = Mat::Identity(g, g);
      Mat ref = Mat::Zero(2 * g, 2 * g);
      ref.topLeftCorner(g, g) = I / (th - l);
      ref.topRightCorner(g, g) = I / ((l - th) * (std::conj(th) - l));
      ref.bottomRightCorner(g, g) = I / (std::conj(th) - l);
      res = std::max(res, (bt.a0_resolvent(l) - ref).cwiseAbs().maxCoeff());
      wey = std::max(wey, (weyl(bt, l) - Theta).cwiseAbs().maxCoeff());
    }
  }
  report(4, res <= kConstantTol && wey <= kConstantTol && sig, "constant-block resolvent, Weyl = Theta, signature (g, g)",
         "resolvent " + sci(res) + ", Weyl " + sci(wey) + ", signature " + (sig ? "ok" : "wrong") + ", tol " +
             sci(kConstantTol));
}

struct Problem
{
  std::string name;
  EllipticTriple et;
};

struct TauCase
{
  std::string name;
  OperatorFunction tau;
  bool nevanlinna_rational;
};

std::vector<TauCase> tau_cases(Eigen::Index g, std::uint64_t seed)
{
  Rng rng(seed);
  const Mat I = Mat::Identity(g, g);
  return {{"constant", ConstantFunction(rng.hermitian(g)), false},
          {"lambda-linear", RationalNevanlinna({Mat::Zero(g, g)}, {I}), true},
          {"rational-m2", RationalNevanlinna({Mat::Zero(g, g), 20.0 * I}, {I, I}), true}};
}

Linearization linearization_for(const EllipticTriple &et, const OperatorFunction &tau)
{
  if (const auto *r = std::get_if<RationalNevanlinna>(&tau))
  {
    return build_linearization_rational(et, *r);
  }
  const cplx theta(0.0, 2.0 + kWindow.max_modulus());
  return build_linearization(et, realize_constant(std::get<ConstantFunction>(tau).theta, theta));
}

void criteria_5_6_8(const std::vector<Problem> &problems)
{
  double equiv = 0.0, wsym = 0.0, imag = 0.0;
  std::string eworst;
  int pairs = 0, probes = 0, outside = 0;
  for (const auto &p : problems)
  {
    for (const auto &tc : tau_cases(p.et.n_B(), 500))
    {
      const Linearization lin = linearization_for(p.et, tc.tau);
      wsym = std::max(wsym, lin.w_symmetry_residual());
      if (tc.nevanlinna_rational)
      {
        imag = std::max(imag, symmetrized_spectrum(lin).imag().cwiseAbs().maxCoeff());
      }
      const std::vector<cplx> pts = sample_points(20, 501, kWindow);
      Rng rng(502);
      for (cplx l : pts)
      {
        const Vec g = rng.vector(p.et.n_I());
        const Vec fk = krein_resolve(p.et, tc.tau, l, g).f;
        const Vec fd = direct_solve(p.et, tc.tau, l, g).f;
        const Vec fc = compressed_resolvent(lin, l, g);
        const double d = std::max({rel(fk, fd), rel(fk, fc), rel(fd, fc)});
        if (!(d <= equiv))
        {
          equiv = d;
          eworst = p.name + "/" + tc.name;
        }
        ++pairs;
      }
      if (tc.nevanlinna_rational)
      {
        for (cplx l : sample_points(50, 503, kWindow))
        {
          ++probes;
          // evaluable Krein formula: M + tau invertible at a nonreal point
          const Mat F = p.et.weyl(l) + eval(tc.tau, l);
          Eigen::JacobiSVD<Mat> svd(F);
          const auto &s = svd.singularValues();
          const bool ok = in_U(p.et, tc.tau, l).holds && s(s.size() - 1) > 1e-8 * s(0);
          outside += ok ? 0 : 1;
        }
      }
    }
  }
  report(5, equiv <= kOracleTol, "direct, Krein-formula and compressed-resolvent solutions agree",
         std::to_string(pairs) + " (lambda, g) pairs, worst " + sci(equiv) + " [" + eworst + "] tol " + sci(kOracleTol));
  report(6, wsym <= kWSymTol && imag <= kRealSpecTol, "linearization is W-symmetric with real spectrum",
         "W-symmetry " + sci(wsym) + " tol " + sci(kWSymTol) + ", max |Im| " + sci(imag) + " tol " + sci(kRealSpecTol));
  report(8, outside == 0, "nonreal probes lie in the solvability set",
         std::to_string(probes - outside) + "/" + std::to_string(probes) + " probes evaluable");
}

void criterion_7()
{
  EllipticTriple et(build_1d(99, constant_coefficient(1.0), constant_coefficient(0.0)));
  const Mat I = Mat::Identity(2, 2);
  const std::vector<Mat> alpha{Mat::Zero(2, 2), 20.0 * I}, beta{I, I};
  OperatorFunction tau = RationalNevanlinna(alpha, beta);
  const double lo = -30.0, hi = 9.0;
  const double tmin = dirichlet_eigenvalues(et.disc()).minCoeff();
  const bool disjoint = tmin > hi && (20.0 < lo || 20.0 > hi);

  const Linearization lin = build_linearization_rational(et, std::get<RationalNevanlinna>(tau));
  const ScanResult sc = homogeneous_scan(et, tau, lo, hi, 400);
  const CorrespondenceReport cr = eigen_correspondence(lin, et, tau, lo, hi, sc.roots, kCorrTol);

  // every eigenvalue in the window makes M + tau singular, recomputed with the oracle tau
  double smin = 0.0;
  for (const auto &e : cr.eigen)
  {
    const cplx l(e.lambda.real(), 0.0);
    Eigen::JacobiSVD<Mat> svd(et.weyl(l) + rational_oracle(alpha, beta, l));
    const auto &s = svd.singularValues();
    smin = std::max(smin, s(s.size() - 1) / s(0));
  }
  double dist = 0.0;
  for (const auto &e : cr.eigen)
  {
    dist = std::max(dist, e.root_distance);
  }
  for (double d : cr.root_distance)
  {
    dist = std::max(dist, d);
  }
  const bool pass = disjoint && cr.ok() && !cr.eigen.empty() && cr.eigen.size() == sc.roots.size() && smin <= kCorrTol;
  std::string list;
  for (const auto &e : cr.eigen)
  {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%.9f", list.empty() ? "" : ", ", e.lambda.real());
    list += buf;
  }
  report(7, pass, "eigenvalues of the linearization match roots of M + tau",
         std::to_string(cr.eigen.size()) + " eigenvalues {" + list + "}, " + std::to_string(sc.roots.size()) +
             " roots, max distance " + sci(dist) + ", max rel sigma_min " + sci(smin) + " tol " + sci(kCorrTol));
}

void criterion_9()
{
  Rng rng(909);
  std::vector<cplx> upper;
  for (cplx z : sample_points(10, 910, kWindow))
  {
    if (z.imag() > 0.0 && upper.size() < 5)
    {
      upper.push_back(z);
    }
  }
  const Mat I = Mat::Identity(2, 2);
  std::vector<OperatorFunction> nev{
      RationalNevanlinna({Mat::Zero(1, 1)}, {Mat::Identity(1, 1)}),
      RationalNevanlinna({Mat::Zero(2, 2), 20.0 * I}, {I, I}),
      RationalNevanlinna({rng.hermitian(2), rng.hermitian(2), rng.hermitian(2)},
                         {rng.psd(2, 2), rng.psd(2, 1), rng.psd(2, 2)}),
      RationalNevanlinna({rng.hermitian(3), rng.hermitian(3)}, {rng.psd(3, 3), rng.psd(3, 2)}),
  };
  int worst = 0;
  for (const auto &t : nev)
  {
    worst = std::max(worst, negative_squares(t, upper));
  }
  // -lambda as a representation form over the anti-Hilbert line
  KreinSpace neg(-Mat::Identity(1, 1), -Mat::Identity(1, 1));
  Mat W(2, 1);
  W << 0.0, 1.0;
  OperatorFunction minus = RepresentationForm(LinearRelation(neg, W), Mat::Ones(1, 1), cplx(0.0, 1.0), Mat::Zero(1, 1));
  const Mat probe = eval(minus, cplx(0.0, 1.0));
  const int k = negative_squares(minus, upper);
  const bool ok = worst == 0 && k >= 1 && std::abs(probe(0, 0) - cplx(0.0, -1.0)) < 1e-14;
  report(9, ok, "negative squares of the Nevanlinna kernel",
         "max over " + std::to_string(nev.size()) + " PSD instances = " + std::to_string(worst) +
             ", tau = -lambda gives " + std::to_string(k) + ", N = " + std::to_string(upper.size()));
}

void criterion_10()
{
  auto errors = [](int n) {
    RVec ev = dirichlet_eigenvalues(build_1d(n, constant_coefficient(1.0), constant_coefficient(0.0)));
    std::sort(ev.data(), ev.data() + ev.size());
    std::vector<double> e;
    for (int k = 1; k <= 5; ++k)
    {
      const double exact = std::pow(k * M_PI, 2);
      e.push_back(std::abs(ev(k - 1) - exact) / exact);
    }
    return e;
  };
  const std::vector<double> coarse = errors(49), fine = errors(99);
  double emax = 0.0, omin = 1e300;
  std::string per;
  for (int k = 0; k < 5; ++k)
  {
    emax = std::max(emax, fine[k]);
    const double order = std::log2(coarse[k] / fine[k]);
    omin = std::min(omin, order);
    per += (k ? ", " : "") + std::string("k=") + std::to_string(k + 1) + ":" + sci(fine[k]) +
           (fine[k] <= kDiscTol ? "" : "*");
  }
  char ord[32];
  std::snprintf(ord, sizeof ord, "%.3f", omin);
  report(10, emax <= kDiscTol && omin >= kOrderMin, "1D Dirichlet eigenvalues vs (k pi)^2 and O(h^2) order",
         "rel errors at n_I=99 {" + per + "} tol " + sci(kDiscTol) + ", min observed order " + ord + " (need " +
             sci(kOrderMin) + ")");
}

}  // namespace

int main()
{
  const auto t0 = std::chrono::steady_clock::now();
  try
  {
    std::vector<Problem> problems;
    problems.push_back({"1d-n99", EllipticTriple(build_1d(99, constant_coefficient(1.0), constant_coefficient(0.0)))});
    problems.push_back({"2d-15x15", EllipticTriple(build_2d(15, 15, constant_coefficient(1.0), constant_coefficient(1.0),
                                                            constant_coefficient(0.0)))});
    std::vector<Named> elliptic;
    for (const auto &p : problems)
    {
      elliptic.push_back({"elliptic/" + p.name, p.et.triple()});
    }
    criteria_1_to_3(realized_cases(), elliptic);
    criterion_4();
    criteria_5_6_8(problems);
    criterion_7();
    criterion_9();
    criterion_10();
  }
  catch (const std::exception &e)
  {
    for (const auto &[id, line] : lines)
    {
      std::printf("%s\n", line.c_str());
    }
    std::printf("FAIL acceptance aborted: %s\n", e.what());
    return 1;
  }
  for (const auto &[id, line] : lines)
  {
    std::printf("%s\n", line.c_str());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%d failing criteria, %.1f s\n", failures, secs);
  return failures == 0 ? 0 : 1;
}
