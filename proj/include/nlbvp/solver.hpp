// Copyright the nlbvp authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <atomic>
#include <functional>
#include <thread>
#include <vector>

#include "nlbvp/elliptic.hpp"
#include "nlbvp/opfunc.hpp"
#include "nlbvp/realize.hpp"

namespace nlbvp
{

/// Relative sigma_min threshold below which M + tau counts as singular.
inline constexpr double kUThreshold = 1e-8;

/// Runs body(i) for i in [0, n) on up to `jobs` threads. Results must be
/// written to per-index slots so the outcome does not depend on scheduling.
inline void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)> &body)
{
  const std::size_t nt = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
  if (nt <= 1)
  {
    for (std::size_t i = 0; i < n; ++i)
    {
      body(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < nt; ++t)
  {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n && !failed; i = next++)
      {
        try
        {
          body(i);
        }
        catch (...)
        {
          if (!failed.exchange(true))
          {
            err = std::current_exception();
          }
        }
      }
    });
  }
  for (auto &th : pool)
  {
    th.join();
  }
  if (err)
  {
    std::rethrow_exception(err);
  }
}

struct SolveReport
{
  cplx lambda;
  bool in_U = false;
  Vec f;            // solution on interior nodes
  Vec y;            // boundary coordinate Gamma0
  double pde_residual = 0.0;
  double bc_residual = 0.0;
  double sigma_min = 0.0;  // sigma_min(M + tau) / ||M + tau||
};

/// tau(lambda) with poles reported as OutsideU.
inline Mat eval_outside_u(const OperatorFunction &tau, cplx lambda)
{
  try
  {
    return eval(tau, lambda);
  }
  catch (const Error &e)
  {
    if (e.kind() == ErrorKind::PoleOrSpectrum)
    {
      fail(ErrorKind::OutsideU, "lambda is a pole of tau");
    }
    throw;
  }
}

inline double relative_sigma_min(const Mat &F)
{
  const double nrm = linalg::norm2(F);
  return nrm == 0.0 ? 0.0 : linalg::sigma_min(F) / nrm;
}

/// Residuals of (T_D f_D + eta E y) - lambda f = g and tau y = w L_BI f_D.
inline void fill_residuals(const EllipticTriple &et, const Mat &tau_l, SolveReport &r, const Vec &g)
{
  const Mat Ec = et.E().cast<cplx>();
  const Mat LBI = et.disc().L_BI().cast<cplx>();
  const Vec fD = r.f - Ec * r.y;
  const Vec img = et.TD().cast<cplx>() * fD + et.eta() * (Ec * r.y);
  const Vec pde = img - r.lambda * r.f - g;
  const double ps = img.norm() + std::abs(r.lambda) * r.f.norm() + g.norm();
  r.pde_residual = ps == 0.0 ? pde.norm() : pde.norm() / ps;
  const Vec a = tau_l * r.y;
  const Vec b = et.w() * (LBI * fD);
  const double bs = a.norm() + b.norm();
  r.bc_residual = bs == 0.0 ? (a - b).norm() : (a - b).norm() / bs;
}

/// f = (T_D - l)^{-1} g - gamma(l) (M(l) + tau(l))^{-1} gamma(conj l)* g.
inline SolveReport krein_resolve(const EllipticTriple &et, const OperatorFunction &tau, cplx lambda, const Vec &g)
{
  require(g.size() == et.n_I(), ErrorKind::DimensionMismatch, "right-hand side has wrong length");
  require(dim(tau) == et.n_B(), ErrorKind::DimensionMismatch, "tau must act on the boundary nodes");
  const Mat tl = eval_outside_u(tau, lambda);
  auto lu = et.shifted(lambda);
  const Mat Ec = et.E().cast<cplx>();
  const Mat LBI = et.disc().L_BI().cast<cplx>();
  const Mat RE = lu.solve(Ec);
  const Vec Rg = lu.solve(g);
  const Mat gam = Ec + (lambda - et.eta()) * RE;
  const Mat M = et.w() * (et.eta() - lambda) * (LBI * RE);
  const Mat F = M + tl;

  SolveReport r;
  r.lambda = lambda;
  r.sigma_min = relative_sigma_min(F);
  r.in_U = r.sigma_min > kUThreshold;
  if (!r.in_U)
  {
    fail(ErrorKind::OutsideU, "M(lambda) + tau(lambda) is not boundedly invertible");
  }
  // gamma(conj l)* g = -w L_BI (T_D - l)^{-1} g in the weighted inner product
  const Vec gbar = -et.w() * (LBI * Rg);
  r.y = -F.partialPivLu().solve(gbar);
  r.f = Rg + gam * r.y;
  fill_residuals(et, tl, r, g);
  return r;
}

/// Independent oracle: the coupled (n_I + n_B) system
/// (T_D - l) f_D + (eta - l) E y = g,  tau(l) y - w L_BI f_D = 0.
inline SolveReport direct_solve(const EllipticTriple &et, const OperatorFunction &tau, cplx lambda, const Vec &g,
                                double rcond_min = 1e-13)
{
  require(g.size() == et.n_I(), ErrorKind::DimensionMismatch, "right-hand side has wrong length");
  const Eigen::Index nI = et.n_I(), nB = et.n_B();
  const Mat tl = eval_outside_u(tau, lambda);
  Mat S(nI + nB, nI + nB);
  S.topLeftCorner(nI, nI) = et.TD().cast<cplx>();
  S.topLeftCorner(nI, nI).diagonal().array() -= lambda;
  S.topRightCorner(nI, nB) = (et.eta() - lambda) * et.E().cast<cplx>();
  S.bottomLeftCorner(nB, nI) = -et.w() * et.disc().L_BI().cast<cplx>();
  S.bottomRightCorner(nB, nB) = tl;
  Vec rhs = Vec::Zero(nI + nB);
  rhs.head(nI) = g;
  Eigen::PartialPivLU<Mat> lu(S);
  if (!(lu.rcond() > rcond_min))
  {
    fail(ErrorKind::SingularSystem, "coupled boundary value system is singular");
  }
  Vec sol = lu.solve(rhs);
  SolveReport r;
  r.lambda = lambda;
  r.in_U = true;
  r.y = sol.tail(nB);
  r.f = sol.head(nI) + et.E().cast<cplx>() * r.y;
  fill_residuals(et, tl, r, g);
  return r;
}

/// Membership in the solvability set: lambda off sigma(T_D), off the poles of tau,
/// and sigma_min(M + tau) above the threshold.
inline Check in_U(const EllipticTriple &et, const OperatorFunction &tau, cplx lambda)
{
  try
  {
    const Mat F = et.weyl(lambda) + eval(tau, lambda);
    const double s = relative_sigma_min(F);
    return {s > kUThreshold, s};
  }
  catch (const Error &)
  {
    return {false, 0.0};
  }
}

/// Linearized operator on (interior, realization-state) coordinates with product Gram W.
struct Linearization
{
  Mat A;        // (n_I + n_K) square
  Mat W;        // product Gram diag(w I, G_K)
  Mat Jfund;    // product fundamental symmetry
  Mat trace;    // state -> boundary coordinate y
  Eigen::Index n_I = 0;
  Eigen::Index n_K = 0;
  bool hilbert = true;

  Eigen::Index size() const { return A.rows(); }

  double w_symmetry_residual() const
  {
    Mat WA = W * A;
    const double s = WA.norm();
    return s == 0.0 ? 0.0 : (WA - A.adjoint() * W).norm() / s;
  }
};

/// Explicit block operator for rational tau on (f, k_1, ..., k_m):
/// y = b_1^{-1/2} k_1, f_D = f - E y,
/// f'   = T_D f_D + eta E y,
/// k_1' = b_1^{-1/2} (w L_BI f_D - a_1 y + sum_{i>=2} b_i^{1/2} k_i),
/// k_i' = b_i^{1/2} y + a_i k_i.
inline Linearization build_linearization_rational(const EllipticTriple &et, const RationalNevanlinna &tau)
{
  if (!tau.beta1_definite())
  {
    fail(ErrorKind::BetaOneSingular, "beta_1 must be positive definite");
  }
  const Eigen::Index nI = et.n_I(), nB = et.n_B();
  require(tau.g() == nB, ErrorKind::DimensionMismatch, "tau must act on the boundary nodes");
  const Eigen::Index m = static_cast<Eigen::Index>(tau.m());
  const Eigen::Index N = nI + m * nB;
  const Mat b1ih = linalg::pd_inv_sqrt(tau.beta()[0]);
  const Mat Ec = et.E().cast<cplx>();
  const Mat TD = et.TD().cast<cplx>();
  const Mat LBI = et.disc().L_BI().cast<cplx>();
  const Mat LIB = et.disc().L_IB.cast<cplx>();

  Linearization lin;
  lin.n_I = nI;
  lin.n_K = m * nB;
  lin.A = Mat::Zero(N, N);
  // row f': T_D f + (eta - T_D) E y = T_D f + L_IB y
  lin.A.topLeftCorner(nI, nI) = TD;
  lin.A.block(0, nI, nI, nB) = LIB * b1ih;
  // row k_1'
  const Mat wL = et.w() * LBI;
  lin.A.block(nI, 0, nB, nI) = b1ih * wL;
  lin.A.block(nI, nI, nB, nB) = -b1ih * (wL * Ec + tau.alpha()[0]) * b1ih;
  for (Eigen::Index i = 1; i < m; ++i)
  {
    const auto ii = static_cast<std::size_t>(i);
    lin.A.block(nI, nI + i * nB, nB, nB) = b1ih * tau.beta_half(ii);
    lin.A.block(nI + i * nB, nI, nB, nB) = tau.beta_half(ii) * b1ih;
    lin.A.block(nI + i * nB, nI + i * nB, nB, nB) = tau.alpha()[ii];
  }
  lin.W = Mat::Identity(N, N);
  lin.W.topLeftCorner(nI, nI) *= et.w();
  lin.Jfund = Mat::Identity(N, N);
  lin.trace = Mat::Zero(nB, N);
  lin.trace.block(0, nI, nB, nB) = b1ih;
  lin.hilbert = true;
  return lin;
}

/// General coupling of the elliptic triple with a realized triple K:
/// Upsilon0 = Gamma0^K and Upsilon1 + Gamma1^K = 0, eliminated to an explicit matrix.
inline Linearization build_linearization(const EllipticTriple &et, const BoundaryTriple &K)
{
  const Eigen::Index nI = et.n_I(), nB = et.n_B();
  require(K.g() == nB, ErrorKind::DimensionMismatch, "realized boundary dimension must equal n_B");
  const Eigen::Index nK = K.n(), pK = K.p();
  const Mat Ec = et.E().cast<cplx>();
  const Mat LBI = et.disc().L_BI().cast<cplx>();

  // variables (f_D, c): -w L_BI f_D + Gamma1^K c = 0
  Mat C(nB, nI + pK);
  C.leftCols(nI) = -et.w() * LBI;
  C.rightCols(pK) = K.G1();
  const Mat Z = linalg::null_basis(C);
  if (Z.cols() != nI + nK)
  {
    fail(ErrorKind::CouplingRankDeficient, "coupling conditions do not determine the operator");
  }
  Mat Xm = Mat::Zero(nI + nK, nI + pK);
  Xm.topLeftCorner(nI, nI).setIdentity();
  Xm.topRightCorner(nI, pK) = Ec * K.G0();
  Xm.bottomRightCorner(nK, pK) = K.F();
  Mat Ym = Mat::Zero(nI + nK, nI + pK);
  Ym.topLeftCorner(nI, nI) = et.TD().cast<cplx>();
  Ym.topRightCorner(nI, pK) = et.eta() * (Ec * K.G0());
  Ym.bottomRightCorner(nK, pK) = K.Fp();
  const Mat X = Xm * Z;
  const Mat Y = Ym * Z;
  if (linalg::condition(X) > kResolventCond)
  {
    fail(ErrorKind::CouplingRankDeficient, "coupled relation is not the graph of an operator");
  }
  Eigen::PartialPivLU<Mat> lu(X);
  const Mat Xinv = lu.inverse();

  Linearization lin;
  lin.n_I = nI;
  lin.n_K = nK;
  lin.A = Y * Xinv;
  lin.W = linalg::block_diag(et.w() * Mat::Identity(nI, nI), K.state().gram());
  lin.Jfund = linalg::block_diag(Mat::Identity(nI, nI), K.state().J());
  Mat T0 = Mat::Zero(nB, nI + pK);
  T0.rightCols(pK) = K.G0();
  lin.trace = T0 * Z * Xinv;
  lin.hilbert = K.state().is_hilbert();
  return lin;
}

/// Constant tau = Theta: T_Theta = T_D + L_IB (Theta + w L_BI E)^{-1} w L_BI on the interior only.
inline Linearization build_fixed_extension(const EllipticTriple &et, const Mat &Theta)
{
  const Eigen::Index nI = et.n_I(), nB = et.n_B();
  require(Theta.rows() == nB && Theta.cols() == nB, ErrorKind::DimensionMismatch, "Theta must be n_B x n_B");
  const Mat LBI = et.disc().L_BI().cast<cplx>();
  const Mat wL = et.w() * LBI;
  const Mat S = Theta + wL * et.E().cast<cplx>();
  if (linalg::condition(S) > kResolventCond)
  {
    fail(ErrorKind::CouplingRankDeficient, "Theta + w L_BI E is singular");
  }
  Linearization lin;
  lin.n_I = nI;
  lin.n_K = 0;
  lin.trace = S.partialPivLu().solve(wL);
  lin.A = et.TD().cast<cplx>() + et.disc().L_IB.cast<cplx>() * lin.trace;
  lin.W = et.w() * Mat::Identity(nI, nI);
  lin.Jfund = Mat::Identity(nI, nI);
  lin.hilbert = true;
  return lin;
}

/// Interior block of (A - l)^{-1} (g, 0).
inline Vec compressed_resolvent(const Linearization &lin, cplx lambda, const Vec &g)
{
  require(g.size() == lin.n_I, ErrorKind::DimensionMismatch, "right-hand side has wrong length");
  Mat D = lin.A;
  D.diagonal().array() -= lambda;
  Eigen::PartialPivLU<Mat> lu(D);
  if (!(lu.rcond() > 1.0 / kResolventCond))
  {
    fail(ErrorKind::SpectrumPoint, "lambda lies in the spectrum of the linearization");
  }
  Vec rhs = Vec::Zero(lin.size());
  rhs.head(lin.n_I) = g;
  return lu.solve(rhs).head(lin.n_I);
}

/// W^{1/2} A W^{-1/2}: Hermitian when A is W-selfadjoint and W is positive definite.
inline Mat w_symmetrized(const Linearization &lin)
{
  const Mat Wh = linalg::psd_sqrt(lin.W, 0.0);
  const Mat Wih = linalg::pd_inv_sqrt(lin.W);
  return Wh * lin.A * Wih;
}

struct EigenPairs
{
  Vec values;
  Mat vectors;  // columns in original coordinates
};

/// Hilbert case: Hermitian solve of the symmetrized matrix. Krein case: general eigensolver.
inline EigenPairs eigenpairs(const Linearization &lin)
{
  EigenPairs out;
  if (lin.hilbert)
  {
    const Mat S = linalg::hermitian_part(w_symmetrized(lin));
    Eigen::SelfAdjointEigenSolver<Mat> es(S);
    out.values = es.eigenvalues().cast<cplx>();
    out.vectors = linalg::pd_inv_sqrt(lin.W) * es.eigenvectors();
  }
  else
  {
    Eigen::ComplexEigenSolver<Mat> es(lin.A);
    out.values = es.eigenvalues();
    out.vectors = es.eigenvectors();
  }
  return out;
}

/// Eigenvalues of the symmetrized matrix from the general (non-Hermitian) solver;
/// their imaginary parts measure how far the computed spectrum is from real.
inline Vec symmetrized_spectrum(const Linearization &lin)
{
  Eigen::ComplexEigenSolver<Mat> es(w_symmetrized(lin), false);
  return es.eigenvalues();
}

struct ScanSample
{
  double lambda = 0.0;
  double sigma_min = 0.0;  // relative; NaN when not evaluable
  int negatives = -1;       // inertia of the Hermitian M + tau; -1 when not evaluable
};

struct ScanResult
{
  std::vector<double> roots;
  std::vector<double> root_sigma;
  std::vector<ScanSample> samples;
  std::vector<double> violations;  // grid points in sigma(T_D) or at poles of tau
};

/// Real-axis search for singular M(l) + tau(l): inertia changes of the Hermitian matrix on a
/// grid refined by bisection, accepted only where sigma_min is small (rejects poles);
/// interior minima of sigma_min are additionally polished by golden-section search.
inline ScanResult homogeneous_scan(const EllipticTriple &et, const OperatorFunction &tau, double lo, double hi,
                                   int grid = 400, int jobs = 1, double accept = 1e-6)
{
  require(hi > lo && grid >= 3, ErrorKind::InvalidArgument, "invalid scan window");
  auto evalF = [&](double l, Mat &F) -> bool {
    try
    {
      F = linalg::hermitian_part(et.weyl(cplx(l, 0.0)) + eval(tau, cplx(l, 0.0)));
      return true;
    }
    catch (const Error &)
    {
      return false;
    }
  };
  auto sample = [&](double l) {
    ScanSample s;
    s.lambda = l;
    Mat F;
    if (!evalF(l, F))
    {
      s.sigma_min = std::numeric_limits<double>::quiet_NaN();
      return s;
    }
    RVec ev = linalg::hermitian_eigenvalues(F);
    const double nrm = ev.cwiseAbs().maxCoeff();
    s.sigma_min = nrm == 0.0 ? 0.0 : ev.cwiseAbs().minCoeff() / nrm;
    s.negatives = static_cast<int>((ev.array() < 0.0).count());
    return s;
  };

  ScanResult out;
  out.samples.resize(static_cast<std::size_t>(grid));
  parallel_for(static_cast<std::size_t>(grid), jobs, [&](std::size_t k) {
    const double l = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(grid - 1);
    out.samples[k] = sample(l);
  });
  for (const auto &s : out.samples)
  {
    if (s.negatives < 0)
    {
      out.violations.push_back(s.lambda);
    }
  }

  std::vector<double> cands;
  std::function<void(ScanSample, ScanSample, int)> refine = [&](ScanSample a, ScanSample b, int depth) {
    if (a.negatives == b.negatives)
    {
      return;
    }
    const double width = b.lambda - a.lambda;
    if (width <= 1e-14 * std::max(1.0, std::abs(a.lambda)) || depth > 200)
    {
      cands.push_back(a.sigma_min <= b.sigma_min ? a.lambda : b.lambda);
      return;
    }
    double mid = 0.5 * (a.lambda + b.lambda);
    ScanSample m = sample(mid);
    for (int tries = 0; m.negatives < 0 && tries < 8; ++tries)
    {
      mid = a.lambda + width * (0.5 + 0.05 * (tries + 1));
      m = sample(mid);
    }
    if (m.negatives < 0)
    {
      return;
    }
    refine(a, m, depth + 1);
    refine(m, b, depth + 1);
  };
  for (std::size_t k = 0; k + 1 < out.samples.size(); ++k)
  {
    const auto &a = out.samples[k];
    const auto &b = out.samples[k + 1];
    if (a.negatives >= 0 && b.negatives >= 0)
    {
      refine(a, b, 0);
    }
  }

  // tangential zeros: interior grid minima of sigma_min without an inertia change
  const double gold = 0.5 * (std::sqrt(5.0) - 1.0);
  for (std::size_t k = 1; k + 1 < out.samples.size(); ++k)
  {
    const auto &a = out.samples[k - 1], &m = out.samples[k], &b = out.samples[k + 1];
    if (a.negatives < 0 || m.negatives < 0 || b.negatives < 0)
    {
      continue;
    }
    if (!(m.sigma_min < a.sigma_min && m.sigma_min < b.sigma_min) || a.negatives != b.negatives)
    {
      continue;
    }
    double x0 = a.lambda, x3 = b.lambda;
    double x1 = x3 - gold * (x3 - x0), x2 = x0 + gold * (x3 - x0);
    double f1 = sample(x1).sigma_min, f2 = sample(x2).sigma_min;
    for (int it = 0; it < 200 && (x3 - x0) > 1e-14 * std::max(1.0, std::abs(x0)); ++it)
    {
      if (!(f1 >= f2))
      {
        x3 = x2;
        x2 = x1;
        f2 = f1;
        x1 = x3 - gold * (x3 - x0);
        f1 = sample(x1).sigma_min;
      }
      else
      {
        x0 = x1;
        x1 = x2;
        f1 = f2;
        x2 = x0 + gold * (x3 - x0);
        f2 = sample(x2).sigma_min;
      }
    }
    const double xm = 0.5 * (x0 + x3);
    const ScanSample s = sample(xm);
    if (s.negatives >= 0 && s.sigma_min <= 1e-9)
    {
      cands.push_back(xm);
    }
  }

  std::sort(cands.begin(), cands.end());
  for (double c : cands)
  {
    const ScanSample s = sample(c);
    if (s.negatives < 0 || !(s.sigma_min <= accept))
    {
      continue;
    }
    if (!out.roots.empty() && std::abs(c - out.roots.back()) <= 1e-9 * std::max(1.0, std::abs(c)))
    {
      continue;
    }
    out.roots.push_back(c);
    out.root_sigma.push_back(s.sigma_min);
  }
  return out;
}

struct EigenCheck
{
  cplx lambda;
  double f_fraction = 0.0;   // ||f|| / ||(f, k)||
  double pde_residual = 0.0;
  double bc_residual = 0.0;
  double root_distance = 0.0;
  bool ok = false;
};

struct CorrespondenceReport
{
  std::vector<EigenCheck> eigen;           // direction (i)
  std::vector<double> roots;
  std::vector<double> root_distance;       // direction (ii)
  double tol = 0.0;
  bool ok() const
  {
    for (const auto &e : eigen)
    {
      if (!e.ok)
      {
        return false;
      }
    }
    for (double d : root_distance)
    {
      if (!(d <= tol))
      {
        return false;
      }
    }
    return true;
  }
};

/// Eigenpairs of the linearization in [lo, hi] against roots of M + tau.
inline CorrespondenceReport eigen_correspondence(const Linearization &lin, const EllipticTriple &et,
                                                 const OperatorFunction &tau, double lo, double hi,
                                                 const std::vector<double> &roots, double tol = 1e-6)
{
  CorrespondenceReport rep;
  rep.tol = tol;
  rep.roots = roots;
  const EigenPairs ep = eigenpairs(lin);
  const Mat Ec = et.E().cast<cplx>();
  const Mat LBI = et.disc().L_BI().cast<cplx>();
  const Mat TD = et.TD().cast<cplx>();
  std::vector<double> eig_in;
  for (Eigen::Index j = 0; j < ep.values.size(); ++j)
  {
    const cplx l = ep.values(j);
    if (l.real() < lo || l.real() > hi || std::abs(l.imag()) > 1e-6 * std::max(1.0, std::abs(l)))
    {
      continue;
    }
    EigenCheck c;
    c.lambda = l;
    const Vec s = ep.vectors.col(j);
    const Vec f = s.head(lin.n_I);
    const Vec y = lin.trace * s;
    c.f_fraction = f.norm() / s.norm();
    const Vec fD = f - Ec * y;
    const Vec img = TD * fD + et.eta() * (Ec * y);
    const double ps = img.norm() + std::abs(l) * f.norm();
    c.pde_residual = (img - l * f).norm() / (ps == 0.0 ? 1.0 : ps);
    try
    {
      const Vec a = eval(tau, l) * y;
      const Vec b = et.w() * (LBI * fD);
      const double bs = a.norm() + b.norm();
      c.bc_residual = (a - b).norm() / (bs == 0.0 ? 1.0 : bs);
    }
    catch (const Error &)
    {
      c.bc_residual = std::numeric_limits<double>::infinity();
    }
    c.root_distance = std::numeric_limits<double>::infinity();
    for (double r : roots)
    {
      c.root_distance = std::min(c.root_distance, std::abs(l - r));
    }
    c.ok = c.f_fraction > 1e-8 && c.pde_residual <= tol && c.bc_residual <= tol && c.root_distance <= tol;
    rep.eigen.push_back(c);
    eig_in.push_back(l.real());
  }
  for (double r : roots)
  {
    double d = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < ep.values.size(); ++j)
    {
      d = std::min(d, std::abs(ep.values(j) - r));
    }
    rep.root_distance.push_back(d);
  }
  return rep;
}

}  // namespace nlbvp
