// Copyright the nlbvp authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <vector>

#include "nlbvp/boundary_triple.hpp"
#include "nlbvp/opfunc.hpp"

namespace nlbvp
{

/// Triple with state H, T = A0 (+) {gamma(mu) x, mu gamma(mu) x},
/// Gamma0 = x, Gamma1 = gamma(mu)+ (f0' - conj(mu) f0) + tau(mu) x.
inline BoundaryTriple realize_strict(const RepresentationForm &rf, std::optional<cplx> mu_opt = std::nullopt)
{
  const cplx mu = mu_opt.value_or(rf.lambda0);
  const Eigen::Index n = rf.n(), g = rf.g();
  if (linalg::rank(rf.gamma) < g)
  {
    fail(ErrorKind::NotStrict, "gamma is not injective");
  }
  Mat gm;
  try
  {
    gm = rf.gamma_at(mu);
  }
  catch (const Error &)
  {
    fail(ErrorKind::SpectrumPoint, "anchor point lies in the spectrum of A0");
  }
  const Mat tm = rf.eval(mu);
  const Mat &B = rf.A0.basis();
  const Eigen::Index q = B.cols();
  const Mat F0 = B.topRows(n), F0p = B.bottomRows(n);

  Mat P(2 * n, q + g);
  P.topLeftCorner(n, q) = F0;
  P.bottomLeftCorner(n, q) = F0p;
  P.topRightCorner(n, g) = gm;
  P.bottomRightCorner(n, g) = mu * gm;

  Mat G0 = Mat::Zero(g, q + g);
  G0.rightCols(g).setIdentity();
  Mat G1(g, q + g);
  G1.leftCols(q) = rf.H().plus(gm) * (F0p - std::conj(mu) * F0);
  G1.rightCols(g) = tm;
  return BoundaryTriple(rf.H(), P, G0, G1);
}

/// B0 = [[theta, I], [0, conj theta]] with g x g blocks.
inline Mat constant_b0(Eigen::Index g, cplx theta)
{
  Mat B = Mat::Zero(2 * g, 2 * g);
  B.topLeftCorner(g, g) = theta * Mat::Identity(g, g);
  B.topRightCorner(g, g).setIdentity();
  B.bottomRightCorner(g, g) = std::conj(theta) * Mat::Identity(g, g);
  return B;
}

inline KreinSpace constant_space(Eigen::Index g)
{
  Mat J = Mat::Zero(2 * g, 2 * g);
  J.topRightCorner(g, g).setIdentity();
  J.bottomLeftCorner(g, g).setIdentity();
  return KreinSpace(J, J);
}

/// Triple over (C^{2g}, J) with Weyl function identically Theta and sigma(B0) = {theta, conj theta}.
/// lambda0 and mu default to Re theta.
inline BoundaryTriple realize_constant(const Mat &Theta, cplx theta, std::optional<cplx> lambda0_opt = std::nullopt,
                                       std::optional<cplx> mu_opt = std::nullopt)
{
  if (theta.imag() == 0.0)
  {
    fail(ErrorKind::RealTheta, "theta must be nonreal");
  }
  ConstantFunction check(Theta);
  const Eigen::Index g = Theta.rows();
  const cplx l0 = lambda0_opt.value_or(cplx(theta.real(), 0.0));
  const cplx mu = mu_opt.value_or(l0);
  require(l0 != theta && l0 != std::conj(theta) && mu != theta && mu != std::conj(theta),
          ErrorKind::SpectrumPoint, "anchors must avoid theta and its conjugate");
  const KreinSpace K = constant_space(g);
  const Mat B0 = constant_b0(g, theta);
  const cplx c = (theta - l0) / (theta - mu);

  Mat gm = Mat::Zero(2 * g, g);
  gm.topRows(g) = c * Mat::Identity(g, g);

  Mat P(4 * g, 3 * g);
  P.topLeftCorner(2 * g, 2 * g).setIdentity();
  P.bottomLeftCorner(2 * g, 2 * g) = B0;
  P.topRightCorner(2 * g, g) = gm;
  P.bottomRightCorner(2 * g, g) = mu * gm;

  Mat G0 = Mat::Zero(g, 3 * g);
  G0.rightCols(g).setIdentity();
  Mat G1(g, 3 * g);
  G1.leftCols(2 * g) = K.plus(gm) * (B0 - std::conj(mu) * Mat::Identity(2 * g, 2 * g));
  G1.rightCols(g) = Theta;
  return BoundaryTriple(K, P, G0, G1);
}

/// Coupled triple over the product state with Gamma1 cross terms
/// [[G1', off_up G0_hat], [off_low G0', G1_hat]].
inline BoundaryTriple couple(const BoundaryTriple &ts, const BoundaryTriple &tc, const Mat &off_up,
                             const Mat &off_low, double tol = 1e-8)
{
  const Eigen::Index gs = ts.g(), gc = tc.g();
  if (gc == 0)
  {
    return ts;
  }
  if (gs == 0)
  {
    return tc;
  }
  require(off_up.rows() == gs && off_up.cols() == gc && off_low.rows() == gc && off_low.cols() == gs,
          ErrorKind::DimensionMismatch, "coupling blocks do not match the boundary dimensions");
  const double scale = std::max(1.0, off_up.norm());
  if ((off_low - off_up.adjoint()).norm() > tol * scale)
  {
    fail(ErrorKind::NonAdjointBlocks, "coupling blocks are not mutually adjoint");
  }
  const Eigen::Index ns = ts.n(), nc = tc.n(), ps = ts.p(), pc = tc.p();
  KreinSpace K(linalg::block_diag(ts.state().gram(), tc.state().gram()),
               linalg::block_diag(ts.state().J(), tc.state().J()));

  Mat P = Mat::Zero(2 * (ns + nc), ps + pc);
  P.block(0, 0, ns, ps) = ts.F();
  P.block(ns, ps, nc, pc) = tc.F();
  P.block(ns + nc, 0, ns, ps) = ts.Fp();
  P.block(2 * ns + nc, ps, nc, pc) = tc.Fp();

  Mat G0 = linalg::block_diag(ts.G0(), tc.G0());
  Mat G1(gs + gc, ps + pc);
  G1.topLeftCorner(gs, ps) = ts.G1();
  G1.topRightCorner(gs, pc) = off_up * tc.G0();
  G1.bottomLeftCorner(gc, ps) = off_low * ts.G0();
  G1.bottomRightCorner(gc, pc) = tc.G1();
  return BoundaryTriple(K, P, G0, G1, linalg::block_diag(ts.boundary_gram(), tc.boundary_gram()));
}

/// Boundary coordinate change Gamma -> U Gamma (U unitary); the Weyl function becomes U M U*.
inline BoundaryTriple rotate_boundary(const BoundaryTriple &bt, const Mat &U)
{
  return BoundaryTriple(bt.state(), bt.param(), U * bt.G0(), U * bt.G1(), U * bt.boundary_gram() * U.adjoint());
}

/// State space (C^g)^m, coordinates (k_1..k_m, k_1'):
/// k' = (k_1', b_i^{1/2} b_1^{-1/2} k_1 + a_i k_i), Gamma0 = b_1^{-1/2} k_1,
/// Gamma1 = a_1 b_1^{-1/2} k_1 + b_1^{1/2} k_1' - sum b_i^{1/2} k_i.
inline BoundaryTriple realize_rational(const RationalNevanlinna &tau)
{
  if (!tau.beta1_definite())
  {
    fail(ErrorKind::BetaOneSingular, "beta_1 must be positive definite");
  }
  const Eigen::Index g = tau.g();
  const Eigen::Index m = static_cast<Eigen::Index>(tau.m());
  const Eigen::Index n = m * g;
  const Mat b1h = tau.beta_half(0);
  const Mat b1ih = linalg::pd_inv_sqrt(tau.beta()[0]);

  Mat P = Mat::Zero(2 * n, n + g);
  P.topLeftCorner(n, n).setIdentity();
  P.block(n, n, g, g).setIdentity();
  for (Eigen::Index i = 1; i < m; ++i)
  {
    const auto ii = static_cast<std::size_t>(i);
    P.block(n + i * g, 0, g, g) = tau.beta_half(ii) * b1ih;
    P.block(n + i * g, i * g, g, g) = tau.alpha()[ii];
  }
  Mat G0 = Mat::Zero(g, n + g);
  G0.leftCols(g) = b1ih;
  Mat G1 = Mat::Zero(g, n + g);
  G1.leftCols(g) = tau.alpha()[0] * b1ih;
  for (Eigen::Index i = 1; i < m; ++i)
  {
    G1.middleCols(i * g, g) = -tau.beta_half(static_cast<std::size_t>(i));
  }
  G1.rightCols(g) = b1h;
  return BoundaryTriple(KreinSpace::hilbert(n), P, G0, G1);
}

/// Representation data of a triple's Weyl function at l0 (Euclidean boundary Gram).
inline RepresentationForm representation_of(const BoundaryTriple &bt, cplx l0)
{
  require((bt.boundary_gram() - Mat::Identity(bt.g(), bt.g())).norm() <= 1e-12, ErrorKind::InvalidArgument,
          "boundary Gram must be Euclidean");
  WeylData w = weyl_data(bt, l0);
  return RepresentationForm(bt.A0(), w.gamma, l0, linalg::hermitian_part(w.M));
}

struct RealizeOptions
{
  std::optional<cplx> mu0;       // decomposition anchor; default first sample
  std::optional<cplx> theta;     // constant-block eigenvalue; default i (2 + max window modulus)
  std::vector<cplx> samples;     // strictness samples; default 2g + 3 seeded points
  std::uint64_t seed = 0;
  Window window;
};

struct Realization
{
  BoundaryTriple triple;
  Eigen::Index ghat_dim = 0;
  std::string path;  // "strict", "coupled", "constant", "rational"
  cplx theta{0.0, 0.0};
  std::optional<double> gamma_mismatch;
};

inline Realization realize(const OperatorFunction &tau, const RealizeOptions &opt = {})
{
  const Eigen::Index g = dim(tau);
  const cplx theta = opt.theta.value_or(cplx(0.0, 2.0 + opt.window.max_modulus()));
  Realization out;
  out.theta = theta;
  if (const auto *r = std::get_if<RationalNevanlinna>(&tau))
  {
    out.triple = realize_rational(*r);
    out.path = "rational";
    return out;
  }
  if (const auto *c = std::get_if<ConstantFunction>(&tau))
  {
    out.triple = realize_constant(c->theta, theta);
    out.ghat_dim = g;
    out.path = "constant";
    return out;
  }
  const auto &rf = std::get<RepresentationForm>(tau);
  const std::vector<cplx> samples = opt.samples.empty() ? strict_samples(g, opt.seed, opt.window) : opt.samples;
  StrictKernel sk = strict_kernel(tau, samples);
  out.ghat_dim = sk.space.dim();
  out.gamma_mismatch = sk.gamma_mismatch;
  if (sk.space.dim() == 0)
  {
    out.triple = realize_strict(rf);
    out.path = "strict";
    return out;
  }
  const cplx mu0 = opt.mu0.value_or(samples.front());
  Decomposition d = decompose(tau, sk.space, mu0);
  BoundaryTriple tc = realize_constant(d.constant, theta);
  if (d.g_strict() == 0)
  {
    out.triple = rotate_boundary(tc, d.U);
    out.path = "constant";
    return out;
  }
  RepresentationForm strict(rf.A0, rf.gamma * d.Qp, rf.lambda0,
                            linalg::hermitian_part(d.Qp.adjoint() * rf.C * d.Qp));
  BoundaryTriple ts = realize_strict(strict);
  // The blocks agree up to the kernel tolerance; use the exact adjoint pair.
  if ((d.off_low - d.off_up.adjoint()).norm() > 1e-8 * std::max(1.0, d.off_up.norm()))
  {
    fail(ErrorKind::NonAdjointBlocks, "decomposition blocks are not mutually adjoint");
  }
  BoundaryTriple tk = couple(ts, tc, d.off_up, d.off_up.adjoint());
  out.triple = rotate_boundary(tk, d.U);
  out.path = "coupled";
  return out;
}

}  // namespace nlbvp
