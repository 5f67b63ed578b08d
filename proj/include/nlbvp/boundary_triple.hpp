// Copyright the nlbvp authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "nlbvp/krein.hpp"

namespace nlbvp
{

struct WeylData
{
  cplx lambda;
  Mat gamma;  // n x g
  Mat M;      // g x g
};

/// Boundary triple over a relation T = ran P, with boundary maps acting on
/// T-coordinates:  f_hat = P c,  Gamma0 f_hat = G0 c,  Gamma1 f_hat = G1 c.
class BoundaryTriple
{
public:
  BoundaryTriple() = default;

  BoundaryTriple(KreinSpace state, Mat param, Mat G0, Mat G1, Mat boundary_gram = Mat())
    : state_(std::move(state)), P_(std::move(param)), G0_(std::move(G0)), G1_(std::move(G1))
  {
    const Eigen::Index n = state_.dim();
    require(P_.rows() == 2 * n, ErrorKind::DimensionMismatch, "parameter basis must have 2n rows");
    require(G0_.cols() == P_.cols() && G1_.cols() == P_.cols(), ErrorKind::DimensionMismatch,
            "boundary maps must act on T-coordinates");
    require(G0_.rows() == G1_.rows(), ErrorKind::DimensionMismatch, "Gamma0 and Gamma1 differ in height");
    const Eigen::Index g = G0_.rows();
    Gb_ = boundary_gram.size() ? std::move(boundary_gram) : Mat(Mat::Identity(g, g));
    require(Gb_.rows() == g && Gb_.cols() == g, ErrorKind::DimensionMismatch, "boundary Gram has wrong size");
    require(linalg::rank(P_) == P_.cols(), ErrorKind::InvalidArgument,
            "parameter basis is not of full column rank");
  }

  const KreinSpace &state() const { return state_; }
  Eigen::Index n() const { return state_.dim(); }
  Eigen::Index g() const { return G0_.rows(); }
  Eigen::Index p() const { return P_.cols(); }
  const Mat &param() const { return P_; }
  auto F() const { return P_.topRows(n()); }
  auto Fp() const { return P_.bottomRows(n()); }
  const Mat &G0() const { return G0_; }
  const Mat &G1() const { return G1_; }
  const Mat &boundary_gram() const { return Gb_; }

  LinearRelation T() const { return LinearRelation(state_, P_); }

  /// T-coordinates of A0 = ker Gamma0.
  Mat a0_coords() const { return linalg::null_basis(G0_); }
  LinearRelation A0() const { return LinearRelation(state_, P_ * a0_coords()); }
  /// A = ker Gamma.
  LinearRelation A() const
  {
    Mat S(2 * g(), p());
    S << G0_, G1_;
    Mat N = linalg::null_basis(S);
    return LinearRelation(state_, N.cols() ? Mat(P_ * N) : Mat(2 * n(), 0));
  }

  /// (A0 - lambda)^{-1}.
  Mat a0_resolvent(cplx lambda) const
  {
    Mat K = a0_coords();
    Mat B = P_ * K;
    return resolvent_from_basis(B.topRows(n()), B.bottomRows(n()), lambda);
  }

  /// Boundary adjoint of X : H -> G, i.e. X+ = Gb^{-1} X* G.
  Mat gplus(const Mat &X) const { return Gb_.partialPivLu().solve(X.adjoint() * state_.gram()); }

  /// T-coordinates of {(A0-lambda)^{-1} h, (I + lambda (A0-lambda)^{-1}) h} for h in columns.
  Mat coords_of(const Mat &pairs) const
  {
    return P_.colPivHouseholderQr().solve(pairs);
  }

  /// Relative residual of the Green identity over the full basis of T.
  double green_residual() const
  {
    const Mat &G = state_.gram();
    Mat F = this->F(), Fp = this->Fp();
    Mat a = F.adjoint() * G * Fp;
    Mat b = Fp.adjoint() * G * F;
    Mat c = G0_.adjoint() * Gb_ * G1_;
    Mat d = G1_.adjoint() * Gb_ * G0_;
    double scale = a.norm() + b.norm() + c.norm() + d.norm();
    double r = (a - b - c + d).norm();
    return scale == 0.0 ? r : r / scale;
  }

private:
  KreinSpace state_;
  Mat P_, G0_, G1_, Gb_;
};

/// T-coordinates of the defect subspace {f, lambda f} in T.
inline Mat defect_coords(const BoundaryTriple &bt, cplx lambda)
{
  return linalg::null_basis(Mat(bt.Fp() - lambda * bt.F()));
}

inline Subspace defect_subspace(const BoundaryTriple &bt, cplx lambda)
{
  Mat N = defect_coords(bt, lambda);
  if (N.cols() == 0)
  {
    return Subspace(bt.n(), Mat(bt.n(), 0));
  }
  return column_space(bt.F() * N);
}

/// gamma(lambda) and M(lambda) through the g x g trace system on the defect space.
inline WeylData weyl_data(const BoundaryTriple &bt, cplx lambda)
{
  (void)bt.a0_resolvent(lambda);  // lambda must lie in rho(A0)
  Mat N = defect_coords(bt, lambda);
  const Eigen::Index g = bt.g();
  if (N.cols() != g)
  {
    fail(ErrorKind::NonInvertibleTrace, "defect space has dimension " + std::to_string(N.cols()) +
                                            " instead of " + std::to_string(g));
  }
  Mat T0 = bt.G0() * N;
  if (g && linalg::condition(T0) > kResolventCond)
  {
    fail(ErrorKind::NonInvertibleTrace, "Gamma0 is not invertible on the defect space");
  }
  // X = N (Gamma0 N)^{-1}:  X T0 = N
  Mat X = g ? Mat(T0.transpose().partialPivLu().solve(N.transpose()).transpose()) : Mat(bt.p(), 0);
  return {lambda, bt.F() * X, bt.G1() * X};
}

inline Mat gamma_field(const BoundaryTriple &bt, cplx lambda) { return weyl_data(bt, lambda).gamma; }
inline Mat weyl(const BoundaryTriple &bt, cplx lambda) { return weyl_data(bt, lambda).M; }

inline bool is_ordinary(const BoundaryTriple &bt)
{
  Mat S(2 * bt.g(), bt.p());
  S << bt.G0(), bt.G1();
  return linalg::rank(S) == 2 * bt.g();
}

/// Maximal relative residuals of the identities relating gamma, M and (A0-lambda)^{-1}.
struct Prop24Report
{
  double id1 = 0.0;     // gamma(l) = (I + (l-m)(A0-l)^{-1}) gamma(m)
  double gambar = 0.0;  // gamma(conj l)+ h = Gamma1 {(A0-l)^{-1} h, (I + l (A0-l)^{-1}) h}
  double id2 = 0.0;     // M(l) - M(m)* = (l - conj m) gamma(m)+ gamma(l)
  double rep = 0.0;     // M(l) = Re M(l0) + gamma(l0)+ (...) gamma(l0)
  double max() const { return std::max(std::max(id1, gambar), std::max(id2, rep)); }
};

inline double rel_res(const Mat &diff, double scale)
{
  const double d = diff.norm();
  return scale == 0.0 ? d : d / scale;
}

/// Checks the identities at each sample; the partner of sample i is sample i+1
/// (cyclically) and the representation anchor is the first sample.
inline Prop24Report verify_prop24(const BoundaryTriple &bt, const std::vector<cplx> &samples)
{
  Prop24Report rep;
  if (samples.empty())
  {
    return rep;
  }
  const Eigen::Index n = bt.n();
  const Eigen::Index g = bt.g();
  const Mat I = Mat::Identity(n, n);
  const cplx l0 = samples.front();
  const WeylData w0 = weyl_data(bt, l0);
  const Mat M0re = linalg::hermitian_part(w0.M);
  const Mat g0p = bt.gplus(w0.gamma);

  for (std::size_t i = 0; i < samples.size(); ++i)
  {
    const cplx l = samples[i];
    const cplx m = samples[(i + 1) % samples.size()];
    const WeylData wl = weyl_data(bt, l);
    const WeylData wm = weyl_data(bt, m);
    const Mat Rl = bt.a0_resolvent(l);

    Mat t = (l - m) * (Rl * wm.gamma);
    rep.id1 = std::max(rep.id1, rel_res(wl.gamma - wm.gamma - t, wl.gamma.norm() + wm.gamma.norm() + t.norm()));

    const WeylData wb = weyl_data(bt, std::conj(l));
    Mat lhs = bt.gplus(wb.gamma);
    Mat pairs(2 * n, n);
    pairs << Rl, I + l * Rl;
    Mat rhs = bt.G1() * bt.coords_of(pairs);
    rep.gambar = std::max(rep.gambar, rel_res(lhs - rhs, lhs.norm() + rhs.norm()));

    Mat q = (l - std::conj(m)) * (bt.gplus(wm.gamma) * wl.gamma);
    rep.id2 = std::max(rep.id2, rel_res(wl.M - wm.M.adjoint() - q, wl.M.norm() + wm.M.norm() + q.norm()));

    Mat inner = (l - l0.real()) * I + (l - l0) * (l - std::conj(l0)) * Rl;
    Mat r = g0p * inner * w0.gamma;
    rep.rep = std::max(rep.rep, rel_res(wl.M - M0re - r, wl.M.norm() + M0re.norm() + r.norm()));
  }
  (void)g;
  return rep;
}

/// Structural checks shared by all constructed triples.
struct TripleReport
{
  double green = 0.0;
  double a0_selfadjoint = 0.0;
  double a_symmetric = 0.0;
  bool ordinary = false;
  bool direct_sum = false;  // dim T = dim A0 + g
};

inline TripleReport check_triple(const BoundaryTriple &bt)
{
  TripleReport r;
  r.green = bt.green_residual();
  LinearRelation A0 = bt.A0();
  r.a0_selfadjoint = is_selfadjoint(A0).residual;
  r.a_symmetric = is_symmetric(bt.A()).residual;
  r.ordinary = is_ordinary(bt);
  r.direct_sum = bt.p() == A0.dim() + bt.g();
  return r;
}

}  // namespace nlbvp
