// Copyright the nlbvp authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "nlbvp/krein.hpp"
#include "nlbvp/random.hpp"

namespace nlbvp
{

/// tau(lambda) = Theta.
struct ConstantFunction
{
  Mat theta;

  explicit ConstantFunction(Mat t) : theta(std::move(t))
  {
    require(theta.rows() == theta.cols(), ErrorKind::DimensionMismatch, "Theta must be square");
    require(linalg::hermitian_residual(theta) <= 1e-12, ErrorKind::InvalidArgument, "Theta must be Hermitian");
  }

  Eigen::Index g() const { return theta.rows(); }
  Mat eval(cplx) const { return theta; }
};

/// tau(l) = a_1 + l b_1 + sum_{i>=2} b_i^{1/2} (a_i - l)^{-1} b_i^{1/2}.
class RationalNevanlinna
{
public:
  RationalNevanlinna(std::vector<Mat> alpha, std::vector<Mat> beta)
    : alpha_(std::move(alpha)), beta_(std::move(beta))
  {
    require(!alpha_.empty() && alpha_.size() == beta_.size(), ErrorKind::DimensionMismatch,
            "alpha and beta must be non-empty lists of equal length");
    const Eigen::Index g = alpha_[0].rows();
    for (std::size_t i = 0; i < alpha_.size(); ++i)
    {
      require(alpha_[i].rows() == g && alpha_[i].cols() == g && beta_[i].rows() == g && beta_[i].cols() == g,
              ErrorKind::DimensionMismatch, "all coefficients must be g x g");
      require(linalg::hermitian_residual(alpha_[i]) <= 1e-12, ErrorKind::InvalidArgument,
              "alpha_" + std::to_string(i + 1) + " is not Hermitian");
      require(linalg::hermitian_residual(beta_[i]) <= 1e-12, ErrorKind::InvalidArgument,
              "beta_" + std::to_string(i + 1) + " is not Hermitian");
      RVec ev = linalg::hermitian_eigenvalues(beta_[i]);
      const double scale = ev.size() ? ev.cwiseAbs().maxCoeff() : 0.0;
      require(ev.size() == 0 || ev.minCoeff() >= -1e-12 * scale, ErrorKind::InvalidArgument,
              "beta_" + std::to_string(i + 1) + " is not positive semidefinite");
      half_.push_back(linalg::psd_sqrt(beta_[i]));
    }
  }

  Eigen::Index g() const { return alpha_[0].rows(); }
  std::size_t m() const { return alpha_.size(); }
  const std::vector<Mat> &alpha() const { return alpha_; }
  const std::vector<Mat> &beta() const { return beta_; }
  /// beta_i^{1/2}, zero-based.
  const Mat &beta_half(std::size_t i) const { return half_[i]; }

  bool beta1_definite() const
  {
    RVec ev = linalg::hermitian_eigenvalues(beta_[0]);
    return ev.size() == 0 || ev.minCoeff() > 1e-12 * ev.cwiseAbs().maxCoeff();
  }

  /// Union of the spectra of alpha_2 ... alpha_m.
  std::vector<double> poles() const
  {
    std::vector<double> out;
    for (std::size_t i = 1; i < m(); ++i)
    {
      RVec ev = linalg::hermitian_eigenvalues(alpha_[i]);
      out.insert(out.end(), ev.data(), ev.data() + ev.size());
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  Mat eval(cplx l) const
  {
    const Eigen::Index n = g();
    Mat t = alpha_[0] + l * beta_[0];
    for (std::size_t i = 1; i < m(); ++i)
    {
      Mat D = alpha_[i] - l * Mat::Identity(n, n);
      if (linalg::condition(D) > kResolventCond)
      {
        fail(ErrorKind::PoleOrSpectrum, "lambda is a pole of the rational function");
      }
      t += half_[i] * D.partialPivLu().solve(half_[i]);
    }
    return t;
  }

private:
  std::vector<Mat> alpha_, beta_, half_;
};

/// tau(l) = C + gamma+ ((l - Re l0) + (l - l0)(l - conj l0)(A0 - l)^{-1}) gamma.
struct RepresentationForm
{
  LinearRelation A0;
  Mat gamma;  // n x g
  cplx lambda0;
  Mat C;      // g x g Hermitian

  RepresentationForm(LinearRelation a0, Mat gam, cplx l0, Mat c)
    : A0(std::move(a0)), gamma(std::move(gam)), lambda0(l0), C(std::move(c))
  {
    require(gamma.rows() == A0.n(), ErrorKind::DimensionMismatch, "gamma must map into the state space");
    require(C.rows() == gamma.cols() && C.cols() == gamma.cols(), ErrorKind::DimensionMismatch,
            "C must be g x g");
    require(linalg::hermitian_residual(C) <= 1e-12, ErrorKind::InvalidArgument, "C must be Hermitian");
    (void)resolvent(A0, lambda0);
  }

  const KreinSpace &H() const { return A0.space(); }
  Eigen::Index g() const { return gamma.cols(); }
  Eigen::Index n() const { return gamma.rows(); }

  Mat a0_resolvent(cplx l) const
  {
    try
    {
      return resolvent(A0, l);
    }
    catch (const Error &e)
    {
      if (e.kind() == ErrorKind::SpectrumPoint)
      {
        fail(ErrorKind::PoleOrSpectrum, "lambda lies in the spectrum of A0");
      }
      throw;
    }
  }

  /// gamma(l) = (I + (l - l0)(A0 - l)^{-1}) gamma
  Mat gamma_at(cplx l) const
  {
    return gamma + (l - lambda0) * (a0_resolvent(l) * gamma);
  }

  Mat eval(cplx l) const
  {
    Mat R = a0_resolvent(l);
    Mat inner = (l - lambda0.real()) * gamma + (l - lambda0) * (l - std::conj(lambda0)) * (R * gamma);
    return C + H().plus(gamma) * inner;
  }
};

using OperatorFunction = std::variant<ConstantFunction, RationalNevanlinna, RepresentationForm>;

inline Mat eval(const OperatorFunction &tau, cplx l)
{
  return std::visit([&](const auto &f) { return f.eval(l); }, tau);
}

inline Eigen::Index dim(const OperatorFunction &tau)
{
  return std::visit([](const auto &f) { return f.g(); }, tau);
}

/// Default sampling for the strictness analysis: 2g + 3 seeded points.
inline std::vector<cplx> strict_samples(Eigen::Index g, std::uint64_t seed, const Window &w = {})
{
  return sample_points(static_cast<std::size_t>(2 * g + 3), seed, w);
}

struct StrictKernel
{
  Subspace space;
  /// For representation forms: distance between the computed space and ker gamma.
  std::optional<double> gamma_mismatch;
};

/// Common kernel of (tau(l_i) - tau(mu0)*)/(l_i - conj mu0), mu0 = samples[0].
inline StrictKernel strict_kernel(const OperatorFunction &tau, const std::vector<cplx> &samples,
                                  double atol = 1e-9)
{
  if (samples.size() < 2)
  {
    fail(ErrorKind::InsufficientSamples, "at least two samples are required");
  }
  const Eigen::Index g = dim(tau);
  const cplx mu0 = samples[0];
  const Mat t0 = eval(tau, mu0);
  const double n0 = t0.norm();
  std::vector<Mat> blocks;
  for (std::size_t i = 1; i < samples.size(); ++i)
  {
    const cplx d = samples[i] - std::conj(mu0);
    if (std::abs(d) < 1e-12)
    {
      continue;
    }
    const Mat ti = eval(tau, samples[i]);
    const double s = (ti.norm() + n0) / std::abs(d);
    if (s == 0.0)
    {
      continue;
    }
    blocks.push_back((ti - t0.adjoint()) / (d * s));
  }
  if (blocks.empty())
  {
    fail(ErrorKind::InsufficientSamples, "no usable sample pairs");
  }
  Mat S(static_cast<Eigen::Index>(blocks.size()) * g, g);
  for (std::size_t i = 0; i < blocks.size(); ++i)
  {
    S.middleRows(static_cast<Eigen::Index>(i) * g, g) = blocks[i];
  }
  StrictKernel out{Subspace(g, linalg::null_basis_abs(S, atol)), std::nullopt};
  if (const auto *rf = std::get_if<RepresentationForm>(&tau))
  {
    Subspace kg(g, linalg::null_basis(rf->gamma));
    out.gamma_mismatch = out.space.distance(kg);
  }
  return out;
}

/// Block form of tau with respect to G = G' (+) G_hat.
struct Decomposition
{
  cplx mu0;
  Mat U;          // [Q' Q_hat], unitary
  Mat Qp, Qh;     // orthonormal bases of G' and G_hat
  Mat off_up;     // pi' tau(mu0) iota_hat
  Mat off_low;    // pi_hat tau(mu0) iota'
  Mat constant;   // pi_hat tau(mu0) iota_hat (Hermitian)

  Eigen::Index g_strict() const { return Qp.cols(); }
  Eigen::Index g_const() const { return Qh.cols(); }

  Mat strict_part(const OperatorFunction &tau, cplx l) const { return Qp.adjoint() * eval(tau, l) * Qp; }

  Mat reassemble(const OperatorFunction &tau, cplx l) const
  {
    const Eigen::Index a = g_strict(), b = g_const();
    Mat B(a + b, a + b);
    B.topLeftCorner(a, a) = strict_part(tau, l);
    B.topRightCorner(a, b) = off_up;
    B.bottomLeftCorner(b, a) = off_low;
    B.bottomRightCorner(b, b) = constant;
    return U * B * U.adjoint();
  }
};

inline Decomposition decompose(const OperatorFunction &tau, const Subspace &ghat, cplx mu0)
{
  const Eigen::Index g = dim(tau);
  require(ghat.ambient() == g, ErrorKind::DimensionMismatch, "kernel space has wrong ambient dimension");
  Decomposition d;
  d.mu0 = mu0;
  d.Qh = ghat.basis();
  d.Qp = linalg::orthogonal_complement(d.Qh, g);
  d.U.resize(g, g);
  d.U << d.Qp, d.Qh;
  const Mat t0 = eval(tau, mu0);
  d.off_up = d.Qp.adjoint() * t0 * d.Qh;
  d.off_low = d.Qh.adjoint() * t0 * d.Qp;
  d.constant = linalg::hermitian_part(d.Qh.adjoint() * t0 * d.Qh);
  return d;
}

struct MinimalityReport
{
  bool minimal = false;
  Eigen::Index reached = 0;
  Eigen::Index n = 0;
};

/// Dimension of span{(I + (l - l0)(A0 - l)^{-1}) gamma x} over the samples.
inline MinimalityReport check_minimality(const RepresentationForm &rf, const std::vector<cplx> &samples)
{
  const Eigen::Index n = rf.n(), g = rf.g();
  Mat S(n, g * static_cast<Eigen::Index>(samples.size() + 1));
  S.leftCols(g) = rf.gamma;
  for (std::size_t i = 0; i < samples.size(); ++i)
  {
    S.middleCols(g * static_cast<Eigen::Index>(i + 1), g) = rf.gamma_at(samples[i]);
  }
  MinimalityReport r;
  r.n = n;
  r.reached = n ? linalg::rank(S, 1e-9) : 0;
  r.minimal = r.reached == n;
  return r;
}

/// Number of negative eigenvalues of the Gram of sum_{i,j} (K(l_i, l_j) x_i, x_j),
/// K(l, m) = (tau(l) - tau(m)*)/(l - conj m).
inline int negative_squares(const OperatorFunction &tau, const std::vector<cplx> &points, double rtol = 1e-10)
{
  const Eigen::Index g = dim(tau);
  const Eigen::Index N = static_cast<Eigen::Index>(points.size());
  if (N == 0)
  {
    return 0;
  }
  std::vector<Mat> t;
  for (cplx l : points)
  {
    t.push_back(eval(tau, l));
  }
  Mat B(N * g, N * g);
  for (Eigen::Index i = 0; i < N; ++i)
  {
    for (Eigen::Index j = 0; j < N; ++j)
    {
      B.block(j * g, i * g, g, g) =
          (t[i] - t[j].adjoint()) / (points[i] - std::conj(points[j]));
    }
  }
  RVec ev = linalg::hermitian_eigenvalues(B);
  const double thr = -rtol * ev.cwiseAbs().maxCoeff();
  int count = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
  {
    count += ev(i) < thr;
  }
  return count;
}

}  // namespace nlbvp
