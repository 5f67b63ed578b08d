// Copyright the nlbvp authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace nlbvp
{

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

using namespace std::complex_literals;

/// Default relative rank tolerance (fraction of the largest singular value).
inline constexpr double kRankRtol = 1e-10;
/// Condition number above which a shifted operator is treated as singular.
inline constexpr double kResolventCond = 1e12;

enum class ErrorKind
{
  SpectrumPoint,
  NonInvertibleTrace,
  PoleOrSpectrum,
  InsufficientSamples,
  NotStrict,
  RealTheta,
  DimensionMismatch,
  NonAdjointBlocks,
  BetaOneSingular,
  NonPositiveCoefficient,
  RankDeficientCoupling,
  SingularSystem,
  OutsideU,
  CouplingRankDeficient,
  InvalidArgument,
  ConfigError,
  IOError,
};

inline const char *to_string(ErrorKind kind)
{
  switch (kind)
  {
    case ErrorKind::SpectrumPoint: return "SpectrumPoint";
    case ErrorKind::NonInvertibleTrace: return "NonInvertibleTrace";
    case ErrorKind::PoleOrSpectrum: return "PoleOrSpectrum";
    case ErrorKind::InsufficientSamples: return "InsufficientSamples";
    case ErrorKind::NotStrict: return "NotStrict";
    case ErrorKind::RealTheta: return "RealTheta";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonAdjointBlocks: return "NonAdjointBlocks";
    case ErrorKind::BetaOneSingular: return "BetaOneSingular";
    case ErrorKind::NonPositiveCoefficient: return "NonPositiveCoefficient";
    case ErrorKind::RankDeficientCoupling: return "RankDeficientCoupling";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::OutsideU: return "OutsideU";
    case ErrorKind::CouplingRankDeficient: return "CouplingRankDeficient";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IOError: return "IOError";
  }
  return "Unknown";
}

class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, const std::string &what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
  {
  }
  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string &what)
{
  throw Error(kind, what);
}

inline void require(bool cond, ErrorKind kind, const std::string &what)
{
  if (!cond)
  {
    fail(kind, what);
  }
}

/// Outcome of a numerical predicate together with the residual that decided it.
struct Check
{
  bool holds = false;
  double residual = 0.0;
  explicit operator bool() const noexcept { return holds; }
};

namespace linalg
{

inline Eigen::BDCSVD<Mat> svd(const Mat &M, bool full)
{
  unsigned opts = full ? (Eigen::ComputeFullU | Eigen::ComputeFullV)
                       : (Eigen::ComputeThinU | Eigen::ComputeThinV);
  return Eigen::BDCSVD<Mat>(M, opts);
}

inline double max_singular(const Eigen::BDCSVD<Mat> &s)
{
  return s.singularValues().size() ? s.singularValues()(0) : 0.0;
}

inline Eigen::Index rank_of(const Eigen::BDCSVD<Mat> &s, double rtol)
{
  const auto &sv = s.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0)
  {
    return 0;
  }
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > rtol * sv(0))
  {
    ++r;
  }
  return r;
}

inline Eigen::Index rank(const Mat &M, double rtol = kRankRtol)
{
  if (M.size() == 0)
  {
    return 0;
  }
  return rank_of(svd(M, false), rtol);
}

/// Orthonormal basis of range(M), directions below rtol*sigma_max dropped.
inline Mat range_basis(const Mat &M, double rtol = kRankRtol)
{
  if (M.size() == 0)
  {
    return Mat(M.rows(), 0);
  }
  auto s = svd(M, false);
  return s.matrixU().leftCols(rank_of(s, rtol));
}

/// Orthonormal basis of ker(M).
inline Mat null_basis(const Mat &M, double rtol = kRankRtol)
{
  const Eigen::Index n = M.cols();
  if (n == 0)
  {
    return Mat(0, 0);
  }
  if (M.rows() == 0)
  {
    return Mat::Identity(n, n);
  }
  auto s = svd(M, true);
  const Eigen::Index r = rank_of(s, rtol);
  return s.matrixV().rightCols(n - r);
}

/// Null space with an absolute singular value threshold.
inline Mat null_basis_abs(const Mat &M, double atol)
{
  const Eigen::Index n = M.cols();
  if (n == 0)
  {
    return Mat(0, 0);
  }
  if (M.rows() == 0)
  {
    return Mat::Identity(n, n);
  }
  auto s = svd(M, true);
  const auto &sv = s.singularValues();
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > atol)
  {
    ++r;
  }
  return s.matrixV().rightCols(n - r);
}

inline double sigma_min(const Mat &M)
{
  if (M.size() == 0)
  {
    return 0.0;
  }
  Eigen::JacobiSVD<Mat> s(M);
  const auto &sv = s.singularValues();
  return M.rows() == M.cols() ? sv(sv.size() - 1) : (sv.size() ? sv(sv.size() - 1) : 0.0);
}

/// Spectral-norm condition number; infinity for singular matrices.
inline double condition(const Mat &M)
{
  auto s = svd(M, false);
  const auto &sv = s.singularValues();
  if (sv.size() == 0)
  {
    return 0.0;
  }
  const double lo = sv(sv.size() - 1);
  return lo == 0.0 ? std::numeric_limits<double>::infinity() : sv(0) / lo;
}

inline double norm2(const Mat &M)
{
  if (M.size() == 0)
  {
    return 0.0;
  }
  return max_singular(svd(M, false));
}

inline Mat hermitian_part(const Mat &M)
{
  return 0.5 * (M + M.adjoint());
}

inline Mat skew_part(const Mat &M)
{
  return (M - M.adjoint()) / cplx(0.0, 2.0);
}

inline double hermitian_residual(const Mat &M)
{
  const double s = M.norm();
  return s == 0.0 ? 0.0 : (M - M.adjoint()).norm() / s;
}

/// ||a - b|| / max(scale, tiny); scale defaults to max(||a||, ||b||).
inline double rel_diff(const Mat &a, const Mat &b, double scale = -1.0)
{
  const double d = (a - b).norm();
  if (scale < 0.0)
  {
    scale = std::max(a.norm(), b.norm());
  }
  if (scale == 0.0)
  {
    return d;
  }
  return d / scale;
}

inline Mat block_diag(const Mat &a, const Mat &b)
{
  Mat out = Mat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

/// Unitary completion: returns [Q, Q_perp] for orthonormal Q (n x k).
inline Mat orthogonal_complement(const Mat &Q, Eigen::Index n)
{
  if (Q.cols() == 0)
  {
    return Mat::Identity(n, n);
  }
  return null_basis(Q.adjoint().eval());
}

/// Square root of a Hermitian positive semidefinite matrix; eigenvalues
/// below clip * ||B|| are clipped to zero.
inline Mat psd_sqrt(const Mat &B, double clip = 1e-12)
{
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(B));
  RVec ev = es.eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < ev.size(); ++i)
  {
    ev(i) = ev(i) <= clip * scale ? 0.0 : std::sqrt(ev(i));
  }
  return es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

/// Inverse square root of a Hermitian positive definite matrix.
inline Mat pd_inv_sqrt(const Mat &B)
{
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(B));
  RVec ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i)
  {
    ev(i) = 1.0 / std::sqrt(ev(i));
  }
  return es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

inline RVec hermitian_eigenvalues(const Mat &M)
{
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(M), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

/// Solves A X = B, failing with SpectrumPoint when A is numerically singular.
inline Mat solve_checked(const Mat &A, const Mat &B, double max_cond, const std::string &what)
{
  Eigen::PartialPivLU<Mat> lu(A);
  const double rc = A.rows() ? lu.rcond() : 1.0;
  if (!(rc > 1.0 / max_cond))
  {
    fail(ErrorKind::SpectrumPoint, what + " (reciprocal condition " + std::to_string(rc) + ")");
  }
  return lu.solve(B);
}

}  // namespace linalg

}  // namespace nlbvp
