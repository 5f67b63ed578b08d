// Copyright the nlbvp authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "nlbvp/core.hpp"

namespace nlbvp
{

/// Finite-dimensional Krein space: <x, y> = y* G x, with fundamental symmetry J.
class KreinSpace
{
public:
  KreinSpace() = default;

  /// Validated construction. J defaults to the identity (Hilbert space).
  explicit KreinSpace(Mat gram, Mat J = Mat(), double max_cond = 1e12) : gram_(std::move(gram))
  {
    require(gram_.rows() == gram_.cols(), ErrorKind::DimensionMismatch, "Gram matrix must be square");
    const Eigen::Index n = gram_.rows();
    J_ = J.size() ? std::move(J) : Mat::Identity(n, n);
    require(J_.rows() == n && J_.cols() == n, ErrorKind::DimensionMismatch,
            "fundamental symmetry has wrong size");
    require(linalg::hermitian_residual(gram_) <= 1e-12, ErrorKind::InvalidArgument,
            "Gram matrix is not Hermitian");
    cond_ = n ? linalg::condition(gram_) : 1.0;
    require(cond_ <= max_cond, ErrorKind::InvalidArgument,
            "Gram matrix is numerically singular (condition " + std::to_string(cond_) + ")");
    require(linalg::hermitian_residual(J_) <= 1e-12, ErrorKind::InvalidArgument,
            "fundamental symmetry is not Hermitian");
    require((J_ * J_ - Mat::Identity(n, n)).norm() <= 1e-12 * std::max<double>(1.0, n),
            ErrorKind::InvalidArgument, "fundamental symmetry is not an involution");
    if (n)
    {
      // G = H J with H positive definite  <=>  G J positive definite.
      RVec ev = linalg::hermitian_eigenvalues(gram_ * J_);
      require(ev.minCoeff() > 0.0, ErrorKind::InvalidArgument,
              "Gram matrix is not compatible with the fundamental symmetry");
    }
  }

  static KreinSpace hilbert(Eigen::Index n, double weight = 1.0)
  {
    return KreinSpace(weight * Mat::Identity(n, n));
  }

  Eigen::Index dim() const { return gram_.rows(); }
  const Mat &gram() const { return gram_; }
  const Mat &J() const { return J_; }
  double gram_condition() const { return cond_; }

  bool is_hilbert() const
  {
    return dim() == 0 || linalg::hermitian_eigenvalues(gram_).minCoeff() > 0.0;
  }

  cplx inner(const Vec &x, const Vec &y) const { return y.dot(gram_ * x); }

  /// (positive, negative) index of the Gram matrix.
  std::pair<int, int> signature() const
  {
    if (dim() == 0)
    {
      return {0, 0};
    }
    RVec ev = linalg::hermitian_eigenvalues(gram_);
    const double tol = 1e-12 * ev.cwiseAbs().maxCoeff();
    int pos = 0, neg = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
    {
      pos += ev(i) > tol;
      neg += ev(i) < -tol;
    }
    return {pos, neg};
  }

  /// Adjoint of X : C^k (Euclidean) -> H, i.e. X* G.
  Mat plus(const Mat &X) const { return X.adjoint() * gram_; }

private:
  Mat gram_;
  Mat J_;
  double cond_ = 1.0;
};

/// Subspace of C^n stored by an orthonormal basis.
class Subspace
{
public:
  Subspace() = default;
  Subspace(Eigen::Index ambient, Mat basis) : ambient_(ambient), basis_(std::move(basis))
  {
    require(basis_.rows() == ambient_, ErrorKind::DimensionMismatch, "subspace basis has wrong height");
  }

  Eigen::Index ambient() const { return ambient_; }
  Eigen::Index dim() const { return basis_.cols(); }
  const Mat &basis() const { return basis_; }

  Mat projector() const { return basis_ * basis_.adjoint(); }

  /// Largest distance of a unit vector of this subspace from `other`.
  double containment_residual(const Subspace &other) const
  {
    if (dim() == 0)
    {
      return 0.0;
    }
    Mat r = basis_ - other.basis_ * (other.basis_.adjoint() * basis_);
    return linalg::norm2(r);
  }

  bool contained_in(const Subspace &other, double tol = 1e-10) const
  {
    return containment_residual(other) <= tol;
  }

  /// Symmetric subspace distance (0 iff equal).
  double distance(const Subspace &other) const
  {
    if (dim() != other.dim())
    {
      return 1.0;
    }
    return std::max(containment_residual(other), other.containment_residual(*this));
  }

private:
  Eigen::Index ambient_ = 0;
  Mat basis_;
};

inline Subspace column_space(const Mat &M, double rtol = kRankRtol)
{
  require(rtol > 0.0, ErrorKind::InvalidArgument, "rtol must be positive");
  return Subspace(M.rows(), linalg::range_basis(M, rtol));
}

inline Subspace intersect(const Subspace &U, const Subspace &V, double rtol = kRankRtol)
{
  require(U.ambient() == V.ambient(), ErrorKind::DimensionMismatch, "subspaces live in different spaces");
  if (U.dim() == 0 || V.dim() == 0)
  {
    return Subspace(U.ambient(), Mat(U.ambient(), 0));
  }
  // x = U a = V b  <=>  [U, -V] (a; b) = 0.
  Mat S(U.ambient(), U.dim() + V.dim());
  S << U.basis(), -V.basis();
  Mat N = linalg::null_basis_abs(S, rtol * std::sqrt(2.0));
  if (N.cols() == 0)
  {
    return Subspace(U.ambient(), Mat(U.ambient(), 0));
  }
  return column_space(U.basis() * N.topRows(U.dim()), rtol);
}

/// The four canonical subspaces of a relation.
struct RelationParts
{
  Subspace dom, ran, ker, mul;
};

/// Linear relation in H x H, stored as an orthonormal 2n x k basis [F; F'].
class LinearRelation
{
public:
  LinearRelation() = default;

  LinearRelation(KreinSpace space, const Mat &spanning, double rtol = kRankRtol)
    : space_(std::move(space)), rtol_(rtol)
  {
    require(spanning.rows() == 2 * space_.dim(), ErrorKind::DimensionMismatch,
            "relation basis must have 2n rows");
    basis_ = linalg::range_basis(spanning, rtol);
  }

  static LinearRelation graph(const KreinSpace &space, const Mat &A)
  {
    const Eigen::Index n = space.dim();
    require(A.rows() == n && A.cols() == n, ErrorKind::DimensionMismatch, "operator has wrong size");
    Mat W(2 * n, n);
    W << Mat::Identity(n, n), A;
    return LinearRelation(space, W);
  }

  const KreinSpace &space() const { return space_; }
  Eigen::Index n() const { return space_.dim(); }
  Eigen::Index dim() const { return basis_.cols(); }
  const Mat &basis() const { return basis_; }
  auto first() const { return basis_.topRows(n()); }
  auto second() const { return basis_.bottomRows(n()); }
  double rtol() const { return rtol_; }
  Subspace subspace() const { return Subspace(2 * n(), basis_); }

  /// Gram of i([f, g'] - [f', g]) on H x H.
  static Mat product_gram(const Mat &G)
  {
    const Eigen::Index n = G.rows();
    Mat K = Mat::Zero(2 * n, 2 * n);
    K.topRightCorner(n, n) = cplx(0.0, -1.0) * G;
    K.bottomLeftCorner(n, n) = cplx(0.0, 1.0) * G;
    return K;
  }

private:
  KreinSpace space_;
  Mat basis_;
  double rtol_ = kRankRtol;
};

/// A+ = all {f, f'} with [f, g'] = [f', g] for every {g, g'} in A.
inline LinearRelation adjoint(const LinearRelation &A)
{
  const Mat K = LinearRelation::product_gram(A.space().gram());
  Mat C = A.basis().adjoint() * K;
  Mat N = A.dim() ? linalg::null_basis(C, A.rtol()) : Mat(Mat::Identity(2 * A.n(), 2 * A.n()));
  return LinearRelation(A.space(), N, A.rtol());
}

inline Check is_symmetric(const LinearRelation &A, double tol = 1e-10)
{
  double r = A.subspace().containment_residual(adjoint(A).subspace());
  return {r <= tol, r};
}

inline Check is_selfadjoint(const LinearRelation &A, double tol = 1e-10)
{
  LinearRelation Ap = adjoint(A);
  double r = A.dim() == Ap.dim() ? A.subspace().distance(Ap.subspace()) : 1.0;
  return {r <= tol, r};
}

/// (A - lambda)^{-1} for any full-rank basis [F; F'] of A.
inline Mat resolvent_from_basis(const Mat &F, const Mat &Fp, cplx lambda, double max_cond = kResolventCond)
{
  const Eigen::Index n = F.rows();
  if (F.cols() != n)
  {
    fail(ErrorKind::SpectrumPoint, "relation dimension differs from the space dimension");
  }
  Mat D = Fp - lambda * F;
  if (n == 0)
  {
    return Mat(0, 0);
  }
  if (linalg::condition(D) > max_cond)
  {
    fail(ErrorKind::SpectrumPoint, "lambda is numerically in the spectrum");
  }
  // X D = F  <=>  D^T X^T = F^T
  return D.transpose().partialPivLu().solve(F.transpose()).transpose();
}

inline Mat resolvent(const LinearRelation &A, cplx lambda, double max_cond = kResolventCond)
{
  return resolvent_from_basis(A.first(), A.second(), lambda, max_cond);
}

inline RelationParts parts(const LinearRelation &A)
{
  const Eigen::Index n = A.n();
  const Mat F = A.first();
  const Mat Fp = A.second();
  RelationParts out;
  out.dom = column_space(F, A.rtol());
  out.ran = column_space(Fp, A.rtol());
  Mat kF = linalg::null_basis(Fp, A.rtol());
  out.ker = kF.cols() ? column_space(F * kF, A.rtol()) : Subspace(n, Mat(n, 0));
  Mat kM = linalg::null_basis(F, A.rtol());
  out.mul = kM.cols() ? column_space(Fp * kM, A.rtol()) : Subspace(n, Mat(n, 0));
  return out;
}

}  // namespace nlbvp
