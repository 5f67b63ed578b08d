// Copyright the nlbvp authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "nlbvp/boundary_triple.hpp"

namespace nlbvp
{

using Coefficient = std::function<double(double x, double y)>;

inline Coefficient constant_coefficient(double c)
{
  return [c](double, double) { return c; };
}

struct Node
{
  double x = 0.0;
  double y = 0.0;
};

/// Finite-difference blocks of l = -div(a grad) + a0 with interior (I) and boundary (B) nodes.
/// 1D nodes: boundary ordered left, right. 2D: boundary excludes corners and runs
/// counterclockwise from the lower-left (bottom, right, top, left).
struct DiscreteElliptic
{
  int dim = 1;
  int nx = 0, ny = 0;
  double hx = 0.0, hy = 0.0;
  double w = 0.0;  // cell measure h^d
  RMat L_II, L_IB, L_BB;
  std::vector<Node> interior, boundary;

  Eigen::Index n_I() const { return L_II.rows(); }
  Eigen::Index n_B() const { return L_IB.cols(); }
  RMat L_BI() const { return L_IB.transpose(); }

  /// Relative deviation of the full matrix from symmetry (exactly 0 by construction).
  double symmetry_residual() const
  {
    const double s = L_II.norm() + L_IB.norm();
    return s == 0.0 ? 0.0 : (L_II - L_II.transpose()).norm() / s;
  }
};

inline void require_positive(double v, const char *name)
{
  if (!(v > 0.0))
  {
    fail(ErrorKind::NonPositiveCoefficient, std::string(name) + " must be positive, got " + std::to_string(v));
  }
}

/// -(p u')' + a u on [lo, hi] with n interior nodes; p sampled at cell midpoints.
inline DiscreteElliptic build_1d(int n, const Coefficient &p, const Coefficient &a, double lo = 0.0, double hi = 1.0)
{
  require(n >= 3, ErrorKind::InvalidArgument, "need at least 3 interior nodes");
  require(hi > lo, ErrorKind::InvalidArgument, "empty interval");
  DiscreteElliptic de;
  de.dim = 1;
  de.nx = n;
  de.ny = 1;
  de.hx = (hi - lo) / (n + 1);
  de.w = de.hx;
  const double h = de.hx, h2 = h * h;
  std::vector<double> pm(static_cast<std::size_t>(n + 1));
  for (int j = 0; j <= n; ++j)
  {
    pm[static_cast<std::size_t>(j)] = p(lo + (j + 0.5) * h, 0.0);
    require_positive(pm[static_cast<std::size_t>(j)], "p");
  }
  de.L_II = RMat::Zero(n, n);
  for (int j = 0; j < n; ++j)
  {
    const double x = lo + (j + 1) * h;
    de.interior.push_back({x, 0.0});
    const double pl = pm[static_cast<std::size_t>(j)], pr = pm[static_cast<std::size_t>(j + 1)];
    de.L_II(j, j) = (pl + pr) / h2 + a(x, 0.0);
    if (j > 0)
    {
      de.L_II(j, j - 1) = -pl / h2;
    }
    if (j + 1 < n)
    {
      de.L_II(j, j + 1) = -pr / h2;
    }
  }
  de.boundary = {{lo, 0.0}, {hi, 0.0}};
  de.L_IB = RMat::Zero(n, 2);
  de.L_IB(0, 0) = -pm.front() / h2;
  de.L_IB(n - 1, 1) = -pm.back() / h2;
  de.L_BB = RMat::Zero(2, 2);
  de.L_BB(0, 0) = pm.front() / h2;
  de.L_BB(1, 1) = pm.back() / h2;
  return de;
}

/// -(a11 u_x)_x - (a22 u_y)_y + a u on [x0,x1]x[y0,y1] with nx x ny interior nodes.
inline DiscreteElliptic build_2d(int nx, int ny, const Coefficient &a11, const Coefficient &a22, const Coefficient &a,
                                 double x0 = 0.0, double x1 = 1.0, double y0 = 0.0, double y1 = 1.0)
{
  require(nx >= 3 && ny >= 3, ErrorKind::InvalidArgument, "need at least 3 interior nodes per direction");
  require(x1 > x0 && y1 > y0, ErrorKind::InvalidArgument, "empty rectangle");
  DiscreteElliptic de;
  de.dim = 2;
  de.nx = nx;
  de.ny = ny;
  de.hx = (x1 - x0) / (nx + 1);
  de.hy = (y1 - y0) / (ny + 1);
  de.w = de.hx * de.hy;
  const double hx2 = de.hx * de.hx, hy2 = de.hy * de.hy;
  auto X = [&](double i) { return x0 + i * de.hx; };
  auto Y = [&](double j) { return y0 + j * de.hy; };
  auto idx = [&](int i, int j) { return (j - 1) * nx + (i - 1); };  // 1 <= i <= nx, 1 <= j <= ny

  // Boundary numbering, counterclockwise from the lower-left corner. The two ghost
  // nodes flanking an interior corner node touch only that node, so each such pair
  // shares one unknown located at the rectangle corner; this keeps L_IB injective.
  std::vector<std::vector<int>> bidx(static_cast<std::size_t>(nx + 2), std::vector<int>(static_cast<std::size_t>(ny + 2), -1));
  auto slot = [&](int i, int j) -> int & { return bidx[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; };
  auto add_b = [&](int i, int j) {
    slot(i, j) = static_cast<int>(de.boundary.size());
    de.boundary.push_back({X(i), Y(j)});
  };
  auto add_corner = [&](int i1, int j1, int i2, int j2, double cx, double cy) {
    slot(i1, j1) = slot(i2, j2) = static_cast<int>(de.boundary.size());
    de.boundary.push_back({cx, cy});
  };
  add_corner(1, 0, 0, 1, x0, y0);
  for (int i = 2; i < nx; ++i) add_b(i, 0);
  add_corner(nx, 0, nx + 1, 1, x1, y0);
  for (int j = 2; j < ny; ++j) add_b(nx + 1, j);
  add_corner(nx + 1, ny, nx, ny + 1, x1, y1);
  for (int i = nx - 1; i > 1; --i) add_b(i, ny + 1);
  add_corner(1, ny + 1, 0, ny, x0, y1);
  for (int j = ny - 1; j > 1; --j) add_b(0, j);

  const int nI = nx * ny, nB = static_cast<int>(de.boundary.size());
  de.L_II = RMat::Zero(nI, nI);
  de.L_IB = RMat::Zero(nI, nB);
  de.L_BB = RMat::Zero(nB, nB);
  for (int j = 1; j <= ny; ++j)
  {
    for (int i = 1; i <= nx; ++i)
    {
      const int k = idx(i, j);
      de.interior.push_back({X(i), Y(j)});
      const double cw = a11(X(i - 0.5), Y(j)) / hx2;
      const double ce = a11(X(i + 0.5), Y(j)) / hx2;
      const double cs = a22(X(i), Y(j - 0.5)) / hy2;
      const double cn = a22(X(i), Y(j + 0.5)) / hy2;
      require_positive(cw, "a11");
      require_positive(ce, "a11");
      require_positive(cs, "a22");
      require_positive(cn, "a22");
      de.L_II(k, k) = cw + ce + cs + cn + a(X(i), Y(j));
      auto link = [&](int ii, int jj, double c) {
        if (ii >= 1 && ii <= nx && jj >= 1 && jj <= ny)
        {
          de.L_II(k, idx(ii, jj)) = -c;
        }
        else
        {
          const int b = bidx[static_cast<std::size_t>(ii)][static_cast<std::size_t>(jj)];
          de.L_IB(k, b) -= c;
          de.L_BB(b, b) += c;
        }
      };
      link(i - 1, j, cw);
      link(i + 1, j, ce);
      link(i, j - 1, cs);
      link(i, j + 1, cn);
    }
  }
  return de;
}

/// T_D = L_II.
inline RMat dirichlet_operator(const DiscreteElliptic &de) { return de.L_II; }

inline RVec dirichlet_eigenvalues(const DiscreteElliptic &de)
{
  Eigen::SelfAdjointEigenSolver<RMat> es(de.L_II, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

/// E = -(L_II - eta)^{-1} L_IB.
inline RMat eta_extension(const DiscreteElliptic &de, double eta)
{
  RMat D = de.L_II - eta * RMat::Identity(de.n_I(), de.n_I());
  Eigen::PartialPivLU<RMat> lu(D);
  if (!(lu.rcond() > 1.0 / kResolventCond))
  {
    fail(ErrorKind::SpectrumPoint, "eta lies in the spectrum of the Dirichlet operator");
  }
  return -lu.solve(de.L_IB);
}

/// Discrete analogue of the triple built from the Dirichlet operator and eta-harmonic extensions.
/// T = {(f_D + E y, T_D f_D + eta E y)}, Gamma0 = y, Gamma1 = -w L_BI f_D.
class EllipticTriple
{
public:
  EllipticTriple(DiscreteElliptic de, std::optional<double> eta = std::nullopt) : de_(std::move(de))
  {
    const Eigen::Index nI = de_.n_I(), nB = de_.n_B();
    if (linalg::rank(de_.L_IB.cast<cplx>()) < nB)
    {
      fail(ErrorKind::RankDeficientCoupling, "L_IB does not have full column rank");
    }
    eta_ = eta.value_or(dirichlet_eigenvalues(de_).minCoeff() - 1.0);
    E_ = eta_extension(de_, eta_);
    TD_ = de_.L_II;

    Mat P(2 * nI, nI + nB);
    P.topLeftCorner(nI, nI).setIdentity();
    P.topRightCorner(nI, nB) = E_.cast<cplx>();
    P.bottomLeftCorner(nI, nI) = TD_.cast<cplx>();
    P.bottomRightCorner(nI, nB) = (eta_ * E_).cast<cplx>();
    Mat G0 = Mat::Zero(nB, nI + nB);
    G0.rightCols(nB).setIdentity();
    Mat G1 = Mat::Zero(nB, nI + nB);
    G1.leftCols(nI) = (-de_.w * de_.L_BI()).cast<cplx>();
    bt_ = BoundaryTriple(KreinSpace::hilbert(nI, de_.w), P, G0, G1);
  }

  const DiscreteElliptic &disc() const { return de_; }
  const BoundaryTriple &triple() const { return bt_; }
  double eta() const { return eta_; }
  const RMat &E() const { return E_; }
  const RMat &TD() const { return TD_; }
  double w() const { return de_.w; }
  Eigen::Index n_I() const { return de_.n_I(); }
  Eigen::Index n_B() const { return de_.n_B(); }

  /// LU of T_D - lambda; SpectrumPoint when singular.
  Eigen::PartialPivLU<Mat> shifted(cplx lambda) const
  {
    Mat D = TD_.cast<cplx>();
    D.diagonal().array() -= lambda;
    Eigen::PartialPivLU<Mat> lu(D);
    if (!(lu.rcond() > 1.0 / kResolventCond))
    {
      fail(ErrorKind::SpectrumPoint, "lambda lies in the spectrum of the Dirichlet operator");
    }
    return lu;
  }

  /// gamma(lambda) = (I + (lambda - eta)(T_D - lambda)^{-1}) E
  Mat gamma(cplx lambda) const
  {
    Mat Ec = E_.cast<cplx>();
    return Ec + (lambda - eta_) * shifted(lambda).solve(Ec);
  }

  /// M(lambda) = w (eta - lambda) L_BI (T_D - lambda)^{-1} E
  Mat weyl(cplx lambda) const
  {
    Mat Ec = E_.cast<cplx>();
    return de_.w * (eta_ - lambda) * (de_.L_BI().cast<cplx>() * shifted(lambda).solve(Ec));
  }

  /// Parameter recovery from a pair {f, g} in T: L_IB y = g - T_D f, f_D = f - E y.
  std::pair<Mat, Mat> recover(const Mat &f, const Mat &g) const
  {
    Mat rhs = g - TD_.cast<cplx>() * f;
    Mat y = de_.L_IB.cast<cplx>().colPivHouseholderQr().solve(rhs);
    Mat fD = f - E_.cast<cplx>() * y;
    return {fD, y};
  }

private:
  DiscreteElliptic de_;
  double eta_ = 0.0;
  RMat E_, TD_;
  BoundaryTriple bt_;
};

}  // namespace nlbvp
