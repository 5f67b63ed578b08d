// Copyright the nlbvp authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "nlbvp/core.hpp"

namespace nlbvp
{

/// Seeded source of test data. Uses explicit transforms of mt19937_64 output so
/// that sequences do not depend on the standard library's distribution code.
class Rng
{
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0)
  {
    const double u = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

  double normal()
  {
    // Box-Muller
    double u1 = uniform();
    while (u1 <= 0.0)
    {
      u1 = uniform();
    }
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  cplx cnormal() { return {normal(), normal()}; }

  Mat complex(Eigen::Index r, Eigen::Index c)
  {
    Mat M(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
    {
      for (Eigen::Index i = 0; i < r; ++i)
      {
        M(i, j) = cnormal();
      }
    }
    return M;
  }

  Vec vector(Eigen::Index n) { return complex(n, 1).col(0); }

  Mat hermitian(Eigen::Index n)
  {
    Mat A = complex(n, n);
    return linalg::hermitian_part(A);
  }

  /// Positive semidefinite of the given rank (rank == n gives positive definite).
  Mat psd(Eigen::Index n, Eigen::Index rank)
  {
    Mat B = complex(n, rank);
    return B * B.adjoint();
  }

  /// Point with real part in [re_lo, re_hi] and |Im| in [im_lo, im_hi]; sign given.
  cplx point(double re_lo, double re_hi, double im_lo, double im_hi, bool upper)
  {
    const double re = uniform(re_lo, re_hi);
    const double im = uniform(im_lo, im_hi);
    return {re, upper ? im : -im};
  }

private:
  std::mt19937_64 eng_;
};

/// Rectangle of the complex plane used for sampling: Re in [re_lo, re_hi],
/// |Im| in [im_lo, im_hi].
struct Window
{
  double re_lo = -2.0;
  double re_hi = 2.0;
  double im_lo = 0.5;
  double im_hi = 2.0;

  double max_modulus() const
  {
    return std::hypot(std::max(std::abs(re_lo), std::abs(re_hi)), im_hi);
  }
};

/// n seeded points with alternating sign of the imaginary part.
inline std::vector<cplx> sample_points(std::size_t n, std::uint64_t seed, const Window &w = {})
{
  Rng rng(seed);
  std::vector<cplx> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
  {
    out.push_back(rng.point(w.re_lo, w.re_hi, w.im_lo, w.im_hi, i % 2 == 0));
  }
  return out;
}

}  // namespace nlbvp
