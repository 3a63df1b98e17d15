// Copyright (c) The steklov authors.
// SPDX-License-Identifier: Apache-2.0

#include "steklov/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <Eigen/SparseLU>
#include "steklov/error.hpp"

namespace steklov
{

struct HelmholtzFactorization::Impl
{
  Eigen::SparseLU<SparseComplexMatrix, Eigen::COLAMDOrdering<int>> lu;
};

namespace
{

constexpr Eigen::Index kColumnBlock = 64;

bool AllFinite(const ComplexVector &x)
{
  return x.allFinite();
}

Complex UnitSign(Complex v)
{
  const double a = std::abs(v);
  return a > 0.0 ? v / a : Complex(1.0);
}

}  // namespace

double OneNorm(const SparseComplexMatrix &A)
{
  double best = 0.0;
  for (Eigen::Index j = 0; j < A.outerSize(); j++)
  {
    double sum = 0.0;
    for (SparseComplexMatrix::InnerIterator it(A, j); it; ++it)
    {
      sum += std::abs(it.value());
    }
    best = std::max(best, sum);
  }
  return best;
}

double OneNorm(const DenseComplexMatrix &A)
{
  return A.size() == 0 ? 0.0 : A.cwiseAbs().colwise().sum().maxCoeff();
}

HelmholtzFactorization::HelmholtzFactorization(const SparseComplexMatrix &G,
                                               const SparseComplexMatrix &Mn, double k)
  : impl_(std::make_unique<Impl>()), k_(k)
{
  if (G.rows() != G.cols() || Mn.rows() != G.rows() || Mn.cols() != G.cols())
  {
    throw Error(ErrorCode::InvalidArgument, "G and M_n dimensions differ");
  }
  A_ = G - (k * k) * Mn;
  A_.makeCompressed();
  const double norm_a = OneNorm(A_);

  // The adjoint solves of the condition estimator rely on A^T = A.
  const SparseComplexMatrix asym = SparseComplexMatrix(A_.transpose()) - A_;
  if (OneNorm(asym) > 1e-12 * std::max(norm_a, 1.0))
  {
    throw Error(ErrorCode::InvalidArgument, "G - k^2 M_n is not complex-symmetric");
  }

  impl_->lu.analyzePattern(A_);
  impl_->lu.factorize(A_);
  if (impl_->lu.info() != Eigen::Success)
  {
    throw Error(ErrorCode::NearNeumannEigenvalue,
                "LU factorization of G - k^2 M_n failed (k = " + std::to_string(k) +
                    "): " + impl_->lu.lastErrorMessage());
  }

  // Hager-Higham estimate of ||A^{-1}||_1. A^{-H} v = conj(A^{-1} conj(v)).
  const Eigen::Index n = A_.rows();
  auto solve = [&](const ComplexVector &v) -> ComplexVector { return impl_->lu.solve(v); };
  double inv_norm = 0.0;
  bool singular = false;
  {
    ComplexVector x = ComplexVector::Constant(n, Complex(1.0 / static_cast<double>(n)));
    ComplexVector y = solve(x);
    singular = !AllFinite(y);
    inv_norm = y.lpNorm<1>();
    Eigen::Index last = -1;
    for (int iter = 0; iter < 5 && !singular; iter++)
    {
      ComplexVector xi = y.unaryExpr(&UnitSign);
      ComplexVector z = solve(xi.conjugate()).conjugate();
      if (!AllFinite(z))
      {
        singular = true;
        break;
      }
      Eigen::Index j;
      z.cwiseAbs().maxCoeff(&j);
      if (j == last)
      {
        break;
      }
      last = j;
      x.setZero();
      x[j] = 1.0;
      y = solve(x);
      if (!AllFinite(y))
      {
        singular = true;
        break;
      }
      const double next = y.lpNorm<1>();
      if (next <= inv_norm)
      {
        break;
      }
      inv_norm = next;
    }
    if (!singular && n > 1)
    {
      for (Eigen::Index i = 0; i < n; i++)
      {
        x[i] = (i % 2 ? -1.0 : 1.0) * (1.0 + static_cast<double>(i) / (n - 1));
      }
      y = solve(x);
      singular = !AllFinite(y);
      inv_norm = std::max(inv_norm, 2.0 * y.lpNorm<1>() / (3.0 * n));
    }
  }
  rcond_ = (singular || norm_a == 0.0) ? 0.0 : 1.0 / (norm_a * inv_norm);
  if (!(rcond_ >= kSingularRcond))
  {
    throw Error(ErrorCode::NearNeumannEigenvalue,
                "k^2 = " + std::to_string(k * k) +
                    " is at or near a discrete Neumann eigenvalue (rcond estimate " +
                    std::to_string(rcond_) + ")");
  }
}

HelmholtzFactorization::~HelmholtzFactorization() = default;
HelmholtzFactorization::HelmholtzFactorization(HelmholtzFactorization &&) noexcept = default;
HelmholtzFactorization &
HelmholtzFactorization::operator=(HelmholtzFactorization &&) noexcept = default;

Eigen::Index HelmholtzFactorization::Dimension() const
{
  return A_.rows();
}

ComplexVector HelmholtzFactorization::Solve(const ComplexVector &b) const
{
  if (b.size() != A_.rows())
  {
    throw Error(ErrorCode::InvalidArgument, "right-hand side has the wrong length");
  }
  ComplexVector x = impl_->lu.solve(b);
  if (!AllFinite(x))
  {
    throw Error(ErrorCode::NearNeumannEigenvalue, "solve produced non-finite values");
  }
  return x;
}

DenseComplexMatrix HelmholtzFactorization::Solve(const DenseComplexMatrix &B) const
{
  if (B.rows() != A_.rows())
  {
    throw Error(ErrorCode::InvalidArgument, "right-hand side has the wrong length");
  }
  DenseComplexMatrix X = impl_->lu.solve(B);
  if (!X.allFinite())
  {
    throw Error(ErrorCode::NearNeumannEigenvalue, "solve produced non-finite values");
  }
  return X;
}

double HelmholtzFactorization::RelativeResidual(const ComplexVector &b,
                                                const ComplexVector &x) const
{
  const double nb = b.norm();
  return (A_ * x - b).norm() / (nb > 0.0 ? nb : 1.0);
}

ComplexVector ExtendFromBoundary(const ComplexVector &g, const std::vector<int> &boundary,
                                 Eigen::Index n)
{
  ComplexVector x = ComplexVector::Zero(n);
  for (std::size_t i = 0; i < boundary.size(); i++)
  {
    x[boundary[i]] = g[static_cast<Eigen::Index>(i)];
  }
  return x;
}

ComplexVector RestrictToBoundary(const ComplexVector &x, const std::vector<int> &boundary)
{
  ComplexVector g(static_cast<Eigen::Index>(boundary.size()));
  for (std::size_t i = 0; i < boundary.size(); i++)
  {
    g[static_cast<Eigen::Index>(i)] = x[boundary[i]];
  }
  return g;
}

NtdMatrix BuildNtd(const HelmholtzFactorization &fact, const SparseComplexMatrix &Mbd,
                   const std::vector<int> &boundary)
{
  const Eigen::Index n = fact.Dimension();
  if (Mbd.rows() != n || Mbd.cols() != n)
  {
    throw Error(ErrorCode::InvalidArgument, "boundary mass matrix dimension mismatch");
  }
  const auto m = static_cast<Eigen::Index>(boundary.size());
  for (int v : boundary)
  {
    if (v < 0 || v >= n)
    {
      throw Error(ErrorCode::InvalidArgument, "boundary index out of range");
    }
  }

  NtdMatrix T;
  T.boundary = boundary;
  T.values.resize(m, m);
  for (Eigen::Index j0 = 0; j0 < m; j0 += kColumnBlock)
  {
    const Eigen::Index nb = std::min(kColumnBlock, m - j0);
    DenseComplexMatrix rhs = DenseComplexMatrix::Zero(n, nb);
    for (Eigen::Index j = 0; j < nb; j++)
    {
      const int col = boundary[static_cast<std::size_t>(j0 + j)];
      for (SparseComplexMatrix::InnerIterator it(Mbd, col); it; ++it)
      {
        rhs(it.row(), j) = it.value();
      }
    }
    const DenseComplexMatrix X = fact.Solve(rhs);
    for (Eigen::Index i = 0; i < m; i++)
    {
      T.values.block(i, j0, 1, nb) = X.block(boundary[static_cast<std::size_t>(i)], 0, 1, nb);
    }
  }
  return T;
}

}  // namespace steklov
