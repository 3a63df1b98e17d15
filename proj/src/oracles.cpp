// Copyright (c) The steklov authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <vector>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#include "steklov/reduction.hpp"
#include "steklov/rim.hpp"

namespace steklov
{

namespace
{

[[noreturn]] void ThrowSingular(Complex z)
{
  throw Error(ErrorCode::SolveFailedOnContour,
              "shifted matrix is singular at z = (" + std::to_string(z.real()) + ", " +
                  std::to_string(z.imag()) + ")");
}

// y[0..n) -= a x[0..n), in real arithmetic (std::complex products go through the
// Annex G NaN checks).
void SubtractScaled(Complex a, const Complex *x, Complex *y, Eigen::Index n)
{
  const double ar = a.real(), ai = a.imag();
  const double *xd = reinterpret_cast<const double *>(x);
  double *yd = reinterpret_cast<double *>(y);
  for (Eigen::Index r = 0; r < n; r++)
  {
    const double xr = xd[2 * r], xi = xd[2 * r + 1];
    yd[2 * r] -= ar * xr - ai * xi;
    yd[2 * r + 1] -= ar * xi + ai * xr;
  }
}

// Gaussian elimination with adjacent-row partial pivoting on H - zI, H upper
// Hessenberg. Factor and solve are both O(M^2).
class HessenbergShift : public ShiftedSystem
{
public:
  HessenbergShift(const DenseComplexMatrix &H, Complex z)
    : U_(H), mult_(H.rows() > 0 ? H.rows() - 1 : 0), swap_(mult_.size(), false)
  {
    const Eigen::Index m = U_.rows();
    U_.diagonal().array() -= z;
    for (Eigen::Index k = 0; k + 1 < m; k++)
    {
      Complex *colk = &U_(0, k);
      if (std::abs(colk[k + 1]) > std::abs(colk[k]))
      {
        swap_[k] = true;
        for (Eigen::Index j = k; j < m; j++)
        {
          std::swap(U_(k, j), U_(k + 1, j));
        }
      }
      const Complex pivot = U_(k, k);
      if (pivot == Complex(0.0))
      {
        ThrowSingular(z);
      }
      const Complex l = U_(k + 1, k) / pivot;
      mult_[k] = l;
      U_(k + 1, k) = 0.0;
      if (l != Complex(0.0))
      {
        for (Eigen::Index j = k + 1; j < m; j++)
        {
          U_(k + 1, j) -= l * U_(k, j);
        }
      }
    }
    if (m > 0 && U_(m - 1, m - 1) == Complex(0.0))
    {
      ThrowSingular(z);
    }
  }

  ComplexVector Solve(const ComplexVector &rhs) const override
  {
    const Eigen::Index m = U_.rows();
    ComplexVector b = rhs;
    for (Eigen::Index k = 0; k + 1 < m; k++)
    {
      if (swap_[k])
      {
        std::swap(b[k], b[k + 1]);
      }
      b[k + 1] -= mult_[k] * b[k];
    }
    for (Eigen::Index i = m - 1; i >= 0; i--)
    {
      const Complex xi = b[i] / U_(i, i);
      b[i] = xi;
      SubtractScaled(xi, &U_(0, i), b.data(), i);
    }
    return b;
  }

private:
  DenseComplexMatrix U_;
  std::vector<Complex> mult_;
  std::vector<bool> swap_;
};

class TriangularShift : public ShiftedSystem
{
public:
  TriangularShift(const DenseComplexMatrix &S, Complex z) : S_(S), z_(z)
  {
    for (Eigen::Index i = 0; i < S_.rows(); i++)
    {
      if (S_(i, i) == z_)
      {
        ThrowSingular(z);
      }
    }
  }

  ComplexVector Solve(const ComplexVector &rhs) const override
  {
    ComplexVector b = rhs;
    for (Eigen::Index i = S_.rows() - 1; i >= 0; i--)
    {
      const Complex xi = b[i] / (S_(i, i) - z_);
      b[i] = xi;
      SubtractScaled(xi, &S_(0, i), b.data(), i);
    }
    return b;
  }

private:
  const DenseComplexMatrix &S_;
  Complex z_;
};

class DenseShift : public ShiftedSystem
{
public:
  DenseShift(const DenseComplexMatrix &A, const DenseComplexMatrix &B, Complex z)
    : lu_(A - z * B)
  {
    const auto d = lu_.matrixLU().diagonal();
    for (Eigen::Index i = 0; i < d.size(); i++)
    {
      if (d[i] == Complex(0.0) || !std::isfinite(std::abs(d[i])))
      {
        ThrowSingular(z);
      }
    }
  }

  ComplexVector Solve(const ComplexVector &rhs) const override { return lu_.solve(rhs); }

private:
  Eigen::PartialPivLU<DenseComplexMatrix> lu_;
};

class SparseShift : public ShiftedSystem
{
public:
  SparseShift(const SparseComplexMatrix &A, const SparseComplexMatrix &B, Complex z)
  {
    SparseComplexMatrix S = A - z * B;
    S.makeCompressed();
    lu_.analyzePattern(S);
    lu_.factorize(S);
    if (lu_.info() != Eigen::Success)
    {
      ThrowSingular(z);
    }
  }

  ComplexVector Solve(const ComplexVector &rhs) const override
  {
    return lu_.solve(rhs);
  }

private:
  Eigen::SparseLU<SparseComplexMatrix, Eigen::COLAMDOrdering<int>> lu_;
};

}  // namespace

HessenbergOracle::HessenbergOracle(const DenseComplexMatrix &T)
{
  if (T.rows() != T.cols() || T.rows() == 0)
  {
    throw Error(ErrorCode::InvalidArgument, "Hessenberg oracle needs a nonempty square matrix");
  }
  Eigen::HessenbergDecomposition<DenseComplexMatrix> hd(T);
  H_ = hd.matrixH();
  Q_ = hd.matrixQ();
  norm_ = OneNorm(T);
}

std::unique_ptr<ShiftedSystem> HessenbergOracle::Shift(Complex z) const
{
  return std::make_unique<HessenbergShift>(H_, z);
}

SchurOracle::SchurOracle(const DenseComplexMatrix &T)
{
  if (T.rows() != T.cols() || T.rows() == 0)
  {
    throw Error(ErrorCode::InvalidArgument, "Schur oracle needs a nonempty square matrix");
  }
  Eigen::ComplexSchur<DenseComplexMatrix> schur(T);
  if (schur.info() != Eigen::Success)
  {
    throw Error(ErrorCode::Internal, "complex Schur decomposition did not converge");
  }
  S_ = schur.matrixT().triangularView<Eigen::Upper>();
  U_ = schur.matrixU();
  norm_ = OneNorm(T);
}

std::unique_ptr<ShiftedSystem> SchurOracle::Shift(Complex z) const
{
  return std::make_unique<TriangularShift>(S_, z);
}

ComplexVector SchurOracle::ApplyA(const ComplexVector &x) const
{
  return S_.triangularView<Eigen::Upper>() * x;
}

DensePencilOracle::DensePencilOracle(DenseComplexMatrix A, DenseComplexMatrix B)
  : A_(std::move(A)), B_(std::move(B))
{
  if (A_.rows() != A_.cols() || B_.rows() != A_.rows() || B_.cols() != A_.cols())
  {
    throw Error(ErrorCode::InvalidArgument, "pencil matrices must be square and equal-sized");
  }
  norm_a_ = OneNorm(A_);
  norm_b_ = OneNorm(B_);
}

std::unique_ptr<ShiftedSystem> DensePencilOracle::Shift(Complex z) const
{
  return std::make_unique<DenseShift>(A_, B_, z);
}

SparsePencilOracle::SparsePencilOracle(SparseComplexMatrix A, SparseComplexMatrix B)
  : A_(std::move(A)), B_(std::move(B))
{
  if (A_.rows() != A_.cols() || B_.rows() != A_.rows() || B_.cols() != A_.cols())
  {
    throw Error(ErrorCode::InvalidArgument, "pencil matrices must be square and equal-sized");
  }
  norm_a_ = OneNorm(A_);
  norm_b_ = OneNorm(B_);
}

std::unique_ptr<ShiftedSystem> SparsePencilOracle::Shift(Complex z) const
{
  return std::make_unique<SparseShift>(A_, B_, z);
}

}  // namespace steklov
