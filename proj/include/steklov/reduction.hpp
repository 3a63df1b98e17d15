// Copyright (c) The steklov authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef STEKLOV_REDUCTION_HPP
#define STEKLOV_REDUCTION_HPP

#include <memory>
#include <vector>
#include "steklov/types.hpp"

namespace steklov
{

// Sparse LU of A = G - k^2 M_n, reusable for any number of right-hand sides.
class HelmholtzFactorization
{
public:
  // Reciprocal 1-norm condition estimate below which the shift is rejected as a
  // (discrete) Neumann eigenvalue.
  static constexpr double kSingularRcond = 1e-14;
  // Below this the factorization succeeds but ConditionWarning() is raised.
  static constexpr double kWarnRcond = 1e-8;

  // Throws NearNeumannEigenvalue on factorization failure or rcond < 1e-14.
  HelmholtzFactorization(const SparseComplexMatrix &G, const SparseComplexMatrix &Mn,
                         double k);
  ~HelmholtzFactorization();
  HelmholtzFactorization(HelmholtzFactorization &&) noexcept;
  HelmholtzFactorization &operator=(HelmholtzFactorization &&) noexcept;

  Eigen::Index Dimension() const;
  double Wavenumber() const { return k_; }
  const SparseComplexMatrix &Matrix() const { return A_; }

  ComplexVector Solve(const ComplexVector &b) const;
  DenseComplexMatrix Solve(const DenseComplexMatrix &B) const;

  // ||A x - b|| / ||b||.
  double RelativeResidual(const ComplexVector &b, const ComplexVector &x) const;

  double RcondEstimate() const { return rcond_; }
  bool ConditionWarning() const { return rcond_ < kWarnRcond; }

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  SparseComplexMatrix A_;
  double k_ = 0.0;
  double rcond_ = 0.0;
};

// Boundary-reduced Neumann-to-Dirichlet matrix T_h = I_h A^{-1} M_bd (M x M).
// Row/column i corresponds to mesh vertex boundary[i].
struct NtdMatrix
{
  DenseComplexMatrix values;
  std::vector<int> boundary;
};

// Column j is the boundary trace of A^{-1} applied to column boundary[j] of M_bd.
NtdMatrix BuildNtd(const HelmholtzFactorization &fact, const SparseComplexMatrix &Mbd,
                   const std::vector<int> &boundary);

// Zero-padded full-size vector with g[i] placed at mesh vertex boundary[i].
ComplexVector ExtendFromBoundary(const ComplexVector &g, const std::vector<int> &boundary,
                                 Eigen::Index n);
ComplexVector RestrictToBoundary(const ComplexVector &x, const std::vector<int> &boundary);

// Max column sum of absolute values.
double OneNorm(const SparseComplexMatrix &A);
double OneNorm(const DenseComplexMatrix &A);

}  // namespace steklov

#endif  // STEKLOV_REDUCTION_HPP
