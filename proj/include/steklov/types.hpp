// Copyright (c) The steklov authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef STEKLOV_TYPES_HPP
#define STEKLOV_TYPES_HPP

#include <complex>
#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace steklov
{

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using DenseComplexMatrix = Eigen::MatrixXcd;

// Column-compressed storage. Every matrix assembled here is structurally symmetric
// and complex-symmetric, so the row- and column-compressed layouts coincide.
using SparseComplexMatrix = Eigen::SparseMatrix<Complex>;

using namespace std::complex_literals;

}  // namespace steklov

#endif  // STEKLOV_TYPES_HPP
