// Copyright (c) The steklov authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef STEKLOV_ASSEMBLY_HPP
#define STEKLOV_ASSEMBLY_HPP

#include <array>
#include <functional>
#include <optional>
#include "steklov/mesh.hpp"
#include "steklov/types.hpp"

namespace steklov
{

// Index of refraction n(x) = n1(x) + i n2(x) / k with n1 > 0 and n2 >= 0. Holds
// either a constant value or a pointwise rule.
class RefractionIndex
{
public:
  using Rule = std::function<Complex(const Point &)>;

  explicit RefractionIndex(Complex value) : constant_(value) {}
  explicit RefractionIndex(Rule rule) : rule_(std::move(rule)) {}

  Complex operator()(const Point &p) const { return constant_ ? *constant_ : rule_(p); }

  bool IsConstant() const { return constant_.has_value(); }
  std::optional<Complex> Constant() const { return constant_; }

private:
  std::optional<Complex> constant_;
  Rule rule_;
};

// Element matrices of a single triangle, in local vertex order.
using LocalMatrix = std::array<std::array<Complex, 3>, 3>;

LocalMatrix LocalStiffness(const Point &a, const Point &b, const Point &c);
LocalMatrix LocalMass(const Point &a, const Point &b, const Point &c,
                      const RefractionIndex &n);

// G_ij = (grad phi_j, grad phi_i). Throws DegenerateElement on a zero-area triangle.
SparseComplexMatrix AssembleStiffness(const TriMesh &mesh);

// (M_n)_ij = (n phi_j, phi_i) with the three-point edge-midpoint rule. Throws
// InvalidRefractionIndex if Re n <= 0 or Im n < 0 at any quadrature point.
SparseComplexMatrix AssembleMass(const TriMesh &mesh, const RefractionIndex &n);

// Full N x N matrix with (L/6)[[2,1],[1,2]] added per boundary edge of length L.
SparseComplexMatrix AssembleBoundaryMass(const TriMesh &mesh);

}  // namespace steklov

#endif  // STEKLOV_ASSEMBLY_HPP
