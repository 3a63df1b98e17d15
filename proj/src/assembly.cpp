// Copyright (c) The steklov authors.
// SPDX-License-Identifier: Apache-2.0

#include "steklov/assembly.hpp"

#include <cmath>
#include <string>
#include <vector>
#include "steklov/error.hpp"

namespace steklov
{

namespace
{

using Triplet = Eigen::Triplet<Complex>;

double CheckedArea(const Point &a, const Point &b, const Point &c)
{
  const double area = SignedArea(a, b, c);
  if (!(std::abs(area) > 0.0))
  {
    throw Error(ErrorCode::DegenerateElement, "zero-area triangle");
  }
  return area;
}

void CheckRefraction(Complex n, const Point &p)
{
  if (!(n.real() > 0.0) || n.imag() < 0.0 || !std::isfinite(n.imag()))
  {
    throw Error(ErrorCode::InvalidRefractionIndex,
                "n = (" + std::to_string(n.real()) + ", " + std::to_string(n.imag()) +
                    ") at (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                    ") violates Re n > 0, Im n >= 0");
  }
}

template <typename Local>
SparseComplexMatrix Scatter(const TriMesh &mesh, Local &&local)
{
  std::vector<Triplet> triplets;
  triplets.reserve(9 * mesh.triangles.size());
  for (const auto &t : mesh.triangles)
  {
    const LocalMatrix K =
        local(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
    for (int i = 0; i < 3; i++)
    {
      for (int j = 0; j < 3; j++)
      {
        triplets.emplace_back(t[i], t[j], K[i][j]);
      }
    }
  }
  const auto n = static_cast<Eigen::Index>(mesh.vertices.size());
  SparseComplexMatrix A(n, n);
  A.setFromTriplets(triplets.begin(), triplets.end());
  A.makeCompressed();
  return A;
}

}  // namespace

LocalMatrix LocalStiffness(const Point &a, const Point &b, const Point &c)
{
  const double area = CheckedArea(a, b, c);
  // grad phi_i is the inward normal of the opposite edge scaled by 1/(2 area).
  const std::array<Point, 3> p{a, b, c};
  std::array<std::array<double, 2>, 3> grad;
  for (int i = 0; i < 3; i++)
  {
    const Point &q = p[(i + 1) % 3], &r = p[(i + 2) % 3];
    grad[i] = {(q.y - r.y) / (2.0 * area), (r.x - q.x) / (2.0 * area)};
  }
  LocalMatrix K;
  for (int i = 0; i < 3; i++)
  {
    for (int j = 0; j < 3; j++)
    {
      K[i][j] = std::abs(area) * (grad[i][0] * grad[j][0] + grad[i][1] * grad[j][1]);
    }
  }
  return K;
}

LocalMatrix LocalMass(const Point &a, const Point &b, const Point &c,
                      const RefractionIndex &n)
{
  const double area = std::abs(CheckedArea(a, b, c));
  // Edge midpoints m01, m12, m20; at m01 the hats are (1/2, 1/2, 0), etc.
  const std::array<Point, 3> mid{Point{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)},
                                 Point{0.5 * (b.x + c.x), 0.5 * (b.y + c.y)},
                                 Point{0.5 * (c.x + a.x), 0.5 * (c.y + a.y)}};
  static constexpr double phi[3][3] = {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}};
  LocalMatrix M{};
  for (int q = 0; q < 3; q++)
  {
    const Complex nq = n(mid[q]);
    CheckRefraction(nq, mid[q]);
    const Complex w = nq * (area / 3.0);
    for (int i = 0; i < 3; i++)
    {
      for (int j = 0; j < 3; j++)
      {
        M[i][j] += w * (phi[q][i] * phi[q][j]);
      }
    }
  }
  return M;
}

SparseComplexMatrix AssembleStiffness(const TriMesh &mesh)
{
  return Scatter(mesh, [](const Point &a, const Point &b, const Point &c)
                 { return LocalStiffness(a, b, c); });
}

SparseComplexMatrix AssembleMass(const TriMesh &mesh, const RefractionIndex &n)
{
  if (auto value = n.Constant())
  {
    CheckRefraction(*value, Point{});
  }
  return Scatter(mesh, [&n](const Point &a, const Point &b, const Point &c)
                 { return LocalMass(a, b, c, n); });
}

SparseComplexMatrix AssembleBoundaryMass(const TriMesh &mesh)
{
  std::vector<Triplet> triplets;
  triplets.reserve(4 * mesh.boundary_edges.size());
  for (const auto &[a, b] : mesh.boundary_edges)
  {
    const Point &p = mesh.vertices[a], &q = mesh.vertices[b];
    const double len = std::hypot(q.x - p.x, q.y - p.y);
    triplets.emplace_back(a, a, len / 3.0);
    triplets.emplace_back(b, b, len / 3.0);
    triplets.emplace_back(a, b, len / 6.0);
    triplets.emplace_back(b, a, len / 6.0);
  }
  const auto n = static_cast<Eigen::Index>(mesh.vertices.size());
  SparseComplexMatrix M(n, n);
  M.setFromTriplets(triplets.begin(), triplets.end());
  M.makeCompressed();
  return M;
}

}  // namespace steklov
