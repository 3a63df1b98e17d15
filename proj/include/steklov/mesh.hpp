// Copyright (c) The steklov authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef STEKLOV_MESH_HPP
#define STEKLOV_MESH_HPP

#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace steklov
{

enum class DomainTag
{
  Disk,
  Square,
  LShape,
};

std::string_view DomainName(DomainTag tag);

// Throws Error(UnknownDomain) for anything other than disk, square or lshape.
DomainTag ParseDomain(std::string_view name);

struct Point
{
  double x = 0.0;
  double y = 0.0;
};

// Planar triangulation. Triangles are counterclockwise; the boundary is a single
// counterclockwise loop: boundary_edges[i] = (boundary_vertices[i],
// boundary_vertices[i + 1 mod M]).
struct TriMesh
{
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<std::pair<int, int>> boundary_edges;
  std::vector<int> boundary_vertices;
  DomainTag domain = DomainTag::Square;
  int level = 0;
};

struct MeshStats
{
  double h = 0.0;  // longest edge
  int num_vertices = 0;
  int num_boundary_vertices = 0;
  double area = 0.0;
};

inline constexpr int kMaxMeshLevel = 12;

// Coarse mesh of the given domain refined `level` times.
TriMesh MakeMesh(DomainTag domain, int level);

// Red refinement: every triangle split into four through its edge midpoints. New
// boundary midpoints of disk meshes are projected radially onto the unit circle.
TriMesh RefineUniform(const TriMesh &mesh);

MeshStats ComputeMeshStats(const TriMesh &mesh);

double SignedArea(const Point &a, const Point &b, const Point &c);

// Number of distinct undirected edges.
int CountEdges(const TriMesh &mesh);

double Perimeter(const TriMesh &mesh);

// Checks orientation, the boundary loop and the Euler relation; throws
// Error(InvalidArgument) describing the first violation found.
void ValidateMesh(const TriMesh &mesh);

}  // namespace steklov

#endif  // STEKLOV_MESH_HPP
