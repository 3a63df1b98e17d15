// Copyright (c) The steklov authors.
// SPDX-License-Identifier: Apache-2.0

#include "steklov/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include "steklov/error.hpp"

namespace steklov
{

namespace
{

using Edge = std::pair<int, int>;

Edge Key(int a, int b)
{
  return a < b ? Edge{a, b} : Edge{b, a};
}

void CloseBoundaryLoop(TriMesh &mesh)
{
  const auto m = mesh.boundary_vertices.size();
  mesh.boundary_edges.clear();
  mesh.boundary_edges.reserve(m);
  for (std::size_t i = 0; i < m; i++)
  {
    mesh.boundary_edges.emplace_back(mesh.boundary_vertices[i],
                                     mesh.boundary_vertices[(i + 1) % m]);
  }
}

TriMesh CoarseSquare()
{
  TriMesh mesh;
  mesh.domain = DomainTag::Square;
  mesh.vertices = {{0.0, 0.0}, {0.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}};
  mesh.triangles = {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 1}};
  mesh.boundary_vertices = {1, 2, 3, 4};
  CloseBoundaryLoop(mesh);
  return mesh;
}

TriMesh CoarseDisk()
{
  TriMesh mesh;
  mesh.domain = DomainTag::Disk;
  mesh.vertices.push_back({0.0, 0.0});
  for (int j = 0; j < 8; j++)
  {
    const double t = 2.0 * std::numbers::pi * j / 8.0;
    mesh.vertices.push_back({std::cos(t), std::sin(t)});
    mesh.boundary_vertices.push_back(j + 1);
  }
  for (int j = 0; j < 8; j++)
  {
    mesh.triangles.push_back({0, j + 1, (j + 1) % 8 + 1});
  }
  CloseBoundaryLoop(mesh);
  return mesh;
}

// (-0.9, 1.1) x (-1.1, 0.9) minus [0.1, 1.1] x [-1.1, -0.1]: three unit squares on
// the grid x in {-0.9, 0.1, 1.1}, y in {-1.1, -0.1, 0.9}, each cut along its
// lower-left to upper-right diagonal.
TriMesh CoarseLShape()
{
  TriMesh mesh;
  mesh.domain = DomainTag::LShape;
  mesh.vertices = {
      {-0.9, -1.1},  // 0
      {0.1, -1.1},   // 1
      {-0.9, -0.1},  // 2
      {0.1, -0.1},   // 3
      {1.1, -0.1},   // 4
      {-0.9, 0.9},   // 5
      {0.1, 0.9},    // 6
      {1.1, 0.9},    // 7
  };
  mesh.triangles = {
      {0, 1, 3}, {0, 3, 2},  // bottom-left square
      {2, 3, 6}, {2, 6, 5},  // top-left square
      {3, 4, 7}, {3, 7, 6},  // top-right square
  };
  mesh.boundary_vertices = {0, 1, 3, 4, 7, 6, 5, 2};
  CloseBoundaryLoop(mesh);
  return mesh;
}

}  // namespace

std::string_view DomainName(DomainTag tag)
{
  switch (tag)
  {
    case DomainTag::Disk:
      return "disk";
    case DomainTag::Square:
      return "square";
    case DomainTag::LShape:
      return "lshape";
  }
  return "unknown";
}

DomainTag ParseDomain(std::string_view name)
{
  if (name == "disk")
  {
    return DomainTag::Disk;
  }
  if (name == "square")
  {
    return DomainTag::Square;
  }
  if (name == "lshape")
  {
    return DomainTag::LShape;
  }
  throw Error(ErrorCode::UnknownDomain, "unknown domain '" + std::string(name) + "'");
}

double SignedArea(const Point &a, const Point &b, const Point &c)
{
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

TriMesh MakeMesh(DomainTag domain, int level)
{
  if (level < 0)
  {
    throw Error(ErrorCode::InvalidArgument, "mesh level must be non-negative");
  }
  if (level > kMaxMeshLevel)
  {
    throw Error(ErrorCode::LevelOverCap, "mesh level " + std::to_string(level) +
                                             " exceeds the cap " +
                                             std::to_string(kMaxMeshLevel));
  }
  TriMesh mesh;
  switch (domain)
  {
    case DomainTag::Disk:
      mesh = CoarseDisk();
      break;
    case DomainTag::Square:
      mesh = CoarseSquare();
      break;
    case DomainTag::LShape:
      mesh = CoarseLShape();
      break;
    default:
      throw Error(ErrorCode::UnknownDomain, "unknown domain tag");
  }
  for (int l = 0; l < level; l++)
  {
    mesh = RefineUniform(mesh);
  }
  return mesh;
}

TriMesh RefineUniform(const TriMesh &mesh)
{
  if (mesh.level >= kMaxMeshLevel)
  {
    throw Error(ErrorCode::LevelOverCap, "refinement beyond level cap");
  }
  TriMesh fine;
  fine.domain = mesh.domain;
  fine.level = mesh.level + 1;
  fine.vertices = mesh.vertices;
  fine.vertices.reserve(mesh.vertices.size() + 3 * mesh.triangles.size() / 2 +
                        mesh.boundary_edges.size());

  std::set<Edge> boundary;
  for (const auto &[a, b] : mesh.boundary_edges)
  {
    boundary.insert(Key(a, b));
  }

  std::map<Edge, int> midpoint;
  auto midpoint_of = [&](int a, int b)
  {
    const Edge key = Key(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end())
    {
      return it->second;
    }
    Point p{0.5 * (mesh.vertices[a].x + mesh.vertices[b].x),
            0.5 * (mesh.vertices[a].y + mesh.vertices[b].y)};
    if (mesh.domain == DomainTag::Disk && boundary.count(key))
    {
      const double r = std::hypot(p.x, p.y);
      p.x /= r;
      p.y /= r;
    }
    const int id = static_cast<int>(fine.vertices.size());
    fine.vertices.push_back(p);
    midpoint.emplace(key, id);
    return id;
  };

  fine.triangles.reserve(4 * mesh.triangles.size());
  for (const auto &[v0, v1, v2] : mesh.triangles)
  {
    const int m01 = midpoint_of(v0, v1);
    const int m12 = midpoint_of(v1, v2);
    const int m20 = midpoint_of(v2, v0);
    fine.triangles.push_back({v0, m01, m20});
    fine.triangles.push_back({m01, v1, m12});
    fine.triangles.push_back({m20, m12, v2});
    fine.triangles.push_back({m01, m12, m20});
  }

  fine.boundary_vertices.reserve(2 * mesh.boundary_vertices.size());
  for (const auto &[a, b] : mesh.boundary_edges)
  {
    fine.boundary_vertices.push_back(a);
    fine.boundary_vertices.push_back(midpoint.at(Key(a, b)));
  }
  CloseBoundaryLoop(fine);
  return fine;
}

int CountEdges(const TriMesh &mesh)
{
  std::set<Edge> edges;
  for (const auto &t : mesh.triangles)
  {
    for (int i = 0; i < 3; i++)
    {
      edges.insert(Key(t[i], t[(i + 1) % 3]));
    }
  }
  return static_cast<int>(edges.size());
}

double Perimeter(const TriMesh &mesh)
{
  double p = 0.0;
  for (const auto &[a, b] : mesh.boundary_edges)
  {
    p += std::hypot(mesh.vertices[b].x - mesh.vertices[a].x,
                    mesh.vertices[b].y - mesh.vertices[a].y);
  }
  return p;
}

MeshStats ComputeMeshStats(const TriMesh &mesh)
{
  MeshStats stats;
  stats.num_vertices = static_cast<int>(mesh.vertices.size());
  stats.num_boundary_vertices = static_cast<int>(mesh.boundary_vertices.size());
  for (const auto &t : mesh.triangles)
  {
    const Point &a = mesh.vertices[t[0]], &b = mesh.vertices[t[1]], &c = mesh.vertices[t[2]];
    stats.area += SignedArea(a, b, c);
    for (int i = 0; i < 3; i++)
    {
      const Point &p = mesh.vertices[t[i]], &q = mesh.vertices[t[(i + 1) % 3]];
      stats.h = std::max(stats.h, std::hypot(q.x - p.x, q.y - p.y));
    }
  }
  return stats;
}

void ValidateMesh(const TriMesh &mesh)
{
  const int nv = static_cast<int>(mesh.vertices.size());
  auto fail = [](const std::string &msg) { throw Error(ErrorCode::InvalidArgument, msg); };

  std::map<Edge, int> edge_use;
  for (std::size_t e = 0; e < mesh.triangles.size(); e++)
  {
    const auto &t = mesh.triangles[e];
    for (int i = 0; i < 3; i++)
    {
      if (t[i] < 0 || t[i] >= nv)
      {
        fail("triangle " + std::to_string(e) + " references a missing vertex");
      }
      edge_use[Key(t[i], t[(i + 1) % 3])]++;
    }
    if (!(SignedArea(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]) > 0.0))
    {
      fail("triangle " + std::to_string(e) + " is not positively oriented");
    }
  }

  // Boundary = edges used by exactly one triangle; they must match the stored loop.
  std::set<Edge> single;
  for (const auto &[edge, count] : edge_use)
  {
    if (count == 1)
    {
      single.insert(edge);
    }
    else if (count != 2)
    {
      fail("edge shared by more than two triangles");
    }
  }
  const auto m = mesh.boundary_vertices.size();
  if (m < 3 || mesh.boundary_edges.size() != m || single.size() != m)
  {
    fail("boundary loop does not match the single-use edges");
  }
  std::set<int> seen;
  for (std::size_t i = 0; i < m; i++)
  {
    const auto &[a, b] = mesh.boundary_edges[i];
    if (a != mesh.boundary_vertices[i] || b != mesh.boundary_vertices[(i + 1) % m])
    {
      fail("boundary edges are not a closed loop through boundary_vertices");
    }
    if (!single.count(Key(a, b)) || !seen.insert(a).second)
    {
      fail("boundary loop is not simple");
    }
  }

  const int euler = nv - static_cast<int>(edge_use.size()) +
                    static_cast<int>(mesh.triangles.size());
  if (euler != 1)
  {
    fail("Euler characteristic " + std::to_string(euler) + " != 1");
  }

  if (mesh.domain == DomainTag::Disk)
  {
    for (int v : mesh.boundary_vertices)
    {
      const Point &p = mesh.vertices[v];
      if (std::abs(p.x * p.x + p.y * p.y - 1.0) > 1e-12)
      {
        fail("disk boundary vertex off the unit circle");
      }
    }
  }
}

}  // namespace steklov
