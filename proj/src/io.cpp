// Copyright (c) The steklov authors.
// SPDX-License-Identifier: Apache-2.0

#include "steklov/io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <json.hpp>

namespace steklov
{

namespace
{

using Json = nlohmann::json;

std::ofstream OpenOut(const std::string &path, bool binary = false)
{
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out)
  {
    throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  }
  return out;
}

std::ifstream OpenIn(const std::string &path, bool binary = false)
{
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in)
  {
    throw Error(ErrorCode::IoError, "cannot open '" + path + "' for reading");
  }
  return in;
}

void Finish(std::ofstream &out, const std::string &path)
{
  out.flush();
  if (!out)
  {
    throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
  }
}

Json ParseJson(const std::string &path)
{
  std::ifstream in = OpenIn(path);
  try
  {
    return Json::parse(in);
  }
  catch (const Json::exception &e)
  {
    throw Error(ErrorCode::IoError, "malformed JSON in '" + path + "': " + e.what());
  }
}

static_assert(std::endian::native == std::endian::little,
              "binary NtD files are written in native little-endian order");

}  // namespace

std::string FormatDouble(double x)
{
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void WriteMeshJson(const TriMesh &mesh, const std::string &path)
{
  Json j;
  j["vertices"] = Json::array();
  for (const Point &p : mesh.vertices)
  {
    j["vertices"].push_back({p.x, p.y});
  }
  j["triangles"] = Json::array();
  for (const auto &t : mesh.triangles)
  {
    j["triangles"].push_back({t[0], t[1], t[2]});
  }
  j["boundary"] = mesh.boundary_vertices;
  j["domain"] = std::string(DomainName(mesh.domain));
  j["level"] = mesh.level;
  std::ofstream out = OpenOut(path);
  out << j.dump() << '\n';
  Finish(out, path);
}

TriMesh ReadMeshJson(const std::string &path)
{
  const Json j = ParseJson(path);
  TriMesh mesh;
  try
  {
    for (const auto &v : j.at("vertices"))
    {
      mesh.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
    }
    for (const auto &t : j.at("triangles"))
    {
      mesh.triangles.push_back({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>()});
    }
    mesh.boundary_vertices = j.at("boundary").get<std::vector<int>>();
    mesh.domain = ParseDomain(j.at("domain").get<std::string>());
    mesh.level = j.at("level").get<int>();
  }
  catch (const Json::exception &e)
  {
    throw Error(ErrorCode::IoError, "bad mesh file '" + path + "': " + e.what());
  }
  const auto m = mesh.boundary_vertices.size();
  for (std::size_t i = 0; i < m; i++)
  {
    mesh.boundary_edges.emplace_back(mesh.boundary_vertices[i],
                                     mesh.boundary_vertices[(i + 1) % m]);
  }
  ValidateMesh(mesh);
  return mesh;
}

void WriteMatrixMarket(const SparseComplexMatrix &A, const std::string &path)
{
  std::ofstream out = OpenOut(path);
  out << "%%MatrixMarket matrix coordinate complex general\n";
  out << A.rows() << ' ' << A.cols() << ' ' << A.nonZeros() << '\n';
  for (Eigen::Index j = 0; j < A.outerSize(); j++)
  {
    for (SparseComplexMatrix::InnerIterator it(A, j); it; ++it)
    {
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << FormatDouble(it.value().real())
          << ' ' << FormatDouble(it.value().imag()) << '\n';
    }
  }
  Finish(out, path);
}

SparseComplexMatrix ReadMatrixMarket(const std::string &path)
{
  std::ifstream in = OpenIn(path);
  std::string line;
  do
  {
    if (!std::getline(in, line))
    {
      throw Error(ErrorCode::IoError, "'" + path + "' has no size line");
    }
  } while (!line.empty() && line[0] == '%');
  std::istringstream size(line);
  Eigen::Index rows = 0, cols = 0, nnz = 0;
  if (!(size >> rows >> cols >> nnz) || rows < 0 || cols < 0 || nnz < 0)
  {
    throw Error(ErrorCode::IoError, "bad size line in '" + path + "'");
  }
  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(static_cast<std::size_t>(nnz));
  for (Eigen::Index e = 0; e < nnz; e++)
  {
    Eigen::Index i = 0, j = 0;
    double re = 0.0, im = 0.0;
    if (!(in >> i >> j >> re >> im) || i < 1 || i > rows || j < 1 || j > cols)
    {
      throw Error(ErrorCode::IoError, "bad entry in '" + path + "'");
    }
    triplets.emplace_back(i - 1, j - 1, Complex(re, im));
  }
  SparseComplexMatrix A(rows, cols);
  A.setFromTriplets(triplets.begin(), triplets.end());
  return A;
}

void WriteDenseBinary(const DenseComplexMatrix &T, const std::string &path)
{
  if (T.rows() != T.cols())
  {
    throw Error(ErrorCode::InvalidArgument, "dense binary output expects a square matrix");
  }
  std::ofstream out = OpenOut(path, true);
  const auto m = static_cast<std::uint64_t>(T.rows());
  out.write(reinterpret_cast<const char *>(&m), sizeof(m));
  std::vector<double> row(2 * m);
  for (Eigen::Index i = 0; i < T.rows(); i++)
  {
    for (Eigen::Index j = 0; j < T.cols(); j++)
    {
      row[2 * j] = T(i, j).real();
      row[2 * j + 1] = T(i, j).imag();
    }
    out.write(reinterpret_cast<const char *>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(double)));
  }
  Finish(out, path);
}

DenseComplexMatrix ReadDenseBinary(const std::string &path)
{
  std::ifstream in = OpenIn(path, true);
  std::uint64_t m = 0;
  if (!in.read(reinterpret_cast<char *>(&m), sizeof(m)) || m > (1u << 20))
  {
    throw Error(ErrorCode::IoError, "bad dimension header in '" + path + "'");
  }
  const auto dim = static_cast<Eigen::Index>(m);
  DenseComplexMatrix T(dim, dim);
  std::vector<double> row(2 * m);
  for (Eigen::Index i = 0; i < dim; i++)
  {
    if (!in.read(reinterpret_cast<char *>(row.data()),
                 static_cast<std::streamsize>(row.size() * sizeof(double))))
    {
      throw Error(ErrorCode::IoError, "'" + path + "' is truncated");
    }
    for (Eigen::Index j = 0; j < dim; j++)
    {
      T(i, j) = Complex(row[2 * j], row[2 * j + 1]);
    }
  }
  return T;
}

void WriteNtdSidecar(const NtdMetadata &meta, const std::string &path)
{
  Json j;
  j["boundary"] = meta.boundary;
  j["k"] = meta.k;
  j["n"] = {meta.n.real(), meta.n.imag()};
  j["domain"] = std::string(DomainName(meta.domain));
  j["level"] = meta.level;
  std::ofstream out = OpenOut(path);
  out << j.dump(2) << '\n';
  Finish(out, path);
}

NtdMetadata ReadNtdSidecar(const std::string &path)
{
  const Json j = ParseJson(path);
  NtdMetadata meta;
  try
  {
    meta.boundary = j.at("boundary").get<std::vector<int>>();
    meta.k = j.at("k").get<double>();
    meta.n = Complex(j.at("n").at(0).get<double>(), j.at("n").at(1).get<double>());
    meta.domain = ParseDomain(j.at("domain").get<std::string>());
    meta.level = j.at("level").get<int>();
  }
  catch (const Json::exception &e)
  {
    throw Error(ErrorCode::IoError, "bad sidecar '" + path + "': " + e.what());
  }
  return meta;
}

void WriteEigsCsv(const std::vector<EigsRow> &rows, const std::string &path)
{
  std::ofstream out = OpenOut(path);
  out << "re,im,residual,depth,method\n";
  for (const EigsRow &r : rows)
  {
    out << FormatDouble(r.value.real()) << ',' << FormatDouble(r.value.imag()) << ','
        << FormatDouble(r.residual) << ',' << r.depth << ',' << r.method << '\n';
  }
  Finish(out, path);
}

void WriteTraceJson(const std::vector<TraceEntry> &trace, const std::string &path)
{
  Json j = Json::array();
  for (const TraceEntry &t : trace)
  {
    j.push_back({{"center_re", t.center.real()},
                 {"center_im", t.center.imag()},
                 {"half_width", t.half_width},
                 {"delta", t.delta},
                 {"depth", t.depth},
                 {"decision", std::string(TraceDecisionName(t.decision))}});
  }
  std::ofstream out = OpenOut(path);
  out << j.dump() << '\n';
  Finish(out, path);
}

void WriteReferenceCsv(const std::vector<DiskMode> &modes, const std::string &path)
{
  std::ofstream out = OpenOut(path);
  out << "m,multiplicity,re,im\n";
  for (const DiskMode &d : modes)
  {
    out << d.m << ',' << d.multiplicity << ',' << FormatDouble(d.lambda.real()) << ','
        << FormatDouble(d.lambda.imag()) << '\n';
  }
  Finish(out, path);
}

void WriteSweepCsv(const std::vector<SweepSample> &samples, const std::string &path)
{
  std::ofstream out = OpenOut(path);
  out << "m,n,re,im,pole\n";
  for (const SweepSample &s : samples)
  {
    out << s.m << ',' << FormatDouble(s.n) << ',' << FormatDouble(s.lambda.real()) << ','
        << FormatDouble(s.lambda.imag()) << ',' << (s.pole ? 1 : 0) << '\n';
  }
  Finish(out, path);
}

}  // namespace steklov
