// Copyright (c) The steklov authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef STEKLOV_IO_HPP
#define STEKLOV_IO_HPP

#include <string>
#include <vector>
#include "steklov/mesh.hpp"
#include "steklov/reduction.hpp"
#include "steklov/reference.hpp"
#include "steklov/rim.hpp"
#include "steklov/types.hpp"

namespace steklov
{

// All writers throw Error(IoError) when the file cannot be written.

// {vertices: [[x,y]...], triangles: [[i,j,k]...], boundary: [i...], domain, level}.
void WriteMeshJson(const TriMesh &mesh, const std::string &path);
TriMesh ReadMeshJson(const std::string &path);

// Header line "%%MatrixMarket matrix coordinate complex general", the size line
// "rows cols nnz", then "row col re im" per stored entry with 1-based indices.
void WriteMatrixMarket(const SparseComplexMatrix &A, const std::string &path);
SparseComplexMatrix ReadMatrixMarket(const std::string &path);

// Little-endian uint64 dimension M, then M*M (re, im) float64 pairs row-major.
void WriteDenseBinary(const DenseComplexMatrix &T, const std::string &path);
DenseComplexMatrix ReadDenseBinary(const std::string &path);

struct NtdMetadata
{
  std::vector<int> boundary;
  double k = 1.0;
  Complex n;
  DomainTag domain = DomainTag::Disk;
  int level = 0;
};

void WriteNtdSidecar(const NtdMetadata &meta, const std::string &path);
NtdMetadata ReadNtdSidecar(const std::string &path);

struct EigsRow
{
  Complex value;
  double residual = 0.0;
  int depth = 0;
  std::string method;
};

// Columns re, im, residual, depth, method.
void WriteEigsCsv(const std::vector<EigsRow> &rows, const std::string &path);

// Array of {center_re, center_im, half_width, delta, depth, decision}.
void WriteTraceJson(const std::vector<TraceEntry> &trace, const std::string &path);

// Columns m, multiplicity, re, im.
void WriteReferenceCsv(const std::vector<DiskMode> &modes, const std::string &path);

// Columns m, n, re, im, pole.
void WriteSweepCsv(const std::vector<SweepSample> &samples, const std::string &path);

// Shortest decimal text that round-trips to the same double.
std::string FormatDouble(double x);

}  // namespace steklov

#endif  // STEKLOV_IO_HPP
