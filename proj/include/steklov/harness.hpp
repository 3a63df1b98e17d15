// Copyright (c) The steklov authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef STEKLOV_HARNESS_HPP
#define STEKLOV_HARNESS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>
#include "steklov/mesh.hpp"
#include "steklov/rim.hpp"
#include "steklov/types.hpp"

namespace steklov
{

enum class SolverMethod
{
  SRim,  // standard problem of the NtD matrix, mu = -1/lambda
  Rim,   // generalized problem (G - k^2 M_n, -M_bd) in the lambda plane
};

std::string_view MethodName(SolverMethod method);
SolverMethod ParseMethod(std::string_view name);

struct ExperimentSpec
{
  DomainTag domain = DomainTag::Disk;
  int level_min = 3;
  int level_max = 6;
  double k = 1.0;
  Complex n = 4.0;
  // Interpreted in `plane`. Harness results are always reported as lambda.
  Rect region{-3.2, 5.5, -0.2, 0.2};
  Plane plane = Plane::Lambda;
  SolverMethod method = SolverMethod::SRim;
  double d0 = 1e-8;
  double delta0 = 0.1;
  int quad_nodes = kDefaultQuadNodes;
  std::uint64_t seed = 1;
  bool record_trace = true;
};

// Defaults for a domain and index: levels 3..6, region [-3.2, 5.5] x [-0.2, 0.2] for
// real n and [-3, 1] x [0, 3.5] for complex n.
ExperimentSpec DefaultExperiment(DomainTag domain, Complex n);

// Throws InvalidArgument describing the first problem.
void ValidateExperiment(const ExperimentSpec &spec);

// True when n is real, so eigenvalues come in conjugate pairs and tables are
// ordered by decreasing real part (otherwise by decreasing imaginary part).
bool IsRealIndex(Complex n);

// Number of table columns: 6 for real n, 4 for complex n.
int TableWidth(Complex n);

struct EigenEstimate
{
  Complex lambda;
  // Full-system relative residual ||A x + lambda M_bd x|| /
  // ((||A||_1 + |lambda| ||M_bd||_1) ||x||) of the lifted eigenvector.
  double residual = 0.0;
  // Residual of the refined pair in the solver's own problem.
  double solver_residual = 0.0;
  int depth = 0;
  bool converged = true;
};

struct LevelResult
{
  int level = 0;
  MeshStats stats;
  double rcond = 0.0;
  bool condition_warning = false;
  // Distinct eigenvalue locations inside the region, in table order.
  std::vector<EigenEstimate> eigenvalues;
  RimResult search;
  Plane search_plane = Plane::Mu;
  SolverMethod method = SolverMethod::SRim;
};

// Mesh, assemble, factorize, reduce, search and refine at one level. Errors are
// rethrown with the level prepended to the message.
LevelResult RunLevel(const ExperimentSpec &spec, int level);

// The same pipeline on a given mesh (spec.domain and the level range are ignored).
LevelResult SolveMesh(const ExperimentSpec &spec, const TriMesh &mesh);

// Levels run in increasing order; `progress` is called after each.
std::vector<LevelResult> RunExperiment(
    const ExperimentSpec &spec, const std::function<void(const LevelResult &)> &progress = {});

// Sort in place by the table convention for n.
void SortForTable(std::vector<Complex> &values, Complex n);

struct ConvergenceTable
{
  std::vector<int> levels;
  std::vector<double> h;
  // values[level][mode]: the computed location assigned to the mode's target. Each
  // location serves at most one target unless a level has fewer locations than
  // targets.
  std::vector<std::vector<Complex>> values;
  std::vector<Complex> reference;
  std::vector<std::vector<double>> errors;
  std::vector<double> rates;
  // Exact disk values when false, Richardson extrapolation when true.
  bool extrapolated = false;
};

// Least-squares slope of log(error) against log(h). Throws InsufficientLevels with
// fewer than 3 points and InvalidArgument for non-positive data.
double FitRate(const std::vector<double> &h, const std::vector<double> &errors);

// (4 lambda_h - lambda_2h) / 3 per mode.
std::vector<Complex> Richardson(const std::vector<Complex> &coarse,
                                const std::vector<Complex> &fine);

// Targets are the exact disk values (expanded by multiplicity) or the finest-level
// locations, truncated to TableWidth(n) in table order.
ConvergenceTable BuildConvergenceTable(const ExperimentSpec &spec,
                                       const std::vector<LevelResult> &results);

// table.csv, errors.csv, rates.csv, eigs_level<L>.csv per level and trace.json
// (finest level) under `dir`, which is created if needed.
void EmitOutputs(const std::string &dir, const ExperimentSpec &spec,
                 const std::vector<LevelResult> &results, const ConvergenceTable &table);

}  // namespace steklov

#endif  // STEKLOV_HARNESS_HPP
