// Copyright (c) The steklov authors.
// SPDX-License-Identifier: Apache-2.0

#include "steklov/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include "steklov/assembly.hpp"
#include "steklov/io.hpp"
#include "steklov/reduction.hpp"
#include "steklov/reference.hpp"

namespace steklov
{

namespace
{

constexpr int kReferenceOrders = 60;
// Refined values closer than this (relative) are one location.
constexpr double kMergeTolerance = 1e-7;

const char *const kOrdinals[] = {"1st", "2nd", "3rd", "4th", "5th", "6th",
                                 "7th", "8th", "9th", "10th"};

std::string Ordinal(std::size_t i)
{
  return i < std::size(kOrdinals) ? kOrdinals[i] : std::to_string(i + 1) + "th";
}

[[noreturn]] void Rethrow(const Error &e, int level)
{
  throw Error(e.code(), "level " + std::to_string(level) + ": " + e.what());
}

double FullResidual(const SparseComplexMatrix &A, const SparseComplexMatrix &Mbd,
                    double norm_a, double norm_b, Complex lambda, const ComplexVector &x)
{
  const ComplexVector r = A * x + lambda * (Mbd * x);
  return r.norm() / ((norm_a + std::abs(lambda) * norm_b) * x.norm());
}

RefinedEigenpair RefineOrBest(const ResolventOracle &oracle, Complex start, bool &converged)
{
  try
  {
    converged = true;
    return RefineEigenpair(oracle, start);
  }
  catch (const NoConvergenceError &e)
  {
    converged = false;
    return e.Best();
  }
}

void SortEstimates(std::vector<EigenEstimate> &v, Complex n)
{
  const bool real = IsRealIndex(n);
  std::sort(v.begin(), v.end(),
            [real](const EigenEstimate &a, const EigenEstimate &b)
            {
              const Complex x = a.lambda, y = b.lambda;
              if (real)
              {
                return x.real() != y.real() ? x.real() > y.real() : x.imag() > y.imag();
              }
              return x.imag() != y.imag() ? x.imag() > y.imag() : x.real() > y.real();
            });
}

void MergeAndFilter(std::vector<EigenEstimate> &v, const ExperimentSpec &spec)
{
  std::vector<EigenEstimate> out;
  for (const EigenEstimate &e : v)
  {
    auto same = std::find_if(out.begin(), out.end(),
                             [&](const EigenEstimate &o)
                             {
                               return std::abs(o.lambda - e.lambda) <=
                                      kMergeTolerance * std::max(1.0, std::abs(e.lambda));
                             });
    if (same != out.end())
    {
      if (e.residual < same->residual)
      {
        *same = e;
      }
      continue;
    }
    out.push_back(e);
  }
  std::erase_if(out,
                [&](const EigenEstimate &e)
                {
                  const Complex z = spec.plane == Plane::Lambda ? e.lambda : -1.0 / e.lambda;
                  return !spec.region.Contains(z, 1e-10 * std::max(1.0, std::abs(z)));
                });
  v = std::move(out);
}

std::vector<Complex> Targets(const ExperimentSpec &spec, const std::vector<LevelResult> &results)
{
  std::vector<Complex> targets;
  if (spec.domain == DomainTag::Disk && spec.plane == Plane::Lambda)
  {
    targets = ExpandMultiplicity(
        DiskExactInRegion(spec.k, spec.n, spec.region, kReferenceOrders));
  }
  else
  {
    for (const EigenEstimate &e : results.back().eigenvalues)
    {
      targets.push_back(e.lambda);
    }
  }
  SortForTable(targets, spec.n);
  if (targets.size() > static_cast<std::size_t>(TableWidth(spec.n)))
  {
    targets.resize(TableWidth(spec.n));
  }
  return targets;
}

// Assigns distinct candidates to targets, maximizing the number of assigned targets and
// then minimizing the summed squared distance. On the real line this keeps the order of
// close pairs. Targets left over (fewer candidates than targets) take their nearest
// candidate.
std::vector<Complex> MatchToTargets(const std::vector<EigenEstimate> &candidates,
                                    const std::vector<Complex> &targets)
{
  const std::size_t t = targets.size();
  const std::size_t full = std::size_t{1} << t;
  struct State
  {
    int assigned = -1;
    double cost = 0.0;
  };
  auto better = [](const State &a, const State &b)
  { return a.assigned > b.assigned || (a.assigned == b.assigned && a.cost < b.cost); };

  // dp[i][mask]: best use of the first i candidates covering the targets in mask.
  std::vector<std::vector<State>> dp(candidates.size() + 1, std::vector<State>(full));
  std::vector<std::vector<int>> choice(candidates.size() + 1, std::vector<int>(full, -1));
  dp[0][0] = {0, 0.0};
  for (std::size_t i = 0; i < candidates.size(); i++)
  {
    for (std::size_t mask = 0; mask < full; mask++)
    {
      const State cur = dp[i][mask];
      if (cur.assigned < 0)
      {
        continue;
      }
      if (better(cur, dp[i + 1][mask]) || dp[i + 1][mask].assigned < 0)
      {
        dp[i + 1][mask] = cur;
        choice[i + 1][mask] = -1;
      }
      for (std::size_t j = 0; j < t; j++)
      {
        if (mask & (std::size_t{1} << j))
        {
          continue;
        }
        const std::size_t next = mask | (std::size_t{1} << j);
        const double d = std::abs(candidates[i].lambda - targets[j]);
        const State cand{cur.assigned + 1, cur.cost + d * d};
        if (dp[i + 1][next].assigned < 0 || better(cand, dp[i + 1][next]))
        {
          dp[i + 1][next] = cand;
          choice[i + 1][next] = static_cast<int>(j);
        }
      }
    }
  }

  std::size_t mask = 0;
  for (std::size_t m = 1; m < full; m++)
  {
    if (dp[candidates.size()][m].assigned >= 0 &&
        better(dp[candidates.size()][m], dp[candidates.size()][mask]))
    {
      mask = m;
    }
  }
  std::vector<Complex> row(t, Complex(std::numeric_limits<double>::quiet_NaN(), 0.0));
  std::vector<bool> done(t, false);
  for (std::size_t i = candidates.size(); i > 0; i--)
  {
    const int j = choice[i][mask];
    if (j >= 0)
    {
      row[j] = candidates[i - 1].lambda;
      done[j] = true;
      mask &= ~(std::size_t{1} << j);
    }
  }
  for (std::size_t j = 0; j < t; j++)
  {
    double dist = std::numeric_limits<double>::infinity();
    for (const EigenEstimate &e : candidates)
    {
      const double d = std::abs(e.lambda - targets[j]);
      if (!done[j] && d < dist)
      {
        dist = d;
        row[j] = e.lambda;
      }
    }
  }
  return row;
}

std::ofstream Open(const std::filesystem::path &p)
{
  std::ofstream out(p);
  if (!out)
  {
    throw Error(ErrorCode::IoError, "cannot open '" + p.string() + "' for writing");
  }
  return out;
}

}  // namespace

std::string_view MethodName(SolverMethod method)
{
  return method == SolverMethod::SRim ? "srim" : "rim";
}

SolverMethod ParseMethod(std::string_view name)
{
  if (name == "srim")
  {
    return SolverMethod::SRim;
  }
  if (name == "rim")
  {
    return SolverMethod::Rim;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown method '" + std::string(name) + "'");
}

bool IsRealIndex(Complex n)
{
  return n.imag() == 0.0;
}

int TableWidth(Complex n)
{
  return IsRealIndex(n) ? 6 : 4;
}

ExperimentSpec DefaultExperiment(DomainTag domain, Complex n)
{
  ExperimentSpec spec;
  spec.domain = domain;
  spec.n = n;
  spec.region = IsRealIndex(n) ? Rect{-3.2, 5.5, -0.2, 0.2} : Rect{-3.0, 1.0, 0.0, 3.5};
  return spec;
}

void ValidateExperiment(const ExperimentSpec &spec)
{
  if (spec.level_min < 0 || spec.level_max < spec.level_min)
  {
    throw Error(ErrorCode::InvalidArgument, "level range must be nonempty and increasing");
  }
  if (spec.level_max > kMaxMeshLevel)
  {
    throw Error(ErrorCode::LevelOverCap,
                "level " + std::to_string(spec.level_max) + " exceeds the cap " +
                    std::to_string(kMaxMeshLevel));
  }
  if (!spec.region.Valid())
  {
    throw Error(ErrorCode::InvalidArgument, "search region is empty");
  }
  if (!(spec.k > 0.0) || !std::isfinite(spec.k))
  {
    throw Error(ErrorCode::InvalidArgument, "k must be positive");
  }
  if (spec.method == SolverMethod::Rim && spec.plane != Plane::Lambda)
  {
    throw Error(ErrorCode::InvalidArgument, "the rim method searches the lambda plane");
  }
}

void SortForTable(std::vector<Complex> &values, Complex n)
{
  const bool real = IsRealIndex(n);
  std::sort(values.begin(), values.end(),
            [real](Complex x, Complex y)
            {
              if (real)
              {
                return x.real() != y.real() ? x.real() > y.real() : x.imag() > y.imag();
              }
              return x.imag() != y.imag() ? x.imag() > y.imag() : x.real() > y.real();
            });
}

LevelResult RunLevel(const ExperimentSpec &spec, int level)
{
  ValidateExperiment(spec);
  try
  {
    return SolveMesh(spec, MakeMesh(spec.domain, level));
  }
  catch (const Error &e)
  {
    Rethrow(e, level);
  }
}

LevelResult SolveMesh(const ExperimentSpec &spec, const TriMesh &mesh)
{
  ValidateExperiment(spec);
  LevelResult out;
  out.level = mesh.level;
  out.method = spec.method;
  out.stats = ComputeMeshStats(mesh);
  const SparseComplexMatrix G = AssembleStiffness(mesh);
  const SparseComplexMatrix Mn = AssembleMass(mesh, RefractionIndex(spec.n));
  const SparseComplexMatrix Mbd = AssembleBoundaryMass(mesh);
  const HelmholtzFactorization fact(G, Mn, spec.k);
  out.rcond = fact.RcondEstimate();
  out.condition_warning = fact.ConditionWarning();
  const SparseComplexMatrix &A = fact.Matrix();
  const double norm_a = OneNorm(A), norm_b = OneNorm(Mbd);

  RimOptions opts;
  opts.d0 = spec.d0;
  opts.delta0 = spec.delta0;
  opts.quad_nodes = spec.quad_nodes;
  opts.record_trace = spec.record_trace;

  if (spec.method == SolverMethod::Rim)
  {
    const SparsePencilOracle oracle(A, SparseComplexMatrix(-Mbd));
    const ComplexVector g = RandomVector(oracle.Dimension(), spec.seed);
    opts.plane = Plane::Lambda;
    out.search_plane = Plane::Lambda;
    out.search = SearchRect(oracle, spec.region, g, opts);
    for (const EigenRecord &rec : out.search.records)
    {
      bool converged = true;
      const RefinedEigenpair r = RefineOrBest(oracle, rec.value, converged);
      out.eigenvalues.push_back({r.value,
                                 FullResidual(A, Mbd, norm_a, norm_b, r.value, r.vector),
                                 r.residual, rec.depth, converged});
    }
  }
  else
  {
    const NtdMatrix T = BuildNtd(fact, Mbd, mesh.boundary_vertices);
    const SchurOracle oracle(T.values);
    const ComplexVector g = RandomVector(oracle.Dimension(), spec.seed);
    out.search_plane = Plane::Mu;
    if (spec.plane == Plane::Lambda)
    {
      out.search = SearchLambdaRectViaMu(oracle, spec.region, OneNorm(T.values), g, opts);
    }
    else
    {
      opts.plane = Plane::Mu;
      out.search = SearchRect(oracle, spec.region, g, opts);
    }
    const Eigen::Index n = A.rows();
    for (const EigenRecord &rec : out.search.records)
    {
      bool converged = true;
      const RefinedEigenpair r = RefineOrBest(oracle, rec.value, converged);
      if (r.value == Complex(0.0))
      {
        continue;
      }
      const Complex lambda = -1.0 / r.value;
      // u on the boundary lifts to x = A^{-1} M_bd ext(u), whose trace is mu u.
      const ComplexVector u = oracle.ToOriginal(r.vector);
      const ComplexVector x =
          fact.Solve(ComplexVector(Mbd * ExtendFromBoundary(u, T.boundary, n)));
      out.eigenvalues.push_back({lambda, FullResidual(A, Mbd, norm_a, norm_b, lambda, x),
                                 r.residual, rec.depth, converged});
    }
  }
  MergeAndFilter(out.eigenvalues, spec);
  SortEstimates(out.eigenvalues, spec.n);
  return out;
}

std::vector<LevelResult> RunExperiment(const ExperimentSpec &spec,
                                       const std::function<void(const LevelResult &)> &progress)
{
  ValidateExperiment(spec);
  std::vector<LevelResult> results;
  for (int level = spec.level_min; level <= spec.level_max; level++)
  {
    results.push_back(RunLevel(spec, level));
    if (progress)
    {
      progress(results.back());
    }
  }
  return results;
}

double FitRate(const std::vector<double> &h, const std::vector<double> &errors)
{
  if (h.size() != errors.size())
  {
    throw Error(ErrorCode::InvalidArgument, "h and error lists differ in length");
  }
  if (h.size() < 3)
  {
    throw Error(ErrorCode::InsufficientLevels, "a rate fit needs at least 3 levels");
  }
  const auto n = static_cast<double>(h.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < h.size(); i++)
  {
    if (!(h[i] > 0.0) || !(errors[i] > 0.0))
    {
      throw Error(ErrorCode::InvalidArgument, "rate fit needs positive h and errors");
    }
    const double x = std::log(h[i]), y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  if (!(std::abs(denom) > 0.0))
  {
    throw Error(ErrorCode::InvalidArgument, "rate fit needs distinct h values");
  }
  return (n * sxy - sx * sy) / denom;
}

std::vector<Complex> Richardson(const std::vector<Complex> &coarse,
                                const std::vector<Complex> &fine)
{
  if (coarse.size() != fine.size())
  {
    throw Error(ErrorCode::InvalidArgument, "Richardson inputs differ in length");
  }
  std::vector<Complex> out(fine.size());
  for (std::size_t i = 0; i < fine.size(); i++)
  {
    out[i] = (4.0 * fine[i] - coarse[i]) / 3.0;
  }
  return out;
}

ConvergenceTable BuildConvergenceTable(const ExperimentSpec &spec,
                                       const std::vector<LevelResult> &results)
{
  if (results.size() < 3)
  {
    throw Error(ErrorCode::InsufficientLevels, "convergence tables need at least 3 levels");
  }
  ConvergenceTable table;
  const std::vector<Complex> targets = Targets(spec, results);
  for (const LevelResult &r : results)
  {
    table.levels.push_back(r.level);
    table.h.push_back(r.stats.h);
    table.values.push_back(MatchToTargets(r.eigenvalues, targets));
  }
  table.extrapolated = !(spec.domain == DomainTag::Disk && spec.plane == Plane::Lambda);
  table.reference = table.extrapolated
                        ? Richardson(table.values[results.size() - 2], table.values.back())
                        : targets;
  for (const auto &row : table.values)
  {
    std::vector<double> err;
    for (std::size_t i = 0; i < row.size(); i++)
    {
      err.push_back(std::abs(row[i] - table.reference[i]));
    }
    table.errors.push_back(std::move(err));
  }
  for (std::size_t i = 0; i < targets.size(); i++)
  {
    std::vector<double> e;
    for (const auto &row : table.errors)
    {
      e.push_back(row[i]);
    }
    double rate = std::numeric_limits<double>::quiet_NaN();
    try
    {
      rate = FitRate(table.h, e);
    }
    catch (const Error &err)
    {
      if (err.code() != ErrorCode::InvalidArgument)
      {
        throw;
      }
    }
    table.rates.push_back(rate);
  }
  return table;
}

void EmitOutputs(const std::string &dir, const ExperimentSpec &spec,
                 const std::vector<LevelResult> &results, const ConvergenceTable &table)
{
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
  {
    throw Error(ErrorCode::IoError, "cannot create '" + dir + "': " + ec.message());
  }
  const fs::path root(dir);
  const bool real = IsRealIndex(spec.n);
  const std::size_t modes = table.reference.size();

  auto header = [&](std::ofstream &out)
  {
    out << "level,h";
    for (std::size_t i = 0; i < modes; i++)
    {
      if (real)
      {
        out << ',' << Ordinal(i);
      }
      else
      {
        out << ',' << Ordinal(i) << "_re," << Ordinal(i) << "_im";
      }
    }
    out << '\n';
  };

  {
    std::ofstream out = Open(root / "table.csv");
    header(out);
    for (std::size_t l = 0; l < table.values.size(); l++)
    {
      out << table.levels[l] << ',' << FormatDouble(table.h[l]);
      for (Complex v : table.values[l])
      {
        out << ',' << FormatDouble(v.real());
        if (!real)
        {
          out << ',' << FormatDouble(v.imag());
        }
      }
      out << '\n';
    }
  }
  {
    std::ofstream out = Open(root / "errors.csv");
    out << "level,h";
    for (std::size_t i = 0; i < modes; i++)
    {
      out << ',' << Ordinal(i);
    }
    out << '\n';
    for (std::size_t l = 0; l < table.errors.size(); l++)
    {
      out << table.levels[l] << ',' << FormatDouble(table.h[l]);
      for (double e : table.errors[l])
      {
        out << ',' << FormatDouble(e);
      }
      out << '\n';
    }
  }
  {
    std::ofstream out = Open(root / "rates.csv");
    out << "mode,reference_re,reference_im,reference_kind,rate\n";
    for (std::size_t i = 0; i < modes; i++)
    {
      out << Ordinal(i) << ',' << FormatDouble(table.reference[i].real()) << ','
          << FormatDouble(table.reference[i].imag()) << ','
          << (table.extrapolated ? "richardson" : "exact") << ','
          << FormatDouble(table.rates[i]) << '\n';
    }
  }
  for (const LevelResult &r : results)
  {
    std::vector<EigsRow> rows;
    for (const EigenEstimate &e : r.eigenvalues)
    {
      rows.push_back({e.lambda, e.residual, e.depth, std::string(MethodName(r.method))});
    }
    WriteEigsCsv(rows, (root / ("eigs_level" + std::to_string(r.level) + ".csv")).string());
  }
  if (!results.empty())
  {
    WriteTraceJson(results.back().search.trace, (root / "trace.json").string());
  }
}

}  // namespace steklov
