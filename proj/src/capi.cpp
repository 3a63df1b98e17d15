// Copyright (c) The steklov authors.
// SPDX-License-Identifier: Apache-2.0

#include "steklov/steklov.h"

#include <memory>
#include <optional>
#include <string>
#include "steklov/assembly.hpp"
#include "steklov/harness.hpp"
#include "steklov/io.hpp"
#include "steklov/mesh.hpp"
#include "steklov/reduction.hpp"
#include "steklov/reference.hpp"

using namespace steklov;

struct steklov_mesh
{
  TriMesh mesh;
};

struct steklov_problem
{
  TriMesh mesh;
  double k = 1.0;
  Complex n;
  SparseComplexMatrix G, Mn, Mbd;
  std::optional<HelmholtzFactorization> fact;
  std::optional<NtdMatrix> ntd;
};

struct steklov_eigs
{
  std::vector<EigsRow> rows;
  std::vector<TraceEntry> trace;
  std::uint64_t evaluations = 0;
};

struct steklov_convergence
{
  ConvergenceTable table;
};

namespace
{

thread_local std::string last_error;

template <typename F>
int Guard(F &&f)
{
  try
  {
    f();
    return STEKLOV_OK;
  }
  catch (const Error &e)
  {
    last_error = e.what();
    return static_cast<int>(e.code());
  }
  catch (const std::bad_alloc &)
  {
    last_error = "Internal: out of memory";
  }
  catch (const std::exception &e)
  {
    last_error = std::string("Internal: ") + e.what();
  }
  catch (...)
  {
    last_error = "Internal: unknown exception";
  }
  return STEKLOV_ERR_INTERNAL;
}

template <typename T>
void Require(T *p, const char *what)
{
  if (p == nullptr)
  {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " is NULL");
  }
}

std::string Str(const char *s, const char *fallback)
{
  return s != nullptr ? std::string(s) : std::string(fallback);
}

void EnsureNtd(steklov_problem &p)
{
  if (!p.fact)
  {
    p.fact.emplace(p.G, p.Mn, p.k);
  }
  if (!p.ntd)
  {
    p.ntd = BuildNtd(*p.fact, p.Mbd, p.mesh.boundary_vertices);
  }
}

}  // namespace

extern "C" {

const char *steklov_version(void)
{
  return "0.1.0";
}

const char *steklov_status_name(int status)
{
  if (status == STEKLOV_OK)
  {
    return "Ok";
  }
  if (status < 1 || status > static_cast<int>(ErrorCode::Internal))
  {
    return "Unknown";
  }
  return ErrorCodeName(static_cast<ErrorCode>(status));
}

const char *steklov_last_error(void)
{
  return last_error.c_str();
}

int steklov_mesh_create(const char *domain, int level, steklov_mesh **out)
{
  return Guard(
      [&]
      {
        Require(domain, "domain");
        Require(out, "out");
        *out = nullptr;
        auto m = std::make_unique<steklov_mesh>();
        m->mesh = MakeMesh(ParseDomain(domain), level);
        *out = m.release();
      });
}

int steklov_mesh_read_json(const char *path, steklov_mesh **out)
{
  return Guard(
      [&]
      {
        Require(path, "path");
        Require(out, "out");
        *out = nullptr;
        auto m = std::make_unique<steklov_mesh>();
        m->mesh = ReadMeshJson(path);
        *out = m.release();
      });
}

void steklov_mesh_destroy(steklov_mesh *mesh)
{
  delete mesh;
}

int steklov_mesh_stats(const steklov_mesh *mesh, double *h, int *num_vertices,
                       int *num_boundary_vertices, double *area)
{
  return Guard(
      [&]
      {
        Require(mesh, "mesh");
        const MeshStats s = ComputeMeshStats(mesh->mesh);
        if (h)
        {
          *h = s.h;
        }
        if (num_vertices)
        {
          *num_vertices = s.num_vertices;
        }
        if (num_boundary_vertices)
        {
          *num_boundary_vertices = s.num_boundary_vertices;
        }
        if (area)
        {
          *area = s.area;
        }
      });
}

int steklov_mesh_write_json(const steklov_mesh *mesh, const char *path)
{
  return Guard(
      [&]
      {
        Require(mesh, "mesh");
        Require(path, "path");
        WriteMeshJson(mesh->mesh, path);
      });
}

int steklov_problem_create(const steklov_mesh *mesh, double k, double n_re, double n_im,
                           steklov_problem **out)
{
  return Guard(
      [&]
      {
        Require(mesh, "mesh");
        Require(out, "out");
        *out = nullptr;
        if (!(k > 0.0))
        {
          throw Error(ErrorCode::InvalidArgument, "k must be positive");
        }
        auto p = std::make_unique<steklov_problem>();
        p->mesh = mesh->mesh;
        p->k = k;
        p->n = Complex(n_re, n_im);
        p->G = AssembleStiffness(p->mesh);
        p->Mn = AssembleMass(p->mesh, RefractionIndex(p->n));
        p->Mbd = AssembleBoundaryMass(p->mesh);
        *out = p.release();
      });
}

void steklov_problem_destroy(steklov_problem *problem)
{
  delete problem;
}

int steklov_problem_write_matrices(const steklov_problem *problem, const char *g_path,
                                   const char *mn_path, const char *mbd_path)
{
  return Guard(
      [&]
      {
        Require(problem, "problem");
        Require(g_path, "g_path");
        Require(mn_path, "mn_path");
        Require(mbd_path, "mbd_path");
        WriteMatrixMarket(problem->G, g_path);
        WriteMatrixMarket(problem->Mn, mn_path);
        WriteMatrixMarket(problem->Mbd, mbd_path);
      });
}

int steklov_problem_build_ntd(steklov_problem *problem, int *dimension, double *rcond,
                              int *condition_warning)
{
  return Guard(
      [&]
      {
        Require(problem, "problem");
        EnsureNtd(*problem);
        if (dimension)
        {
          *dimension = static_cast<int>(problem->ntd->values.rows());
        }
        if (rcond)
        {
          *rcond = problem->fact->RcondEstimate();
        }
        if (condition_warning)
        {
          *condition_warning = problem->fact->ConditionWarning() ? 1 : 0;
        }
      });
}

int steklov_problem_write_ntd(steklov_problem *problem, const char *bin_path,
                              const char *json_path)
{
  return Guard(
      [&]
      {
        Require(problem, "problem");
        Require(bin_path, "bin_path");
        Require(json_path, "json_path");
        EnsureNtd(*problem);
        WriteDenseBinary(problem->ntd->values, bin_path);
        WriteNtdSidecar({problem->ntd->boundary, problem->k, problem->n, problem->mesh.domain,
                         problem->mesh.level},
                        json_path);
      });
}

void steklov_solve_options_default(steklov_solve_options *options)
{
  if (options == nullptr)
  {
    return;
  }
  const ExperimentSpec spec;
  options->method = "srim";
  options->plane = "lambda";
  options->re0 = spec.region.re0;
  options->re1 = spec.region.re1;
  options->im0 = spec.region.im0;
  options->im1 = spec.region.im1;
  options->d0 = spec.d0;
  options->delta0 = spec.delta0;
  options->quad_nodes = spec.quad_nodes;
  options->seed = spec.seed;
  options->record_trace = 1;
}

int steklov_solve(const steklov_problem *problem, const steklov_solve_options *options,
                  steklov_eigs **out)
{
  return Guard(
      [&]
      {
        Require(problem, "problem");
        Require(options, "options");
        Require(out, "out");
        *out = nullptr;
        ExperimentSpec spec;
        spec.domain = problem->mesh.domain;
        spec.level_min = spec.level_max = problem->mesh.level;
        spec.k = problem->k;
        spec.n = problem->n;
        spec.method = ParseMethod(Str(options->method, "srim"));
        spec.plane = ParsePlane(Str(options->plane, "lambda"));
        spec.region = {options->re0, options->re1, options->im0, options->im1};
        spec.d0 = options->d0;
        spec.delta0 = options->delta0;
        spec.quad_nodes = options->quad_nodes;
        spec.seed = options->seed;
        spec.record_trace = options->record_trace != 0;
        const LevelResult r = SolveMesh(spec, problem->mesh);

        auto e = std::make_unique<steklov_eigs>();
        for (const EigenEstimate &est : r.eigenvalues)
        {
          const Complex v = spec.plane == Plane::Lambda ? est.lambda : -1.0 / est.lambda;
          e->rows.push_back({v, est.residual, est.depth, std::string(MethodName(r.method))});
        }
        e->trace = r.search.trace;
        e->evaluations = r.search.indicator_evaluations;
        *out = e.release();
      });
}

void steklov_eigs_destroy(steklov_eigs *eigs)
{
  delete eigs;
}

size_t steklov_eigs_count(const steklov_eigs *eigs)
{
  return eigs ? eigs->rows.size() : 0;
}

int steklov_eigs_get(const steklov_eigs *eigs, size_t index, double *re, double *im,
                     double *residual, int *depth)
{
  return Guard(
      [&]
      {
        Require(eigs, "eigs");
        if (index >= eigs->rows.size())
        {
          throw Error(ErrorCode::ArgumentOutOfRange, "eigenvalue index out of range");
        }
        const EigsRow &r = eigs->rows[index];
        if (re)
        {
          *re = r.value.real();
        }
        if (im)
        {
          *im = r.value.imag();
        }
        if (residual)
        {
          *residual = r.residual;
        }
        if (depth)
        {
          *depth = r.depth;
        }
      });
}

size_t steklov_eigs_trace_size(const steklov_eigs *eigs)
{
  return eigs ? eigs->trace.size() : 0;
}

uint64_t steklov_eigs_indicator_evaluations(const steklov_eigs *eigs)
{
  return eigs ? eigs->evaluations : 0;
}

int steklov_eigs_write_csv(const steklov_eigs *eigs, const char *path)
{
  return Guard(
      [&]
      {
        Require(eigs, "eigs");
        Require(path, "path");
        WriteEigsCsv(eigs->rows, path);
      });
}

int steklov_eigs_write_trace(const steklov_eigs *eigs, const char *path)
{
  return Guard(
      [&]
      {
        Require(eigs, "eigs");
        Require(path, "path");
        WriteTraceJson(eigs->trace, path);
      });
}

int steklov_bessel_j(int m, double z_re, double z_im, double *j_re, double *j_im, double *dj_re,
                     double *dj_im)
{
  return Guard(
      [&]
      {
        const BesselEval b = BesselJ(m, Complex(z_re, z_im));
        if (j_re)
        {
          *j_re = b.value.real();
        }
        if (j_im)
        {
          *j_im = b.value.imag();
        }
        if (dj_re)
        {
          *dj_re = b.derivative.real();
        }
        if (dj_im)
        {
          *dj_im = b.derivative.imag();
        }
      });
}

int steklov_disk_lambda(double k, double n_re, double n_im, int m, double *re, double *im)
{
  return Guard(
      [&]
      {
        const Complex v = DiskExactLambda(k, Complex(n_re, n_im), m);
        if (re)
        {
          *re = v.real();
        }
        if (im)
        {
          *im = v.imag();
        }
      });
}

int steklov_reference_write(double k, double n_re, double n_im, int m_max, double re0,
                            double re1, double im0, double im1, const char *path,
                            size_t *count)
{
  return Guard(
      [&]
      {
        Require(path, "path");
        const auto modes =
            DiskExactInRegion(k, Complex(n_re, n_im), Rect{re0, re1, im0, im1}, m_max);
        WriteReferenceCsv(modes, path);
        if (count)
        {
          *count = modes.size();
        }
      });
}

int steklov_sweep_write(double k, double n0, double n1, int steps, int m_max, const char *path)
{
  return Guard(
      [&]
      {
        Require(path, "path");
        WriteSweepCsv(DiskSweep(k, n0, n1, steps, m_max), path);
      });
}

void steklov_convergence_options_default(steklov_convergence_options *options)
{
  if (options == nullptr)
  {
    return;
  }
  const ExperimentSpec spec;
  options->domain = "disk";
  options->level_min = spec.level_min;
  options->level_max = spec.level_max;
  options->k = spec.k;
  options->n_re = spec.n.real();
  options->n_im = spec.n.imag();
  options->use_default_region = 1;
  options->re0 = spec.region.re0;
  options->re1 = spec.region.re1;
  options->im0 = spec.region.im0;
  options->im1 = spec.region.im1;
  options->method = "srim";
  options->d0 = spec.d0;
  options->delta0 = spec.delta0;
  options->quad_nodes = spec.quad_nodes;
  options->seed = spec.seed;
}

int steklov_convergence_run(const steklov_convergence_options *options, const char *out_dir,
                            steklov_progress_fn progress, void *user, steklov_convergence **out)
{
  return Guard(
      [&]
      {
        Require(options, "options");
        Require(out, "out");
        *out = nullptr;
        const Complex n(options->n_re, options->n_im);
        ExperimentSpec spec = DefaultExperiment(ParseDomain(Str(options->domain, "disk")), n);
        spec.level_min = options->level_min;
        spec.level_max = options->level_max;
        spec.k = options->k;
        if (!options->use_default_region)
        {
          spec.region = {options->re0, options->re1, options->im0, options->im1};
        }
        spec.method = ParseMethod(Str(options->method, "srim"));
        spec.d0 = options->d0;
        spec.delta0 = options->delta0;
        spec.quad_nodes = options->quad_nodes;
        spec.seed = options->seed;
        const auto results = RunExperiment(
            spec,
            [&](const LevelResult &r)
            {
              if (progress)
              {
                progress(r.level, r.stats.h, r.eigenvalues.size(), user);
              }
            });
        auto c = std::make_unique<steklov_convergence>();
        c->table = BuildConvergenceTable(spec, results);
        if (out_dir != nullptr)
        {
          EmitOutputs(out_dir, spec, results, c->table);
        }
        *out = c.release();
      });
}

void steklov_convergence_destroy(steklov_convergence *conv)
{
  delete conv;
}

size_t steklov_convergence_modes(const steklov_convergence *conv)
{
  return conv ? conv->table.reference.size() : 0;
}

size_t steklov_convergence_levels(const steklov_convergence *conv)
{
  return conv ? conv->table.levels.size() : 0;
}

int steklov_convergence_value(const steklov_convergence *conv, size_t level_index, size_t mode,
                              double *h, double *re, double *im)
{
  return Guard(
      [&]
      {
        Require(conv, "conv");
        const ConvergenceTable &t = conv->table;
        if (level_index >= t.levels.size() || mode >= t.reference.size())
        {
          throw Error(ErrorCode::ArgumentOutOfRange, "level or mode index out of range");
        }
        if (h)
        {
          *h = t.h[level_index];
        }
        if (re)
        {
          *re = t.values[level_index][mode].real();
        }
        if (im)
        {
          *im = t.values[level_index][mode].imag();
        }
      });
}

int steklov_convergence_rate(const steklov_convergence *conv, size_t mode, double *ref_re,
                             double *ref_im, double *rate)
{
  return Guard(
      [&]
      {
        Require(conv, "conv");
        const ConvergenceTable &t = conv->table;
        if (mode >= t.reference.size())
        {
          throw Error(ErrorCode::ArgumentOutOfRange, "mode index out of range");
        }
        if (ref_re)
        {
          *ref_re = t.reference[mode].real();
        }
        if (ref_im)
        {
          *ref_im = t.reference[mode].imag();
        }
        if (rate)
        {
          *rate = t.rates[mode];
        }
      });
}

}  // extern "C"
