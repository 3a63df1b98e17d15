// Copyright (c) The steklov authors.
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Links only the C interface in steklov.h.

#include <array>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>
#include <CLI11.hpp>
#include "steklov/steklov.h"

namespace
{

struct Failure
{
  int status;
};

void Check(int status)
{
  if (status != STEKLOV_OK)
  {
    std::fprintf(stderr, "error: %s\n", steklov_last_error());
    throw Failure{status};
  }
}

std::vector<double> SplitNumbers(const std::string &text, char sep)
{
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep))
  {
    if (!item.empty())
    {
      out.push_back(std::stod(item));
    }
  }
  return out;
}

std::array<double, 4> ParseRegion(const std::string &text)
{
  const auto v = SplitNumbers(text, ',');
  if (v.size() != 4 || !(v[1] > v[0]) || !(v[3] > v[2]))
  {
    throw CLI::ValidationError("--region", "expected re0,re1,im0,im1 with re0 < re1, im0 < im1");
  }
  return {v[0], v[1], v[2], v[3]};
}

std::array<double, 4> DefaultRegion(double n_im)
{
  if (n_im == 0.0)
  {
    return {-3.2, 5.5, -0.2, 0.2};
  }
  return {-3.0, 1.0, 0.0, 3.5};
}

template <typename T>
struct Handle
{
  T *ptr = nullptr;
  void (*destroy)(T *);
  explicit Handle(void (*d)(T *)) : destroy(d) {}
  ~Handle() { destroy(ptr); }
  Handle(const Handle &) = delete;
  Handle &operator=(const Handle &) = delete;
};

struct MeshArgs
{
  std::string domain = "disk";
  int level = 3;
  std::string mesh_file;
};

struct IndexArgs
{
  double k = 1.0;
  double n_re = 4.0;
  double n_im = 0.0;
};

void AddMeshArgs(CLI::App *cmd, MeshArgs &m, bool allow_file)
{
  cmd->add_option("--domain", m.domain, "disk | square | lshape")
      ->check(CLI::IsMember({"disk", "square", "lshape"}))
      ->capture_default_str();
  cmd->add_option("--level", m.level, "uniform refinement level (0..12)")
      ->capture_default_str();
  if (allow_file)
  {
    cmd->add_option("--mesh", m.mesh_file, "read the mesh from a JSON file instead");
  }
}

void AddIndexArgs(CLI::App *cmd, IndexArgs &a)
{
  cmd->add_option("--k", a.k, "wavenumber")->capture_default_str();
  cmd->add_option("--n-re", a.n_re, "real part of the refraction index")->capture_default_str();
  cmd->add_option("--n-im", a.n_im, "imaginary part of the refraction index")
      ->capture_default_str();
}

steklov_mesh *LoadMesh(const MeshArgs &m)
{
  steklov_mesh *mesh = nullptr;
  if (!m.mesh_file.empty())
  {
    Check(steklov_mesh_read_json(m.mesh_file.c_str(), &mesh));
  }
  else
  {
    Check(steklov_mesh_create(m.domain.c_str(), m.level, &mesh));
  }
  return mesh;
}

void PrintMeshSummary(const steklov_mesh *mesh)
{
  double h = 0.0, area = 0.0;
  int nv = 0, nb = 0;
  Check(steklov_mesh_stats(mesh, &h, &nv, &nb, &area));
  std::printf("vertices %d  boundary %d  h %.6g  area %.12g\n", nv, nb, h, area);
}

void Progress(int level, double h, size_t count, void *)
{
  std::printf("level %d  h %.6g  eigenvalues %zu\n", level, h, count);
  std::fflush(stdout);
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Steklov eigenvalues of the Helmholtz equation: P1 finite elements, a "
               "boundary Neumann-to-Dirichlet matrix and recursive contour-integral "
               "eigenvalue search.\n\nEnvironment: STEKLOV_THREADS caps the number of worker "
               "threads (default: hardware concurrency)."};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(steklov_version()));

  // mesh
  MeshArgs mesh_args;
  std::string mesh_out = "mesh.json";
  CLI::App *mesh_cmd = app.add_subcommand("mesh", "build a refined mesh and write it as JSON");
  AddMeshArgs(mesh_cmd, mesh_args, false);
  mesh_cmd->add_option("--out", mesh_out, "output JSON path")->capture_default_str();

  // assemble
  MeshArgs asm_mesh;
  IndexArgs asm_index;
  std::string asm_prefix = "";
  CLI::App *asm_cmd =
      app.add_subcommand("assemble", "write G, M_n and M_bd as Matrix Market text files");
  AddMeshArgs(asm_cmd, asm_mesh, true);
  AddIndexArgs(asm_cmd, asm_index);
  asm_cmd->add_option("--out-prefix", asm_prefix,
                      "prefix for <prefix>G.mtx, <prefix>Mn.mtx, <prefix>Mbd.mtx");

  // reduce
  MeshArgs red_mesh;
  IndexArgs red_index;
  std::string red_out = "ntd.bin";
  CLI::App *red_cmd = app.add_subcommand(
      "reduce", "factorize G - k^2 M_n and write the boundary NtD matrix (+ .json sidecar)");
  AddMeshArgs(red_cmd, red_mesh, true);
  AddIndexArgs(red_cmd, red_index);
  red_cmd->add_option("--out", red_out, "binary output path; sidecar is <out>.json")
      ->capture_default_str();

  // solve
  MeshArgs sol_mesh;
  IndexArgs sol_index;
  steklov_solve_options sol_opts;
  steklov_solve_options_default(&sol_opts);
  std::string sol_method = "srim", sol_plane = "lambda", sol_region, sol_out = "eigs.csv",
              sol_trace;
  CLI::App *sol_cmd = app.add_subcommand("solve", "locate eigenvalues in a rectangle");
  AddMeshArgs(sol_cmd, sol_mesh, true);
  AddIndexArgs(sol_cmd, sol_index);
  sol_cmd->add_option("--method", sol_method, "srim (NtD matrix) | rim (full pencil)")
      ->check(CLI::IsMember({"rim", "srim"}))
      ->capture_default_str();
  sol_cmd->add_option("--region", sol_region,
                      "re0,re1,im0,im1 (default [-3.2,5.5]x[-0.2,0.2] for real n, "
                      "[-3,1]x[0,3.5] otherwise)");
  sol_cmd->add_option("--plane", sol_plane, "plane of the region and output: lambda | mu")
      ->check(CLI::IsMember({"lambda", "mu"}))
      ->capture_default_str();
  sol_cmd->add_option("--d0", sol_opts.d0, "smallest box size")->capture_default_str();
  sol_cmd->add_option("--delta0", sol_opts.delta0, "indicator threshold")
      ->capture_default_str();
  sol_cmd->add_option("--quad-nodes", sol_opts.quad_nodes, "Gauss-Legendre nodes per edge")
      ->capture_default_str();
  sol_cmd->add_option("--seed", sol_opts.seed, "seed of the random vector g")
      ->capture_default_str();
  sol_cmd->add_option("--out", sol_out, "eigenvalue CSV")->capture_default_str();
  sol_cmd->add_option("--trace", sol_trace, "exploration trace JSON (optional)");

  // reference
  IndexArgs ref_index;
  int ref_mmax = 10;
  std::string ref_region = "-3,6,-0.1,0.1", ref_out = "ref.csv", ref_sweep,
              sweep_out = "sweep.csv";
  CLI::App *ref_cmd =
      app.add_subcommand("reference", "exact disk eigenvalues from Bessel functions");
  AddIndexArgs(ref_cmd, ref_index);
  ref_cmd->add_option("--mmax", ref_mmax, "largest angular order (<= 200)")
      ->capture_default_str();
  ref_cmd->add_option("--region", ref_region, "re0,re1,im0,im1")->capture_default_str();
  ref_cmd->add_option("--out", ref_out, "reference CSV")->capture_default_str();
  ref_cmd->add_option("--sweep", ref_sweep,
                      "n0,n1,steps: also write lambda_m(n) for real n (columns m, n, re, im, "
                      "pole)");
  ref_cmd->add_option("--sweep-out", sweep_out, "sweep CSV")->capture_default_str();

  // convergence
  steklov_convergence_options conv_opts;
  steklov_convergence_options_default(&conv_opts);
  std::string conv_domain = "disk", conv_levels = "3..6", conv_region, conv_method = "srim",
              conv_out = "out";
  IndexArgs conv_index;
  CLI::App *conv_cmd = app.add_subcommand(
      "convergence", "run a refinement study and write tables, errors, rates and the trace");
  conv_cmd->add_option("--domain", conv_domain, "disk | square | lshape")
      ->check(CLI::IsMember({"disk", "square", "lshape"}))
      ->capture_default_str();
  conv_cmd->add_option("--levels", conv_levels, "level range a..b")->capture_default_str();
  AddIndexArgs(conv_cmd, conv_index);
  conv_cmd->add_option("--region", conv_region,
                       "re0,re1,im0,im1 (default [-3.2,5.5]x[-0.2,0.2] for real n, "
                       "[-3,1]x[0,3.5] otherwise)");
  conv_cmd->add_option("--method", conv_method, "srim | rim")
      ->check(CLI::IsMember({"rim", "srim"}))
      ->capture_default_str();
  conv_cmd->add_option("--d0", conv_opts.d0, "smallest box size")->capture_default_str();
  conv_cmd->add_option("--delta0", conv_opts.delta0, "indicator threshold")
      ->capture_default_str();
  conv_cmd->add_option("--quad-nodes", conv_opts.quad_nodes, "Gauss-Legendre nodes per edge")
      ->capture_default_str();
  conv_cmd->add_option("--seed", conv_opts.seed, "seed of the random vector g")
      ->capture_default_str();
  conv_cmd->add_option("--out", conv_out, "output directory")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try
  {
    if (*mesh_cmd)
    {
      Handle<steklov_mesh> mesh(steklov_mesh_destroy);
      Check(steklov_mesh_create(mesh_args.domain.c_str(), mesh_args.level, &mesh.ptr));
      Check(steklov_mesh_write_json(mesh.ptr, mesh_out.c_str()));
      PrintMeshSummary(mesh.ptr);
    }
    else if (*asm_cmd)
    {
      Handle<steklov_mesh> mesh(steklov_mesh_destroy);
      mesh.ptr = LoadMesh(asm_mesh);
      Handle<steklov_problem> problem(steklov_problem_destroy);
      Check(steklov_problem_create(mesh.ptr, asm_index.k, asm_index.n_re, asm_index.n_im,
                                   &problem.ptr));
      Check(steklov_problem_write_matrices(problem.ptr, (asm_prefix + "G.mtx").c_str(),
                                           (asm_prefix + "Mn.mtx").c_str(),
                                           (asm_prefix + "Mbd.mtx").c_str()));
      PrintMeshSummary(mesh.ptr);
    }
    else if (*red_cmd)
    {
      Handle<steklov_mesh> mesh(steklov_mesh_destroy);
      mesh.ptr = LoadMesh(red_mesh);
      Handle<steklov_problem> problem(steklov_problem_destroy);
      Check(steklov_problem_create(mesh.ptr, red_index.k, red_index.n_re, red_index.n_im,
                                   &problem.ptr));
      int dim = 0, warning = 0;
      double rcond = 0.0;
      Check(steklov_problem_build_ntd(problem.ptr, &dim, &rcond, &warning));
      Check(steklov_problem_write_ntd(problem.ptr, red_out.c_str(), (red_out + ".json").c_str()));
      std::printf("NtD matrix %d x %d  rcond %.3g%s\n", dim, dim, rcond,
                  warning ? "  (warning: k^2 is close to a Neumann eigenvalue)" : "");
    }
    else if (*sol_cmd)
    {
      const auto region =
          sol_region.empty() ? DefaultRegion(sol_index.n_im) : ParseRegion(sol_region);
      sol_opts.method = sol_method.c_str();
      sol_opts.plane = sol_plane.c_str();
      sol_opts.re0 = region[0];
      sol_opts.re1 = region[1];
      sol_opts.im0 = region[2];
      sol_opts.im1 = region[3];
      sol_opts.record_trace = sol_trace.empty() ? 0 : 1;
      Handle<steklov_mesh> mesh(steklov_mesh_destroy);
      mesh.ptr = LoadMesh(sol_mesh);
      Handle<steklov_problem> problem(steklov_problem_destroy);
      Check(steklov_problem_create(mesh.ptr, sol_index.k, sol_index.n_re, sol_index.n_im,
                                   &problem.ptr));
      Handle<steklov_eigs> eigs(steklov_eigs_destroy);
      Check(steklov_solve(problem.ptr, &sol_opts, &eigs.ptr));
      Check(steklov_eigs_write_csv(eigs.ptr, sol_out.c_str()));
      if (!sol_trace.empty())
      {
        Check(steklov_eigs_write_trace(eigs.ptr, sol_trace.c_str()));
      }
      const size_t count = steklov_eigs_count(eigs.ptr);
      std::printf("%zu eigenvalue location(s), %llu indicator evaluations\n", count,
                  static_cast<unsigned long long>(steklov_eigs_indicator_evaluations(eigs.ptr)));
      for (size_t i = 0; i < count; i++)
      {
        double re = 0.0, im = 0.0, res = 0.0;
        int depth = 0;
        Check(steklov_eigs_get(eigs.ptr, i, &re, &im, &res, &depth));
        std::printf("  %+.10f %+.10fi   residual %.2e\n", re, im, res);
      }
    }
    else if (*ref_cmd)
    {
      const auto region = ParseRegion(ref_region);
      size_t count = 0;
      Check(steklov_reference_write(ref_index.k, ref_index.n_re, ref_index.n_im, ref_mmax,
                                    region[0], region[1], region[2], region[3],
                                    ref_out.c_str(), &count));
      std::printf("%zu mode(s) in region written to %s\n", count, ref_out.c_str());
      if (!ref_sweep.empty())
      {
        const auto s = SplitNumbers(ref_sweep, ',');
        if (s.size() != 3)
        {
          throw CLI::ValidationError("--sweep", "expected n0,n1,steps");
        }
        Check(steklov_sweep_write(ref_index.k, s[0], s[1], static_cast<int>(s[2]), ref_mmax,
                                  sweep_out.c_str()));
        std::printf("sweep written to %s\n", sweep_out.c_str());
      }
    }
    else if (*conv_cmd)
    {
      const auto dots = conv_levels.find("..");
      if (dots == std::string::npos)
      {
        throw CLI::ValidationError("--levels", "expected a..b");
      }
      conv_opts.level_min = std::stoi(conv_levels.substr(0, dots));
      conv_opts.level_max = std::stoi(conv_levels.substr(dots + 2));
      conv_opts.domain = conv_domain.c_str();
      conv_opts.method = conv_method.c_str();
      conv_opts.k = conv_index.k;
      conv_opts.n_re = conv_index.n_re;
      conv_opts.n_im = conv_index.n_im;
      if (!conv_region.empty())
      {
        const auto region = ParseRegion(conv_region);
        conv_opts.use_default_region = 0;
        conv_opts.re0 = region[0];
        conv_opts.re1 = region[1];
        conv_opts.im0 = region[2];
        conv_opts.im1 = region[3];
      }
      Handle<steklov_convergence> conv(steklov_convergence_destroy);
      Check(steklov_convergence_run(&conv_opts, conv_out.c_str(), Progress, nullptr, &conv.ptr));
      const size_t modes = steklov_convergence_modes(conv.ptr);
      for (size_t i = 0; i < modes; i++)
      {
        double re = 0.0, im = 0.0, rate = 0.0;
        Check(steklov_convergence_rate(conv.ptr, i, &re, &im, &rate));
        std::printf("mode %zu  reference %+.8f %+.8fi  rate %.3f\n", i + 1, re, im, rate);
      }
      std::printf("outputs in %s/\n", conv_out.c_str());
    }
  }
  catch (const Failure &f)
  {
    return f.status;
  }
  catch (const CLI::Error &e)
  {
    return app.exit(e);
  }
  catch (const std::exception &e)
  {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
