// Copyright (c) The steklov authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <gtest/gtest.h>
#include "steklov/steklov.h"

namespace
{

std::string TempPath(const std::string &name)
{
  const auto dir = std::filesystem::temp_directory_path() / "steklov_capi_test";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

TEST(CApi, StatusNamesAndLastError)
{
  EXPECT_STREQ(steklov_status_name(STEKLOV_OK), "Ok");
  EXPECT_STREQ(steklov_status_name(STEKLOV_ERR_UNKNOWN_DOMAIN), "UnknownDomain");
  EXPECT_STREQ(steklov_status_name(99), "Unknown");
  steklov_mesh *mesh = nullptr;
  EXPECT_EQ(steklov_mesh_create("circle", 1, &mesh), STEKLOV_ERR_UNKNOWN_DOMAIN);
  EXPECT_EQ(mesh, nullptr);
  EXPECT_NE(std::string(steklov_last_error()).find("circle"), std::string::npos);
  EXPECT_EQ(steklov_mesh_create("disk", 13, &mesh), STEKLOV_ERR_LEVEL_OVER_CAP);
  EXPECT_EQ(steklov_mesh_create(nullptr, 1, &mesh), STEKLOV_ERR_INVALID_ARGUMENT);
}

TEST(CApi, MeshProblemNtd)
{
  steklov_mesh *mesh = nullptr;
  ASSERT_EQ(steklov_mesh_create("square", 2, &mesh), STEKLOV_OK);
  double h = 0.0, area = 0.0;
  int nv = 0, nb = 0;
  ASSERT_EQ(steklov_mesh_stats(mesh, &h, &nv, &nb, &area), STEKLOV_OK);
  EXPECT_NEAR(h, std::sqrt(2.0) / 4.0, 1e-15);
  EXPECT_EQ(nv, 41);
  EXPECT_EQ(nb, 16);
  EXPECT_NEAR(area, 2.0, 1e-14);
  ASSERT_EQ(steklov_mesh_write_json(mesh, TempPath("m.json").c_str()), STEKLOV_OK);

  steklov_problem *problem = nullptr;
  EXPECT_EQ(steklov_problem_create(mesh, 1.0, -1.0, 0.0, &problem),
            STEKLOV_ERR_INVALID_REFRACTION_INDEX);
  ASSERT_EQ(steklov_problem_create(mesh, 1.0, 4.0, 0.0, &problem), STEKLOV_OK);
  ASSERT_EQ(steklov_problem_write_matrices(problem, TempPath("G.mtx").c_str(),
                                           TempPath("Mn.mtx").c_str(),
                                           TempPath("Mbd.mtx").c_str()),
            STEKLOV_OK);
  int dim = 0, warn = 1;
  double rcond = 0.0;
  ASSERT_EQ(steklov_problem_build_ntd(problem, &dim, &rcond, &warn), STEKLOV_OK);
  EXPECT_EQ(dim, 16);
  EXPECT_EQ(warn, 0);
  EXPECT_GT(rcond, 1e-8);
  ASSERT_EQ(steklov_problem_write_ntd(problem, TempPath("T.bin").c_str(),
                                      TempPath("T.bin.json").c_str()),
            STEKLOV_OK);
  EXPECT_EQ(std::filesystem::file_size(TempPath("T.bin")), 8u + 16u * 16u * 16u);
  steklov_problem_destroy(problem);
  steklov_mesh_destroy(mesh);
  steklov_mesh_destroy(nullptr);
}

TEST(CApi, SolveDisk)
{
  steklov_mesh *mesh = nullptr;
  ASSERT_EQ(steklov_mesh_create("disk", 3, &mesh), STEKLOV_OK);
  steklov_problem *problem = nullptr;
  ASSERT_EQ(steklov_problem_create(mesh, 1.0, 4.0, 0.0, &problem), STEKLOV_OK);
  steklov_solve_options opts;
  steklov_solve_options_default(&opts);
  opts.re0 = 4.0;
  opts.re1 = 6.0;
  opts.im0 = -0.5;
  opts.im1 = 0.5;
  steklov_eigs *eigs = nullptr;
  ASSERT_EQ(steklov_solve(problem, &opts, &eigs), STEKLOV_OK) << steklov_last_error();
  ASSERT_EQ(steklov_eigs_count(eigs), 1u);
  double re = 0.0, im = 0.0, res = 1.0;
  int depth = 0;
  ASSERT_EQ(steklov_eigs_get(eigs, 0, &re, &im, &res, &depth), STEKLOV_OK);
  EXPECT_NEAR(re, 5.151841, 0.15);
  EXPECT_LE(std::abs(im), 1e-8);
  EXPECT_LE(res, 1e-8);
  EXPECT_GT(depth, 0);
  EXPECT_GT(steklov_eigs_trace_size(eigs), 0u);
  EXPECT_GT(steklov_eigs_indicator_evaluations(eigs), 0u);
  EXPECT_EQ(steklov_eigs_get(eigs, 5, &re, &im, &res, &depth), STEKLOV_ERR_ARGUMENT_OUT_OF_RANGE);
  EXPECT_EQ(steklov_eigs_write_csv(eigs, TempPath("eigs.csv").c_str()), STEKLOV_OK);
  EXPECT_EQ(steklov_eigs_write_trace(eigs, TempPath("trace.json").c_str()), STEKLOV_OK);
  steklov_eigs_destroy(eigs);

  // The same eigenvalue searched in the mu plane is reported as mu.
  opts.plane = "mu";
  opts.re0 = -0.25;
  opts.re1 = -0.15;
  opts.im0 = -0.05;
  opts.im1 = 0.05;
  ASSERT_EQ(steklov_solve(problem, &opts, &eigs), STEKLOV_OK) << steklov_last_error();
  ASSERT_EQ(steklov_eigs_count(eigs), 1u);
  double mu = 0.0;
  ASSERT_EQ(steklov_eigs_get(eigs, 0, &mu, nullptr, nullptr, nullptr), STEKLOV_OK);
  EXPECT_NEAR(-1.0 / mu, re, 1e-10);
  steklov_eigs_destroy(eigs);

  opts.method = "bogus";
  EXPECT_EQ(steklov_solve(problem, &opts, &eigs), STEKLOV_ERR_INVALID_ARGUMENT);
  steklov_problem_destroy(problem);
  steklov_mesh_destroy(mesh);
}

TEST(CApi, Reference)
{
  double re = 0.0, im = 0.0;
  ASSERT_EQ(steklov_disk_lambda(1.0, 4.0, 4.0, 0, &re, &im), STEKLOV_OK);
  EXPECT_NEAR(re, -0.320506, 1e-6);
  EXPECT_NEAR(im, 3.124689, 1e-6);
  double jr = 0.0, ji = 0.0;
  ASSERT_EQ(steklov_bessel_j(0, 2.0, 0.0, &jr, &ji, nullptr, nullptr), STEKLOV_OK);
  EXPECT_NEAR(jr, 0.2238907791, 1e-9);
  EXPECT_EQ(steklov_bessel_j(0, 60.0, 0.0, &jr, &ji, nullptr, nullptr),
            STEKLOV_ERR_ARGUMENT_OUT_OF_RANGE);
  size_t count = 0;
  ASSERT_EQ(steklov_reference_write(1.0, 4.0, 0.0, 10, -3.0, 6.0, -0.1, 0.1,
                                    TempPath("ref.csv").c_str(), &count),
            STEKLOV_OK);
  EXPECT_EQ(count, 4u);
  EXPECT_EQ(steklov_sweep_write(1.0, 1.0, 16.0, 150, 3, TempPath("sweep.csv").c_str()),
            STEKLOV_OK);
}

TEST(CApi, Convergence)
{
  steklov_convergence_options opts;
  steklov_convergence_options_default(&opts);
  opts.domain = "square";
  opts.level_min = 1;
  opts.level_max = 3;
  opts.d0 = 1e-6;
  steklov_convergence *conv = nullptr;
  int calls = 0;
  ASSERT_EQ(steklov_convergence_run(
                &opts, TempPath("conv").c_str(),
                [](int, double, size_t, void *user) { ++*static_cast<int *>(user); }, &calls,
                &conv),
            STEKLOV_OK)
      << steklov_last_error();
  EXPECT_EQ(calls, 3);
  EXPECT_EQ(steklov_convergence_levels(conv), 3u);
  ASSERT_GT(steklov_convergence_modes(conv), 0u);
  double h = 0.0, re = 0.0, im = 0.0, rate = 0.0;
  EXPECT_EQ(steklov_convergence_value(conv, 2, 0, &h, &re, &im), STEKLOV_OK);
  EXPECT_EQ(steklov_convergence_rate(conv, 0, &re, &im, &rate), STEKLOV_OK);
  EXPECT_EQ(steklov_convergence_rate(conv, 99, &re, &im, &rate),
            STEKLOV_ERR_ARGUMENT_OUT_OF_RANGE);
  steklov_convergence_destroy(conv);

  opts.level_max = 2;
  EXPECT_EQ(steklov_convergence_run(&opts, nullptr, nullptr, nullptr, &conv),
            STEKLOV_ERR_INSUFFICIENT_LEVELS);
}

}  // namespace
