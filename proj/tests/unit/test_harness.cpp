// Copyright (c) The steklov authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <gtest/gtest.h>
#include "steklov/error.hpp"
#include "steklov/harness.hpp"
#include "steklov/reference.hpp"

namespace steklov
{
namespace
{

std::string ReadAll(const std::filesystem::path &path)
{
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string FirstLine(const std::filesystem::path &path)
{
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  return line;
}

ExperimentSpec SmallDisk(Complex n)
{
  ExperimentSpec spec = DefaultExperiment(DomainTag::Disk, n);
  spec.level_min = 2;
  spec.level_max = 4;
  spec.d0 = 1e-6;
  return spec;
}

TEST(FitRate, ExactPowerLaw)
{
  std::vector<double> h, e;
  for (int l = 0; l < 5; l++)
  {
    h.push_back(0.3 / std::pow(2.0, l));
    e.push_back(7.0 * h.back() * h.back());
  }
  EXPECT_NEAR(FitRate(h, e), 2.0, 1e-6);
}

TEST(FitRate, Errors)
{
  try
  {
    FitRate({0.1, 0.05}, {1e-2, 2.5e-3});
    ADD_FAILURE();
  }
  catch (const Error &err)
  {
    EXPECT_EQ(err.code(), ErrorCode::InsufficientLevels);
  }
  EXPECT_THROW(FitRate({0.1, 0.05, 0.025}, {1e-2, 0.0, 1e-3}), Error);
}

TEST(Richardson, RemovesSecondOrderTerm)
{
  const Complex exact(1.5, -0.5), c(0.3, 0.2);
  const double h = 0.1;
  const auto r = Richardson({exact + c * (4.0 * h * h)}, {exact + c * (h * h)});
  EXPECT_NEAR(std::abs(r[0] - exact), 0.0, 1e-15);
}

TEST(Ordering, TableConvention)
{
  std::vector<Complex> real{0.2, 5.1, -2.4, -1.2};
  SortForTable(real, 4.0);
  EXPECT_EQ(real, (std::vector<Complex>{5.1, 0.2, -1.2, -2.4}));
  std::vector<Complex> cplx{Complex(-1.3, 0.79), Complex(-0.3, 3.1), Complex(-0.1, 1.4)};
  SortForTable(cplx, Complex(4.0, 4.0));
  EXPECT_EQ(cplx[0], Complex(-0.3, 3.1));
  EXPECT_EQ(cplx[2], Complex(-1.3, 0.79));
  EXPECT_EQ(TableWidth(4.0), 6);
  EXPECT_EQ(TableWidth(Complex(4.0, 4.0)), 4);
}

TEST(ConvergenceTable, CloseCoarsePairKeepsOrder)
{
  // Finest-level pair -1.0856, -1.0915; at the coarse level the upper target is nearer
  // to both computed values, but each value may serve one mode only.
  ExperimentSpec spec = DefaultExperiment(DomainTag::Square, Complex(4.0));
  auto level = [](int l, double h, std::vector<double> values)
  {
    LevelResult r;
    r.level = l;
    r.stats.h = h;
    for (double v : values)
    {
      EigenEstimate e;
      e.lambda = v;
      r.eigenvalues.push_back(e);
    }
    return r;
  };
  const std::vector<LevelResult> results = {level(3, 0.4, {-1.1012, -1.1093}),
                                            level(4, 0.2, {-1.0893, -1.0957}),
                                            level(5, 0.1, {-1.0856, -1.0915})};
  const ConvergenceTable t = BuildConvergenceTable(spec, results);
  ASSERT_EQ(t.values[0].size(), 2u);
  EXPECT_EQ(t.values[0][0], Complex(-1.1012));
  EXPECT_EQ(t.values[0][1], Complex(-1.1093));
  EXPECT_EQ(t.values[1][0], Complex(-1.0893));
  EXPECT_EQ(t.values[1][1], Complex(-1.0957));
}

TEST(ConvergenceTable, FewerLocationsThanTargets)
{
  ExperimentSpec spec = DefaultExperiment(DomainTag::Disk, Complex(4.0));
  spec.region = {-1.5, 1.0, -0.2, 0.2};
  // Targets: exact 0.223578 (double) and -1.269100 (double).
  LevelResult r;
  r.stats.h = 0.1;
  for (double v : {0.2155, -1.2788})
  {
    EigenEstimate e;
    e.lambda = v;
    r.eigenvalues.push_back(e);
  }
  std::vector<LevelResult> results(3, r);
  for (int i = 0; i < 3; i++)
  {
    results[i].level = 3 + i;
    results[i].stats.h = 0.1 / (1 << i);
  }
  const ConvergenceTable t = BuildConvergenceTable(spec, results);
  ASSERT_EQ(t.values[0].size(), 4u);
  EXPECT_EQ(t.values[0][0], Complex(0.2155));
  EXPECT_EQ(t.values[0][1], Complex(0.2155));
  EXPECT_EQ(t.values[0][2], Complex(-1.2788));
  EXPECT_EQ(t.values[0][3], Complex(-1.2788));
}

TEST(Experiment, ValidatesExperimentSpec)
{
  ExperimentSpec spec;
  spec.level_min = 4;
  spec.level_max = 3;
  EXPECT_THROW(ValidateExperiment(spec), Error);
  spec.level_max = 13;
  try
  {
    ValidateExperiment(spec);
    ADD_FAILURE();
  }
  catch (const Error &e)
  {
    EXPECT_EQ(e.code(), ErrorCode::LevelOverCap);
  }
}

TEST(Experiment, SmallDiskRealIndex)
{
  const ExperimentSpec spec = SmallDisk(4.0);
  const auto results = RunExperiment(spec);
  ASSERT_EQ(results.size(), 3u);
  for (const LevelResult &r : results)
  {
    // m = 0..3 plus further modes inside [-3.2, 5.5] are distinct locations.
    ASSERT_GE(r.eigenvalues.size(), 4u);
    for (std::size_t i = 0; i < r.eigenvalues.size(); i++)
    {
      EXPECT_LE(std::abs(r.eigenvalues[i].lambda.imag()), 1e-8);
      EXPECT_LE(r.eigenvalues[i].residual, 1e-8);
      if (i > 0)
      {
        EXPECT_LT(r.eigenvalues[i].lambda.real(), r.eigenvalues[i - 1].lambda.real());
      }
    }
  }
  const ConvergenceTable t = BuildConvergenceTable(spec, results);
  ASSERT_EQ(t.reference.size(), 6u);
  EXPECT_FALSE(t.extrapolated);
  for (std::size_t l = 1; l < t.h.size(); l++)
  {
    EXPECT_LT(t.h[l], t.h[l - 1]);
  }
  for (std::size_t i = 0; i < t.rates.size(); i++)
  {
    EXPECT_LT(t.errors.back()[i], t.errors.front()[i]);
    EXPECT_GT(t.rates[i], 1.5);
  }
}

TEST(Experiment, EmitsDeterministicTables)
{
  const ExperimentSpec spec = SmallDisk(Complex(4.0, 4.0));
  const auto dir = std::filesystem::temp_directory_path() / "steklov_harness_test";
  std::filesystem::remove_all(dir);
  for (const char *sub : {"a", "b"})
  {
    const auto results = RunExperiment(spec);
    EmitOutputs((dir / sub).string(), spec, results, BuildConvergenceTable(spec, results));
  }
  for (const char *file : {"table.csv", "errors.csv", "rates.csv", "eigs_level4.csv",
                           "trace.json"})
  {
    EXPECT_EQ(ReadAll(dir / "a" / file), ReadAll(dir / "b" / file)) << file;
  }
  EXPECT_EQ(FirstLine(dir / "a" / "table.csv"),
            "level,h,1st_re,1st_im,2nd_re,2nd_im,3rd_re,3rd_im,4th_re,4th_im");
  EXPECT_GT(ReadAll(dir / "a" / "trace.json").size(), 10u);
}

TEST(Experiment, RealTableHeader)
{
  const ExperimentSpec spec = SmallDisk(4.0);
  const auto results = RunExperiment(spec);
  const auto dir = std::filesystem::temp_directory_path() / "steklov_harness_real";
  EmitOutputs(dir.string(), spec, results, BuildConvergenceTable(spec, results));
  EXPECT_EQ(FirstLine(dir / "table.csv"), "level,h,1st,2nd,3rd,4th,5th,6th");
}

TEST(Experiment, RimAndSrimAgreeOnCoarseDisk)
{
  ExperimentSpec spec = DefaultExperiment(DomainTag::Disk, Complex(4.0, 4.0));
  spec.d0 = 1e-6;
  const LevelResult s = RunLevel(spec, 2);
  spec.method = SolverMethod::Rim;
  const LevelResult r = RunLevel(spec, 2);
  ASSERT_EQ(s.eigenvalues.size(), r.eigenvalues.size());
  for (std::size_t i = 0; i < s.eigenvalues.size(); i++)
  {
    EXPECT_NEAR(std::abs(s.eigenvalues[i].lambda - r.eigenvalues[i].lambda), 0.0, 1e-8);
    EXPECT_LE(r.eigenvalues[i].residual, 1e-8);
  }
}

TEST(Experiment, ErrorsCarryLevel)
{
  ExperimentSpec spec = DefaultExperiment(DomainTag::Square, Complex(4.0));
  spec.k = 1e-12;  // k^2 essentially 0, a Neumann eigenvalue
  try
  {
    RunLevel(spec, 1);
    ADD_FAILURE();
  }
  catch (const Error &e)
  {
    EXPECT_EQ(e.code(), ErrorCode::NearNeumannEigenvalue);
    EXPECT_NE(std::string(e.what()).find("level 1"), std::string::npos);
  }
}

}  // namespace
}  // namespace steklov
