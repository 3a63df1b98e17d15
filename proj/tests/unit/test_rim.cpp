// Copyright (c) The steklov authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>
#include <gtest/gtest.h>
#include "steklov/error.hpp"
#include "steklov/reduction.hpp"
#include "steklov/rim.hpp"

namespace steklov
{
namespace
{

DensePencilOracle Diagonal(const std::vector<Complex> &values)
{
  const auto n = static_cast<Eigen::Index>(values.size());
  DenseComplexMatrix A = DenseComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; i++)
  {
    A(i, i) = values[i];
  }
  return DensePencilOracle(A, DenseComplexMatrix::Identity(n, n));
}

ErrorCode CodeOf(auto &&fn)
{
  try
  {
    fn();
  }
  catch (const Error &e)
  {
    return e.code();
  }
  return ErrorCode::Internal;
}

double DistanceToBoundary(Complex z, const Region &r)
{
  const double dx = r.half_width - std::abs(z.real() - r.center.real());
  const double dy = r.half_width - std::abs(z.imag() - r.center.imag());
  if (dx >= 0.0 && dy >= 0.0)
  {
    return std::min(dx, dy);
  }
  return std::hypot(std::min(dx, 0.0), std::min(dy, 0.0));
}

TEST(GaussLegendre, IntegratesPolynomialsExactly)
{
  for (int q = 1; q <= 12; q++)
  {
    std::vector<double> x, w;
    GaussLegendre(q, x, w);
    for (int p = 0; p < 2 * q; p++)
    {
      double sum = 0.0;
      for (int i = 0; i < q; i++)
      {
        sum += w[i] * std::pow(x[i], p);
      }
      const double exact = p % 2 == 0 ? 2.0 / (p + 1) : 0.0;
      EXPECT_NEAR(sum, exact, 1e-14) << "q=" << q << " p=" << p;
    }
  }
}

TEST(ContourRule, CounterclockwiseAndClosed)
{
  const Region r{Complex(0.5, -1.0), 0.25, 0};
  const ContourRule rule = MakeContourRule(r, kDefaultQuadNodes);
  ASSERT_EQ(rule.nodes.size(), 4u * kDefaultQuadNodes);
  Complex length = 0.0, winding = 0.0;
  for (std::size_t j = 0; j < rule.nodes.size(); j++)
  {
    length += rule.weights[j];
    winding += rule.weights[j] / (rule.nodes[j] - r.center);
  }
  EXPECT_NEAR(std::abs(length), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(winding - Complex(0.0, 2.0 * std::numbers::pi)), 0.0, 1e-8);
}

TEST(SpectralProjection, AnalyticResidue)
{
  const DensePencilOracle oracle = Diagonal({1.0, 3.0});
  const ComplexVector g = ComplexVector::Ones(2);
  const ComplexVector p = SpectralProjection(oracle, Region{1.0, 0.5, 0}, g);
  EXPECT_NEAR(std::abs(std::abs(p[0]) - 1.0), 0.0, 1e-8);
  EXPECT_NEAR(std::abs(p[1]), 0.0, 1e-8);
  EXPECT_LE(SpectralProjection(oracle, Region{2.0, 0.4, 0}, g).norm(), 1e-6);
}

TEST(SpectralProjection, Linear)
{
  const DensePencilOracle oracle = Diagonal({1.0, Complex(1.2, 0.3), 3.0, -2.0});
  const ComplexVector g = RandomVector(4, 11);
  const Complex alpha(0.7, -2.3);
  const Region r{Complex(1.0, 0.1), 0.6, 0};
  const ComplexVector a = SpectralProjection(oracle, r, alpha * g);
  const ComplexVector b = alpha * SpectralProjection(oracle, r, g);
  EXPECT_LE((a - b).norm(), 1e-12 * b.norm());
}

TEST(SpectralProjection, EigenvalueOnContourFails)
{
  // With one node per edge the nodes are the edge midpoints; put the eigenvalue on one.
  const DensePencilOracle oracle = Diagonal({1.5, 3.0});
  EXPECT_EQ(CodeOf([&] { SpectralProjection(oracle, Region{1.0, 0.5, 0}, RandomVector(2, 1), 1); }),
            ErrorCode::SolveFailedOnContour);
}

TEST(Indicator, OccupiedEmptyAndGuard)
{
  const DensePencilOracle oracle = Diagonal({1.0, 3.0});
  const ComplexVector g = ComplexVector::Ones(2);
  const double occupied = Indicator(oracle, Region{1.0, 0.5, 0}, g);
  EXPECT_GE(occupied, 0.9);
  EXPECT_LE(occupied, 1.1);
  EXPECT_LT(Indicator(oracle, Region{2.0, 0.4, 0}, g), 0.1);
  // g orthogonal to the eigenvector inside and the other eigenvalue far away: the
  // first projection is at rounding level and the guard returns exactly 0.
  const DensePencilOracle far = Diagonal({1.0, 1000.0});
  EXPECT_EQ(Indicator(far, Region{1.0, 0.5, 0}, ComplexVector{{0.0, 1.0}}), 0.0);
}

TEST(Indicator, ContainmentSoundness)
{
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  int trials = 0;
  while (trials < 100)
  {
    std::vector<Complex> values;
    for (int i = 0; i < 8; i++)
    {
      values.emplace_back(u(rng), u(rng));
    }
    const Region r{Complex(u(rng) / 2.0, u(rng) / 2.0), 0.3 + std::abs(u(rng)) / 3.0, 0};
    const bool ok = std::all_of(values.begin(), values.end(), [&](Complex z)
                                { return DistanceToBoundary(z, r) >= 0.2 * r.half_width; });
    if (!ok)
    {
      continue;
    }
    trials++;
    const bool inside = std::any_of(values.begin(), values.end(),
                                    [&](Complex z) { return r.Bounds().Contains(z); });
    const DensePencilOracle oracle = Diagonal(values);
    const double delta = Indicator(oracle, r, RandomVector(8, trials));
    EXPECT_EQ(delta >= 0.1, inside) << "trial " << trials << " delta " << delta;
  }
}

TEST(Indicator, DecisionInvariantUnderDoubledQuadrature)
{
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  int trials = 0;
  while (trials < 100)
  {
    std::vector<Complex> values;
    for (int i = 0; i < 6; i++)
    {
      values.emplace_back(u(rng), u(rng));
    }
    const Region r{Complex(u(rng) / 2.0, u(rng) / 2.0), 0.25 + std::abs(u(rng)) / 4.0, 0};
    const bool ok = std::all_of(values.begin(), values.end(), [&](Complex z)
                                { return DistanceToBoundary(z, r) >= 0.1 * r.half_width; });
    if (!ok)
    {
      continue;
    }
    trials++;
    const DensePencilOracle oracle = Diagonal(values);
    const ComplexVector g = RandomVector(6, trials);
    EXPECT_EQ(Indicator(oracle, r, g) >= 0.1, Indicator(oracle, r, g, 2 * kDefaultQuadNodes) >= 0.1)
        << "trial " << trials;
  }
}

TEST(RimSearch, DiagonalSpectrum)
{
  const DensePencilOracle oracle = Diagonal({1.0, 2.0, 5.0});
  RimOptions opts;
  const RimResult r = RimSearch(oracle, Region{1.5, 1.5, 0}, RandomVector(3, 5), opts);
  ASSERT_EQ(r.records.size(), 2u);
  EXPECT_NEAR(std::abs(r.records[0].value - 1.0), 0.0, 1e-8);
  EXPECT_NEAR(std::abs(r.records[1].value - 2.0), 0.0, 1e-8);
  for (const EigenRecord &rec : r.records)
  {
    EXPECT_LE(rec.box_size, opts.d0);
    EXPECT_TRUE(std::isfinite(rec.residual));
  }
  // Trace: emitted boxes are at most d0 wide.
  bool any_emit = false;
  for (const TraceEntry &t : r.trace)
  {
    if (t.decision == TraceDecision::Emit)
    {
      any_emit = true;
      EXPECT_LE(2.0 * t.half_width, opts.d0);
    }
  }
  EXPECT_TRUE(any_emit);
}

TEST(RimSearch, EmptyRegionIsOneEvaluation)
{
  const DensePencilOracle oracle = Diagonal({1.0, 2.0, 5.0});
  const RimResult r = RimSearch(oracle, Region{Complex(20.0, 20.0), 1.0, 0}, RandomVector(3, 1),
                                RimOptions{});
  EXPECT_TRUE(r.records.empty());
  EXPECT_EQ(r.indicator_evaluations, 1u);
  ASSERT_EQ(r.trace.size(), 1u);
  EXPECT_EQ(r.trace[0].decision, TraceDecision::Reject);
}

TEST(RimSearch, EigenvalueOnSplitLineAndCorner)
{
  // 0 lies on both split lines of the root square: found once after deduplication.
  const DensePencilOracle oracle = Diagonal({0.0, 0.5, 7.0});
  RimOptions opts;
  opts.d0 = 1e-9;
  const RimResult r = RimSearch(oracle, Region{0.0, 1.0, 0}, RandomVector(3, 2), opts);
  ASSERT_EQ(r.records.size(), 2u);
  EXPECT_NEAR(std::abs(r.records[0].value), 0.0, 1e-8);
  EXPECT_NEAR(std::abs(r.records[1].value - 0.5), 0.0, 1e-8);
}

TEST(RimSearch, HessenbergOracleMatchesDense)
{
  std::mt19937_64 rng(17);
  std::normal_distribution<double> normal;
  DenseComplexMatrix T(12, 12);
  for (Eigen::Index i = 0; i < T.size(); i++)
  {
    T.data()[i] = Complex(normal(rng), normal(rng));
  }
  const HessenbergOracle h(T);
  const DensePencilOracle d(T, DenseComplexMatrix::Identity(12, 12));
  EXPECT_LE((h.ToOriginal(h.Hessenberg() * h.FromOriginal(ComplexVector::Ones(12))) -
             T * ComplexVector::Ones(12))
                .norm(),
            1e-12 * T.norm());
  RimOptions opts;
  opts.d0 = 1e-9;
  const Rect box{-2.5, 2.5, -2.5, 2.5};
  const RimResult a = SearchRect(h, box, RandomVector(12, 1), opts);
  const RimResult b = SearchRect(d, box, RandomVector(12, 1), opts);
  const Eigen::VectorXcd exact = T.eigenvalues();
  int inside = 0;
  for (Eigen::Index i = 0; i < exact.size(); i++)
  {
    inside += box.Contains(exact[i]) ? 1 : 0;
  }
  ASSERT_EQ(a.records.size(), static_cast<std::size_t>(inside));
  ASSERT_EQ(b.records.size(), a.records.size());
  for (std::size_t i = 0; i < a.records.size(); i++)
  {
    EXPECT_NEAR(std::abs(a.records[i].value - b.records[i].value), 0.0, 1e-8);
  }
}

TEST(RimSearch, SchurOracleMatchesDense)
{
  std::mt19937_64 rng(23);
  std::normal_distribution<double> normal;
  DenseComplexMatrix T(12, 12);
  for (Eigen::Index i = 0; i < T.size(); i++)
  {
    T.data()[i] = Complex(normal(rng), normal(rng));
  }
  const SchurOracle s(T);
  const DensePencilOracle d(T, DenseComplexMatrix::Identity(12, 12));
  const ComplexVector x = RandomVector(12, 5);
  EXPECT_LE((s.ToOriginal(s.ApplyA(s.FromOriginal(x))) - T * x).norm(), 1e-12 * T.norm());
  const Complex z(0.3, -0.7);
  const ComplexVector a = s.ToOriginal(s.Shift(z)->Solve(s.FromOriginal(x)));
  const ComplexVector b = d.Shift(z)->Solve(x);
  EXPECT_LE((a - b).norm(), 1e-11 * b.norm());

  RimOptions opts;
  opts.d0 = 1e-9;
  const Rect box{-2.5, 2.5, -2.5, 2.5};
  const RimResult rs = SearchRect(s, box, RandomVector(12, 1), opts);
  const RimResult rd = SearchRect(d, box, RandomVector(12, 1), opts);
  ASSERT_EQ(rs.records.size(), rd.records.size());
  for (std::size_t i = 0; i < rs.records.size(); i++)
  {
    EXPECT_NEAR(std::abs(rs.records[i].value - rd.records[i].value), 0.0, 1e-8);
  }
  const Complex on_diagonal = s.Triangular()(4, 4);
  EXPECT_THROW(s.Shift(on_diagonal), Error);
}

TEST(RimSearch, InvalidOptions)
{
  const DensePencilOracle oracle = Diagonal({1.0});
  RimOptions opts;
  opts.delta0 = 1.5;
  EXPECT_EQ(CodeOf([&] { RimSearch(oracle, Region{1.0, 1.0, 0}, ComplexVector::Ones(1), opts); }),
            ErrorCode::InvalidArgument);
  opts.delta0 = 0.1;
  opts.d0 = 0.0;
  EXPECT_EQ(CodeOf([&] { RimSearch(oracle, Region{1.0, 1.0, 0}, ComplexVector::Ones(1), opts); }),
            ErrorCode::InvalidArgument);
  opts.d0 = 1e-9;
  EXPECT_EQ(CodeOf([&] { RimSearch(oracle, Region{1.0, 1.0, 0}, ComplexVector::Zero(1), opts); }),
            ErrorCode::InvalidArgument);
}

TEST(RimSearch, MaxDepthExceeded)
{
  // The blowup guard trips once boxes shrink below about 1e-14, so depth 64 is
  // only reachable from a wide starting square.
  const DensePencilOracle oracle = Diagonal({Complex(0.3, 0.1)});
  RimOptions opts;
  opts.d0 = 1e-30;
  EXPECT_EQ(CodeOf([&] { RimSearch(oracle, Region{0.0, 1e6, 0}, ComplexVector::Ones(1), opts); }),
            ErrorCode::MaxDepthExceeded);
}

TEST(Mapping, InversionImageAndRoundTrip)
{
  for (Complex lambda : {Complex(-2.0, 0.0), Complex(5.151841, 0.0), Complex(-0.32, 3.12)})
  {
    EXPECT_NEAR(std::abs(-1.0 / (-1.0 / lambda) - lambda), 0.0, 1e-15 * std::abs(lambda));
  }
  const Region lam{Complex(-2.0, 0.0), 0.5, 0};
  const Region mu = MapLambdaRegionToMu(lam);
  EXPECT_TRUE(mu.Bounds().Contains(0.5));
  // Dense sampling of the rectangle stays inside the computed bounds.
  const Rect b = InversionImageBounds(Rect{-3.0, 0.5, 0.2, 3.5});
  for (int i = 0; i <= 100; i++)
  {
    for (int j = 0; j <= 100; j++)
    {
      const Complex z(-3.0 + 3.5 * i / 100.0, 0.2 + 3.3 * j / 100.0);
      EXPECT_TRUE(b.Contains(-1.0 / z, 1e-12));
    }
  }
  EXPECT_EQ(CodeOf([] { MapLambdaRegionToMu(Region{0.1, 0.5, 0}); }),
            ErrorCode::RegionContainsOrigin);
  EXPECT_EQ(CodeOf([] { InversionImageBounds(Rect{0.0, 1.0, 0.0, 1.0}); }),
            ErrorCode::RegionContainsOrigin);
}

TEST(Mapping, LambdaRectThroughMu)
{
  // T with mu = -1/lambda for lambda = {5, 0.25, -1.5 + 2i, -40}; the last lies
  // outside the lambda rectangle and must be filtered out.
  const std::vector<Complex> lambdas{5.0, 0.25, Complex(-1.5, 2.0), -40.0};
  std::vector<Complex> mus;
  for (Complex l : lambdas)
  {
    mus.push_back(-1.0 / l);
  }
  DenseComplexMatrix T = DenseComplexMatrix::Zero(4, 4);
  for (int i = 0; i < 4; i++)
  {
    T(i, i) = mus[i];
  }
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  DenseComplexMatrix P(4, 4);
  for (Eigen::Index i = 0; i < P.size(); i++)
  {
    P.data()[i] = Complex(normal(rng), normal(rng));
  }
  T = P * T * P.inverse();
  const HessenbergOracle oracle(T);
  RimOptions opts;
  opts.d0 = 1e-9;
  const RimResult r = SearchLambdaRectViaMu(oracle, Rect{-3.0, 6.0, -0.5, 3.0}, OneNorm(T),
                                            RandomVector(4, 3), opts);
  std::vector<Complex> found;
  for (const EigenRecord &rec : r.records)
  {
    EXPECT_EQ(rec.plane, Plane::Mu);
    found.push_back(-1.0 / rec.value);
  }
  ASSERT_EQ(found.size(), 3u);
  for (int i = 0; i < 3; i++)
  {
    const bool hit = std::any_of(found.begin(), found.end(), [&](Complex z)
                                 { return std::abs(z - lambdas[i]) < 1e-6 * std::abs(lambdas[i]); });
    EXPECT_TRUE(hit) << lambdas[i];
  }
}

TEST(CoverWithSquares, CoversRectangle)
{
  const Rect r{-3.2, 5.5, -0.2, 0.2};
  for (bool pad : {false, true})
  {
    const auto squares = CoverWithSquares(r, pad);
    for (int i = 0; i <= 200; i++)
    {
      for (int j = 0; j <= 10; j++)
      {
        const Complex z(r.re0 + (r.re1 - r.re0) * i / 200.0, r.im0 + (r.im1 - r.im0) * j / 10.0);
        EXPECT_TRUE(std::any_of(squares.begin(), squares.end(),
                                [&](const Region &s) { return s.Bounds().Contains(z, 1e-12); }));
      }
    }
  }
  // Padding moves the first split line off the real axis.
  for (const Region &s : CoverWithSquares(r, true))
  {
    EXPECT_GT(std::abs(s.center.imag()), 1e-4);
  }
}

TEST(Refine, DiagonalNearEigenvalue)
{
  const DensePencilOracle oracle = Diagonal({1.0, 2.0, 5.0});
  const RefinedEigenpair e = RefineEigenpair(oracle, Complex(1.0 + 1e-3));
  EXPECT_NEAR(std::abs(e.value - 1.0), 0.0, 1e-12);
  EXPECT_LE(e.residual, 1e-12);
  EXPECT_NEAR(e.vector.norm(), 1.0, 1e-14);
}

TEST(Refine, StartExactlyAtEigenvalue)
{
  const DensePencilOracle oracle = Diagonal({1.0, 2.0, 5.0});
  const RefinedEigenpair e = RefineEigenpair(oracle, Complex(2.0));
  EXPECT_NEAR(std::abs(e.value - 2.0), 0.0, 1e-12);
  EXPECT_LE(e.residual, 1e-12);
}

TEST(Refine, JordanBlock)
{
  DenseComplexMatrix A(2, 2);
  A << 1.0, 1.0, 0.0, 1.0;
  const DensePencilOracle oracle(A, DenseComplexMatrix::Identity(2, 2));
  RefinedEigenpair e;
  try
  {
    e = RefineEigenpair(oracle, Complex(1.01));
  }
  catch (const NoConvergenceError &err)
  {
    e = err.Best();
  }
  EXPECT_NEAR(std::abs(e.value - 1.0), 0.0, 1e-6);
}

TEST(Refine, GeneralizedPencil)
{
  DenseComplexMatrix A(3, 3), B(3, 3);
  A << 2.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 4.0;
  B << 1.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0;
  const DensePencilOracle oracle(A, B);
  // Finite eigenvalues of det(A - z B) = 0: (2-z)(3-2z)4 - (2-z) - 4 = 0 ... check by residual.
  const RefinedEigenpair e = RefineEigenpair(oracle, Complex(1.0));
  EXPECT_LE(e.residual, 1e-12);
  const Complex z = e.value;
  const Complex det = (2.0 - z) * ((3.0 - 2.0 * z) * 4.0 - 1.0) - 4.0;
  EXPECT_NEAR(std::abs(det), 0.0, 1e-10);
}

TEST(RandomVector, Deterministic)
{
  EXPECT_EQ(RandomVector(5, 42), RandomVector(5, 42));
  EXPECT_NE(RandomVector(5, 42), RandomVector(5, 43));
}

}  // namespace
}  // namespace steklov
