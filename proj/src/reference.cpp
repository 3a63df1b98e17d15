// Copyright (c) The steklov authors.
// SPDX-License-Identifier: Apache-2.0

#include "steklov/reference.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <boost/multiprecision/cpp_complex.hpp>

namespace steklov
{

namespace
{

using Mp = boost::multiprecision::cpp_complex_50;
using MpReal = boost::multiprecision::cpp_bin_float_50;

constexpr int kMaxTerms = 400;
constexpr double kSeriesCutoff = 1e-16;
constexpr double kDenominatorRatio = 1e-14;

Complex ToDouble(const Mp &z)
{
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

// J_m(z) = sum_j (-1)^j (z/2)^{2j+m} / (j! (j+m)!).
Mp SeriesJ(int m, const Mp &z)
{
  const Mp half = z / 2;
  Mp term = 1;
  for (int i = 1; i <= m; i++)
  {
    term *= half / i;
  }
  if (term == Mp(0))
  {
    return Mp(0);
  }
  const Mp ratio = -(half * half);
  Mp sum = term;
  MpReal previous = abs(term);
  for (int j = 1; j <= kMaxTerms; j++)
  {
    term *= ratio / (static_cast<double>(j) * (j + m));
    sum += term;
    const MpReal size = abs(term);
    if (size < previous && size <= kSeriesCutoff * abs(sum))
    {
      break;
    }
    previous = size;
  }
  return sum;
}

struct MpBessel
{
  Mp value, derivative;
};

MpBessel EvaluateMp(int m, Complex z)
{
  if (m < 0)
  {
    throw Error(ErrorCode::ArgumentOutOfRange, "Bessel order must be non-negative");
  }
  if (!(std::abs(z) <= kMaxBesselArgument))
  {
    throw Error(ErrorCode::ArgumentOutOfRange,
                "|z| = " + std::to_string(std::abs(z)) + " exceeds the series range 50");
  }
  const Mp zm(z.real(), z.imag());
  MpBessel out;
  out.value = SeriesJ(m, zm);
  if (m == 0)
  {
    out.derivative = -SeriesJ(1, zm);
  }
  else
  {
    out.derivative = (SeriesJ(m - 1, zm) - SeriesJ(m + 1, zm)) / 2;
  }
  return out;
}

void CheckDiskArguments(double k, Complex n, double radius)
{
  if (!(k > 0.0) || !std::isfinite(k))
  {
    throw Error(ErrorCode::InvalidArgument, "k must be positive");
  }
  if (!(radius > 0.0) || !std::isfinite(radius))
  {
    throw Error(ErrorCode::InvalidArgument, "radius must be positive");
  }
  if (!(n.real() > 0.0) || n.imag() < 0.0)
  {
    throw Error(ErrorCode::InvalidRefractionIndex, "need Re n > 0 and Im n >= 0");
  }
}

}  // namespace

BesselEval BesselJ(int m, Complex z)
{
  const MpBessel b = EvaluateMp(m, z);
  return {m, z, ToDouble(b.value), ToDouble(b.derivative)};
}

Complex DiskExactLambda(double k, Complex n, int m, double radius)
{
  CheckDiskArguments(k, n, radius);
  const Complex kappa = k * std::sqrt(n);
  const MpBessel b = EvaluateMp(m, kappa * radius);
  const Mp kap(kappa.real(), kappa.imag());
  if (abs(b.value) <= kDenominatorRatio * abs(b.derivative * kap * radius) ||
      b.value == Mp(0))
  {
    throw Error(ErrorCode::DenominatorNearZero,
                "J_" + std::to_string(m) + "(k sqrt(n) R) vanishes; lambda_m is a pole");
  }
  return ToDouble(-kap * b.derivative / b.value);
}

std::vector<DiskMode> DiskExactInRegion(double k, Complex n, const Rect &region, int m_max,
                                        double radius)
{
  if (m_max < 0 || m_max > kMaxDiskOrder)
  {
    throw Error(ErrorCode::ArgumentOutOfRange, "m_max must lie in [0, 200]");
  }
  std::vector<DiskMode> modes;
  for (int m = 0; m <= m_max; m++)
  {
    Complex lambda;
    try
    {
      lambda = DiskExactLambda(k, n, m, radius);
    }
    catch (const Error &e)
    {
      if (e.code() == ErrorCode::DenominatorNearZero)
      {
        continue;
      }
      throw;
    }
    if (region.Contains(lambda))
    {
      modes.push_back({m, lambda, m == 0 ? 1 : 2});
    }
  }
  return modes;
}

std::vector<Complex> ExpandMultiplicity(const std::vector<DiskMode> &modes)
{
  std::vector<Complex> out;
  for (const DiskMode &mode : modes)
  {
    out.insert(out.end(), mode.multiplicity, mode.lambda);
  }
  return out;
}

std::vector<SweepSample> DiskSweep(double k, double n0, double n1, int steps, int m_max)
{
  if (steps < 1 || !(n1 > n0) || !(n0 > 0.0))
  {
    throw Error(ErrorCode::InvalidArgument, "sweep needs 0 < n0 < n1 and steps >= 1");
  }
  if (m_max < 0 || m_max > kMaxDiskOrder)
  {
    throw Error(ErrorCode::ArgumentOutOfRange, "m_max must lie in [0, 200]");
  }
  std::vector<SweepSample> out;
  for (int m = 0; m <= m_max; m++)
  {
    double previous_j = std::numeric_limits<double>::quiet_NaN();
    for (int s = 0; s <= steps; s++)
    {
      const double n = n0 + (n1 - n0) * s / steps;
      SweepSample sample{m, n, Complex(std::numeric_limits<double>::quiet_NaN(), 0.0), false};
      const double j = BesselJ(m, Complex(k * std::sqrt(n), 0.0)).value.real();
      try
      {
        sample.lambda = DiskExactLambda(k, Complex(n, 0.0), m);
      }
      catch (const Error &e)
      {
        if (e.code() != ErrorCode::DenominatorNearZero)
        {
          throw;
        }
        sample.pole = true;
      }
      // A sign change of J_m between samples means a pole in between.
      if (s > 0 && std::signbit(j) != std::signbit(previous_j))
      {
        sample.pole = true;
        out.back().pole = true;
      }
      previous_j = j;
      out.push_back(sample);
    }
  }
  return out;
}

}  // namespace steklov
