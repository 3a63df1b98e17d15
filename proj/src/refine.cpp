// Copyright (c) The steklov authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <limits>
#include "steklov/rim.hpp"

namespace steklov
{

namespace
{

constexpr std::uint64_t kStartSeed = 0x5eed5eedULL;
constexpr double kStallRatio = 0.5;

}  // namespace

RefinedEigenpair RefineEigenpair(const ResolventOracle &oracle, Complex start,
                                 const RefineOptions &options)
{
  if (options.max_iterations < 1 || !(options.tolerance > 0.0))
  {
    throw Error(ErrorCode::InvalidArgument, "invalid refinement options");
  }
  if (!std::isfinite(start.real()) || !std::isfinite(start.imag()))
  {
    throw Error(ErrorCode::InvalidArgument, "start value is not finite");
  }

  RefinedEigenpair best;
  best.residual = std::numeric_limits<double>::infinity();
  int factorizations = 0;
  Complex shift = start;
  std::unique_ptr<ShiftedSystem> sys;
  auto factor = [&](Complex s)
  {
    factorizations++;
    try
    {
      sys = oracle.Shift(s);
      shift = s;
    }
    catch (const Error &e)
    {
      if (e.code() != ErrorCode::SolveFailedOnContour)
      {
        throw;
      }
      // Exactly singular: the shift is an eigenvalue to working precision.
      shift = s + options.singular_offset;
      factorizations++;
      sys = oracle.Shift(shift);
    }
  };
  factor(start);

  ComplexVector x = RandomVector(oracle.Dimension(), kStartSeed);
  x.normalize();
  double previous = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= options.max_iterations; it++)
  {
    ComplexVector y = sys->Solve(oracle.ApplyB(x));
    const double ny = y.norm();
    if (!(ny > 0.0) || !std::isfinite(ny))
    {
      factor(shift + options.singular_offset);
      continue;
    }
    const Complex nu = x.dot(y);
    x = y / ny;

    // Two value estimates; keep whichever has the smaller residual.
    Complex value = shift;
    double residual = std::numeric_limits<double>::infinity();
    if (nu != Complex(0.0))
    {
      value = shift + 1.0 / nu;
      residual = EigenResidual(oracle, value, x);
    }
    const Complex bxx = x.dot(oracle.ApplyB(x));
    if (bxx != Complex(0.0))
    {
      const Complex rq = x.dot(oracle.ApplyA(x)) / bxx;
      const double r = EigenResidual(oracle, rq, x);
      if (r < residual)
      {
        value = rq;
        residual = r;
      }
    }

    if (residual < best.residual)
    {
      best.value = value;
      best.vector = x;
      best.residual = residual;
    }
    best.iterations = it;
    best.factorizations = factorizations;
    if (residual <= options.tolerance)
    {
      return best;
    }
    if (residual > kStallRatio * previous && std::isfinite(value.real()) &&
        std::isfinite(value.imag()))
    {
      factor(value);
    }
    previous = residual;
  }
  throw NoConvergenceError("inverse iteration did not reach residual " +
                               std::to_string(options.tolerance) + " in " +
                               std::to_string(options.max_iterations) + " iterations",
                           best);
}

}  // namespace steklov
