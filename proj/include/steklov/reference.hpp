// Copyright (c) The steklov authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef STEKLOV_REFERENCE_HPP
#define STEKLOV_REFERENCE_HPP

#include <vector>
#include "steklov/rim.hpp"
#include "steklov/types.hpp"

namespace steklov
{

// Largest |z| accepted by BesselJ.
inline constexpr double kMaxBesselArgument = 50.0;
inline constexpr int kMaxDiskOrder = 200;

struct BesselEval
{
  int order = 0;
  Complex z;
  Complex value;       // J_m(z)
  Complex derivative;  // J'_m(z)
};

// Power series summed in 50-digit arithmetic (the terms reach e^|z| before they
// cancel), stopped once past the largest term at relative size 1e-16.
// J'_m = (J_{m-1} - J_{m+1}) / 2 and J'_0 = -J_1. Throws ArgumentOutOfRange if
// m < 0 or |z| > 50.
BesselEval BesselJ(int m, Complex z);

// Exact Steklov eigenvalue of angular order m on the disk of radius R with constant
// index n: lambda_m = -k sqrt(n) J'_m(k sqrt(n) R) / J_m(k sqrt(n) R), principal
// square root. Throws DenominatorNearZero if |J_m| <= 1e-14 |k sqrt(n) R J'_m|.
Complex DiskExactLambda(double k, Complex n, int m, double radius = 1.0);

struct DiskMode
{
  int m = 0;
  Complex lambda;
  int multiplicity = 1;  // 2 for m >= 1 (the e^{+-im theta} pair)
};

// All lambda_m, m = 0..m_max, inside the closed rectangle, sorted by m. Orders whose
// denominator vanishes are skipped. Throws ArgumentOutOfRange if m_max > 200.
std::vector<DiskMode> DiskExactInRegion(double k, Complex n, const Rect &region, int m_max,
                                        double radius = 1.0);

// Expand modes by multiplicity.
std::vector<Complex> ExpandMultiplicity(const std::vector<DiskMode> &modes);

struct SweepSample
{
  int m = 0;
  double n = 0.0;
  Complex lambda;
  // Set where J_m(k sqrt(n)) = 0 lies within or next to this sample; lambda is
  // then NaN or sits on a branch that must not be joined to its neighbors.
  bool pole = false;
};

// lambda_m(n) for real n on `steps` + 1 equispaced samples of [n0, n1], m = 0..m_max.
std::vector<SweepSample> DiskSweep(double k, double n0, double n1, int steps, int m_max);

}  // namespace steklov

#endif  // STEKLOV_REFERENCE_HPP
