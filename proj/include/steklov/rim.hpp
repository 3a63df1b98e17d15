// Copyright (c) The steklov authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef STEKLOV_RIM_HPP
#define STEKLOV_RIM_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <string_view>
#include <vector>
#include "steklov/error.hpp"
#include "steklov/types.hpp"

namespace steklov
{

enum class Plane
{
  Lambda,
  Mu,
};

std::string_view PlaneName(Plane plane);
Plane ParsePlane(std::string_view name);

// Axis-aligned rectangle [re0, re1] x [im0, im1] of the complex plane.
struct Rect
{
  double re0 = 0.0, re1 = 0.0, im0 = 0.0, im1 = 0.0;

  bool Valid() const { return re1 > re0 && im1 > im0; }
  bool Contains(Complex z, double tol = 0.0) const
  {
    return z.real() >= re0 - tol && z.real() <= re1 + tol && z.imag() >= im0 - tol &&
           z.imag() <= im1 + tol;
  }
  bool Intersects(const Rect &o) const
  {
    return re0 <= o.re1 && o.re0 <= re1 && im0 <= o.im1 && o.im0 <= im1;
  }
  double DistanceToOrigin() const;
};

// Square search region S with center c and half side length. Its contour is the
// counterclockwise boundary of the square.
struct Region
{
  Complex center;
  double half_width = 1.0;
  int depth = 0;

  double Size() const { return 2.0 * half_width; }
  Rect Bounds() const
  {
    return {center.real() - half_width, center.real() + half_width,
            center.imag() - half_width, center.imag() + half_width};
  }
  // Quadrants in the order SW, SE, NE, NW.
  std::array<Region, 4> Split() const;
};

inline constexpr int kMaxRegionDepth = 64;

// One factorization of A - zB.
class ShiftedSystem
{
public:
  virtual ~ShiftedSystem() = default;
  virtual ComplexVector Solve(const ComplexVector &rhs) const = 0;
};

// Pencil (A, B) with shifted solves. Implementations must allow concurrent calls
// of Shift() from several threads.
class ResolventOracle
{
public:
  virtual ~ResolventOracle() = default;

  virtual Eigen::Index Dimension() const = 0;

  // Throws Error(SolveFailedOnContour) if A - zB is singular to working precision.
  virtual std::unique_ptr<ShiftedSystem> Shift(Complex z) const = 0;

  virtual ComplexVector ApplyA(const ComplexVector &x) const = 0;
  virtual ComplexVector ApplyB(const ComplexVector &x) const = 0;
  virtual double NormA() const = 0;
  virtual double NormB() const = 0;
};

// Standard problem T x = mu x. T is reduced once to upper Hessenberg form
// T = Q H Q^H so that every shifted solve costs O(M^2). The oracle acts on H:
// vectors passed to Shift()/ApplyA() live in the Hessenberg basis, and
// ToOriginal() maps them back (norms are preserved).
class HessenbergOracle : public ResolventOracle
{
public:
  explicit HessenbergOracle(const DenseComplexMatrix &T);

  Eigen::Index Dimension() const override { return H_.rows(); }
  std::unique_ptr<ShiftedSystem> Shift(Complex z) const override;
  ComplexVector ApplyA(const ComplexVector &x) const override { return H_ * x; }
  ComplexVector ApplyB(const ComplexVector &x) const override { return x; }
  double NormA() const override { return norm_; }
  double NormB() const override { return 1.0; }

  ComplexVector ToOriginal(const ComplexVector &x) const { return Q_ * x; }
  ComplexVector FromOriginal(const ComplexVector &x) const { return Q_.adjoint() * x; }
  const DenseComplexMatrix &Hessenberg() const { return H_; }

private:
  DenseComplexMatrix H_, Q_;
  double norm_ = 0.0;
};

// Standard problem T x = mu x through the complex Schur form T = U S U^H. Shifted
// solves are back substitutions with S - zI and need no factorization. Vectors live
// in the Schur basis as for HessenbergOracle.
class SchurOracle : public ResolventOracle
{
public:
  explicit SchurOracle(const DenseComplexMatrix &T);

  Eigen::Index Dimension() const override { return S_.rows(); }
  std::unique_ptr<ShiftedSystem> Shift(Complex z) const override;
  ComplexVector ApplyA(const ComplexVector &x) const override;
  ComplexVector ApplyB(const ComplexVector &x) const override { return x; }
  double NormA() const override { return norm_; }
  double NormB() const override { return 1.0; }

  ComplexVector ToOriginal(const ComplexVector &x) const { return U_ * x; }
  ComplexVector FromOriginal(const ComplexVector &x) const { return U_.adjoint() * x; }
  const DenseComplexMatrix &Triangular() const { return S_; }

private:
  DenseComplexMatrix S_, U_;
  double norm_ = 0.0;
};

// Dense generalized problem A x = lambda B x with a partial-pivoting LU per shift.
class DensePencilOracle : public ResolventOracle
{
public:
  DensePencilOracle(DenseComplexMatrix A, DenseComplexMatrix B);

  Eigen::Index Dimension() const override { return A_.rows(); }
  std::unique_ptr<ShiftedSystem> Shift(Complex z) const override;
  ComplexVector ApplyA(const ComplexVector &x) const override { return A_ * x; }
  ComplexVector ApplyB(const ComplexVector &x) const override { return B_ * x; }
  double NormA() const override { return norm_a_; }
  double NormB() const override { return norm_b_; }

private:
  DenseComplexMatrix A_, B_;
  double norm_a_ = 0.0, norm_b_ = 0.0;
};

// Sparse generalized problem with a sparse LU per shift; used for the full
// finite element pencil (G - k^2 M_n, -M_bd).
class SparsePencilOracle : public ResolventOracle
{
public:
  SparsePencilOracle(SparseComplexMatrix A, SparseComplexMatrix B);

  Eigen::Index Dimension() const override { return A_.rows(); }
  std::unique_ptr<ShiftedSystem> Shift(Complex z) const override;
  ComplexVector ApplyA(const ComplexVector &x) const override { return A_ * x; }
  ComplexVector ApplyB(const ComplexVector &x) const override { return B_ * x; }
  double NormA() const override { return norm_a_; }
  double NormB() const override { return norm_b_; }

private:
  SparseComplexMatrix A_, B_;
  double norm_a_ = 0.0, norm_b_ = 0.0;
};

// Default Gauss-Legendre nodes per edge. Below 12 a pole at 0.1 half widths
// outside the square leaks an indicator above 0.1.
inline constexpr int kDefaultQuadNodes = 12;

// Composite Gauss-Legendre rule on the contour of a square: q nodes per edge, 4q in
// total, traversed counterclockwise. weights[j] includes dz/dt.
struct ContourRule
{
  std::vector<Complex> nodes;
  std::vector<Complex> weights;
};

// Nodes and weights of the q-point Gauss-Legendre rule on [-1, 1].
void GaussLegendre(int q, std::vector<double> &nodes, std::vector<double> &weights);
ContourRule MakeContourRule(const Region &region, int q);

// E g = (1/2 pi i) \oint (zB - A)^{-1} B g dz, the spectral projection of g onto the
// eigenvectors with eigenvalues inside the region. Throws SolveFailedOnContour if a
// node solve fails or its solution norm exceeds 1e14 ||B g||.
ComplexVector SpectralProjection(const ResolventOracle &oracle, const Region &region,
                                 const ComplexVector &g, int quad_nodes = kDefaultQuadNodes);

// delta_S = ||E (E g / ||E g||)||, or exactly 0 when ||E g|| <= 1e-12 ||g||.
double Indicator(const ResolventOracle &oracle, const Region &region, const ComplexVector &g,
                 int quad_nodes = kDefaultQuadNodes);

struct EigenRecord
{
  Complex value;
  Plane plane = Plane::Lambda;
  double residual = 0.0;
  double box_size = 0.0;
  int depth = 0;
};

enum class TraceDecision
{
  Accept,  // delta >= delta0, subdivided
  Reject,  // delta < delta0
  Emit,    // delta >= delta0 and size <= d0
};

std::string_view TraceDecisionName(TraceDecision d);

struct TraceEntry
{
  Complex center;
  double half_width = 0.0;
  double delta = 0.0;
  int depth = 0;
  TraceDecision decision = TraceDecision::Reject;
};

struct RimOptions
{
  double d0 = 1e-9;
  double delta0 = 0.1;
  int quad_nodes = kDefaultQuadNodes;
  Plane plane = Plane::Lambda;
  bool record_trace = true;
  // Regions for which this returns false are skipped without evaluating the
  // indicator (used to restrict a covering search to the set of interest).
  std::function<bool(const Region &)> keep;
};

struct RimResult
{
  // Deduplicated (10 d0) and sorted by (Re, Im).
  std::vector<EigenRecord> records;
  std::vector<TraceEntry> trace;
  std::uint64_t indicator_evaluations = 0;
};

// Recursive quadrisection driven by the spectral indicator. Throws
// MaxDepthExceeded, or SolveFailedOnContour if a region fails twice (the retry
// inflates its half width by 1 + 1e-6).
RimResult RimSearch(const ResolventOracle &oracle, const Region &region,
                    const ComplexVector &g, const RimOptions &options);

// Same search over several starting regions with a common deduplication pass.
RimResult RimSearch(const ResolventOracle &oracle, const std::vector<Region> &regions,
                    const ComplexVector &g, const RimOptions &options);

// Squares covering a rectangle. With pad set, the rectangle is first enlarged
// slightly and asymmetrically so that quadrisection lines do not fall on
// symmetry axes of the search rectangle (e.g. the real axis).
std::vector<Region> CoverWithSquares(const Rect &rect, bool pad);

// Bounding rectangle of {-1/z : z in rect}. Throws RegionContainsOrigin when the
// closed rectangle comes within 1e-6 of the origin.
Rect InversionImageBounds(const Rect &rect);

// Smallest square covering the image of a lambda-plane square under mu = -1/lambda.
Region MapLambdaRegionToMu(const Region &lambda_region);

// Search the lambda rectangle through the standard problem T u = mu u of the
// Neumann-to-Dirichlet matrix, lambda = -1/mu. spectral_bound must bound |mu| over
// the spectrum of T (any matrix norm does); the part of the rectangle with
// |lambda| < 1/spectral_bound holds no eigenvalue and is cut away, which lets
// rectangles touching the origin be searched. Records are in the mu plane.
RimResult SearchLambdaRectViaMu(const ResolventOracle &ntd_oracle, const Rect &lambda_rect,
                                double spectral_bound, const ComplexVector &g,
                                const RimOptions &options);

// Direct search of a rectangle in the oracle's own plane.
RimResult SearchRect(const ResolventOracle &oracle, const Rect &rect, const ComplexVector &g,
                     const RimOptions &options);

struct RefineOptions
{
  int max_iterations = 50;
  double tolerance = 1e-13;
  // Shift applied when the start value is exactly singular (10 d0).
  double singular_offset = 1e-8;
};

struct RefinedEigenpair
{
  Complex value;
  ComplexVector vector;  // unit 2-norm
  double residual = 0.0;
  int iterations = 0;
  int factorizations = 0;
};

class NoConvergenceError : public Error
{
public:
  NoConvergenceError(const std::string &what, RefinedEigenpair best)
    : Error(ErrorCode::NoConvergence, what), best_(std::move(best))
  {
  }
  const RefinedEigenpair &Best() const { return best_; }

private:
  RefinedEigenpair best_;
};

// ||A x - lambda B x|| / ((||A||_1 + |lambda| ||B||_1) ||x||).
double EigenResidual(const ResolventOracle &oracle, Complex value, const ComplexVector &x);

// Shifted inverse iteration from `start` with a Rayleigh-quotient value update. The
// factorization at the start value is kept while the residual contracts; if it
// stalls the shift is moved to the current estimate. Throws NoConvergenceError
// (carrying the best pair) after max_iterations.
RefinedEigenpair RefineEigenpair(const ResolventOracle &oracle, Complex start,
                                 const RefineOptions &options = {});

// Random complex vector with i.i.d. standard normal real and imaginary parts.
ComplexVector RandomVector(Eigen::Index n, std::uint64_t seed);

}  // namespace steklov

#endif  // STEKLOV_RIM_HPP
