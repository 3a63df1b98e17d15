// Copyright (c) The steklov authors.
// SPDX-License-Identifier: Apache-2.0

#include "steklov/rim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include "parallel.hpp"

namespace steklov
{

namespace
{

constexpr double kNormGuard = 1e-12;
constexpr double kBlowupFactor = 1e14;
constexpr double kRetryInflation = 1.0 + 1e-6;
constexpr double kDedupFactor = 10.0;
constexpr double kOriginClearance = 1e-6;

// All W factorizations for one region; both projections of an indicator
// evaluation reuse them.
class ContourSolver
{
public:
  ContourSolver(const ResolventOracle &oracle, const Region &region, int q)
    : oracle_(oracle), rule_(MakeContourRule(region, q)), systems_(rule_.nodes.size())
  {
    detail::ParallelFor(systems_.size(),
                        [&](std::size_t j) { systems_[j] = oracle_.Shift(rule_.nodes[j]); });
  }

  ComplexVector Project(const ComplexVector &g) const
  {
    const ComplexVector rhs = oracle_.ApplyB(g);
    const double limit = kBlowupFactor * rhs.norm();
    std::vector<ComplexVector> x(systems_.size());
    detail::ParallelFor(systems_.size(),
                        [&](std::size_t j)
                        {
                          x[j] = systems_[j]->Solve(rhs);
                          const double nx = x[j].norm();
                          if (!std::isfinite(nx) || nx > limit)
                          {
                            throw Error(ErrorCode::SolveFailedOnContour,
                                        "contour solve blew up (eigenvalue on or near the "
                                        "contour)");
                          }
                        });
    // (zB - A)^{-1} = -(A - zB)^{-1}; sum in node order for reproducibility.
    ComplexVector sum = ComplexVector::Zero(g.size());
    for (std::size_t j = 0; j < x.size(); j++)
    {
      sum += rule_.weights[j] * x[j];
    }
    return sum * (-1.0 / (2.0 * std::numbers::pi * 1i));
  }

  double Indicator(const ComplexVector &g) const
  {
    const ComplexVector h1 = Project(g);
    const double n1 = h1.norm();
    if (n1 <= kNormGuard * g.norm())
    {
      return 0.0;
    }
    return Project(h1 / n1).norm();
  }

private:
  const ResolventOracle &oracle_;
  ContourRule rule_;
  std::vector<std::unique_ptr<ShiftedSystem>> systems_;
};

double IndicatorWithRetry(const ResolventOracle &oracle, const Region &region,
                          const ComplexVector &g, int q)
{
  try
  {
    return ContourSolver(oracle, region, q).Indicator(g);
  }
  catch (const Error &e)
  {
    if (e.code() != ErrorCode::SolveFailedOnContour)
    {
      throw;
    }
  }
  Region inflated = region;
  inflated.half_width *= kRetryInflation;
  return ContourSolver(oracle, inflated, q).Indicator(g);
}

std::vector<EigenRecord> Deduplicate(std::vector<EigenRecord> records, double radius)
{
  const std::size_t n = records.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i)
  {
    while (parent[i] != i)
    {
      i = parent[i] = parent[parent[i]];
    }
    return i;
  };
  for (std::size_t i = 0; i < n; i++)
  {
    for (std::size_t j = i + 1; j < n; j++)
    {
      if (std::abs(records[i].value - records[j].value) <= radius)
      {
        parent[find(j)] = find(i);
      }
    }
  }
  std::vector<EigenRecord> merged;
  std::vector<std::size_t> count;
  std::vector<std::size_t> slot(n, n);
  for (std::size_t i = 0; i < n; i++)
  {
    const std::size_t root = find(i);
    if (slot[root] == n)
    {
      slot[root] = merged.size();
      merged.push_back(records[i]);
      count.push_back(1);
      continue;
    }
    EigenRecord &m = merged[slot[root]];
    m.value += records[i].value;
    m.box_size = std::min(m.box_size, records[i].box_size);
    m.depth = std::max(m.depth, records[i].depth);
    count[slot[root]]++;
  }
  for (std::size_t i = 0; i < merged.size(); i++)
  {
    merged[i].value /= static_cast<double>(count[i]);
  }
  std::sort(merged.begin(), merged.end(),
            [](const EigenRecord &a, const EigenRecord &b)
            {
              return a.value.real() != b.value.real() ? a.value.real() < b.value.real()
                                                      : a.value.imag() < b.value.imag();
            });
  return merged;
}

// One inverse-iteration step from the box center as a residual certificate.
double CenterResidual(const ResolventOracle &oracle, Complex center, const ComplexVector &g,
                      double offset)
{
  std::unique_ptr<ShiftedSystem> sys;
  try
  {
    sys = oracle.Shift(center);
  }
  catch (const Error &)
  {
    sys = oracle.Shift(center + offset);
  }
  ComplexVector x = sys->Solve(oracle.ApplyB(g));
  const double nx = x.norm();
  if (!(nx > 0.0) || !std::isfinite(nx))
  {
    return std::numeric_limits<double>::max();
  }
  return EigenResidual(oracle, center, x / nx);
}

void SearchOne(const ResolventOracle &oracle, const Region &root, const ComplexVector &g,
               const RimOptions &options, std::vector<EigenRecord> &raw, RimResult &result)
{
  std::vector<Region> stack{root};
  while (!stack.empty())
  {
    const Region region = stack.back();
    stack.pop_back();
    if (options.keep && !options.keep(region))
    {
      continue;
    }
    const double delta = IndicatorWithRetry(oracle, region, g, options.quad_nodes);
    result.indicator_evaluations++;

    TraceDecision decision = TraceDecision::Reject;
    if (delta >= options.delta0)
    {
      if (region.Size() > options.d0)
      {
        if (region.depth >= kMaxRegionDepth)
        {
          throw Error(ErrorCode::MaxDepthExceeded,
                      "region depth exceeds " + std::to_string(kMaxRegionDepth) +
                          " before reaching d0");
        }
        decision = TraceDecision::Accept;
        const auto children = region.Split();
        for (auto it = children.rbegin(); it != children.rend(); ++it)
        {
          stack.push_back(*it);
        }
      }
      else
      {
        decision = TraceDecision::Emit;
        raw.push_back({region.center, options.plane, 0.0, region.Size(), region.depth});
      }
    }
    if (options.record_trace)
    {
      result.trace.push_back({region.center, region.half_width, delta, region.depth, decision});
    }
  }
}

void ValidateOptions(const RimOptions &options, const ComplexVector &g,
                     const ResolventOracle &oracle)
{
  if (!(options.delta0 > 0.0 && options.delta0 < 1.0))
  {
    throw Error(ErrorCode::InvalidArgument, "delta0 must lie in (0, 1)");
  }
  if (!(options.d0 > 0.0))
  {
    throw Error(ErrorCode::InvalidArgument, "d0 must be positive");
  }
  if (options.quad_nodes < 1)
  {
    throw Error(ErrorCode::InvalidArgument, "quad_nodes must be positive");
  }
  if (g.size() != oracle.Dimension() || !(g.norm() > 0.0))
  {
    throw Error(ErrorCode::InvalidArgument, "g must be a nonzero vector of the oracle size");
  }
}

Rect Intersect(const Rect &a, const Rect &b)
{
  return {std::max(a.re0, b.re0), std::min(a.re1, b.re1), std::max(a.im0, b.im0),
          std::min(a.im1, b.im1)};
}

double MaxModulus(const Rect &r)
{
  return std::hypot(std::max(std::abs(r.re0), std::abs(r.re1)),
                    std::max(std::abs(r.im0), std::abs(r.im1)));
}

}  // namespace

std::string_view PlaneName(Plane plane)
{
  return plane == Plane::Lambda ? "lambda" : "mu";
}

Plane ParsePlane(std::string_view name)
{
  if (name == "lambda")
  {
    return Plane::Lambda;
  }
  if (name == "mu")
  {
    return Plane::Mu;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown plane '" + std::string(name) + "'");
}

std::string_view TraceDecisionName(TraceDecision d)
{
  switch (d)
  {
    case TraceDecision::Accept:
      return "accept";
    case TraceDecision::Reject:
      return "reject";
    case TraceDecision::Emit:
      return "emit";
  }
  return "reject";
}

double Rect::DistanceToOrigin() const
{
  const double dx = re0 > 0.0 ? re0 : (re1 < 0.0 ? -re1 : 0.0);
  const double dy = im0 > 0.0 ? im0 : (im1 < 0.0 ? -im1 : 0.0);
  return std::hypot(dx, dy);
}

std::array<Region, 4> Region::Split() const
{
  const double h = 0.5 * half_width;
  return {Region{center + Complex(-h, -h), h, depth + 1},
          Region{center + Complex(h, -h), h, depth + 1},
          Region{center + Complex(h, h), h, depth + 1},
          Region{center + Complex(-h, h), h, depth + 1}};
}

void GaussLegendre(int q, std::vector<double> &nodes, std::vector<double> &weights)
{
  if (q < 1)
  {
    throw Error(ErrorCode::InvalidArgument, "Gauss-Legendre order must be positive");
  }
  nodes.assign(q, 0.0);
  weights.assign(q, 0.0);
  for (int i = 0; i < (q + 1) / 2; i++)
  {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; iter++)
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= q; k++)
      {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      // p1 = P_q(x), p0 = P_{q-1}(x).
      dp = q == 1 ? 1.0 : q * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
      {
        break;
      }
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= q; k++)
      {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = q == 1 ? 1.0 : q * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[q - 1 - i] = x;
    weights[i] = weights[q - 1 - i] = w;
  }
  if (q % 2 == 1)
  {
    nodes[q / 2] = 0.0;
  }
}

ContourRule MakeContourRule(const Region &region, int q)
{
  std::vector<double> t, w;
  GaussLegendre(q, t, w);
  const Complex c = region.center;
  const double r = region.half_width;
  const std::array<Complex, 5> corners{c + Complex(-r, -r), c + Complex(r, -r),
                                       c + Complex(r, r), c + Complex(-r, r),
                                       c + Complex(-r, -r)};
  ContourRule rule;
  rule.nodes.reserve(4 * q);
  rule.weights.reserve(4 * q);
  for (int e = 0; e < 4; e++)
  {
    const Complex a = corners[e], b = corners[e + 1];
    const Complex half = 0.5 * (b - a);
    for (int i = 0; i < q; i++)
    {
      rule.nodes.push_back(a + half * (t[i] + 1.0));
      rule.weights.push_back(half * w[i]);
    }
  }
  return rule;
}

ComplexVector SpectralProjection(const ResolventOracle &oracle, const Region &region,
                                 const ComplexVector &g, int quad_nodes)
{
  if (g.size() != oracle.Dimension() || !(g.norm() > 0.0))
  {
    throw Error(ErrorCode::InvalidArgument, "g must be a nonzero vector of the oracle size");
  }
  if (!(region.half_width > 0.0))
  {
    throw Error(ErrorCode::InvalidArgument, "region half width must be positive");
  }
  return ContourSolver(oracle, region, quad_nodes).Project(g);
}

double Indicator(const ResolventOracle &oracle, const Region &region, const ComplexVector &g,
                 int quad_nodes)
{
  if (g.size() != oracle.Dimension() || !(g.norm() > 0.0))
  {
    throw Error(ErrorCode::InvalidArgument, "g must be a nonzero vector of the oracle size");
  }
  if (!(region.half_width > 0.0))
  {
    throw Error(ErrorCode::InvalidArgument, "region half width must be positive");
  }
  return ContourSolver(oracle, region, quad_nodes).Indicator(g);
}

RimResult RimSearch(const ResolventOracle &oracle, const std::vector<Region> &regions,
                    const ComplexVector &g, const RimOptions &options)
{
  ValidateOptions(options, g, oracle);
  RimResult result;
  std::vector<EigenRecord> raw;
  for (const Region &region : regions)
  {
    if (!(region.half_width > 0.0) || region.depth > kMaxRegionDepth)
    {
      throw Error(ErrorCode::InvalidArgument, "invalid search region");
    }
    SearchOne(oracle, region, g, options, raw, result);
  }
  result.records = Deduplicate(std::move(raw), kDedupFactor * options.d0);
  for (EigenRecord &rec : result.records)
  {
    rec.residual = CenterResidual(oracle, rec.value, g, kDedupFactor * options.d0);
  }
  return result;
}

RimResult RimSearch(const ResolventOracle &oracle, const Region &region,
                    const ComplexVector &g, const RimOptions &options)
{
  return RimSearch(oracle, std::vector<Region>{region}, g, options);
}

std::vector<Region> CoverWithSquares(const Rect &input, bool pad)
{
  if (!input.Valid())
  {
    throw Error(ErrorCode::InvalidArgument, "empty rectangle");
  }
  Rect r = input;
  if (pad)
  {
    const double w = r.re1 - r.re0, h = r.im1 - r.im0;
    r.re0 -= 0.0137 * w;
    r.re1 += 0.0213 * w;
    r.im0 -= 0.0171 * h;
    r.im1 += 0.0119 * h;
  }
  const double w = r.re1 - r.re0, h = r.im1 - r.im0;
  const bool wide = w >= h;
  const double side = wide ? h : w, length = wide ? w : h;
  const auto n = static_cast<int>(std::ceil(length / side - 1e-9));
  std::vector<Region> squares;
  for (int i = 0; i < n; i++)
  {
    const double offset =
        n == 1 ? 0.5 * length : 0.5 * side + (length - side) * i / static_cast<double>(n - 1);
    const Complex c = wide ? Complex(r.re0 + offset, r.im0 + 0.5 * side)
                           : Complex(r.re0 + 0.5 * side, r.im0 + offset);
    squares.push_back({c, n == 1 ? 0.5 * length : 0.5 * side, 0});
  }
  return squares;
}

Rect InversionImageBounds(const Rect &rect)
{
  if (rect.DistanceToOrigin() <= kOriginClearance)
  {
    throw Error(ErrorCode::RegionContainsOrigin,
                "region comes within 1e-6 of the origin, where mu = -1/lambda is singular");
  }
  std::vector<Complex> pts{{rect.re0, rect.im0}, {rect.re1, rect.im0},
                           {rect.re1, rect.im1}, {rect.re0, rect.im1}};
  for (double y : {rect.im0, rect.im1})
  {
    for (double x : {0.0, y, -y})
    {
      if (x > rect.re0 && x < rect.re1)
      {
        pts.emplace_back(x, y);
      }
    }
  }
  for (double x : {rect.re0, rect.re1})
  {
    for (double y : {0.0, x, -x})
    {
      if (y > rect.im0 && y < rect.im1)
      {
        pts.emplace_back(x, y);
      }
    }
  }
  Rect out{INFINITY, -INFINITY, INFINITY, -INFINITY};
  for (Complex z : pts)
  {
    const Complex w = -1.0 / z;
    out.re0 = std::min(out.re0, w.real());
    out.re1 = std::max(out.re1, w.real());
    out.im0 = std::min(out.im0, w.imag());
    out.im1 = std::max(out.im1, w.imag());
  }
  return out;
}

Region MapLambdaRegionToMu(const Region &lambda_region)
{
  const Rect b = InversionImageBounds(lambda_region.Bounds());
  const double half = 0.5 * std::max(b.re1 - b.re0, b.im1 - b.im0);
  return {Complex(0.5 * (b.re0 + b.re1), 0.5 * (b.im0 + b.im1)), half, 0};
}

RimResult SearchRect(const ResolventOracle &oracle, const Rect &rect, const ComplexVector &g,
                     const RimOptions &options)
{
  RimOptions opts = options;
  opts.keep = [&rect, &options](const Region &r)
  { return r.Bounds().Intersects(rect) && (!options.keep || options.keep(r)); };
  RimResult result = RimSearch(oracle, CoverWithSquares(rect, true), g, opts);
  const double tol = kDedupFactor * options.d0;
  std::erase_if(result.records,
                [&](const EigenRecord &rec) { return !rect.Contains(rec.value, tol); });
  return result;
}

RimResult SearchLambdaRectViaMu(const ResolventOracle &ntd_oracle, const Rect &lambda_rect,
                                double spectral_bound, const ComplexVector &g,
                                const RimOptions &options)
{
  if (!lambda_rect.Valid())
  {
    throw Error(ErrorCode::InvalidArgument, "empty lambda rectangle");
  }
  if (!(spectral_bound > 0.0) || !std::isfinite(spectral_bound))
  {
    throw Error(ErrorCode::InvalidArgument, "spectral bound must be positive and finite");
  }
  // Points with |lambda| < 1/rho map to |mu| > rho and carry no eigenvalue; the
  // square [-eps, eps]^2 lies inside that disk.
  const double rho = spectral_bound;
  const double eps = 0.5 / rho;
  const Rect &R = lambda_rect;
  std::vector<Rect> pieces;
  if (R.re0 < -eps)
  {
    pieces.push_back({R.re0, std::min(R.re1, -eps), R.im0, R.im1});
  }
  if (R.re1 > eps)
  {
    pieces.push_back({std::max(R.re0, eps), R.re1, R.im0, R.im1});
  }
  const double mid0 = std::max(R.re0, -eps), mid1 = std::min(R.re1, eps);
  if (mid1 > mid0)
  {
    if (R.im1 > eps)
    {
      pieces.push_back({mid0, mid1, std::max(R.im0, eps), R.im1});
    }
    if (R.im0 < -eps)
    {
      pieces.push_back({mid0, mid1, R.im0, std::min(R.im1, -eps)});
    }
  }
  std::erase_if(pieces, [](const Rect &p) { return !p.Valid(); });

  const Rect spectrum_box{-rho, rho, -rho, rho};
  std::vector<Region> tiles;
  for (const Rect &piece : pieces)
  {
    const Rect image = Intersect(InversionImageBounds(piece), spectrum_box);
    if (!image.Valid())
    {
      continue;
    }
    for (const Region &tile : CoverWithSquares(image, true))
    {
      tiles.push_back(tile);
    }
  }

  // Skip mu-boxes whose lambda image misses every piece, lies beyond the spectral
  // bound, or lies inside the disk |mu| < 1/max|lambda|.
  const double mu_floor = 1.0 / MaxModulus(R);
  RimOptions opts = options;
  opts.plane = Plane::Mu;
  opts.keep = [&, mu_floor](const Region &box)
  {
    if (options.keep && !options.keep(box))
    {
      return false;
    }
    const Rect b = box.Bounds();
    if (b.DistanceToOrigin() > rho || MaxModulus(b) < mu_floor)
    {
      return false;
    }
    if (b.DistanceToOrigin() <= kOriginClearance)
    {
      return true;
    }
    const Rect image = InversionImageBounds(b);
    return std::any_of(pieces.begin(), pieces.end(),
                       [&](const Rect &p) { return p.Intersects(image); });
  };
  RimResult result = RimSearch(ntd_oracle, tiles, g, opts);
  std::erase_if(result.records,
                [&](const EigenRecord &rec)
                {
                  const Complex lambda = -1.0 / rec.value;
                  return !R.Contains(lambda, 1e-6 * std::max(1.0, std::abs(lambda)));
                });
  return result;
}

double EigenResidual(const ResolventOracle &oracle, Complex value, const ComplexVector &x)
{
  const ComplexVector r = oracle.ApplyA(x) - value * oracle.ApplyB(x);
  const double scale = (oracle.NormA() + std::abs(value) * oracle.NormB()) * x.norm();
  return scale > 0.0 ? r.norm() / scale : r.norm();
}

ComplexVector RandomVector(Eigen::Index n, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  ComplexVector g(n);
  for (Eigen::Index i = 0; i < n; i++)
  {
    const double re = normal(rng);
    g[i] = Complex(re, normal(rng));
  }
  return g;
}

}  // namespace steklov
