#pragma once

#include <span>
#include <vector>

#include "cantor/generate.hpp"
#include "cantor/metric.hpp"

namespace cantor {

inline constexpr std::size_t kMaxLinePoints = 10;
inline constexpr std::size_t kMaxExhaustiveBijection = 8;

// Optimal monotone embedding of a finite subset into the line, normalised
// to be non-contracting: d <= |h(x) - h(y)| <= distortion * d.
template <Scalar T>
struct DistortionReport {
  T distortion = 1;
  std::vector<T> embedding;          // coordinate per input point
  std::vector<std::size_t> ordering;  // input positions, left to right
};

// Exact minimum over orderings. For a fixed ordering the least feasible
// distortion is the largest down/up weight ratio over cycles of the
// difference-constraint graph; it is found by repeatedly extracting a
// negative cycle at the current value and jumping to that cycle's ratio.
// Orderings are searched depth-first with prefixes pruned by feasibility at
// the incumbent value. Throws invalid_argument outside 2..10 points.
template <Scalar T>
DistortionReport<T> line_distortion(std::span<const std::size_t> points, const DistanceMatrix<T>& d,
                                    const Tolerance& tol = {});

template <Scalar T>
struct MapDistortion {
  double distortion = 1;  // sqrt(max_ratio / min_ratio)
  T max_ratio;            // over pairs, of d2(h x, h y) / d1(x, y)
  T min_ratio;

  bool scaled_isometry() const { return max_ratio == min_ratio; }
};

// `bijection[i]` is the d2-index of d1-point i.
template <Scalar T>
MapDistortion<T> map_distortion(const DistanceMatrix<T>& d1, const DistanceMatrix<T>& d2,
                                std::span<const std::size_t> bijection);

// Smallest distortion over all bijections (at most 8 points).
template <Scalar T>
std::pair<MapDistortion<T>, std::vector<std::size_t>> best_map_distortion(
    const DistanceMatrix<T>& d1, const DistanceMatrix<T>& d2);

// Hausdorff dimension of the middle-lambda Cantor set.
double dim_formula(double lambda);

// Least-squares slope of log N(s) against log(1/s), N(s) the number of
// occupied grid boxes of side s. Needs at least three distinct scales.
double box_dim_estimate(std::span<const double> coordinates, std::span<const double> scales);

template <Scalar T>
double box_dim_estimate(const DyadicMetric<T>& d, std::span<const double> scales);

// Dyadic scales 2^-2, 2^-3, ... down to the smallest gap between adjacent
// points of the metric's line realisation.
template <Scalar T>
std::vector<double> default_box_scales(const DyadicMetric<T>& d);

// prod_{i <= depth} (1 - lambda_i); missing fractions count as 0.
Rational fat_measure(std::span<const Rational> removal_fractions, int depth);

}  // namespace cantor
