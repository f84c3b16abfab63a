#pragma once

#include <map>
#include <span>
#include <vector>

#include "cantor/metric.hpp"

namespace cantor {

template <Scalar T>
struct MetricDiagnostics {
  T max_triangle_defect = 0;  // max over i,j,k of d(i,k) - d(i,j) - d(j,k), floored at 0
  T max_symmetry_defect = 0;  // max |d(i,j) - d(j,i)|
  T max_diagonal = 0;         // max |d(i,i)|
  T min_offdiagonal = 0;
  bool has_negative = false;
  // For square matrices of size 2^m: n -> min{d(x,y) : mu(x,y) >= 2^-n}.
  std::map<int, T> positivity_scale_report;
  bool accepted = false;
};

// Always returns diagnostics; never throws on a non-metric input.
template <Scalar T>
MetricDiagnostics<T> validate_metric(const DistanceMatrix<T>& matrix, const Tolerance& tol = {});

template <Scalar T>
T min_offdiagonal(const DistanceMatrix<T>& matrix);

// max |d1 - d2| over all pairs.
template <Scalar T>
T sup_distance(const DyadicMetric<T>& d1, const DyadicMetric<T>& d2);

// Inf-distance, sup-distance and diameter between the depth-n cylinders,
// taken over the net's representatives.
template <Scalar T>
struct CylinderStats {
  int level = 0;
  std::size_t count = 0;
  std::vector<T> inf_dist;  // count x count, row-major
  std::vector<T> sup_dist;
  std::vector<T> diam;

  const T& inf(std::size_t a, std::size_t b) const { return inf_dist[a * count + b]; }
  const T& sup(std::size_t a, std::size_t b) const { return sup_dist[a * count + b]; }
};

template <Scalar T>
CylinderStats<T> cylinder_stats(const DyadicMetric<T>& d, int n);

template <Scalar T>
struct ChiValue {
  T value;
  bool in_Un = false;  // value < 1 + 1/n
};

// chi_n^d = max_{a != b in R_n} D(C_a, C_b) / d(C_a, C_b). Requires 1 <= n < depth.
template <Scalar T>
ChiValue<T> chi(const DyadicMetric<T>& d, int n, const Tolerance& tol = {});

template <Scalar T>
ChiValue<T> chi_from_stats(const CylinderStats<T>& stats, const Tolerance& tol = {});

// max over x of min over s in `subset` of d(x, s).
template <Scalar T>
T net_density(const DyadicMetric<T>& d, std::span<const std::size_t> subset);

// Best uniform-disconnectedness constant of the finite space:
// min over x != y of bottleneck(x, y) / d(x, y), where bottleneck is the
// minimax edge weight over paths from x to y.
template <Scalar T>
T disconnection_constant(const DistanceMatrix<T>& d);

// All-pairs minimax path values, read off a minimum spanning tree.
template <Scalar T>
DistanceMatrix<T> bottleneck_distances(const DistanceMatrix<T>& d);

}  // namespace cantor
