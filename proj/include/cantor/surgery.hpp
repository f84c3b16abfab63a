#pragma once

#include <span>
#include <vector>

#include "cantor/metric.hpp"

namespace cantor {

// A clopen target K' (a union of cylinders) and a partition of it into
// pieces, each itself a union of cylinders.
struct PartitionSpec {
  std::vector<Address> target;
  std::vector<std::vector<Address>> pieces;
};

// A PartitionSpec checked against a net depth.
struct ResolvedPartition {
  std::vector<int> piece_of;  // per point; -1 outside the target
  std::vector<std::vector<std::size_t>> pieces;
  std::vector<std::size_t> target_points;
};

// Throws invalid_argument unless the pieces are nonempty, pairwise disjoint
// and cover exactly the target.
ResolvedPartition resolve(const PartitionSpec& spec, int depth);

// Pieces are the depth-n cylinders; the target is the whole space.
PartitionSpec cylinder_partition(int n);

template <Scalar T>
struct SurgeryPlan {
  PartitionSpec partition;
  // One per piece, on exactly the piece's point count; local index i is the
  // piece's i-th point in address order.
  std::vector<DistanceMatrix<T>> replacements;
  T epsilon = T(1);
  T delta = T(1);
};

// Smallest cylinder level k (at least the longest target address, below the
// net depth) at which every depth-k cylinder inside the target has
// d-diameter < epsilon / 2. Singleton cylinders are never used: a point of
// the net stands for a whole infinite cylinder whose diameter the net cannot
// see. Throws insufficient_depth when no level qualifies.
template <Scalar T>
PartitionSpec greedy_partition(const DyadicMetric<T>& d, std::span<const Address> target,
                               const T& epsilon, const Tolerance& tol = {});

// The metric replacement construction. With D the d-sup-distance, the
// result equals
//   d(x, y)                         x, y outside K'
//   D(x, K_i)                       x outside K', y in K_i (and symmetrically)
//   e_i(x, y) min(delta, D(K_i)) / diam(e_i)   x, y in K_i
//   D(K_i, K_j)                     x in K_i, y in K_j, i != j
// It moves d by less than epsilon, shrinks each piece to diameter at most
// delta, and never decreases a distance between points of different pieces.
template <Scalar T>
DyadicMetric<T> apply_surgery(const DyadicMetric<T>& d, const SurgeryPlan<T>& plan,
                              const Tolerance& tol = {});

template <Scalar T>
struct PushResult {
  int n = 0;
  T delta;
  DyadicMetric<T> dtilde;
};

// Moves d by less than epsilon into U_n for the first admissible n >= n0:
// depth-n cylinders become pieces, each replaced by a copy of mu of diameter
// delta = min(1, min_{a != b} d(C_a, C_b) / (4n)).
template <Scalar T>
PushResult<T> push_into_Un(const DyadicMetric<T>& d, const T& epsilon, int n0,
                           const Tolerance& tol = {});

template <Scalar T>
struct TransplantResult {
  DyadicMetric<T> dtilde;
  PartitionSpec partition;
};

// An epsilon-close metric to `dhat` whose pieces are proportional to the
// corresponding subspaces of `class_rep`.
template <Scalar T>
TransplantResult<T> transplant(const DyadicMetric<T>& class_rep, const DyadicMetric<T>& dhat,
                               const T& epsilon, const Tolerance& tol = {});

}  // namespace cantor
