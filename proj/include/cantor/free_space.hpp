#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "cantor/lipschitz.hpp"
#include "cantor/metric.hpp"
#include "cantor/surgery.hpp"
#include "cantor/transport.hpp"

namespace cantor {

// Finitely supported sum of point evaluations with total weight zero.
template <Scalar T>
struct Molecule {
  std::map<std::size_t, T> weights;

  static Molecule dipole(std::size_t x, std::size_t y);  // delta_x - delta_y
  T total() const;
  Molecule scaled(const T& c) const;
  Molecule operator+(const Molecule& other) const;
};

template <Scalar T>
struct PointShipment {
  std::size_t from = 0;  // point index, positive part
  std::size_t to = 0;    // point index, negative part
  T amount;
};

template <Scalar T>
struct FreeNormResult {
  T value = 0;
  std::vector<PointShipment<T>> plan;
  // A 1-Lipschitz function vanishing at the base point with
  // sum_x weights(x) dual(x) == value.
  LipFn<T> dual;
};

// Norm in the free space: the optimal transport cost from the positive to
// the negative part of the molecule, with a Kantorovich-Rubinstein
// certificate. Throws invalid_argument if the weights do not sum to zero.
template <Scalar T>
FreeNormResult<T> free_norm(const Molecule<T>& mol, const DistanceMatrix<T>& d,
                            const Tolerance& tol = {}, std::size_t base_index = 0);

// Linear map from functions on `net` (vanishing at the base point) to
// functions on the whole net: (Tf)(x) = sum_p rows[x][p] f(net[p]).
template <Scalar T>
struct ExtOperator {
  std::vector<std::size_t> net;
  std::vector<std::vector<T>> rows;

  LipFn<T> apply(std::span<const T> values_on_net, std::size_t base_index = 0) const;
};

// T_n^d: f on {r_a : a in R_n} goes to the function constant on each
// depth-n cylinder, equal to f at the cylinder's representative.
template <Scalar T>
ExtOperator<T> build_Tn(const DyadicMetric<T>& d, int n);

template <Scalar T>
struct OperatorNorm {
  T exact;      // max_{a != b} d(r_a, r_b) / d(C_a, C_b)
  T chi_bound;  // chi_n^d
};

template <Scalar T>
OperatorNorm<T> op_norm_Tn(const DyadicMetric<T>& d, int n);

// sup over the unit ball of Lip_0(net) of ||(Tf)|_net - f||_inf, as the max
// over x in the net of the free norm of f -> (Tf)(x) - f(x) on (net, d).
template <Scalar T>
T defect(const ExtOperator<T>& op, const DistanceMatrix<T>& d, const Tolerance& tol = {},
         std::size_t base_index = 0);

template <Scalar T>
struct SplitBound {
  T bound;  // max(1, 2 D(K) / b), b the least distance between pieces
  T max_ratio_observed = 0;
  bool single_piece = false;
};

// Samples `trials` random Lipschitz functions and checks
// Lip(f) <= bound * max_i Lip(f restricted to piece_i with the base point).
// Throws internal if a sample exceeds the bound.
template <Scalar T>
SplitBound<T> split_bound_check(const DyadicMetric<T>& d, const PartitionSpec& partition,
                                int trials, std::uint64_t seed, const Tolerance& tol = {},
                                std::size_t base_index = 0);

// The bound alone, for a partition that covers the space.
template <Scalar T>
SplitBound<T> split_bound(const DyadicMetric<T>& d, const ResolvedPartition& part);

// The ratio for one function.
template <Scalar T>
T split_ratio(const LipFn<T>& f, const DyadicMetric<T>& d, const ResolvedPartition& part);

}  // namespace cantor
