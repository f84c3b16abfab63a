#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cantor/number.hpp"

namespace cantor {

template <Scalar T>
struct Shipment {
  std::size_t from = 0;  // supply index
  std::size_t to = 0;    // demand index
  T amount;
};

template <Scalar T>
struct TransportSolution {
  T cost = 0;
  std::vector<Shipment<T>> shipments;
  // Dual prices with u_i - v_j <= cost(i, j), equality on every used route,
  // and sum_i supply_i u_i - sum_j demand_j v_j == cost.
  std::vector<T> supply_price;
  std::vector<T> demand_price;
};

// Balanced transportation problem solved as a min-cost flow by successive
// shortest augmenting paths (Bellman-Ford on the residual network, so
// negative residual costs are fine). `cost` is row-major, supply.size() x
// demand.size(), and must be nonnegative.
template <Scalar T>
TransportSolution<T> solve_transport(std::span<const T> supply, std::span<const T> demand,
                                     std::span<const T> cost, const Tolerance& tol = {});

}  // namespace cantor
