#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "cantor/metric.hpp"

namespace cantor {

// A real function on the net, in address order. Lip_0 operations expect
// values[base_index] == 0; see normalized().
template <Scalar T>
struct LipFn {
  std::vector<T> values;
  std::size_t base_index = 0;

  // The same function shifted to vanish at the base point.
  LipFn normalized() const;
  friend bool operator==(const LipFn&, const LipFn&) = default;
};

template <Scalar T>
struct LipWitness {
  T value = 0;
  std::size_t x = 0;
  std::size_t y = 0;
  bool degenerate = false;  // fewer than two points: 0 by convention
};

// max |f(x) - f(y)| / d(x, y) over pairs, optionally within `subset`.
template <Scalar T>
LipWitness<T> lip_witness(std::span<const T> values, const DistanceMatrix<T>& d,
                          std::optional<std::span<const std::size_t>> subset = std::nullopt);

template <Scalar T>
T lip_const(const LipFn<T>& f, const DistanceMatrix<T>& d,
            std::optional<std::span<const std::size_t>> subset = std::nullopt) {
  return lip_witness<T>(f.values, d, subset).value;
}

// f(x) = min_{s in S} (partial(s) + L d(x, s)): the largest L-Lipschitz
// extension. Throws invalid_argument naming a witness pair if `partial` is
// not L-Lipschitz on its domain.
template <Scalar T>
LipFn<T> mcshane_extend(const std::map<std::size_t, T>& partial, const T& lipschitz,
                        const DistanceMatrix<T>& d, const Tolerance& tol = {},
                        std::size_t base_index = 0);

// Lip(f) + ||f||_inf.
template <Scalar T>
T lip_full_norm(const LipFn<T>& f, const DistanceMatrix<T>& d);

// For each radius r: max over centres x of Lip(f restricted to the open ball
// B_r(x)). Singleton balls contribute 0.
template <Scalar T>
std::map<T, T> flatness_profile(const LipFn<T>& f, const DistanceMatrix<T>& d,
                                std::span<const T> radii);

// Test-input generator: random L-feasible values on a random subset
// (always containing the base point, where the value is 0), McShane-extended.
// Deterministic per seed, and exactly linear in L.
template <Scalar T>
LipFn<T> random_lip(const DistanceMatrix<T>& d, const T& lipschitz, std::uint64_t seed,
                    std::size_t base_index = 0);

}  // namespace cantor
