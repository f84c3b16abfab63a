#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "cantor/metric.hpp"

namespace cantor {

enum class GeneratorKind { mu, middle_lambda, fat_cantor, ultrametric, random };

GeneratorKind parse_generator_kind(std::string_view name);
std::string_view generator_name(GeneratorKind kind);

struct GeneratorParams {
  Rational lambda{1, 3};
  // Removal fraction per level for fat_cantor; needs at least `depth` entries.
  std::vector<Rational> removal_fractions;
  // ultrametric: height ratio between consecutive levels (1/2 reproduces mu).
  Rational ratio{1, 2};
  // random and seeded ultrametric: relative perturbation amplitude, in [0, 1).
  Rational roughness{1, 2};
  std::optional<std::uint64_t> seed;
  int max_depth = kDefaultMaxDepth;
};

// Realizes one of the standard metric families on the depth-m net.
//
//  mu            mu(x, y) = 2^-k, k the first index where x and y differ.
//  middle_lambda |p(x) - p(y)|, p(a) = sum_i a_i (1 - r) r^(i-1), r = (1 - lambda)/2.
//  fat_cantor    the same with per-level fractions lambda_i.
//  ultrametric   heights h(prefix) shrinking by `ratio` per level; with a
//                seed each node's ratio is perturbed by up to `roughness`.
//  random        shortest-path closure of mu(x, y) (1 + roughness u), u drawn
//                from a grid in [-1, 1].
//
// Throws invalid_argument for depth overflow, parameters out of range, a
// missing seed for `random`, or a degenerate (zero off-diagonal) result.
template <Scalar T>
DyadicMetric<T> generate(GeneratorKind kind, int depth, const GeneratorParams& params = {});

// The numeric mode the library defaults to at a given depth.
NumberMode default_mode(int depth);

// Left endpoints of the construction intervals, in address order, and the
// per-level interval lengths L_0 = 1, L_1, ..., L_depth.
struct LineConstruction {
  std::vector<Rational> points;
  std::vector<Rational> lengths;
};
LineConstruction line_construction(std::span<const Rational> fractions, int depth);

}  // namespace cantor
