#include "cantor/generate.hpp"

#include <limits>
#include <random>

#include "cantor/error.hpp"

namespace cantor {

GeneratorKind parse_generator_kind(std::string_view name) {
  if (name == "mu") return GeneratorKind::mu;
  if (name == "middle-lambda" || name == "middle_lambda") return GeneratorKind::middle_lambda;
  if (name == "fat-cantor" || name == "fat_cantor") return GeneratorKind::fat_cantor;
  if (name == "ultrametric") return GeneratorKind::ultrametric;
  if (name == "random") return GeneratorKind::random;
  fail(ErrorKind::invalid_argument, "unknown generator kind '" + std::string(name) + "'");
}

std::string_view generator_name(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::mu: return "mu";
    case GeneratorKind::middle_lambda: return "middle-lambda";
    case GeneratorKind::fat_cantor: return "fat-cantor";
    case GeneratorKind::ultrametric: return "ultrametric";
    case GeneratorKind::random: return "random";
  }
  return "?";
}

NumberMode default_mode(int depth) { return depth <= 8 ? NumberMode::rational : NumberMode::real; }

LineConstruction line_construction(std::span<const Rational> fractions, int depth) {
  require(static_cast<int>(fractions.size()) >= depth,
          "need a removal fraction for every level up to the depth");
  LineConstruction out;
  out.lengths.push_back(Rational(1));
  for (int i = 0; i < depth; ++i) {
    const Rational& f = fractions[static_cast<std::size_t>(i)];
    require(f > 0 && f < 1, "removal fractions must lie in (0, 1)");
    out.lengths.push_back(Rational(out.lengths.back() * (1 - f) / 2));
  }
  out.points.assign(point_count(depth), Rational(0));
  for (std::size_t x = 0; x < out.points.size(); ++x) {
    Rational p = 0;
    for (int i = 1; i <= depth; ++i) {
      if ((x >> (depth - i)) & 1u) {
        p += out.lengths[static_cast<std::size_t>(i - 1)] - out.lengths[static_cast<std::size_t>(i)];
      }
    }
    out.points[x] = p;
  }
  return out;
}

namespace {

template <Scalar T>
DyadicMetric<T> from_heights(int depth, const std::vector<std::vector<T>>& heights) {
  // heights[k][node] is the distance between points whose longest common
  // prefix is `node` of length k.
  const std::size_t n = point_count(depth);
  DistanceMatrix<T> dist(n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      const int k = first_difference(x, y, depth) - 1;
      dist.set(x, y, heights[static_cast<std::size_t>(k)][x >> (depth - k)]);
    }
  }
  return DyadicMetric<T>(depth, std::move(dist));
}

template <Scalar T>
DyadicMetric<T> from_line(int depth, const std::vector<Rational>& points) {
  std::vector<T> coords;
  coords.reserve(points.size());
  for (const Rational& p : points) coords.push_back(from_rational<T>(p));
  DistanceMatrix<T> dist(points.size());
  for (std::size_t x = 0; x < points.size(); ++x) {
    for (std::size_t y = x + 1; y < points.size(); ++y) {
      dist.set(x, y, abs_of<T>(T(coords[x] - coords[y])));
    }
  }
  return DyadicMetric<T>(depth, std::move(dist), std::move(coords));
}

constexpr int kPerturbationGrid = 16;

// Random metric on an integer grid: every weight is an integer multiple of
// 1 / (2^depth * q * G), so the closure runs in exact 64-bit arithmetic.
template <Scalar T>
DyadicMetric<T> random_closure(int depth, const Rational& roughness, std::uint64_t seed) {
  require(roughness >= 0 && roughness < 1, "roughness must lie in [0, 1)");
  const mpz_class& p = roughness.get_num();
  const mpz_class& q = roughness.get_den();
  const mpz_class grid = q * kPerturbationGrid;
  const mpz_class denominator = grid << static_cast<unsigned>(depth);
  require(denominator < (mpz_class(1) << 40), "roughness denominator too large");
  const std::int64_t pp = p.get_si();
  const std::int64_t qq = q.get_si();

  const std::size_t n = point_count(depth);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> step(-kPerturbationGrid, kPerturbationGrid);
  std::vector<std::int64_t> w(n * n, 0);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      const int k = first_difference(x, y, depth);
      // mu * D = 2^(depth - k) * q * G; factor 1 + (p/q)(u/G) with u = step.
      const std::int64_t base = std::int64_t{1} << (depth - k);
      const std::int64_t v = base * (qq * kPerturbationGrid + pp * step(rng));
      w[x * n + y] = v;
      w[y * n + x] = v;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      const std::int64_t wik = w[i * n + k];
      std::int64_t* row = &w[i * n];
      const std::int64_t* krow = &w[k * n];
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || j == k) continue;
        const std::int64_t via = wik + krow[j];
        if (via < row[j]) row[j] = via;
      }
    }
  }
  DistanceMatrix<T> dist(n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      Rational value(mpz_class(static_cast<long>(w[x * n + y])), denominator);
      value.canonicalize();
      dist.set(x, y, from_rational<T>(value));
    }
  }
  return DyadicMetric<T>(depth, std::move(dist));
}

template <Scalar T>
DyadicMetric<T> ultrametric(int depth, const GeneratorParams& params) {
  require(params.ratio > 0 && params.ratio <= 1, "ultrametric ratio must lie in (0, 1]");
  std::optional<std::mt19937_64> rng;
  if (params.seed) {
    require(params.roughness >= 0 && params.roughness < 1, "roughness must lie in [0, 1)");
    require(params.ratio * (1 + params.roughness) <= 1,
            "ratio * (1 + roughness) must not exceed 1");
    rng.emplace(*params.seed);
  }
  std::uniform_int_distribution<int> step(-kPerturbationGrid, kPerturbationGrid);
  std::vector<std::vector<Rational>> exact(static_cast<std::size_t>(depth));
  exact[0] = {Rational(1, 2)};
  for (int k = 1; k < depth; ++k) {
    auto& level = exact[static_cast<std::size_t>(k)];
    level.resize(std::size_t{1} << k);
    for (std::size_t node = 0; node < level.size(); ++node) {
      Rational factor = params.ratio;
      if (rng) {
        factor *= 1 + params.roughness * Rational(step(*rng), kPerturbationGrid);
      }
      level[node] = exact[static_cast<std::size_t>(k - 1)][node >> 1] * factor;
    }
  }
  std::vector<std::vector<T>> heights(exact.size());
  for (std::size_t k = 0; k < exact.size(); ++k) {
    for (const Rational& h : exact[k]) heights[k].push_back(from_rational<T>(h));
  }
  return from_heights<T>(depth, heights);
}

template <Scalar T>
DyadicMetric<T> mu_metric(int depth) {
  std::vector<std::vector<T>> heights(static_cast<std::size_t>(depth));
  for (int k = 0; k < depth; ++k) {
    mpz_class pow2 = mpz_class(1) << static_cast<unsigned>(k + 1);
    const T h = from_rational<T>(Rational(mpz_class(1), pow2));
    heights[static_cast<std::size_t>(k)].assign(std::size_t{1} << k, h);
  }
  return from_heights<T>(depth, heights);
}

template <Scalar T>
void reject_degenerate(const DyadicMetric<T>& d) {
  for (std::size_t x = 0; x < d.size(); ++x) {
    for (std::size_t y = x + 1; y < d.size(); ++y) {
      require(d(x, y) > 0, "generator produced a zero off-diagonal distance");
    }
  }
}

}  // namespace

template <Scalar T>
DyadicMetric<T> generate(GeneratorKind kind, int depth, const GeneratorParams& params) {
  require(params.max_depth >= 1 && params.max_depth <= kHardMaxDepth,
          "configured maximum depth out of range");
  require(depth >= 1 && depth <= params.max_depth,
          "depth must lie in [1, " + std::to_string(params.max_depth) + "]");
  DyadicMetric<T> out;
  switch (kind) {
    case GeneratorKind::mu:
      out = mu_metric<T>(depth);
      break;
    case GeneratorKind::middle_lambda: {
      require(params.lambda > 0 && params.lambda < 1, "lambda must lie in (0, 1)");
      std::vector<Rational> fractions(static_cast<std::size_t>(depth), params.lambda);
      out = from_line<T>(depth, line_construction(fractions, depth).points);
      break;
    }
    case GeneratorKind::fat_cantor:
      out = from_line<T>(depth, line_construction(params.removal_fractions, depth).points);
      break;
    case GeneratorKind::ultrametric:
      out = ultrametric<T>(depth, params);
      break;
    case GeneratorKind::random:
      require(params.seed.has_value(), "the random generator requires a seed");
      out = random_closure<T>(depth, params.roughness, *params.seed);
      break;
  }
  reject_degenerate(out);
  return out;
}

template DyadicMetric<Rational> generate<Rational>(GeneratorKind, int, const GeneratorParams&);
template DyadicMetric<double> generate<double>(GeneratorKind, int, const GeneratorParams&);

}  // namespace cantor
