#include "cantor/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <unordered_set>
#include <variant>

#include "cantor/error.hpp"

namespace cantor {

namespace {

// Difference constraints for points placed left to right in `order`:
//   x_j - x_i >= d(i, j)       (edge j -> i, weight -d)
//   x_j - x_i <= c * d(i, j)   (edge i -> j, weight c d)
template <Scalar T>
class LineConstraints {
 public:
  LineConstraints(const DistanceMatrix<T>& d, std::span<const std::size_t> points,
                  std::span<const std::size_t> order, const Tolerance& tol)
      : n_(order.size()), tol_(tol) {
    gap_.resize(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) gap_[i * n_ + j] = d(points[order[i]], points[order[j]]);
    }
  }

  struct Cycle {
    T up = 0;    // sum of d over i -> j edges (i < j)
    T down = 0;  // sum of d over j -> i edges
  };

  // Shortest distances from a virtual root, or a negative cycle at `c`.
  std::variant<std::vector<T>, Cycle> solve(const T& c) const {
    constexpr std::size_t none = static_cast<std::size_t>(-1);
    std::vector<T> dist(n_, T(0));
    std::vector<std::size_t> pred(n_, none);
    std::size_t last = none;
    T candidate;
    for (std::size_t phase = 0; phase <= n_; ++phase) {
      last = none;
      for (std::size_t u = 0; u < n_; ++u) {
        for (std::size_t v = 0; v < n_; ++v) {
          if (u == v) continue;
          candidate = u < v ? T(dist[u] + c * gap_[u * n_ + v]) : T(dist[u] - gap_[u * n_ + v]);
          if (tol_.lt(candidate, dist[v])) {
            dist[v] = candidate;
            pred[v] = u;
            last = v;
          }
        }
      }
      if (last == none) return dist;
    }
    std::size_t v = last;
    for (std::size_t k = 0; k < n_; ++k) {
      ensure(pred[v] != none, "line_distortion: broken predecessor chain");
      v = pred[v];
    }
    Cycle cycle;
    std::size_t u = v;
    do {
      const std::size_t p = pred[u];
      if (p < u) {
        cycle.up += gap_[p * n_ + u];
      } else {
        cycle.down += gap_[p * n_ + u];
      }
      u = p;
    } while (u != v);
    return cycle;
  }

  bool feasible(const T& c) const { return std::holds_alternative<std::vector<T>>(solve(c)); }

  // Least feasible c and the witness positions.
  std::pair<T, std::vector<T>> optimum() const {
    T c = 1;
    for (;;) {
      auto result = solve(c);
      if (auto* positions = std::get_if<std::vector<T>>(&result)) return {c, std::move(*positions)};
      const Cycle& cycle = std::get<Cycle>(result);
      T next = cycle.down / cycle.up;
      ensure(tol_.lt(c, next) || !tol_.lt(next, c), "line_distortion: cycle ratio did not increase");
      if (!tol_.lt(c, next)) {
        // Double mode: the cycle is negative only by rounding.
        return {c, std::get<std::vector<T>>(solve(T(c + T(tol_.eps()))))};
      }
      c = next;
    }
  }

 private:
  std::size_t n_;
  std::vector<T> gap_;
  Tolerance tol_;
};

template <Scalar T>
struct LineSearch {
  const DistanceMatrix<T>& d;
  std::span<const std::size_t> points;
  const Tolerance& tol;
  std::optional<T> best;
  std::vector<std::size_t> best_order;
  std::vector<T> best_positions;

  void consider(const std::vector<std::size_t>& order) {
    const LineConstraints<T> system(d, points, order, tol);
    if (best && !system.feasible(*best)) return;
    auto [c, positions] = system.optimum();
    const bool better = !best || tol.lt(c, *best) ||
                        (tol.eq(c, *best) && order < best_order);
    if (!better) return;
    best = c;
    best_order = order;
    best_positions = std::move(positions);
  }

  void search(std::vector<std::size_t>& prefix, std::vector<char>& used) {
    if (prefix.size() == points.size()) {
      consider(prefix);
      return;
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (used[i]) continue;
      prefix.push_back(i);
      if (!best || prefix.size() < 3 || LineConstraints<T>(d, points, prefix, tol).feasible(*best)) {
        used[i] = 1;
        search(prefix, used);
        used[i] = 0;
      }
      prefix.pop_back();
    }
  }
};

}  // namespace

template <Scalar T>
DistortionReport<T> line_distortion(std::span<const std::size_t> points, const DistanceMatrix<T>& d,
                                    const Tolerance& tol) {
  require(points.size() >= 2, "line_distortion: need at least two points");
  require(points.size() <= kMaxLinePoints,
          "line_distortion: at most " + std::to_string(kMaxLinePoints) + " points (factorial search)");
  for (std::size_t i = 0; i < points.size(); ++i) {
    require(points[i] < d.size(), "line_distortion: point out of range");
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      require(points[i] != points[j], "line_distortion: repeated point");
    }
  }
  LineSearch<T> search{d, points, tol, std::nullopt, {}, {}};

  // Seed the incumbent with the order by distance from one end of a
  // diameter; it is optimal whenever the points already lie on a line.
  std::size_t far = 0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (d(points[0], points[far]) < d(points[0], points[i])) far = i;
  }
  std::vector<std::size_t> seed(points.size());
  std::iota(seed.begin(), seed.end(), std::size_t{0});
  std::stable_sort(seed.begin(), seed.end(), [&](std::size_t a, std::size_t b) {
    return d(points[far], points[a]) < d(points[far], points[b]);
  });
  search.consider(seed);

  std::vector<std::size_t> prefix;
  std::vector<char> used(points.size(), 0);
  search.search(prefix, used);

  DistortionReport<T> out;
  out.distortion = *search.best;
  out.ordering = search.best_order;
  out.embedding.assign(points.size(), T(0));
  T lowest = *std::min_element(search.best_positions.begin(), search.best_positions.end());
  for (std::size_t k = 0; k < out.ordering.size(); ++k) {
    out.embedding[out.ordering[k]] = search.best_positions[k] - lowest;
  }
  return out;
}

template <Scalar T>
MapDistortion<T> map_distortion(const DistanceMatrix<T>& d1, const DistanceMatrix<T>& d2,
                                std::span<const std::size_t> bijection) {
  require(d1.size() == d2.size(), "map_distortion: size mismatch");
  require(bijection.size() == d1.size(), "map_distortion: bijection has the wrong size");
  require(d1.size() >= 2, "map_distortion: need at least two points");
  std::vector<char> hit(d2.size(), 0);
  for (std::size_t v : bijection) {
    require(v < d2.size() && !hit[v], "map_distortion: not a bijection");
    hit[v] = 1;
  }
  MapDistortion<T> out;
  bool first = true;
  T ratio;
  for (std::size_t x = 0; x < d1.size(); ++x) {
    for (std::size_t y = x + 1; y < d1.size(); ++y) {
      ratio = d2(bijection[x], bijection[y]) / d1(x, y);
      if (first || out.max_ratio < ratio) out.max_ratio = ratio;
      if (first || ratio < out.min_ratio) out.min_ratio = ratio;
      first = false;
    }
  }
  out.distortion = out.scaled_isometry() ? 1.0 : std::sqrt(to_double(T(out.max_ratio / out.min_ratio)));
  return out;
}

template <Scalar T>
std::pair<MapDistortion<T>, std::vector<std::size_t>> best_map_distortion(
    const DistanceMatrix<T>& d1, const DistanceMatrix<T>& d2) {
  require(d1.size() == d2.size(), "best_map_distortion: size mismatch");
  require(d1.size() <= kMaxExhaustiveBijection, "best_map_distortion: at most 8 points");
  std::vector<std::size_t> perm(d1.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::optional<std::pair<MapDistortion<T>, std::vector<std::size_t>>> best;
  std::optional<T> best_spread;
  do {
    MapDistortion<T> m = map_distortion(d1, d2, perm);
    T spread = m.max_ratio / m.min_ratio;
    if (!best_spread || spread < *best_spread) {
      best_spread = spread;
      best.emplace(m, perm);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return *best;
}

double dim_formula(double lambda) {
  require(lambda > 0.0 && lambda < 1.0, "dim_formula: lambda must lie in (0, 1)");
  return std::log(2.0) / std::log(2.0 / (1.0 - lambda));
}

double box_dim_estimate(std::span<const double> coordinates, std::span<const double> scales) {
  require(!coordinates.empty(), "box_dim_estimate: no points");
  std::vector<double> distinct(scales.begin(), scales.end());
  for (double s : distinct) require(s > 0.0 && std::isfinite(s), "box_dim_estimate: scales must be positive");
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  require(distinct.size() >= 3, "box_dim_estimate: need at least three distinct scales");

  std::vector<double> xs;
  std::vector<double> ys;
  for (double s : distinct) {
    std::unordered_set<long long> boxes;
    for (double p : coordinates) boxes.insert(static_cast<long long>(std::floor(p / s)));
    xs.push_back(std::log(1.0 / s));
    ys.push_back(std::log(static_cast<double>(boxes.size())));
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

template <Scalar T>
double box_dim_estimate(const DyadicMetric<T>& d, std::span<const double> scales) {
  require(d.line_coordinates().has_value(),
          "box_dim_estimate: metric has no line realisation (generate it with middle-lambda or fat-cantor)");
  std::vector<double> coords;
  for (const T& v : *d.line_coordinates()) coords.push_back(to_double(v));
  return box_dim_estimate(coords, scales);
}

template <Scalar T>
std::vector<double> default_box_scales(const DyadicMetric<T>& d) {
  require(d.line_coordinates().has_value(), "default_box_scales: metric has no line realisation");
  std::vector<double> coords;
  for (const T& v : *d.line_coordinates()) coords.push_back(to_double(v));
  std::sort(coords.begin(), coords.end());
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < coords.size(); ++i) gap = std::min(gap, coords[i] - coords[i - 1]);
  const int finest = static_cast<int>(std::floor(std::log2(1.0 / gap)));
  std::vector<double> scales;
  for (int k = 2; k <= std::max(finest, 4); ++k) scales.push_back(std::ldexp(1.0, -k));
  return scales;
}

Rational fat_measure(std::span<const Rational> removal_fractions, int depth) {
  require(depth >= 0, "fat_measure: negative depth");
  Rational out = 1;
  for (std::size_t i = 0; i < removal_fractions.size(); ++i) {
    const Rational& f = removal_fractions[i];
    require(f > 0 && f < 1, "fat_measure: fractions must lie in (0, 1)");
    if (static_cast<int>(i) < depth) out *= 1 - f;
  }
  return out;
}

#define CANTOR_INSTANTIATE(T)                                                                       \
  template DistortionReport<T> line_distortion<T>(std::span<const std::size_t>,                     \
                                                  const DistanceMatrix<T>&, const Tolerance&);     \
  template MapDistortion<T> map_distortion<T>(const DistanceMatrix<T>&, const DistanceMatrix<T>&,   \
                                              std::span<const std::size_t>);                        \
  template std::pair<MapDistortion<T>, std::vector<std::size_t>> best_map_distortion<T>(           \
      const DistanceMatrix<T>&, const DistanceMatrix<T>&);                                          \
  template double box_dim_estimate<T>(const DyadicMetric<T>&, std::span<const double>);             \
  template std::vector<double> default_box_scales<T>(const DyadicMetric<T>&);

CANTOR_INSTANTIATE(Rational)
CANTOR_INSTANTIATE(double)

}  // namespace cantor
