#include "cantor/metric_ops.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "cantor/error.hpp"

namespace cantor {

namespace {

// A rational matrix rewritten over one common denominator, when the scaled
// numerators fit comfortably in 64 bits.
struct IntegerImage {
  std::vector<std::int64_t> values;
  mpz_class denominator;
};

std::optional<IntegerImage> integer_image(const DistanceMatrix<Rational>& m) {
  constexpr std::int64_t kLimit = std::int64_t{1} << 60;
  const std::size_t n = m.size();
  std::int64_t common = 1;
  for (std::size_t i = 0; i < n * n; ++i) {
    const Rational& q = m(i / n, i % n);
    if (!mpz_fits_slong_p(q.get_den_mpz_t()) || !mpz_fits_slong_p(q.get_num_mpz_t())) return std::nullopt;
    const std::int64_t den = mpz_get_si(q.get_den_mpz_t());
    if (common % den == 0) continue;
    std::int64_t lcm = 0;
    if (__builtin_mul_overflow(common / std::gcd(common, den), den, &lcm) || lcm >= kLimit) return std::nullopt;
    common = lcm;
  }
  IntegerImage out;
  out.denominator = static_cast<long>(common);
  out.values.resize(n * n);
  for (std::size_t i = 0; i < n * n; ++i) {
    const Rational& q = m(i / n, i % n);
    std::int64_t scaled = 0;
    if (__builtin_mul_overflow(mpz_get_si(q.get_num_mpz_t()), common / mpz_get_si(q.get_den_mpz_t()), &scaled) ||
        scaled >= kLimit || scaled <= -kLimit)
      return std::nullopt;
    out.values[i] = scaled;
  }
  return out;
}

template <class V>
V triangle_defect_dense(const std::vector<V>& w, std::size_t n) {
  V worst = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const V* ri = &w[i * n];
    for (std::size_t j = 0; j < n; ++j) {
      const V* rj = &w[j * n];
      const V dij = ri[j];
      for (std::size_t k = 0; k < n; ++k) {
        const V excess = ri[k] - dij - rj[k];
        if (excess > worst) worst = excess;
      }
    }
  }
  return worst;
}

Rational triangle_defect(const DistanceMatrix<Rational>& m) {
  if (auto image = integer_image(m)) {
    const std::int64_t worst = triangle_defect_dense(image->values, m.size());
    Rational out(mpz_class(static_cast<long>(worst)), image->denominator);
    out.canonicalize();
    return out;
  }
  // Floating-point filter: a triple whose double excess is clearly negative
  // cannot be violated; only the rest are evaluated exactly. Each entry is
  // correctly rounded, so the computed excess is off by at most a few ulps
  // of the sum of magnitudes.
  const std::size_t n = m.size();
  std::vector<double> w(n * n);
  for (std::size_t i = 0; i < n * n; ++i) w[i] = to_double(m(i / n, i % n));
  constexpr double kSlack = 8 * std::numeric_limits<double>::epsilon();
  Rational worst = 0;
  Rational excess;
  for (std::size_t i = 0; i < n; ++i) {
    const double* ri = &w[i * n];
    for (std::size_t j = 0; j < n; ++j) {
      const double* rj = &w[j * n];
      const double dij = ri[j];
      for (std::size_t k = 0; k < n; ++k) {
        const double approx = ri[k] - dij - rj[k];
        if (approx < -kSlack * (std::abs(ri[k]) + std::abs(dij) + std::abs(rj[k]))) continue;
        excess = m(i, k) - m(i, j) - m(j, k);
        if (excess > worst) worst = excess;
      }
    }
  }
  return worst;
}

double triangle_defect(const DistanceMatrix<double>& m) {
  const std::size_t n = m.size();
  std::vector<double> w(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = m.row(i);
    std::copy(r.begin(), r.end(), w.begin() + static_cast<std::ptrdiff_t>(i * n));
  }
  return triangle_defect_dense(w, n);
}

}  // namespace

template <Scalar T>
T min_offdiagonal(const DistanceMatrix<T>& matrix) {
  const std::size_t n = matrix.size();
  if (n < 2) return T(0);
  T best = matrix(0, 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && matrix(i, j) < best) best = matrix(i, j);
    }
  }
  return best;
}

template <Scalar T>
MetricDiagnostics<T> validate_metric(const DistanceMatrix<T>& matrix, const Tolerance& tol) {
  MetricDiagnostics<T> out;
  const std::size_t n = matrix.size();
  for (std::size_t i = 0; i < n; ++i) {
    const T diag = abs_of<T>(matrix(i, i));
    if (out.max_diagonal < diag) out.max_diagonal = diag;
    for (std::size_t j = 0; j < n; ++j) {
      if (matrix(i, j) < 0) out.has_negative = true;
      if (j > i) {
        const T asym = abs_of<T>(T(matrix(i, j) - matrix(j, i)));
        if (out.max_symmetry_defect < asym) out.max_symmetry_defect = asym;
      }
    }
  }
  out.min_offdiagonal = min_offdiagonal(matrix);
  out.max_triangle_defect = triangle_defect(matrix);

  if (n >= 2 && std::has_single_bit(n)) {
    const int depth = std::bit_width(n) - 1;
    // Least distance per first-difference index, then running minima.
    std::vector<std::optional<T>> at(static_cast<std::size_t>(depth) + 1);
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        if (x == y) continue;
        auto& slot = at[static_cast<std::size_t>(first_difference(x, y, depth))];
        if (!slot || matrix(x, y) < *slot) slot = matrix(x, y);
      }
    }
    std::optional<T> best;
    for (int level = 1; level <= depth; ++level) {
      const auto& slot = at[static_cast<std::size_t>(level)];
      if (!best || *slot < *best) best = *slot;
      out.positivity_scale_report.emplace(level, *best);
    }
  }

  out.accepted = !out.has_negative && tol.is_zero(out.max_diagonal) &&
                 tol.is_zero(out.max_symmetry_defect) && tol.is_zero(out.max_triangle_defect) &&
                 (n < 2 || out.min_offdiagonal > 0);
  return out;
}

template <Scalar T>
T sup_distance(const DyadicMetric<T>& d1, const DyadicMetric<T>& d2) {
  require(d1.depth() == d2.depth(), "sup_distance: depth mismatch");
  T worst = 0;
  for (std::size_t i = 0; i < d1.size(); ++i) {
    for (std::size_t j = i + 1; j < d1.size(); ++j) {
      T diff = abs_of<T>(T(d1(i, j) - d2(i, j)));
      if (worst < diff) worst = diff;
    }
  }
  return worst;
}

template <Scalar T>
CylinderStats<T> cylinder_stats(const DyadicMetric<T>& d, int n) {
  require(n >= 1 && n <= d.depth(), "cylinder level out of range");
  const int shift = d.depth() - n;
  CylinderStats<T> out;
  out.level = n;
  out.count = point_count(n);
  const std::size_t c = out.count;
  out.inf_dist.assign(c * c, T(0));
  out.sup_dist.assign(c * c, T(0));
  std::vector<char> seen(c * c, 0);
  for (std::size_t x = 0; x < d.size(); ++x) {
    const std::size_t a = x >> shift;
    for (std::size_t y = x + 1; y < d.size(); ++y) {
      const std::size_t b = y >> shift;
      const T& v = d(x, y);
      const std::size_t ab = a * c + b;
      if (a == b) {
        if (out.sup_dist[ab] < v) out.sup_dist[ab] = v;
        continue;
      }
      if (!seen[ab]) {
        seen[ab] = 1;
        out.inf_dist[ab] = v;
        out.sup_dist[ab] = v;
      } else {
        if (v < out.inf_dist[ab]) out.inf_dist[ab] = v;
        if (out.sup_dist[ab] < v) out.sup_dist[ab] = v;
      }
    }
  }
  for (std::size_t a = 0; a < c; ++a) {
    for (std::size_t b = 0; b < a; ++b) {
      out.inf_dist[a * c + b] = out.inf_dist[b * c + a];
      out.sup_dist[a * c + b] = out.sup_dist[b * c + a];
    }
    out.diam.push_back(out.sup_dist[a * c + a]);
  }
  return out;
}

template <Scalar T>
ChiValue<T> chi_from_stats(const CylinderStats<T>& stats, const Tolerance& tol) {
  require(stats.count >= 2, "chi needs at least two cylinders");
  ChiValue<T> out{T(0), false};
  for (std::size_t a = 0; a < stats.count; ++a) {
    for (std::size_t b = a + 1; b < stats.count; ++b) {
      ensure(stats.inf(a, b) > 0, "zero distance between distinct cylinders");
      T ratio = stats.sup(a, b) / stats.inf(a, b);
      if (out.value < ratio) out.value = ratio;
    }
  }
  const T bound = T(1) + T(1) / T(stats.level);
  out.in_Un = tol.lt(out.value, bound);
  return out;
}

template <Scalar T>
ChiValue<T> chi(const DyadicMetric<T>& d, int n, const Tolerance& tol) {
  require(n >= 1, "chi: level must be at least 1");
  require(n < d.depth(),
          "chi: level must be below the net depth (singleton cylinders make the ratio trivially 1)");
  return chi_from_stats(cylinder_stats(d, n), tol);
}

template <Scalar T>
T net_density(const DyadicMetric<T>& d, std::span<const std::size_t> subset) {
  require(!subset.empty(), "net_density: empty subset");
  for (std::size_t s : subset) require(s < d.size(), "net_density: point out of range");
  T worst = 0;
  for (std::size_t x = 0; x < d.size(); ++x) {
    T nearest = d(x, subset.front());
    for (std::size_t s : subset) {
      if (d(x, s) < nearest) nearest = d(x, s);
    }
    if (worst < nearest) worst = nearest;
  }
  return worst;
}

template <Scalar T>
DistanceMatrix<T> bottleneck_distances(const DistanceMatrix<T>& d) {
  const std::size_t n = d.size();
  DistanceMatrix<T> out(n);
  if (n < 2) return out;
  // Prim on the complete graph.
  std::vector<char> in_tree(n, 0);
  std::vector<std::size_t> parent(n, 0);
  std::vector<T> key(n);
  std::vector<std::vector<std::size_t>> children(n);
  in_tree[0] = 1;
  for (std::size_t v = 1; v < n; ++v) key[v] = d(0, v);
  std::vector<std::size_t> order{0};
  for (std::size_t step = 1; step < n; ++step) {
    std::size_t pick = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (!in_tree[v] && (pick == n || key[v] < key[pick])) pick = v;
    }
    in_tree[pick] = 1;
    order.push_back(pick);
    for (std::size_t v = 0; v < n; ++v) {
      if (!in_tree[v] && d(pick, v) < key[v]) {
        key[v] = d(pick, v);
        parent[v] = pick;
      }
    }
  }
  // Vertices join in `order`; each new vertex's path maximum to an earlier
  // vertex u is max(edge to its parent, bottleneck(parent, u)).
  for (std::size_t idx = 1; idx < order.size(); ++idx) {
    const std::size_t v = order[idx];
    const std::size_t p = parent[v];
    const T& edge = d(p, v);
    for (std::size_t earlier = 0; earlier < idx; ++earlier) {
      const std::size_t u = order[earlier];
      out.set(v, u, u == p ? edge : max_of<T>(edge, out(p, u)));
    }
  }
  return out;
}

template <Scalar T>
T disconnection_constant(const DistanceMatrix<T>& d) {
  const std::size_t n = d.size();
  if (n < 2) return T(1);
  const DistanceMatrix<T> bottleneck = bottleneck_distances(d);
  T best = 1;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      T ratio = bottleneck(x, y) / d(x, y);
      if (ratio < best) best = ratio;
    }
  }
  return best;
}

#define CANTOR_INSTANTIATE(T)                                                              \
  template MetricDiagnostics<T> validate_metric<T>(const DistanceMatrix<T>&, const Tolerance&); \
  template T min_offdiagonal<T>(const DistanceMatrix<T>&);                                 \
  template T sup_distance<T>(const DyadicMetric<T>&, const DyadicMetric<T>&);              \
  template CylinderStats<T> cylinder_stats<T>(const DyadicMetric<T>&, int);                \
  template ChiValue<T> chi<T>(const DyadicMetric<T>&, int, const Tolerance&);              \
  template ChiValue<T> chi_from_stats<T>(const CylinderStats<T>&, const Tolerance&);       \
  template T net_density<T>(const DyadicMetric<T>&, std::span<const std::size_t>);         \
  template T disconnection_constant<T>(const DistanceMatrix<T>&);                          \
  template DistanceMatrix<T> bottleneck_distances<T>(const DistanceMatrix<T>&);

CANTOR_INSTANTIATE(Rational)
CANTOR_INSTANTIATE(double)

}  // namespace cantor
