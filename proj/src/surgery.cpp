#include "cantor/surgery.hpp"

#include <algorithm>

#include "cantor/error.hpp"
#include "cantor/generate.hpp"
#include "cantor/metric_ops.hpp"

namespace cantor {

ResolvedPartition resolve(const PartitionSpec& spec, int depth) {
  require(!spec.target.empty(), "partition target is empty");
  require(!spec.pieces.empty(), "partition has no pieces");
  ResolvedPartition out;
  out.piece_of.assign(point_count(depth), -1);
  out.target_points = points_of(spec.target, depth);
  std::vector<char> in_target(point_count(depth), 0);
  for (std::size_t p : out.target_points) in_target[p] = 1;

  std::size_t covered = 0;
  for (std::size_t i = 0; i < spec.pieces.size(); ++i) {
    require(!spec.pieces[i].empty(), "partition piece " + std::to_string(i) + " is empty");
    std::vector<std::size_t> points = points_of(spec.pieces[i], depth);
    for (std::size_t p : points) {
      require(in_target[p], "partition piece " + std::to_string(i) + " leaves the target");
      require(out.piece_of[p] < 0, "partition pieces overlap");
      out.piece_of[p] = static_cast<int>(i);
    }
    covered += points.size();
    out.pieces.push_back(std::move(points));
  }
  require(covered == out.target_points.size(), "partition pieces do not cover the target");
  return out;
}

PartitionSpec cylinder_partition(int n) {
  PartitionSpec spec;
  spec.target = {Address()};
  for (const Address& a : addresses_of_length(n)) spec.pieces.push_back({a});
  return spec;
}

namespace {

template <Scalar T>
T block_diameter(const DyadicMetric<T>& d, IndexRange r) {
  T worst = 0;
  for (std::size_t x = r.begin; x < r.end; ++x) {
    for (std::size_t y = x + 1; y < r.end; ++y) {
      if (worst < d(x, y)) worst = d(x, y);
    }
  }
  return worst;
}

template <Scalar T>
T set_diameter(const DistanceMatrix<T>& d, std::span<const std::size_t> points) {
  T worst = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (worst < d(points[i], points[j])) worst = d(points[i], points[j]);
    }
  }
  return worst;
}

}  // namespace

template <Scalar T>
PartitionSpec greedy_partition(const DyadicMetric<T>& d, std::span<const Address> target,
                               const T& epsilon, const Tolerance& tol) {
  require(tol.positive(epsilon), "epsilon must be positive");
  require(!target.empty(), "greedy_partition: empty target");
  int start = 0;
  for (const Address& a : target) {
    require(a.length() <= d.depth(), "target address longer than the net depth");
    start = std::max(start, a.length());
  }
  const T half = epsilon / T(2);
  for (int level = start; level < d.depth(); ++level) {
    std::vector<Address> pieces;
    for (const Address& t : target) {
      const int extra = level - t.length();
      for (std::uint32_t tail = 0; tail < (std::uint32_t{1} << extra); ++tail) {
        pieces.emplace_back((t.bits() << extra) | tail, level);
      }
    }
    std::sort(pieces.begin(), pieces.end());
    pieces.erase(std::unique(pieces.begin(), pieces.end()), pieces.end());
    const bool admissible = std::all_of(pieces.begin(), pieces.end(), [&](const Address& a) {
      return tol.lt(block_diameter(d, a.cylinder(d.depth())), half);
    });
    if (!admissible) continue;
    PartitionSpec spec;
    spec.target.assign(target.begin(), target.end());
    for (const Address& a : pieces) spec.pieces.push_back({a});
    // Nested or repeated target addresses would double count.
    resolve(spec, d.depth());
    return spec;
  }
  fail(ErrorKind::insufficient_depth,
       "insufficient depth: no cylinder level below " + std::to_string(d.depth()) +
           " has all piece diameters < epsilon/2");
}

template <Scalar T>
DyadicMetric<T> apply_surgery(const DyadicMetric<T>& d, const SurgeryPlan<T>& plan,
                              const Tolerance& tol) {
  require(tol.positive(plan.epsilon), "surgery: epsilon must be positive");
  require(tol.positive(plan.delta) && tol.le(plan.delta, T(1)), "surgery: delta must lie in (0, 1]");
  const ResolvedPartition part = resolve(plan.partition, d.depth());
  const std::size_t pieces = part.pieces.size();
  require(plan.replacements.size() == pieces, "surgery: need one replacement per piece");

  const T half = plan.epsilon / T(2);
  std::vector<T> piece_diam(pieces);
  std::vector<T> scale(pieces, T(0));
  for (std::size_t i = 0; i < pieces; ++i) {
    piece_diam[i] = set_diameter(d.dist(), part.pieces[i]);
    require(tol.lt(piece_diam[i], half),
            "surgery: piece " + std::to_string(i) + " has diameter >= epsilon/2");
    const DistanceMatrix<T>& e = plan.replacements[i];
    require(e.size() == part.pieces[i].size(),
            "surgery: replacement " + std::to_string(i) + " has the wrong point count");
    if (e.size() < 2) continue;
    require(validate_metric(e, tol).accepted,
            "surgery: replacement " + std::to_string(i) + " is not a metric");
    std::vector<std::size_t> all(e.size());
    for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
    const T e_diam = set_diameter(e, all);
    scale[i] = min_of<T>(plan.delta, piece_diam[i]) / e_diam;
  }

  const std::size_t n = d.size();
  // D(x, K_i) for every x outside K', and D(K_i, K_j).
  std::vector<T> to_piece(n * pieces, T(0));
  for (std::size_t x = 0; x < n; ++x) {
    if (part.piece_of[x] >= 0) continue;
    for (std::size_t i = 0; i < pieces; ++i) {
      T worst = 0;
      for (std::size_t y : part.pieces[i]) {
        if (worst < d(x, y)) worst = d(x, y);
      }
      to_piece[x * pieces + i] = worst;
    }
  }
  std::vector<T> between(pieces * pieces, T(0));
  for (std::size_t i = 0; i < pieces; ++i) {
    for (std::size_t j = i + 1; j < pieces; ++j) {
      T worst = 0;
      for (std::size_t x : part.pieces[i]) {
        for (std::size_t y : part.pieces[j]) {
          if (worst < d(x, y)) worst = d(x, y);
        }
      }
      between[i * pieces + j] = worst;
      between[j * pieces + i] = worst;
    }
  }
  std::vector<std::size_t> local(n, 0);
  for (const auto& piece : part.pieces) {
    for (std::size_t k = 0; k < piece.size(); ++k) local[piece[k]] = k;
  }

  DistanceMatrix<T> out = d.dist();
  for (std::size_t x = 0; x < n; ++x) {
    const int px = part.piece_of[x];
    for (std::size_t y = x + 1; y < n; ++y) {
      const int py = part.piece_of[y];
      if (px < 0 && py < 0) continue;
      if (px < 0) {
        out.set(x, y, to_piece[x * pieces + static_cast<std::size_t>(py)]);
      } else if (py < 0) {
        out.set(x, y, to_piece[y * pieces + static_cast<std::size_t>(px)]);
      } else if (px == py) {
        const auto i = static_cast<std::size_t>(px);
        out.set(x, y, T(plan.replacements[i](local[x], local[y]) * scale[i]));
      } else {
        out.set(x, y, between[static_cast<std::size_t>(px) * pieces + static_cast<std::size_t>(py)]);
      }
    }
  }
  ensure(validate_metric(out, tol).accepted, "surgery output violates the metric axioms");
  DyadicMetric<T> result(d.depth(), std::move(out));
  ensure(tol.lt(sup_distance(d, result), plan.epsilon), "surgery moved the metric by epsilon or more");
  return result;
}

template <Scalar T>
PushResult<T> push_into_Un(const DyadicMetric<T>& d, const T& epsilon, int n0, const Tolerance& tol) {
  require(tol.positive(epsilon), "push_into_Un: epsilon must be positive");
  require(n0 >= 1, "push_into_Un: n0 must be at least 1");
  require(n0 < d.depth(), "insufficient depth: n0 must lie below the net depth");
  const T half = epsilon / T(2);
  for (int n = n0; n < d.depth(); ++n) {
    const CylinderStats<T> stats = cylinder_stats(d, n);
    const bool admissible = std::all_of(stats.diam.begin(), stats.diam.end(),
                                        [&](const T& v) { return tol.lt(v, half); });
    if (!admissible) continue;

    T min_inf = stats.inf(0, 1);
    for (std::size_t a = 0; a < stats.count; ++a) {
      for (std::size_t b = a + 1; b < stats.count; ++b) {
        if (stats.inf(a, b) < min_inf) min_inf = stats.inf(a, b);
      }
    }
    // Midpoint of the admissible interval (0, min_inf / (2n)), capped at 1.
    const T delta = min_of<T>(T(1), T(min_inf / T(4 * n)));

    SurgeryPlan<T> plan;
    plan.partition = cylinder_partition(n);
    plan.epsilon = epsilon;
    plan.delta = delta;
    GeneratorParams params;
    params.max_depth = kHardMaxDepth;
    const DistanceMatrix<T> mu_piece = generate<T>(GeneratorKind::mu, d.depth() - n, params).dist();
    plan.replacements.assign(stats.count, mu_piece);

    PushResult<T> out{n, delta, apply_surgery(d, plan, tol)};
    ensure(chi(out.dtilde, n, tol).in_Un, "push_into_Un result is not in U_n");
    return out;
  }
  fail(ErrorKind::insufficient_depth,
       "insufficient depth: every level n in [n0, depth) has a cylinder of diameter >= epsilon/2");
}

template <Scalar T>
TransplantResult<T> transplant(const DyadicMetric<T>& class_rep, const DyadicMetric<T>& dhat,
                               const T& epsilon, const Tolerance& tol) {
  require(class_rep.depth() == dhat.depth(), "transplant: depth mismatch");
  const Address whole;
  PartitionSpec partition = greedy_partition(dhat, std::span<const Address>(&whole, 1), epsilon, tol);
  const ResolvedPartition part = resolve(partition, dhat.depth());
  SurgeryPlan<T> plan;
  plan.partition = partition;
  plan.epsilon = epsilon;
  plan.delta = T(1);
  for (const auto& piece : part.pieces) plan.replacements.push_back(class_rep.dist().restricted(piece));
  return {apply_surgery(dhat, plan, tol), std::move(partition)};
}

#define CANTOR_INSTANTIATE(T)                                                                  \
  template PartitionSpec greedy_partition<T>(const DyadicMetric<T>&, std::span<const Address>, \
                                             const T&, const Tolerance&);                      \
  template DyadicMetric<T> apply_surgery<T>(const DyadicMetric<T>&, const SurgeryPlan<T>&,     \
                                            const Tolerance&);                                 \
  template PushResult<T> push_into_Un<T>(const DyadicMetric<T>&, const T&, int, const Tolerance&); \
  template TransplantResult<T> transplant<T>(const DyadicMetric<T>&, const DyadicMetric<T>&,   \
                                             const T&, const Tolerance&);

CANTOR_INSTANTIATE(Rational)
CANTOR_INSTANTIATE(double)

}  // namespace cantor
