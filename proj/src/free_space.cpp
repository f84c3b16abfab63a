#include "cantor/free_space.hpp"

#include <algorithm>

#include "cantor/error.hpp"
#include "cantor/metric_ops.hpp"

namespace cantor {

template <Scalar T>
Molecule<T> Molecule<T>::dipole(std::size_t x, std::size_t y) {
  Molecule m;
  if (x == y) return m;
  m.weights[x] = T(1);
  m.weights[y] = T(-1);
  return m;
}

template <Scalar T>
T Molecule<T>::total() const {
  T sum = 0;
  for (const auto& [p, w] : weights) sum += w;
  return sum;
}

template <Scalar T>
Molecule<T> Molecule<T>::scaled(const T& c) const {
  Molecule out;
  for (const auto& [p, w] : weights) out.weights[p] = w * c;
  return out;
}

template <Scalar T>
Molecule<T> Molecule<T>::operator+(const Molecule& other) const {
  Molecule out = *this;
  for (const auto& [p, w] : other.weights) out.weights[p] += w;
  return out;
}

namespace {

template <Scalar T>
bool one_lipschitz(std::span<const T> f, const DistanceMatrix<T>& d, const Tolerance& tol) {
  for (std::size_t x = 0; x < d.size(); ++x) {
    for (std::size_t y = x + 1; y < d.size(); ++y) {
      if (!tol.le(abs_of<T>(T(f[x] - f[y])), d(x, y))) return false;
    }
  }
  return true;
}

template <Scalar T>
T pairing(const Molecule<T>& mol, std::span<const T> f) {
  T sum = 0;
  for (const auto& [p, w] : mol.weights) sum += w * f[p];
  return sum;
}

template <Scalar T>
FreeNormResult<T> free_norm_once(const Molecule<T>& mol, const DistanceMatrix<T>& d,
                                 const Tolerance& tol, std::size_t base_index) {
  std::vector<std::size_t> sources;
  std::vector<std::size_t> sinks;
  std::vector<T> supply;
  std::vector<T> demand;
  for (const auto& [p, w] : mol.weights) {
    if (tol.positive(w)) {
      sources.push_back(p);
      supply.push_back(w);
    } else if (tol.lt(w, T(0))) {
      sinks.push_back(p);
      demand.push_back(T(-w));
    }
  }
  FreeNormResult<T> out;
  out.dual.base_index = base_index;
  out.dual.values.assign(d.size(), T(0));
  if (sources.empty() || sinks.empty()) return out;

  std::vector<T> cost(sources.size() * sinks.size());
  for (std::size_t i = 0; i < sources.size(); ++i) {
    for (std::size_t j = 0; j < sinks.size(); ++j) cost[i * sinks.size() + j] = d(sources[i], sinks[j]);
  }
  // In double mode the parts may balance only up to rounding.
  if constexpr (std::is_same_v<T, double>) {
    T s = 0;
    T t = 0;
    for (const T& v : supply) s += v;
    for (const T& v : demand) t += v;
    demand.back() += s - t;
  }
  const TransportSolution<T> sol = solve_transport<T>(supply, demand, cost, tol);
  out.value = sol.cost;
  for (const auto& s : sol.shipments) out.plan.push_back({sources[s.from], sinks[s.to], s.amount});

  // c-transform of the demand prices: 1-Lipschitz everywhere, no smaller
  // than the supply prices on the sources, no larger than the demand prices
  // on the sinks, so it pairs with the molecule to at least the primal cost.
  for (std::size_t x = 0; x < d.size(); ++x) {
    T best = sol.demand_price[0] + d(x, sinks[0]);
    T candidate;
    for (std::size_t j = 1; j < sinks.size(); ++j) {
      candidate = sol.demand_price[j] + d(x, sinks[j]);
      if (candidate < best) best = candidate;
    }
    out.dual.values[x] = best;
  }
  out.dual = out.dual.normalized();
  return out;
}

template <Scalar T>
bool certified(const FreeNormResult<T>& r, const Molecule<T>& mol, const DistanceMatrix<T>& d,
               const Tolerance& tol) {
  return one_lipschitz<T>(r.dual.values, d, tol) && tol.eq(pairing<T>(mol, r.dual.values), r.value);
}

}  // namespace

template <Scalar T>
FreeNormResult<T> free_norm(const Molecule<T>& mol, const DistanceMatrix<T>& d,
                            const Tolerance& tol, std::size_t base_index) {
  require(base_index < d.size(), "free_norm: base point out of range");
  for (const auto& [p, w] : mol.weights) require(p < d.size(), "free_norm: support point out of range");
  require(tol.is_zero(mol.total()), "free_norm: molecule weights must sum to zero");

  FreeNormResult<T> out = free_norm_once(mol, d, tol, base_index);
  if (certified(out, mol, d, tol)) return out;
  if constexpr (std::is_same_v<T, double>) {
    // Rounding broke the certificate: redo the computation exactly.
    Molecule<Rational> exact_mol;
    for (const auto& [p, w] : mol.weights) exact_mol.weights[p] = Rational(w);
    exact_mol.weights.rbegin()->second -= exact_mol.total();
    DistanceMatrix<Rational> exact_d(d.size());
    for (std::size_t x = 0; x < d.size(); ++x) {
      for (std::size_t y = 0; y < d.size(); ++y) exact_d.set_entry(x, y, Rational(d(x, y)));
    }
    const FreeNormResult<Rational> exact = free_norm_once(exact_mol, exact_d, Tolerance(), base_index);
    FreeNormResult<double> back;
    back.value = exact.value.get_d();
    for (const auto& s : exact.plan) back.plan.push_back({s.from, s.to, s.amount.get_d()});
    back.dual.base_index = base_index;
    for (const Rational& v : exact.dual.values) back.dual.values.push_back(v.get_d());
    ensure(certified(back, mol, d, tol), "free_norm: dual certificate failed after exact rerun");
    return back;
  } else {
    fail(ErrorKind::internal, "free_norm: dual certificate failed in exact arithmetic");
  }
}

template <Scalar T>
LipFn<T> ExtOperator<T>::apply(std::span<const T> values_on_net, std::size_t base_index) const {
  require(values_on_net.size() == net.size(), "operator input has the wrong size");
  LipFn<T> out;
  out.base_index = base_index;
  out.values.assign(rows.size(), T(0));
  for (std::size_t x = 0; x < rows.size(); ++x) {
    for (std::size_t p = 0; p < net.size(); ++p) {
      if (rows[x][p] != 0) out.values[x] += rows[x][p] * values_on_net[p];
    }
  }
  return out;
}

template <Scalar T>
ExtOperator<T> build_Tn(const DyadicMetric<T>& d, int n) {
  require(n >= 1 && n < d.depth(), "build_Tn: level must lie in [1, depth)");
  const int shift = d.depth() - n;
  ExtOperator<T> op;
  for (const Address& a : addresses_of_length(n)) op.net.push_back(a.representative(d.depth()));
  op.rows.assign(d.size(), std::vector<T>(op.net.size(), T(0)));
  for (std::size_t x = 0; x < d.size(); ++x) op.rows[x][x >> shift] = T(1);
  return op;
}

template <Scalar T>
OperatorNorm<T> op_norm_Tn(const DyadicMetric<T>& d, int n) {
  require(n >= 1 && n < d.depth(), "op_norm_Tn: level must lie in [1, depth)");
  const CylinderStats<T> stats = cylinder_stats(d, n);
  OperatorNorm<T> out{T(0), chi_from_stats(stats).value};
  const int shift = d.depth() - n;
  for (std::size_t a = 0; a < stats.count; ++a) {
    for (std::size_t b = a + 1; b < stats.count; ++b) {
      T ratio = d(a << shift, b << shift) / stats.inf(a, b);
      if (out.exact < ratio) out.exact = ratio;
    }
  }
  return out;
}

template <Scalar T>
T defect(const ExtOperator<T>& op, const DistanceMatrix<T>& d, const Tolerance& tol,
         std::size_t base_index) {
  require(op.rows.size() == d.size(), "defect: operator rows must cover every point");
  require(!op.net.empty(), "defect: empty net");
  for (const auto& row : op.rows) require(row.size() == op.net.size(), "defect: ragged operator row");
  std::vector<std::size_t> sorted = op.net;
  std::sort(sorted.begin(), sorted.end());
  require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), "defect: repeated net point");
  require(sorted.back() < d.size(), "defect: net point out of range");
  auto base_it = std::find(op.net.begin(), op.net.end(), base_index);
  require(base_it != op.net.end(), "defect: the net must contain the base point");
  const auto base_local = static_cast<std::size_t>(base_it - op.net.begin());

  const DistanceMatrix<T> sub = d.restricted(op.net);
  T worst = 0;
  for (std::size_t ix = 0; ix < op.net.size(); ++ix) {
    const auto& row = op.rows[op.net[ix]];
    // The functional f -> (Tf)(x) - f(x) ignores the value at the base
    // point, where every f in Lip_0 vanishes; that weight balances the sum.
    Molecule<T> mol;
    for (std::size_t p = 0; p < op.net.size(); ++p) {
      if (p != base_local && row[p] != 0) mol.weights[p] = row[p];
    }
    if (ix != base_local) mol.weights[ix] -= T(1);
    std::erase_if(mol.weights, [](const auto& kv) { return kv.second == 0; });
    mol.weights[base_local] = T(-mol.total());
    const T value = free_norm(mol, sub, tol, base_local).value;
    if (worst < value) worst = value;
  }
  return worst;
}

template <Scalar T>
SplitBound<T> split_bound(const DyadicMetric<T>& d, const ResolvedPartition& part) {
  SplitBound<T> out{T(1)};
  if (part.pieces.size() < 2) {
    out.single_piece = true;
    return out;
  }
  T diameter = 0;
  std::optional<T> gap;
  for (std::size_t x = 0; x < d.size(); ++x) {
    for (std::size_t y = x + 1; y < d.size(); ++y) {
      if (diameter < d(x, y)) diameter = d(x, y);
      if (part.piece_of[x] != part.piece_of[y] && (!gap || d(x, y) < *gap)) gap = d(x, y);
    }
  }
  out.bound = max_of<T>(T(1), T(T(2) * diameter / *gap));
  return out;
}

template <Scalar T>
T split_ratio(const LipFn<T>& f, const DyadicMetric<T>& d, const ResolvedPartition& part) {
  const T whole = lip_const(f, d.dist());
  T pieces = 0;
  for (const auto& piece : part.pieces) {
    std::vector<std::size_t> with_base = piece;
    if (std::find(with_base.begin(), with_base.end(), f.base_index) == with_base.end()) {
      with_base.push_back(f.base_index);
    }
    const T local = lip_const(f, d.dist(), std::span<const std::size_t>(with_base));
    if (pieces < local) pieces = local;
  }
  if (pieces == 0) return T(0);
  return whole / pieces;
}

template <Scalar T>
SplitBound<T> split_bound_check(const DyadicMetric<T>& d, const PartitionSpec& partition,
                                int trials, std::uint64_t seed, const Tolerance& tol,
                                std::size_t base_index) {
  require(trials >= 0, "split_bound_check: negative trial count");
  const ResolvedPartition part = resolve(partition, d.depth());
  require(part.target_points.size() == d.size(), "split_bound_check: partition must cover the space");
  SplitBound<T> out = split_bound(d, part);
  for (int t = 0; t < trials; ++t) {
    const LipFn<T> f = random_lip(d.dist(), T(1), split_seed(seed, static_cast<std::uint64_t>(t)), base_index);
    const T ratio = split_ratio(f, d, part);
    ensure(tol.le(ratio, out.bound), "splitting bound exceeded");
    if (out.max_ratio_observed < ratio) out.max_ratio_observed = ratio;
  }
  return out;
}

#define CANTOR_INSTANTIATE(T)                                                                   \
  template struct Molecule<T>;                                                                  \
  template struct ExtOperator<T>;                                                               \
  template FreeNormResult<T> free_norm<T>(const Molecule<T>&, const DistanceMatrix<T>&,        \
                                          const Tolerance&, std::size_t);                      \
  template ExtOperator<T> build_Tn<T>(const DyadicMetric<T>&, int);                             \
  template OperatorNorm<T> op_norm_Tn<T>(const DyadicMetric<T>&, int);                          \
  template T defect<T>(const ExtOperator<T>&, const DistanceMatrix<T>&, const Tolerance&,      \
                       std::size_t);                                                            \
  template SplitBound<T> split_bound<T>(const DyadicMetric<T>&, const ResolvedPartition&);      \
  template T split_ratio<T>(const LipFn<T>&, const DyadicMetric<T>&, const ResolvedPartition&); \
  template SplitBound<T> split_bound_check<T>(const DyadicMetric<T>&, const PartitionSpec&, int, \
                                              std::uint64_t, const Tolerance&, std::size_t);

CANTOR_INSTANTIATE(Rational)
CANTOR_INSTANTIATE(double)

}  // namespace cantor
