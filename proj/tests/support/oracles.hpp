#pragma once

// Reference computations for the tests. Each is a direct, slow evaluation of
// a definition and shares no code with the library beyond its data types.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cantor/metric.hpp"
#include "cantor/metric_ops.hpp"
#include "cantor/surgery.hpp"

namespace oracle {

using cantor::DistanceMatrix;
using cantor::DyadicMetric;
using cantor::Rational;

// mpq_class(a, b) does not reduce, and unreduced values compare wrongly.
inline Rational frac(long a, long b) {
  Rational q(a, b);
  q.canonicalize();
  return q;
}

// Address of point x at depth m as a bit string, first symbol first.
inline std::string bits(std::size_t x, int depth) {
  std::string s;
  for (int i = depth - 1; i >= 0; --i) s.push_back(((x >> i) & 1U) ? '1' : '0');
  return s;
}

inline Rational mu(std::size_t x, std::size_t y, int depth) {
  if (x == y) return 0;
  const std::string a = bits(x, depth);
  const std::string b = bits(y, depth);
  std::size_t k = 0;
  while (a[k] == b[k]) ++k;
  Rational out(1, 2);
  for (std::size_t i = 0; i < k; ++i) out /= 2;
  return out;  // 2^-(k+1) with k 0-based, i.e. 2^-k for the 1-based index
}

// p(a) = sum_i 2 a_i 3^-i, the classical ternary left endpoints.
inline Rational ternary_point(std::size_t x, int depth) {
  const std::string a = bits(x, depth);
  Rational out = 0;
  Rational scale(1, 3);
  for (char c : a) {
    if (c == '1') out += 2 * scale;
    scale /= 3;
  }
  return out;
}

inline std::string prefix(std::size_t x, int depth, int n) { return bits(x, depth).substr(0, n); }

template <class T>
struct BruteCylinders {
  std::map<std::pair<std::string, std::string>, T> inf, sup;
  std::map<std::string, T> diam;
};

template <class T>
BruteCylinders<T> brute_cylinders(const DyadicMetric<T>& d, int n) {
  BruteCylinders<T> out;
  for (std::size_t x = 0; x < d.size(); ++x) out.diam.emplace(prefix(x, d.depth(), n), T(0));
  for (std::size_t x = 0; x < d.size(); ++x) {
    for (std::size_t y = 0; y < d.size(); ++y) {
      const std::string a = prefix(x, d.depth(), n);
      const std::string b = prefix(y, d.depth(), n);
      if (a == b) {
        if (out.diam[a] < d(x, y)) out.diam[a] = d(x, y);
        continue;
      }
      auto key = std::make_pair(a, b);
      auto lo = out.inf.find(key);
      if (lo == out.inf.end() || d(x, y) < lo->second) out.inf[key] = d(x, y);
      auto hi = out.sup.find(key);
      if (hi == out.sup.end() || hi->second < d(x, y)) out.sup[key] = d(x, y);
    }
  }
  return out;
}

template <class T>
T brute_chi(const DyadicMetric<T>& d, int n) {
  const BruteCylinders<T> c = brute_cylinders(d, n);
  T best = 0;
  for (const auto& [key, lo] : c.inf) {
    const T r = c.sup.at(key) / lo;
    if (best < r) best = r;
  }
  return best;
}

// Minimax path values by Floyd-Warshall.
template <class T>
DistanceMatrix<T> minimax(const DistanceMatrix<T>& d) {
  DistanceMatrix<T> b = d;
  const std::size_t n = d.size();
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const T& via = b(i, k) < b(k, j) ? b(k, j) : b(i, k);
        if (i != j && via < b(i, j)) b.set_entry(i, j, via);
      }
    }
  }
  return b;
}

// Minimum transport cost by enumerating every spanning-tree basic solution
// of the supply/demand bipartite graph. Exponential; meant for a few points.
template <class T>
T transport_by_enumeration(const std::vector<T>& supply, const std::vector<T>& demand,
                           const std::vector<std::vector<T>>& cost) {
  const std::size_t p = supply.size();
  const std::size_t q = demand.size();
  const std::size_t nodes = p + q;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < q; ++j) edges.emplace_back(i, j);
  }
  const std::size_t k = nodes - 1;
  std::optional<T> best;
  std::vector<char> pick(edges.size(), 0);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), 1);
  do {
    std::vector<std::size_t> chosen;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (pick[e]) chosen.push_back(e);
    }
    // Spanning tree check by union-find.
    std::vector<std::size_t> parent(nodes);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t v) {
      while (parent[v] != v) v = parent[v] = parent[parent[v]];
      return v;
    };
    bool tree = true;
    for (std::size_t e : chosen) {
      const std::size_t a = find(edges[e].first);
      const std::size_t b = find(p + edges[e].second);
      if (a == b) {
        tree = false;
        break;
      }
      parent[a] = b;
    }
    if (!tree) continue;
    // Leaf peeling fixes the flow on every tree edge.
    std::vector<T> balance(nodes);
    for (std::size_t i = 0; i < p; ++i) balance[i] = supply[i];
    for (std::size_t j = 0; j < q; ++j) balance[p + j] = -demand[j];
    std::vector<char> alive(chosen.size(), 1);
    std::vector<T> flow(chosen.size(), T(0));
    for (std::size_t round = 0; round < chosen.size(); ++round) {
      std::vector<int> degree(nodes, 0);
      for (std::size_t c = 0; c < chosen.size(); ++c) {
        if (!alive[c]) continue;
        ++degree[edges[chosen[c]].first];
        ++degree[p + edges[chosen[c]].second];
      }
      for (std::size_t c = 0; c < chosen.size(); ++c) {
        if (!alive[c]) continue;
        const std::size_t a = edges[chosen[c]].first;
        const std::size_t b = p + edges[chosen[c]].second;
        if (degree[a] == 1) {
          flow[c] = balance[a];
        } else if (degree[b] == 1) {
          flow[c] = -balance[b];
        } else {
          continue;
        }
        balance[a] -= flow[c];
        balance[b] += flow[c];
        alive[c] = 0;
        break;
      }
    }
    bool feasible = true;
    T total = 0;
    for (std::size_t c = 0; c < chosen.size(); ++c) {
      if (flow[c] < 0) feasible = false;
      total += flow[c] * cost[edges[chosen[c]].first][edges[chosen[c]].second];
    }
    for (const T& b : balance) {
      if (b != 0) feasible = false;
    }
    if (feasible && (!best || total < *best)) best = total;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return *best;
}

// Empty when `out` satisfies every clause of the replacement construction;
// otherwise a description of the first violated clause.
template <class T>
std::string surgery_violation(const DyadicMetric<T>& d, const cantor::SurgeryPlan<T>& plan,
                              const DyadicMetric<T>& out) {
  const int depth = d.depth();
  std::vector<int> piece(d.size(), -1);
  std::vector<std::vector<std::size_t>> members(plan.partition.pieces.size());
  for (std::size_t x = 0; x < d.size(); ++x) {
    const std::string s = bits(x, depth);
    for (std::size_t i = 0; i < plan.partition.pieces.size(); ++i) {
      for (const auto& a : plan.partition.pieces[i]) {
        if (s.compare(0, static_cast<std::size_t>(a.length()), a.to_string()) == 0) piece[x] = static_cast<int>(i);
      }
    }
    if (piece[x] >= 0) members[static_cast<std::size_t>(piece[x])].push_back(x);
  }
  const std::size_t np = members.size();
  std::vector<T> to_piece(d.size() * np, T(0));
  for (std::size_t x = 0; x < d.size(); ++x) {
    for (std::size_t i = 0; i < np; ++i) {
      for (std::size_t z : members[i]) {
        if (to_piece[x * np + i] < d(x, z)) to_piece[x * np + i] = d(x, z);
      }
    }
  }
  std::vector<T> between(np * np, T(0));
  for (std::size_t i = 0; i < np; ++i) {
    for (std::size_t j = 0; j < np; ++j) {
      for (std::size_t z : members[j]) {
        if (between[i * np + j] < to_piece[z * np + i]) between[i * np + j] = to_piece[z * np + i];
      }
    }
  }
  for (std::size_t x = 0; x < d.size(); ++x) {
    for (std::size_t y = 0; y < d.size(); ++y) {
      if (x == y) continue;
      const int px = piece[x];
      const int py = piece[y];
      const T& got = out(x, y);
      if (px < 0 && py < 0 && got != d(x, y)) return "(a) changed outside the target";
      if (px < 0 && py >= 0 && got != to_piece[x * np + static_cast<std::size_t>(py)]) {
        return "(b) point-to-piece value";
      }
      if (px >= 0 && py >= 0 && px != py &&
          got != between[static_cast<std::size_t>(px) * np + static_cast<std::size_t>(py)]) {
        return "(c) piece-to-piece constant";
      }
      if (px != py || px < 0) {
        if (got < d(x, y)) return "(f) a cross distance decreased";
      }
    }
  }
  for (std::size_t i = 0; i < members.size(); ++i) {
    const auto& m = members[i];
    if (m.size() < 2) continue;
    const auto& e = plan.replacements[i];
    std::optional<T> ratio;
    T diam_d = 0;
    T diam_out = 0;
    for (std::size_t a = 0; a < m.size(); ++a) {
      for (std::size_t b = a + 1; b < m.size(); ++b) {
        const T r = out(m[a], m[b]) / e(a, b);
        if (ratio && r != *ratio) return "(d) piece not proportional to its replacement";
        ratio = r;
        diam_d = diam_d < d(m[a], m[b]) ? d(m[a], m[b]) : diam_d;
        diam_out = diam_out < out(m[a], m[b]) ? out(m[a], m[b]) : diam_out;
      }
    }
    const T expected = plan.delta < diam_d ? plan.delta : diam_d;
    if (diam_out != expected) return "(d) piece diameter is not min(delta, diam)";
    if (plan.delta < diam_out) return "(d) piece diameter exceeds delta";
  }
  T sup = 0;
  for (std::size_t x = 0; x < d.size(); ++x) {
    for (std::size_t y = 0; y < d.size(); ++y) {
      T diff = out(x, y) - d(x, y);
      if (diff < 0) diff = -diff;
      sup = sup < diff ? diff : sup;
    }
  }
  if (!(sup < plan.epsilon)) return "(e) moved by epsilon or more";
  return {};
}

// Random inputs.

inline Rational random_rational(std::mt19937_64& rng, long lo, long hi, long den) {
  std::uniform_int_distribution<long> pick(lo, hi);
  return frac(pick(rng), den);
}

// Every matrix with off-diagonal entries in [a, 2a] is a metric.
template <class T>
DistanceMatrix<T> random_small_metric(std::size_t size, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> base(1, 20);
  const long a = base(rng);
  std::uniform_int_distribution<long> pick(a, 2 * a);
  std::uniform_int_distribution<long> den(1, 40);
  const long q = den(rng);
  DistanceMatrix<T> m(size);
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = i + 1; j < size; ++j) {
      m.set(i, j, T(T(pick(rng)) / T(q)));
    }
  }
  return m;
}

}  // namespace oracle
