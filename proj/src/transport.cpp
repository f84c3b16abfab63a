#include "cantor/transport.hpp"

#include <optional>

#include "cantor/error.hpp"

namespace cantor {

namespace {

template <Scalar T>
class FlowNetwork {
 public:
  struct Arc {
    std::size_t to;
    T residual;
    T cost;
    bool infinite;  // uncapacitated route arcs
  };

  explicit FlowNetwork(std::size_t nodes, const Tolerance& tol) : adjacency_(nodes), tol_(tol) {}

  std::size_t add_arc(std::size_t from, std::size_t to, const T& capacity, const T& cost,
                      bool infinite) {
    const std::size_t id = arcs_.size();
    arcs_.push_back({to, capacity, cost, infinite});
    arcs_.push_back({from, T(0), T(-cost), false});
    adjacency_[from].push_back(id);
    adjacency_[to].push_back(id + 1);
    return id;
  }

  bool usable(const Arc& a) const { return a.infinite || tol_.positive(a.residual); }

  // Bellman-Ford from `source` over usable arcs; nullopt if `sink` is
  // unreachable. Returns the predecessor arc of every node.
  std::optional<std::vector<std::size_t>> shortest_path(std::size_t source, std::size_t sink) const {
    const std::size_t n = adjacency_.size();
    constexpr std::size_t none = static_cast<std::size_t>(-1);
    std::vector<std::optional<T>> dist(n);
    std::vector<std::size_t> via(n, none);
    dist[source] = T(0);
    for (std::size_t round = 0; round + 1 < n; ++round) {
      bool changed = false;
      for (std::size_t u = 0; u < n; ++u) {
        if (!dist[u]) continue;
        for (std::size_t id : adjacency_[u]) {
          const Arc& a = arcs_[id];
          if (!usable(a)) continue;
          T candidate = *dist[u] + a.cost;
          if (!dist[a.to] || tol_.lt(candidate, *dist[a.to])) {
            dist[a.to] = candidate;
            via[a.to] = id;
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    if (!dist[sink]) return std::nullopt;
    return via;
  }

  // Node potentials with reduced costs >= 0 on every usable arc: shortest
  // distances from a virtual root joined to all nodes at cost 0.
  std::vector<T> potentials() const {
    const std::size_t n = adjacency_.size();
    std::vector<T> pi(n, T(0));
    for (std::size_t round = 0; round <= n; ++round) {
      bool changed = false;
      for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t id : adjacency_[u]) {
          const Arc& a = arcs_[id];
          if (!usable(a)) continue;
          T candidate = pi[u] + a.cost;
          if (tol_.lt(candidate, pi[a.to])) {
            pi[a.to] = candidate;
            changed = true;
          }
        }
      }
      if (!changed) return pi;
    }
    fail(ErrorKind::internal, "negative cycle in an optimal residual network");
  }

  const Arc& arc(std::size_t id) const { return arcs_[id]; }
  Arc& arc(std::size_t id) { return arcs_[id]; }
  std::size_t tail(std::size_t id) const { return arcs_[id ^ 1].to; }

 private:
  std::vector<Arc> arcs_;
  std::vector<std::vector<std::size_t>> adjacency_;
  Tolerance tol_;
};

}  // namespace

template <Scalar T>
TransportSolution<T> solve_transport(std::span<const T> supply, std::span<const T> demand,
                                     std::span<const T> cost, const Tolerance& tol) {
  const std::size_t m = supply.size();
  const std::size_t k = demand.size();
  require(cost.size() == m * k, "transport: cost matrix has the wrong size");
  T total_supply = 0;
  T total_demand = 0;
  for (const T& s : supply) {
    require(!(s < 0), "transport: negative supply");
    total_supply += s;
  }
  for (const T& t : demand) {
    require(!(t < 0), "transport: negative demand");
    total_demand += t;
  }
  require(tol.eq(total_supply, total_demand), "transport: supply and demand do not balance");
  for (const T& c : cost) require(!(c < 0), "transport: negative cost");

  TransportSolution<T> out;
  out.supply_price.assign(m, T(0));
  out.demand_price.assign(k, T(0));
  if (m == 0 || k == 0) return out;

  // Nodes: 0 = source, 1..m = supplies, m+1..m+k = demands, m+k+1 = sink.
  const std::size_t source = 0;
  const std::size_t sink = m + k + 1;
  FlowNetwork<T> net(m + k + 2, tol);
  for (std::size_t i = 0; i < m; ++i) net.add_arc(source, 1 + i, supply[i], T(0), false);
  std::vector<std::size_t> route(m * k);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      route[i * k + j] = net.add_arc(1 + i, 1 + m + j, T(0), cost[i * k + j], true);
    }
  }
  for (std::size_t j = 0; j < k; ++j) net.add_arc(1 + m + j, sink, demand[j], T(0), false);

  T shipped = 0;
  while (tol.lt(shipped, total_supply)) {
    auto via = net.shortest_path(source, sink);
    ensure(via.has_value(), "transport: sink unreachable before all supply is shipped");
    std::optional<T> bottleneck;
    for (std::size_t v = sink; v != source; v = net.tail((*via)[v])) {
      const auto& a = net.arc((*via)[v]);
      if (a.infinite) continue;
      if (!bottleneck || a.residual < *bottleneck) bottleneck = a.residual;
    }
    ensure(bottleneck.has_value() && tol.positive(*bottleneck), "transport: empty augmenting path");
    for (std::size_t v = sink; v != source; v = net.tail((*via)[v])) {
      const std::size_t id = (*via)[v];
      auto& a = net.arc(id);
      if (!a.infinite) a.residual -= *bottleneck;
      net.arc(id ^ 1).residual += *bottleneck;
    }
    shipped += *bottleneck;
  }

  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      // Flow on a route arc is the residual of its reverse arc.
      const T& flow = net.arc(route[i * k + j] ^ 1).residual;
      if (tol.positive(flow)) {
        out.shipments.push_back({i, j, flow});
        out.cost += flow * cost[i * k + j];
      }
    }
  }
  // With reduced costs c + pi(tail) - pi(head) >= 0, the prices u = -pi on
  // supplies and v = -pi on demands satisfy u_i - v_j <= c_ij, tight on used
  // routes.
  const std::vector<T> pi = net.potentials();
  for (std::size_t i = 0; i < m; ++i) out.supply_price[i] = -pi[1 + i];
  for (std::size_t j = 0; j < k; ++j) out.demand_price[j] = -pi[1 + m + j];
  return out;
}

template TransportSolution<Rational> solve_transport<Rational>(std::span<const Rational>,
                                                               std::span<const Rational>,
                                                               std::span<const Rational>,
                                                               const Tolerance&);
template TransportSolution<double> solve_transport<double>(std::span<const double>,
                                                           std::span<const double>,
                                                           std::span<const double>,
                                                           const Tolerance&);

}  // namespace cantor
