#include <doctest.h>

#include <random>

#include "cantor/error.hpp"
#include "cantor/free_space.hpp"
#include "cantor/generate.hpp"
#include "cantor/metric_ops.hpp"
#include "cantor/transport.hpp"
#include "inputs.hpp"
#include "oracles.hpp"

using namespace cantor;

namespace {

template <class T>
T enumerated_norm(const Molecule<T>& mol, const DistanceMatrix<T>& d) {
  std::vector<std::size_t> sources, sinks;
  std::vector<T> supply, demand;
  for (const auto& [x, w] : mol.weights) {
    if (w > 0) {
      sources.push_back(x);
      supply.push_back(w);
    } else if (w < 0) {
      sinks.push_back(x);
      demand.push_back(T(-w));
    }
  }
  std::vector<std::vector<T>> cost(sources.size(), std::vector<T>(sinks.size()));
  for (std::size_t i = 0; i < sources.size(); ++i) {
    for (std::size_t j = 0; j < sinks.size(); ++j) cost[i][j] = d(sources[i], sinks[j]);
  }
  return oracle::transport_by_enumeration(supply, demand, cost);
}

// Checks the certificate without library help: 1-Lipschitz, vanishing at the
// base point, and pairing to the value.
template <class T>
bool dual_ok(const FreeNormResult<T>& r, const Molecule<T>& mol, const DistanceMatrix<T>& d, std::size_t base) {
  if (r.dual.values.size() != d.size() || r.dual.values[base] != 0) return false;
  for (std::size_t x = 0; x < d.size(); ++x) {
    for (std::size_t y = 0; y < d.size(); ++y) {
      if (d(x, y) < r.dual.values[x] - r.dual.values[y]) return false;
    }
  }
  T pairing = 0;
  for (const auto& [x, w] : mol.weights) pairing += w * r.dual.values[x];
  return pairing == r.value;
}

}  // namespace

TEST_CASE("transport solver on a small instance") {
  const std::vector<Rational> supply = {2, 1};
  const std::vector<Rational> demand = {1, 2};
  const std::vector<Rational> cost = {1, 3, 2, 1};
  const auto sol = solve_transport<Rational>(supply, demand, cost);
  CHECK(sol.cost == oracle::transport_by_enumeration<Rational>(supply, demand, {{1, 3}, {2, 1}}));
  Rational dual = 0;
  for (std::size_t i = 0; i < 2; ++i) dual += supply[i] * sol.supply_price[i] - demand[i] * sol.demand_price[i];
  CHECK(dual == sol.cost);
}

TEST_CASE("free norm examples") {
  const RationalMetric m = generate<Rational>(GeneratorKind::middle_lambda, 3);
  for (std::size_t x = 0; x < 8; ++x) {
    for (std::size_t y = 0; y < 8; ++y) {
      if (x == y) continue;
      const auto r = free_norm(Molecule<Rational>::dipole(x, y), m.dist());
      CHECK(r.value == m(x, y));
      CHECK(dual_ok(r, Molecule<Rational>::dipole(x, y), m.dist(), 0));
    }
  }
  DistanceMatrix<Rational> tri(3);
  tri.set(0, 1, 1);
  tri.set(0, 2, 1);
  tri.set(1, 2, 2);
  Molecule<Rational> mol;
  mol.weights = {{0, 2}, {1, -1}, {2, -1}};
  CHECK(free_norm(mol, tri).value == 2);
  CHECK(enumerated_norm(mol, tri) == 2);

  CHECK(free_norm(Molecule<Rational>{}, tri).value == 0);
  Molecule<Rational> unbalanced;
  unbalanced.weights = {{0, 1}};
  CHECK_THROWS_AS(free_norm(unbalanced, tri), Error);
}

TEST_CASE("free norm is homogeneous") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const RationalMetric d = inputs::random_metric<Rational>(rng, 3);
    const Molecule<Rational> mol = inputs::random_molecule<Rational>(rng, d.size(), 6);
    const Rational c = oracle::frac(inputs::uniform(rng, -20, 20), 3);
    CHECK(free_norm(mol.scaled(c), d.dist()).value == abs(c) * free_norm(mol, d.dist()).value);
  }
}

TEST_CASE("free norm equals the enumerated optimum on small supports") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const RationalMetric d = inputs::random_metric<Rational>(rng, inputs::uniform(rng, 2, 5));
    const Molecule<Rational> mol = inputs::random_molecule<Rational>(rng, d.size(), 5);
    const std::size_t base = static_cast<std::size_t>(inputs::uniform(rng, 0, static_cast<int>(d.size()) - 1));
    const auto r = free_norm(mol, d.dist(), {}, base);
    CHECK(r.value == enumerated_norm(mol, d.dist()));
    CHECK(dual_ok(r, mol, d.dist(), base));
    Rational moved = 0;
    for (const auto& s : r.plan) moved += s.amount * d(s.from, s.to);
    CHECK(moved == r.value);
  }
}

TEST_CASE("double-mode free norm is certified too") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const DoubleMetric d = inputs::random_metric<double>(rng, 4);
    const Molecule<double> mol = inputs::random_molecule<double>(rng, d.size(), 8);
    const auto r = free_norm(mol, d.dist());
    double pairing = 0;
    for (const auto& [x, w] : mol.weights) pairing += w * r.dual.values[x];
    CHECK(std::abs(pairing - r.value) <= 1e-9);
    CHECK(lip_const(r.dual, d.dist()) <= 1 + 1e-9);
  }
}

TEST_CASE("T_n examples") {
  const RationalMetric mu = generate<Rational>(GeneratorKind::mu, 2);
  const ExtOperator<Rational> t = build_Tn(mu, 1);
  CHECK(t.net == std::vector<std::size_t>{0, 2});
  const std::vector<Rational> f = {0, Rational(1, 2)};
  CHECK(t.apply(f).values == std::vector<Rational>{0, 0, Rational(1, 2), Rational(1, 2)});
  const std::vector<Rational> zero = {0, 0};
  CHECK(t.apply(zero).values == std::vector<Rational>(4, 0));

  const RationalMetric m = generate<Rational>(GeneratorKind::middle_lambda, 4);
  for (int n = 1; n < 4; ++n) {
    const ExtOperator<Rational> op = build_Tn(m, n);
    std::vector<Rational> g;
    for (std::size_t i = 0; i < op.net.size(); ++i) g.push_back(oracle::frac(static_cast<long>(i * i), 7));
    const LipFn<Rational> tg = op.apply(g);
    for (std::size_t i = 0; i < op.net.size(); ++i) CHECK(tg.values[op.net[i]] == g[i]);
  }
}

TEST_CASE("operator norm examples") {
  for (int m = 2; m <= 6; ++m) {
    const RationalMetric mu = generate<Rational>(GeneratorKind::mu, m);
    for (int n = 1; n < m; ++n) {
      const auto norm = op_norm_Tn(mu, n);
      CHECK(norm.exact == 1);
      CHECK(norm.chi_bound == 1);
    }
  }
  const auto norm = op_norm_Tn(generate<Rational>(GeneratorKind::middle_lambda, 2), 1);
  CHECK(norm.exact == Rational(3, 2));
  CHECK(norm.chi_bound == 2);

  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const RationalMetric d = inputs::random_metric<Rational>(rng, 4);
    for (int n = 1; n < 4; ++n) {
      const auto a = op_norm_Tn(d, n);
      CHECK(a.exact == op_norm_Tn(d.scaled(Rational(5, 2)), n).exact);
      CHECK(a.exact <= a.chi_bound);
      // Lower bound from sampled functions: Lip(Tf) / Lip(f) never exceeds it.
      const ExtOperator<Rational> op = build_Tn(d, n);
      const DistanceMatrix<Rational> sub = d.dist().restricted(op.net);
      for (std::uint64_t s = 0; s < 5; ++s) {
        const LipFn<Rational> f = random_lip(sub, Rational(1), s);
        const Rational lf = lip_const(f, sub);
        if (lf == 0) continue;
        CHECK(lip_const(op.apply(f.values), d.dist()) / lf <= a.exact);
      }
    }
  }
}

TEST_CASE("defect examples") {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 10; ++trial) {
    const RationalMetric d = inputs::random_metric<Rational>(rng, 4);
    for (int n = 1; n < 4; ++n) CHECK(defect(build_Tn(d, n), d.dist()) == 0);
  }

  const RationalMetric m = generate<Rational>(GeneratorKind::middle_lambda, 3);
  ExtOperator<Rational> zero = build_Tn(m, 2);
  for (auto& row : zero.rows) std::fill(row.begin(), row.end(), Rational(0));
  Rational far = 0;
  for (std::size_t x : zero.net) far = max_of<Rational>(far, m(x, 0));
  CHECK(defect(zero, m.dist()) == far);

  ExtOperator<Rational> ident;
  for (std::size_t i = 0; i < m.size(); ++i) ident.net.push_back(i);
  ident.rows.assign(m.size(), std::vector<Rational>(m.size(), 0));
  for (std::size_t i = 0; i < m.size(); ++i) ident.rows[i][i] = 1;
  CHECK(defect(ident, m.dist()) == 0);
  const Rational c(-3, 4);
  ident.rows[5][2] += c;
  ident.rows[5][6] -= c;
  CHECK(defect(ident, m.dist()) == abs(c) * m(2, 6));
}

TEST_CASE("splitting bound") {
  const RationalMetric mu = generate<Rational>(GeneratorKind::mu, 2);
  const auto b = split_bound_check(mu, cylinder_partition(1), 50, 1);
  CHECK(b.bound == 2);
  CHECK(b.max_ratio_observed <= 2);

  // A function supported on one piece: restriction carries everything.
  const RationalMetric m = generate<Rational>(GeneratorKind::middle_lambda, 3);
  const ResolvedPartition part = resolve(cylinder_partition(1), 3);
  LipFn<Rational> f{std::vector<Rational>(8, 0), 0};
  f.values[1] = Rational(1, 20);
  f.values[2] = Rational(1, 30);
  CHECK(split_ratio(f, m, part) == 1);

  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const RationalMetric d = inputs::random_metric<Rational>(rng, 4);
    const auto r = split_bound_check(d, cylinder_partition(inputs::uniform(rng, 1, 3)), 10, rng());
    CHECK(r.max_ratio_observed <= r.bound);
  }
  PartitionSpec partial{{Address::parse("0")}, {{Address::parse("0")}}};
  CHECK_THROWS_AS(split_bound_check(mu, partial, 1, 1), Error);
}
