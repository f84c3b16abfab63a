#include "cantor/lipschitz.hpp"

#include <algorithm>
#include <random>

#include "cantor/error.hpp"

namespace cantor {

template <Scalar T>
LipFn<T> LipFn<T>::normalized() const {
  LipFn out = *this;
  if (values.empty()) return out;
  const T shift = values[base_index];
  for (T& v : out.values) v -= shift;
  return out;
}

template <Scalar T>
LipWitness<T> lip_witness(std::span<const T> values, const DistanceMatrix<T>& d,
                          std::optional<std::span<const std::size_t>> subset) {
  require(values.size() == d.size(), "function and metric sizes differ");
  std::vector<std::size_t> all;
  std::span<const std::size_t> points;
  if (subset) {
    points = *subset;
  } else {
    all.resize(d.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    points = all;
  }
  LipWitness<T> out;
  if (points.size() < 2) {
    out.degenerate = true;
    return out;
  }
  T ratio;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::size_t x = points[i];
    require(x < d.size(), "subset point out of range");
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const std::size_t y = points[j];
      if (x == y) continue;
      ratio = abs_of<T>(T(values[x] - values[y])) / d(x, y);
      if (out.value < ratio) {
        out.value = ratio;
        out.x = x;
        out.y = y;
      }
    }
  }
  return out;
}

template <Scalar T>
LipFn<T> mcshane_extend(const std::map<std::size_t, T>& partial, const T& lipschitz,
                        const DistanceMatrix<T>& d, const Tolerance& tol, std::size_t base_index) {
  require(!partial.empty(), "mcshane_extend: empty partial function");
  require(!(lipschitz < 0), "mcshane_extend: negative Lipschitz bound");
  for (auto it = partial.begin(); it != partial.end(); ++it) {
    require(it->first < d.size(), "mcshane_extend: point out of range");
    for (auto jt = std::next(it); jt != partial.end(); ++jt) {
      const T gap = abs_of<T>(T(it->second - jt->second));
      const T allowed = lipschitz * d(it->first, jt->first);
      require(tol.le(gap, allowed), "mcshane_extend: partial function is not L-Lipschitz at (" +
                                        std::to_string(it->first) + ", " +
                                        std::to_string(jt->first) + ")");
    }
  }
  LipFn<T> out;
  out.base_index = base_index;
  out.values.resize(d.size());
  for (std::size_t x = 0; x < d.size(); ++x) {
    if (auto hit = partial.find(x); hit != partial.end()) {
      out.values[x] = hit->second;
      continue;
    }
    bool first = true;
    T best = 0;
    T candidate;
    for (const auto& [s, v] : partial) {
      candidate = v + lipschitz * d(x, s);
      if (first || candidate < best) {
        best = candidate;
        first = false;
      }
    }
    out.values[x] = best;
  }
  return out;
}

template <Scalar T>
T lip_full_norm(const LipFn<T>& f, const DistanceMatrix<T>& d) {
  T sup = 0;
  for (const T& v : f.values) {
    const T a = abs_of<T>(v);
    if (sup < a) sup = a;
  }
  return lip_const(f, d) + sup;
}

template <Scalar T>
std::map<T, T> flatness_profile(const LipFn<T>& f, const DistanceMatrix<T>& d,
                                std::span<const T> radii) {
  require(f.values.size() == d.size(), "function and metric sizes differ");
  for (const T& r : radii) require(r > 0, "flatness_profile: radii must be positive");
  const std::size_t n = d.size();
  // A pair (y, z) lies in some open ball B_r(x) iff r exceeds
  // reach(y, z) = min_x max(d(x, y), d(x, z)).
  struct PairEntry {
    T reach;
    T ratio;
  };
  std::vector<PairEntry> entries;
  entries.reserve(n * (n - 1) / 2);
  for (std::size_t y = 0; y < n; ++y) {
    for (std::size_t z = y + 1; z < n; ++z) {
      T reach = max_of<T>(d(y, y), d(y, z));
      for (std::size_t x = 0; x < n; ++x) {
        const T& far = max_of<T>(d(x, y), d(x, z));
        if (far < reach) reach = far;
      }
      entries.push_back({reach, T(abs_of<T>(T(f.values[y] - f.values[z])) / d(y, z))});
    }
  }
  std::map<T, T> out;
  for (const T& r : radii) {
    T best = 0;
    for (const PairEntry& e : entries) {
      if (e.reach < r && best < e.ratio) best = e.ratio;
    }
    out[r] = best;
  }
  return out;
}

template <Scalar T>
LipFn<T> random_lip(const DistanceMatrix<T>& d, const T& lipschitz, std::uint64_t seed,
                    std::size_t base_index) {
  require(lipschitz > 0, "random_lip: L must be positive");
  require(base_index < d.size(), "random_lip: base point out of range");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution keep(0.5);
  // Targets overshoot the feasible band so that clipping makes the constant
  // attain 1 often.
  std::uniform_int_distribution<int> step(-48, 48);

  std::map<std::size_t, T> unit;
  unit[base_index] = T(0);
  for (std::size_t s = 0; s < d.size(); ++s) {
    if (s == base_index || !keep(rng)) continue;
    T target = T(step(rng)) / T(32) * d(s, base_index);
    T lo = 0;
    T hi = 0;
    bool first = true;
    for (const auto& [p, v] : unit) {
      const T down = v - d(s, p);
      const T up = v + d(s, p);
      if (first || lo < down) lo = down;
      if (first || up < hi) hi = up;
      first = false;
    }
    target = max_of<T>(lo, min_of<T>(hi, target));
    unit[s] = target;
  }
  // Unit-constant partial data is feasible by construction; extend exactly.
  LipFn<T> out = mcshane_extend(unit, T(1), d, Tolerance(), base_index);
  for (T& v : out.values) v *= lipschitz;
  return out;
}

#define CANTOR_INSTANTIATE(T)                                                                  \
  template struct LipFn<T>;                                                                    \
  template LipWitness<T> lip_witness<T>(std::span<const T>, const DistanceMatrix<T>&,         \
                                        std::optional<std::span<const std::size_t>>);         \
  template LipFn<T> mcshane_extend<T>(const std::map<std::size_t, T>&, const T&,              \
                                      const DistanceMatrix<T>&, const Tolerance&, std::size_t); \
  template T lip_full_norm<T>(const LipFn<T>&, const DistanceMatrix<T>&);                      \
  template std::map<T, T> flatness_profile<T>(const LipFn<T>&, const DistanceMatrix<T>&,      \
                                              std::span<const T>);                             \
  template LipFn<T> random_lip<T>(const DistanceMatrix<T>&, const T&, std::uint64_t, std::size_t);

CANTOR_INSTANTIATE(Rational)
CANTOR_INSTANTIATE(double)

}  // namespace cantor
