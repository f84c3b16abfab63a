#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <concepts>
#include <string>
#include <string_view>
#include <type_traits>

namespace cantor {

using Rational = mpq_class;

template <class T>
concept Scalar = std::same_as<T, Rational> || std::same_as<T, double>;

enum class NumberMode { rational, real };

template <Scalar T>
inline constexpr NumberMode mode_of =
    std::is_same_v<T, Rational> ? NumberMode::rational : NumberMode::real;

std::string_view mode_name(NumberMode mode);
NumberMode parse_mode(std::string_view text);

// Accepts "p/q", integers and decimals with an optional exponent; decimals
// are converted exactly ("0.2" is 1/5).
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

// Correctly rounded (GMP's own conversion truncates).
double to_double(const Rational& q);
inline double to_double(double x) { return x; }

template <Scalar T>
T from_rational(const Rational& q) {
  if constexpr (std::is_same_v<T, Rational>) {
    return q;
  } else {
    return q.get_d();
  }
}

template <Scalar T>
T abs_of(const T& x) {
  if constexpr (std::is_same_v<T, Rational>) {
    return x < 0 ? T(-x) : x;
  } else {
    return std::abs(x);
  }
}

template <Scalar T>
const T& max_of(const T& a, const T& b) {
  return a < b ? b : a;
}

template <Scalar T>
const T& min_of(const T& a, const T& b) {
  return b < a ? b : a;
}

// Every comparison in the library goes through one of these. Rational values
// compare exactly and ignore eps; doubles use an absolute slack: `le` accepts
// up to a + eps, `lt` demands a margin of eps.
class Tolerance {
 public:
  static constexpr double kDefaultEps = 1e-9;

  constexpr Tolerance() = default;
  constexpr explicit Tolerance(double eps) : eps_(eps) {}

  constexpr double eps() const { return eps_; }

  template <Scalar T>
  bool le(const T& a, const std::type_identity_t<T>& b) const {
    if constexpr (std::is_same_v<T, Rational>) {
      return a <= b;
    } else {
      return a <= b + eps_;
    }
  }

  template <Scalar T>
  bool lt(const T& a, const std::type_identity_t<T>& b) const {
    if constexpr (std::is_same_v<T, Rational>) {
      return a < b;
    } else {
      return a < b - eps_;
    }
  }

  template <Scalar T>
  bool eq(const T& a, const std::type_identity_t<T>& b) const {
    if constexpr (std::is_same_v<T, Rational>) {
      return a == b;
    } else {
      return std::abs(a - b) <= eps_;
    }
  }

  template <Scalar T>
  bool is_zero(const T& a) const {
    return eq(a, T(0));
  }

  template <Scalar T>
  bool positive(const T& a) const {
    return lt(T(0), a);
  }

 private:
  double eps_ = kDefaultEps;
};

// Deterministic 64-bit stream splitter used to derive per-trial seeds.
std::uint64_t split_seed(std::uint64_t master, std::uint64_t index);

}  // namespace cantor
