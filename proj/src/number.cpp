#include "cantor/number.hpp"

#include <bit>
#include <cctype>
#include <cmath>

#include "cantor/error.hpp"

namespace cantor {

std::string_view mode_name(NumberMode mode) {
  return mode == NumberMode::rational ? "rational" : "double";
}

NumberMode parse_mode(std::string_view text) {
  if (text == "rational") return NumberMode::rational;
  if (text == "double") return NumberMode::real;
  fail(ErrorKind::invalid_argument, "unknown number mode '" + std::string(text) + "'");
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

Rational parse_decimal(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_part = s.substr(e + 1);
    bool exp_negative = false;
    if (!exp_part.empty() && (exp_part.front() == '-' || exp_part.front() == '+')) {
      exp_negative = exp_part.front() == '-';
      exp_part.remove_prefix(1);
    }
    require(all_digits(exp_part) && exp_part.size() < 6,
            "malformed number '" + std::string(text) + "'");
    exponent = std::stol(std::string(exp_part));
    if (exp_negative) exponent = -exponent;
    s = s.substr(0, e);
  }
  std::string digits;
  auto dot = s.find('.');
  if (dot == std::string_view::npos) {
    require(all_digits(s), "malformed number '" + std::string(text) + "'");
    digits = std::string(s);
  } else {
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    require((whole.empty() || all_digits(whole)) && (frac.empty() || all_digits(frac)) &&
                !(whole.empty() && frac.empty()),
            "malformed number '" + std::string(text) + "'");
    digits = std::string(whole) + std::string(frac);
    exponent -= static_cast<long>(frac.size());
  }
  mpz_class numerator(digits, 10);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  Rational q = exponent < 0 ? Rational(numerator, scale) : Rational(numerator * scale);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  require(!text.empty(), "empty number");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::string_view num = text.substr(0, slash);
    std::string_view den = text.substr(slash + 1);
    std::string_view num_digits = num;
    if (!num_digits.empty() && (num_digits.front() == '-' || num_digits.front() == '+')) {
      num_digits.remove_prefix(1);
    }
    require(all_digits(num_digits) && all_digits(den),
            "malformed rational '" + std::string(text) + "'");
    mpz_class n(std::string(num_digits), 10);
    mpz_class d(std::string(den), 10);
    require(d != 0, "zero denominator in '" + std::string(text) + "'");
    if (!num.empty() && num.front() == '-') n = -n;
    Rational q(n, d);
    q.canonicalize();
    return q;
  }
  return parse_decimal(text);
}

std::string to_string(const Rational& q) { return q.get_str(); }

std::uint64_t split_seed(std::uint64_t master, std::uint64_t index) {
  // splitmix64 over a combined state
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double to_double(const Rational& q) {
  const double truncated = q.get_d();
  if (!std::isfinite(truncated) || Rational(truncated) == q) return truncated;
  const double away = std::nextafter(truncated, q > 0 ? HUGE_VAL : -HUGE_VAL);
  if (!std::isfinite(away)) return truncated;
  const Rational below = abs_of<Rational>(Rational(q - Rational(truncated)));
  const Rational above = abs_of<Rational>(Rational(Rational(away) - q));
  if (below < above) return truncated;
  if (above < below) return away;
  // Ties go to the even significand.
  return (std::bit_cast<std::uint64_t>(truncated) & 1) == 0 ? truncated : away;
}

}  // namespace cantor
