#include <doctest.h>

#include "cantor/address.hpp"
#include "cantor/error.hpp"
#include "oracles.hpp"

using namespace cantor;

TEST_CASE("address parsing and printing") {
  const Address a = Address::parse("0110");
  CHECK(a.length() == 4);
  CHECK(a.to_string() == "0110");
  CHECK(a.bit(1) == 0);
  CHECK(a.bit(2) == 1);
  CHECK(Address::parse("").length() == 0);
  CHECK_THROWS_AS(Address::parse("012"), Error);
}

TEST_CASE("cylinders are contiguous blocks starting at the representative") {
  for (int depth = 1; depth <= 6; ++depth) {
    for (int n = 0; n <= depth; ++n) {
      for (const Address& a : addresses_of_length(n)) {
        const IndexRange r = a.cylinder(depth);
        CHECK(r.size() == (std::size_t{1} << (depth - n)));
        CHECK(a.representative(depth) == r.begin);
        for (std::size_t x = 0; x < point_count(depth); ++x) {
          const bool inside = oracle::prefix(x, depth, n) == a.to_string();
          CHECK(r.contains(x) == inside);
        }
      }
    }
  }
}

TEST_CASE("of_point, prefixes and children") {
  const Address a = Address::of_point(0b1011, 4, 2);
  CHECK(a.to_string() == "10");
  CHECK(a.is_prefix_of(Address::parse("1011")));
  CHECK_FALSE(Address::parse("11").is_prefix_of(Address::parse("1011")));
  CHECK(a.child(1).to_string() == "101");
}

TEST_CASE("first_difference matches the bit-string definition") {
  const int depth = 5;
  for (std::size_t x = 0; x < 32; ++x) {
    for (std::size_t y = 0; y < 32; ++y) {
      const std::string a = oracle::bits(x, depth);
      const std::string b = oracle::bits(y, depth);
      int expected = 0;
      for (int i = 0; i < depth; ++i) {
        if (a[i] != b[i]) {
          expected = i + 1;
          break;
        }
      }
      CHECK(first_difference(x, y, depth) == expected);
    }
  }
}

TEST_CASE("R_n is in lexicographic order") {
  const auto r = addresses_of_length(3);
  REQUIRE(r.size() == 8);
  for (std::size_t i = 0; i < r.size(); ++i) CHECK(r[i].bits() == i);
  CHECK(Address::parse("1") < Address::parse("00"));
}
