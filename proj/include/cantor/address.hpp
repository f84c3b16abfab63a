#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cantor {

inline constexpr int kDefaultMaxDepth = 12;
// Dense storage makes anything beyond this impractical regardless of config.
inline constexpr int kHardMaxDepth = 16;

// Half-open range of point indices: the points of one cylinder at a fixed
// depth occupy a contiguous block in address order.
struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool contains(std::size_t i) const { return begin <= i && i < end; }
};

// Finite 0/1 word; bit 1 is the most significant of `bits_`. Ordered by
// length first, then lexicographically.
class Address {
 public:
  Address() = default;
  Address(std::uint32_t bits, int length);

  static Address parse(std::string_view text);
  // The depth-`length` prefix of the point with index `point` at depth `depth`.
  static Address of_point(std::size_t point, int depth, int length);

  int length() const { return length_; }
  std::uint32_t bits() const { return bits_; }
  int bit(int position) const;  // 1-based

  bool is_prefix_of(const Address& other) const;
  Address child(int bit) const;

  // Points of C_a inside the depth-`depth` net.
  IndexRange cylinder(int depth) const;
  // Index of r_a, the address padded with zeros.
  std::size_t representative(int depth) const;

  std::string to_string() const;

  friend bool operator==(const Address&, const Address&) = default;
  friend std::strong_ordering operator<=>(const Address& a, const Address& b) {
    if (auto c = a.length_ <=> b.length_; c != 0) return c;
    return a.bits_ <=> b.bits_;
  }

 private:
  std::uint32_t bits_ = 0;
  int length_ = 0;
};

// R_n: all addresses of length n in lexicographic order.
std::vector<Address> addresses_of_length(int n);

inline std::size_t point_count(int depth) { return std::size_t{1} << depth; }

// 1-based index of the first bit where two depth-`depth` points differ;
// 0 if equal.
int first_difference(std::size_t x, std::size_t y, int depth);

}  // namespace cantor
