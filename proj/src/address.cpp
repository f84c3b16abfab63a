#include "cantor/address.hpp"

#include <bit>

#include "cantor/error.hpp"

namespace cantor {

Address::Address(std::uint32_t bits, int length) : bits_(bits), length_(length) {
  require(length >= 0 && length <= 31, "address length out of range");
  require(length == 31 || bits < (std::uint32_t{1} << length),
          "address bits exceed its length");
}

Address Address::parse(std::string_view text) {
  require(text.size() <= 31, "address too long");
  std::uint32_t bits = 0;
  for (char c : text) {
    require(c == '0' || c == '1', "address must consist of 0/1 characters");
    bits = (bits << 1) | static_cast<std::uint32_t>(c - '0');
  }
  return Address(bits, static_cast<int>(text.size()));
}

Address Address::of_point(std::size_t point, int depth, int length) {
  require(length >= 0 && length <= depth, "prefix length out of range");
  return Address(static_cast<std::uint32_t>(point >> (depth - length)), length);
}

int Address::bit(int position) const {
  require(position >= 1 && position <= length_, "bit position out of range");
  return static_cast<int>((bits_ >> (length_ - position)) & 1u);
}

bool Address::is_prefix_of(const Address& other) const {
  if (length_ > other.length_) return false;
  return (other.bits_ >> (other.length_ - length_)) == bits_;
}

Address Address::child(int bit) const {
  require(bit == 0 || bit == 1, "child bit must be 0 or 1");
  return Address((bits_ << 1) | static_cast<std::uint32_t>(bit), length_ + 1);
}

IndexRange Address::cylinder(int depth) const {
  require(length_ <= depth, "address longer than the net depth");
  const std::size_t width = std::size_t{1} << (depth - length_);
  return {bits_ * width, (bits_ + 1) * width};
}

std::size_t Address::representative(int depth) const { return cylinder(depth).begin; }

std::string Address::to_string() const {
  std::string s(static_cast<std::size_t>(length_), '0');
  for (int i = 1; i <= length_; ++i) {
    if (bit(i)) s[static_cast<std::size_t>(i - 1)] = '1';
  }
  return s;
}

std::vector<Address> addresses_of_length(int n) {
  require(n >= 0 && n <= kHardMaxDepth, "address length out of range");
  std::vector<Address> out;
  out.reserve(std::size_t{1} << n);
  for (std::uint32_t b = 0; b < (std::uint32_t{1} << n); ++b) out.emplace_back(b, n);
  return out;
}

int first_difference(std::size_t x, std::size_t y, int depth) {
  if (x == y) return 0;
  const int highest = std::bit_width(x ^ y) - 1;
  return depth - highest;
}

}  // namespace cantor
