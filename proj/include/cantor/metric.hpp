#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cantor/address.hpp"
#include "cantor/number.hpp"

namespace cantor {

// Dense row-major square matrix of pairwise distances. Setters keep it
// symmetric; whether it is actually a metric is validate_metric's business.
template <Scalar T>
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t size) : size_(size), data_(size * size, T(0)) {}

  std::size_t size() const { return size_; }

  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * size_ + j]; }

  void set(std::size_t i, std::size_t j, const T& value) {
    data_[i * size_ + j] = value;
    data_[j * size_ + i] = value;
  }
  // One-sided write; only readers of untrusted input need it.
  void set_entry(std::size_t i, std::size_t j, const T& value) { data_[i * size_ + j] = value; }

  std::span<const T> row(std::size_t i) const { return {data_.data() + i * size_, size_}; }

  DistanceMatrix restricted(std::span<const std::size_t> points) const;
  DistanceMatrix scaled(const T& factor) const;

  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<T> data_;
};

// d restricted to the depth-m net {r_a : a in R_m}, indexed in address order.
// Line-realized generators also keep the real coordinate of every point.
template <Scalar T>
class DyadicMetric {
 public:
  DyadicMetric() = default;
  DyadicMetric(int depth, DistanceMatrix<T> dist,
               std::optional<std::vector<T>> line_coordinates = std::nullopt);

  static constexpr NumberMode mode = mode_of<T>;

  int depth() const { return depth_; }
  std::size_t size() const { return dist_.size(); }
  const DistanceMatrix<T>& dist() const { return dist_; }
  const T& operator()(std::size_t i, std::size_t j) const { return dist_(i, j); }
  const std::optional<std::vector<T>>& line_coordinates() const { return line_; }

  DyadicMetric scaled(const T& factor) const;

  friend bool operator==(const DyadicMetric& a, const DyadicMetric& b) {
    return a.depth_ == b.depth_ && a.dist_ == b.dist_;
  }

 private:
  int depth_ = 0;
  DistanceMatrix<T> dist_;
  std::optional<std::vector<T>> line_;
};

using RationalMetric = DyadicMetric<Rational>;
using DoubleMetric = DyadicMetric<double>;

DistanceMatrix<double> to_double(const DistanceMatrix<Rational>& m);
DyadicMetric<double> to_double(const DyadicMetric<Rational>& d);

// Points of a set of cylinders, sorted and deduplicated.
std::vector<std::size_t> points_of(std::span<const Address> cylinders, int depth);

}  // namespace cantor
