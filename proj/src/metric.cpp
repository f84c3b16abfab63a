#include "cantor/metric.hpp"

#include <algorithm>

#include "cantor/error.hpp"

namespace cantor {

template <Scalar T>
DistanceMatrix<T> DistanceMatrix<T>::restricted(std::span<const std::size_t> points) const {
  DistanceMatrix<T> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    require(points[i] < size_, "restriction point out of range");
    for (std::size_t j = 0; j < points.size(); ++j) {
      out.data_[i * points.size() + j] = (*this)(points[i], points[j]);
    }
  }
  return out;
}

template <Scalar T>
DistanceMatrix<T> DistanceMatrix<T>::scaled(const T& factor) const {
  DistanceMatrix<T> out = *this;
  for (T& v : out.data_) v *= factor;
  return out;
}

template <Scalar T>
DyadicMetric<T>::DyadicMetric(int depth, DistanceMatrix<T> dist,
                              std::optional<std::vector<T>> line_coordinates)
    : depth_(depth), dist_(std::move(dist)), line_(std::move(line_coordinates)) {
  require(depth >= 1 && depth <= kHardMaxDepth, "depth out of range");
  require(dist_.size() == point_count(depth), "distance matrix size must be 2^depth");
  require(!line_ || line_->size() == dist_.size(), "line coordinate count mismatch");
}

template <Scalar T>
DyadicMetric<T> DyadicMetric<T>::scaled(const T& factor) const {
  std::optional<std::vector<T>> line;
  if (line_) {
    line = *line_;
    for (T& v : *line) v *= factor;
  }
  return DyadicMetric<T>(depth_, dist_.scaled(factor), std::move(line));
}

DistanceMatrix<double> to_double(const DistanceMatrix<Rational>& m) {
  DistanceMatrix<double> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) out.set_entry(i, j, m(i, j).get_d());
  }
  return out;
}

DyadicMetric<double> to_double(const DyadicMetric<Rational>& d) {
  std::optional<std::vector<double>> line;
  if (d.line_coordinates()) {
    line.emplace();
    for (const Rational& q : *d.line_coordinates()) line->push_back(q.get_d());
  }
  return DyadicMetric<double>(d.depth(), to_double(d.dist()), std::move(line));
}

std::vector<std::size_t> points_of(std::span<const Address> cylinders, int depth) {
  std::vector<std::size_t> out;
  for (const Address& a : cylinders) {
    IndexRange r = a.cylinder(depth);
    for (std::size_t i = r.begin; i < r.end; ++i) out.push_back(i);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

template class DistanceMatrix<Rational>;
template class DistanceMatrix<double>;
template class DyadicMetric<Rational>;
template class DyadicMetric<double>;

}  // namespace cantor
