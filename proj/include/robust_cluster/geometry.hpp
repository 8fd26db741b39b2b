#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace robust_cluster {

/// n observations in R^d, stored row-major. Entries are finite.
class PointSet {
 public:
  PointSet(std::size_t n, std::size_t d, std::vector<double> data);

  static PointSet from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const noexcept { return n_; }
  std::size_t dim() const noexcept { return d_; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * d_, d_};
  }
  const std::vector<double>& data() const noexcept { return data_; }

  /// Rows at `indices`, in the given order.
  PointSet subset(std::span<const std::size_t> indices) const;

  /// This set followed by the rows of `other` (same dimension).
  PointSet concat(const PointSet& other) const;

 private:
  std::size_t n_;
  std::size_t d_;
  std::vector<double> data_;
};

/// Symmetric n x n Euclidean distance matrix with exact zero diagonal.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(std::size_t n) : n_(n), dist_(n * n, 0.0) {}

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return dist_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return dist_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const noexcept { return {dist_.data() + i * n_, n_}; }

 private:
  std::size_t n_;
  std::vector<double> dist_;
};

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept;
double distance(std::span<const double> a, std::span<const double> b) noexcept;

DistanceMatrix pairwise_distances(const PointSet& points);

/// rank-th smallest value (1-indexed, duplicates counted).
double order_stat(std::span<const double> values, std::size_t rank);

/// ceil(fraction * count) clamped to [1, count]. Products within 1e-9
/// (relative) of an integer are treated as that integer, so that e.g.
/// (1 - 0.3) * 10 maps to 7 rather than 8.
std::size_t quantile_rank(std::size_t count, double fraction);

}  // namespace robust_cluster
