#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "robust_cluster/geometry.hpp"

namespace robust_cluster {

/// k centroid vectors in R^d.
class CentroidSet {
 public:
  CentroidSet(std::size_t k, std::size_t d, std::vector<double> centers);

  static CentroidSet from_rows(const std::vector<std::vector<double>>& rows);
  /// The rows of `points` at `indices` as centroids.
  static CentroidSet from_points(const PointSet& points, std::span<const std::size_t> indices);

  std::size_t k() const noexcept { return k_; }
  std::size_t dim() const noexcept { return d_; }
  /// 0-based centroid h.
  std::span<const double> center(std::size_t h) const noexcept {
    return {centers_.data() + h * d_, d_};
  }
  std::span<double> center(std::size_t h) noexcept { return {centers_.data() + h * d_, d_}; }
  const std::vector<double>& data() const noexcept { return centers_; }

  /// Minimum pairwise distance. Requires k >= 2.
  double min_separation() const;

 private:
  std::size_t k_;
  std::size_t d_;
  std::vector<double> centers_;
};

/// Cluster labels in {1..k}. Label 0 is the outlier sentinel and is only
/// admitted when the vector is built with `allow_sentinel`.
class LabelVector {
 public:
  LabelVector(std::vector<int> labels, int k, bool allow_sentinel = false);

  std::size_t size() const noexcept { return labels_.size(); }
  int k() const noexcept { return k_; }
  int operator[](std::size_t i) const noexcept { return labels_[i]; }
  const std::vector<int>& values() const noexcept { return labels_; }
  bool has_sentinel() const noexcept;

  /// Point indices per cluster; entry h holds the members of label h+1.
  std::vector<std::vector<std::size_t>> members() const;

  friend bool operator==(const LabelVector&, const LabelVector&) = default;

 private:
  std::vector<int> labels_;
  int k_;
};

/// Nearest-centroid labels, ties toward the smaller cluster id.
LabelVector assign_labels(const PointSet& points, const CentroidSet& centroids);

/// Snapshot after one labeling + estimation round.
struct IterationState {
  CentroidSet centroids;
  LabelVector labels;        // nearest-centroid labels w.r.t. `centroids`
  int iteration = 0;         // s, starting at 1
  double movement = 0.0;     // (1/k) sum ||theta^(s) - theta^(s-1)||^2; NaN if no theta^(0)
  std::vector<int> emptied;  // cluster ids empty in this round's labeling
};

}  // namespace robust_cluster
