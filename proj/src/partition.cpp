#include "robust_cluster/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "robust_cluster/error.hpp"

namespace robust_cluster {

CentroidSet::CentroidSet(std::size_t k, std::size_t d, std::vector<double> centers)
    : k_(k), d_(d), centers_(std::move(centers)) {
  detail::require(k >= 1, "CentroidSet requires k >= 1");
  detail::require(d >= 1, "CentroidSet requires dimension >= 1");
  detail::require(centers_.size() == k * d, "CentroidSet data size does not match k*d");
  for (double v : centers_) detail::require(std::isfinite(v), "centroid entries must be finite");
}

CentroidSet CentroidSet::from_rows(const std::vector<std::vector<double>>& rows) {
  const PointSet p = PointSet::from_rows(rows);
  return CentroidSet(p.size(), p.dim(), p.data());
}

CentroidSet CentroidSet::from_points(const PointSet& points, std::span<const std::size_t> indices) {
  const PointSet p = points.subset(indices);
  return CentroidSet(p.size(), p.dim(), p.data());
}

double CentroidSet::min_separation() const {
  detail::require(k_ >= 2, "min_separation requires k >= 2");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t g = 0; g < k_; ++g)
    for (std::size_t h = g + 1; h < k_; ++h) best = std::min(best, distance(center(g), center(h)));
  return best;
}

LabelVector::LabelVector(std::vector<int> labels, int k, bool allow_sentinel)
    : labels_(std::move(labels)), k_(k) {
  detail::require(k >= 1, "LabelVector requires k >= 1");
  const int lo = allow_sentinel ? 0 : 1;
  for (int l : labels_) detail::require(l >= lo && l <= k, "label out of range");
}

bool LabelVector::has_sentinel() const noexcept {
  return std::find(labels_.begin(), labels_.end(), 0) != labels_.end();
}

std::vector<std::vector<std::size_t>> LabelVector::members() const {
  std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(k_));
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] > 0) out[static_cast<std::size_t>(labels_[i] - 1)].push_back(i);
  return out;
}

LabelVector assign_labels(const PointSet& points, const CentroidSet& centroids) {
  detail::require(points.dim() == centroids.dim(), "points and centroids differ in dimension");
  std::vector<int> labels(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::size_t best = 0;
    double best_d = squared_distance(points.row(i), centroids.center(0));
    for (std::size_t h = 1; h < centroids.k(); ++h) {
      const double d = squared_distance(points.row(i), centroids.center(h));
      if (d < best_d) {
        best_d = d;
        best = h;
      }
    }
    labels[i] = static_cast<int>(best) + 1;
  }
  return LabelVector(std::move(labels), static_cast<int>(centroids.k()));
}

}  // namespace robust_cluster
