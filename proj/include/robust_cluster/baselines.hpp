#pragma once

#include <vector>

#include "robust_cluster/geometry.hpp"
#include "robust_cluster/partition.hpp"
#include "robust_cluster/rng.hpp"

namespace robust_cluster {

enum class EmptyClusterRule { reseed_random_point, keep_previous };

struct LloydParams {
  double epsilon = 1e-8;
  int max_iterations = 50;
  EmptyClusterRule empty_cluster_rule = EmptyClusterRule::reseed_random_point;
};

struct LloydResult {
  CentroidSet centroids;
  LabelVector labels;
  std::vector<IterationState> history;
};

/// Lloyd-Forgy: nearest-centroid labeling and per-cluster arithmetic mean,
/// with the same loop control as COD. Empty clusters are reseeded with a
/// uniformly drawn data point from `rng` unless the rule says otherwise.
LloydResult lloyd(const PointSet& points, const CentroidSet& init, const LloydParams& params,
                  Rng& rng);
LloydResult lloyd(const PointSet& points, const LabelVector& init, const LloydParams& params,
                  Rng& rng);

/// Lloyd iteration with the per-cluster coordinatewise median as update.
/// Even counts use the lower middle order statistic.
LloydResult kmedian_hybrid(const PointSet& points, const CentroidSet& init,
                           const LloydParams& params, Rng& rng);

/// D^2 seeding: first center uniform, each further center drawn with
/// probability proportional to the squared distance to the nearest chosen
/// center. Returns k distinct data points.
CentroidSet kmeanspp_init(const PointSet& points, std::size_t k, Rng& rng);
std::vector<std::size_t> kmeanspp_indices(const PointSet& points, std::size_t k, Rng& rng);

/// k distinct data points drawn uniformly without replacement.
CentroidSet random_init(const PointSet& points, std::size_t k, Rng& rng);
std::vector<std::size_t> random_indices(std::size_t n, std::size_t k, Rng& rng);

/// Arithmetic mean of the listed rows, summed in the given order.
std::vector<double> cluster_mean(const PointSet& points, std::span<const std::size_t> members);
/// Lower coordinatewise median of the listed rows.
std::vector<double> coordinatewise_median(const PointSet& points,
                                          std::span<const std::size_t> members);

}  // namespace robust_cluster
