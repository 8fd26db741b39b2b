#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "robust_cluster/geometry.hpp"

namespace robust_cluster {

/// Output of the ordered-distance trimmed mean.
///
/// Every point i gets a radius R_i, the ceil((1-delta) m)-th smallest
/// distance from X_i to the set (self-distance included). The medoid is
/// the point with the smallest radius; the kept set is the
/// ceil((1-delta) m) points nearest to it, and the center is their mean.
struct TrimmedMeanResult {
  std::vector<double> center;
  std::size_t medoid_index = 0;
  double radius = 0.0;
  std::vector<std::size_t> kept_indices;  // ascending
};

/// The data point whose rank-th smallest distance to the set is minimal.
struct HdpResult {
  std::size_t index = 0;
  double radius = 0.0;
};

/// Ties on R_i and on membership at the boundary go to the smallest index.
TrimmedMeanResult trimmed_mean(const PointSet& points, double delta);

/// Trimmed mean of the rows of `points` listed in `members` (ascending).
/// Indices in the result refer to `points`.
TrimmedMeanResult trimmed_mean(const PointSet& points, std::span<const std::size_t> members,
                               double delta);

/// High density point with neighbourhood size ceil(n q).
HdpResult hdp(const PointSet& points, double q);

/// High density point within `members` using precomputed distances and an
/// explicit 1-indexed rank. The returned index refers to the full matrix.
HdpResult hdp(const DistanceMatrix& dist, std::span<const std::size_t> members, std::size_t rank);

}  // namespace robust_cluster
