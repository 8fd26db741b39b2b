#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "robust_cluster/geometry.hpp"
#include "robust_cluster/partition.hpp"

namespace robust_cluster {

struct IodParams {
  std::size_t m1 = 20;  // initial cluster size
  std::size_t m = 10;   // batch size
  double beta = 0.05;   // truncation parameter, in (0, 1)
  int k = 2;
  /// Let the k = 2 argmin also consider the last computed step.
  bool include_final_step = false;

  void validate() const;
};

/// Parameter recipe with guaranteed Delta/3 initialization accuracy:
///   k = 2:  m1 = ceil(n a/4), m = max(1, floor(n a^2/16)), beta = a/4
///   k >= 3: beta = a/(4k), m1 = ceil(n a/4), m = max(1, floor(n beta^2/2))
IodParams default_params(std::size_t n, int k, double alpha);

struct IodResult {
  CentroidSet centroids;
  std::vector<std::size_t> indices;       // row of each centroid in the input
  double totdist = 0.0;
  std::vector<std::size_t> chosen_steps;  // (l_k*, ..., l_2*), 1-based
  std::size_t skipped_branches = 0;       // recursion branches too small to run
};

/// Two-cluster initialization. Requires n >= m1 + m.
IodResult iod2(const PointSet& points, const IodParams& params);

/// General-k initialization; recursion bottoms out in iod2. Throws
/// InfeasibleError when every branch is too small for the parameters.
IodResult iodk(const PointSet& points, const IodParams& params);

namespace detail {

struct IodTrace {
  std::vector<std::size_t> indices;  // centroid rows, level order mu_1 .. mu_k
  double totdist = 0.0;
  std::vector<std::size_t> chosen_steps;
  std::size_t skipped = 0;
};

/// Recursive worker on a subset of rows of a precomputed distance matrix.
IodTrace iod_on_subset(const DistanceMatrix& dist, std::span<const std::size_t> members, int k,
                       const IodParams& params);

}  // namespace detail

}  // namespace robust_cluster
