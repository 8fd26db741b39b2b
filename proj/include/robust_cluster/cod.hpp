#pragma once

#include <vector>

#include "robust_cluster/geometry.hpp"
#include "robust_cluster/partition.hpp"

namespace robust_cluster {

struct CodParams {
  double delta = 0.3;       // truncation level, in [0, 1/2)
  double epsilon = 1e-8;    // threshold on mean squared centroid movement
  int max_iterations = 50;  // M

  void validate() const;
};

using CodState = IterationState;

struct CodResult {
  CodState final_state;
  std::vector<CodState> history;
};

/// Clustering via Ordered Distances: alternate nearest-centroid labeling
/// with a trimmed-mean update of every nonempty cluster. An empty cluster
/// keeps its previous centroid.
///
/// The first round labels points by the nearest initial centroid. The
/// loop continues after round 1 unconditionally and afterwards while
/// s < M and the mean squared movement exceeds epsilon.
CodResult cod_cluster(const PointSet& points, const CentroidSet& init, const CodParams& params);

/// As above, but round 1 takes the supplied labels as its clusters.
CodResult cod_cluster(const PointSet& points, const LabelVector& init, const CodParams& params);

}  // namespace robust_cluster
