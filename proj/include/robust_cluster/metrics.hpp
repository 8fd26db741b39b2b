#pragma once

#include <optional>
#include <span>
#include <vector>

#include "robust_cluster/geometry.hpp"
#include "robust_cluster/partition.hpp"

namespace robust_cluster {

enum class MislabelingMode {
  permutations,  // minimum over bijections of the label set
  mappings,      // minimum over all maps from true labels to estimated labels
};

/// Fraction of points whose estimated label disagrees with the relabeled
/// truth, minimized over relabelings. Label sets of different k are
/// compared on the larger of the two.
double mislabeling(const LabelVector& estimated, const LabelVector& truth,
                   MislabelingMode mode = MislabelingMode::permutations);

/// mislabeling restricted to positions where keep_mask is true. The
/// masked-out positions may carry the outlier sentinel 0.
double mislabeling_on_mask(const LabelVector& estimated, const LabelVector& truth,
                           const std::vector<bool>& keep_mask,
                           MislabelingMode mode = MislabelingMode::permutations);

/// Bijection maximizing agreement: result[g-1] is the estimated label
/// matched to true label g.
std::vector<int> best_alignment(const LabelVector& estimated, const LabelVector& truth);

/// Maximum-weight perfect matching on a square matrix (Hungarian method).
/// Returns column assigned to each row.
std::vector<std::size_t> max_weight_assignment(const std::vector<std::vector<double>>& weight);

/// Within-cluster sum of squares to the nearest centroid.
double wcss(const PointSet& points, const CentroidSet& centroids);

struct Diagnostics {
  double H = 0.0;       // min over clusters of min(n_gg/n_g*, n_gg/n_g)
  double Lambda = 0.0;  // max_h ||theta_hat_h - theta_h|| / Delta after alignment
  double Delta = 0.0;   // min pairwise true-centroid distance
  double alpha = 0.0;   // min true cluster fraction
  std::optional<double> snr;  // Delta / (2 sigma)
  std::vector<std::vector<std::size_t>> counts;  // counts[g][h] = |T*_g ∩ T_h| (aligned)
};

/// Estimated clusters are aligned to the true ones by the bijection that
/// minimizes mislabeling before computing H and Lambda.
Diagnostics diagnostics(const PointSet& points, const LabelVector& truth,
                        const LabelVector& est_labels, const CentroidSet& true_centroids,
                        const CentroidSet& est_centroids, std::optional<double> sigma = {});

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t count = 0;
};

/// Mean and unbiased sample standard deviation / sqrt(count), skipping NaN.
MeanStderr mean_and_stderr(std::span<const double> values);

}  // namespace robust_cluster
