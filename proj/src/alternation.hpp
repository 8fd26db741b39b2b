#pragma once

// Labeling/estimation loop shared by COD, Lloyd and the k-median hybrid.
// Only the per-cluster estimator and the empty-cluster rule differ.

#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "robust_cluster/error.hpp"
#include "robust_cluster/partition.hpp"
#include "robust_cluster/rng.hpp"

namespace robust_cluster::detail {

enum class EmptyRule { keep_previous, reseed_random_point };

struct LoopControl {
  double epsilon = 1e-8;
  int max_iterations = 50;
  EmptyRule empty_rule = EmptyRule::keep_previous;
};

struct LoopOutput {
  CentroidSet centroids;
  LabelVector labels;
  std::vector<IterationState> history;
};

inline double mean_squared_movement(const CentroidSet& a, const CentroidSet& b) {
  double s = 0.0;
  for (std::size_t h = 0; h < a.k(); ++h) s += squared_distance(a.center(h), b.center(h));
  return s / static_cast<double>(a.k());
}

// `estimate(members)` returns the new center of a nonempty cluster.
template <class Estimate>
LoopOutput alternate(const PointSet& points, std::optional<CentroidSet> previous,
                     LabelVector labels, Estimate&& estimate, const LoopControl& ctl,
                     Rng* rng) {
  require(ctl.max_iterations >= 1, "max_iterations must be >= 1");
  require(ctl.epsilon >= 0.0, "epsilon must be >= 0");
  require(labels.size() == points.size(), "label vector length differs from point count");
  const std::size_t k = static_cast<std::size_t>(labels.k());
  const std::size_t d = points.dim();
  require(k <= points.size(), "k exceeds the number of points");
  if (previous) require(previous->dim() == d, "centroid dimension mismatch");

  std::vector<IterationState> history;
  for (int s = 1;; ++s) {
    const auto members = labels.members();
    std::vector<double> centers(k * d);
    std::vector<int> emptied;
    for (std::size_t h = 0; h < k; ++h) {
      std::vector<double> c;
      if (!members[h].empty()) {
        c = estimate(std::span<const std::size_t>(members[h]));
      } else {
        emptied.push_back(static_cast<int>(h) + 1);
        if (ctl.empty_rule == EmptyRule::reseed_random_point) {
          require(rng != nullptr, "reseeding an empty cluster needs a random stream");
          std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
          const auto r = points.row(pick(*rng));
          c.assign(r.begin(), r.end());
        } else {
          require(previous.has_value(),
                  "initial labels leave a cluster empty and there is no previous centroid");
          const auto r = previous->center(h);
          c.assign(r.begin(), r.end());
        }
      }
      std::copy(c.begin(), c.end(), centers.begin() + static_cast<std::ptrdiff_t>(h * d));
    }
    CentroidSet current(k, d, std::move(centers));
    const double movement = previous ? mean_squared_movement(current, *previous)
                                     : std::numeric_limits<double>::quiet_NaN();
    LabelVector next = assign_labels(points, current);
    history.push_back({current, next, s, movement, std::move(emptied)});

    // s = 1 always continues (when M allows a second round); afterwards
    // stop at M or once the movement is within epsilon.
    const bool more = (s == 1 && ctl.max_iterations > 1) ||
                      (s >= 2 && s < ctl.max_iterations && movement > ctl.epsilon);
    if (!more) return {std::move(current), std::move(next), std::move(history)};
    previous = std::move(current);
    labels = std::move(next);
  }
}

}  // namespace robust_cluster::detail
