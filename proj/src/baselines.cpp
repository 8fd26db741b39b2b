#include "robust_cluster/baselines.hpp"

#include <algorithm>
#include <numeric>

#include "alternation.hpp"
#include "robust_cluster/error.hpp"

namespace robust_cluster {

namespace {

detail::LoopControl control(const LloydParams& p) {
  return {p.epsilon, p.max_iterations,
          p.empty_cluster_rule == EmptyClusterRule::keep_previous
              ? detail::EmptyRule::keep_previous
              : detail::EmptyRule::reseed_random_point};
}

template <class Estimate>
LloydResult run(const PointSet& points, std::optional<CentroidSet> previous, LabelVector labels,
                const LloydParams& params, Rng& rng, Estimate&& est) {
  auto out =
      detail::alternate(points, std::move(previous), std::move(labels), est, control(params), &rng);
  return {std::move(out.centroids), std::move(out.labels), std::move(out.history)};
}

}  // namespace

std::vector<double> cluster_mean(const PointSet& points, std::span<const std::size_t> members) {
  detail::require(!members.empty(), "mean of an empty cluster");
  std::vector<double> c(points.dim(), 0.0);
  for (std::size_t i : members) {
    const auto r = points.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) c[j] += r[j];
  }
  for (double& v : c) v /= static_cast<double>(members.size());
  return c;
}

std::vector<double> coordinatewise_median(const PointSet& points,
                                          std::span<const std::size_t> members) {
  detail::require(!members.empty(), "median of an empty cluster");
  std::vector<double> c(points.dim());
  std::vector<double> col(members.size());
  const auto mid = static_cast<std::ptrdiff_t>((members.size() - 1) / 2);
  for (std::size_t j = 0; j < points.dim(); ++j) {
    for (std::size_t q = 0; q < members.size(); ++q) col[q] = points.row(members[q])[j];
    std::nth_element(col.begin(), col.begin() + mid, col.end());
    c[j] = col[static_cast<std::size_t>(mid)];
  }
  return c;
}

LloydResult lloyd(const PointSet& points, const CentroidSet& init, const LloydParams& params,
                  Rng& rng) {
  detail::require(init.k() <= points.size(), "k exceeds the number of points");
  auto mean = [&](std::span<const std::size_t> m) { return cluster_mean(points, m); };
  return run(points, init, assign_labels(points, init), params, rng, mean);
}

LloydResult lloyd(const PointSet& points, const LabelVector& init, const LloydParams& params,
                  Rng& rng) {
  detail::require(!init.has_sentinel(), "initial labels must be in 1..k");
  auto mean = [&](std::span<const std::size_t> m) { return cluster_mean(points, m); };
  return run(points, std::nullopt, init, params, rng, mean);
}

LloydResult kmedian_hybrid(const PointSet& points, const CentroidSet& init,
                           const LloydParams& params, Rng& rng) {
  detail::require(init.k() <= points.size(), "k exceeds the number of points");
  auto median = [&](std::span<const std::size_t> m) { return coordinatewise_median(points, m); };
  return run(points, init, assign_labels(points, init), params, rng, median);
}

std::vector<std::size_t> kmeanspp_indices(const PointSet& points, std::size_t k, Rng& rng) {
  const std::size_t n = points.size();
  detail::require(k >= 1 && k <= n, "k-means++ requires 1 <= k <= n");
  std::vector<std::size_t> chosen;
  std::vector<bool> taken(n, false);
  std::uniform_int_distribution<std::size_t> first(0, n - 1);
  chosen.push_back(first(rng));
  taken[chosen.back()] = true;

  std::vector<double> weight(n);
  for (std::size_t i = 0; i < n; ++i)
    weight[i] = squared_distance(points.row(i), points.row(chosen.back()));

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (chosen.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (!taken[i]) total += weight[i];
    std::size_t pick = n;
    if (total > 0.0) {
      const double target = unit(rng) * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (taken[i] || weight[i] <= 0.0) continue;
        acc += weight[i];
        pick = i;
        if (acc > target) break;
      }
    } else {
      // Remaining points all coincide with chosen centers.
      std::vector<std::size_t> free;
      for (std::size_t i = 0; i < n; ++i)
        if (!taken[i]) free.push_back(i);
      std::uniform_int_distribution<std::size_t> u(0, free.size() - 1);
      pick = free[u(rng)];
    }
    chosen.push_back(pick);
    taken[pick] = true;
    for (std::size_t i = 0; i < n; ++i)
      weight[i] = std::min(weight[i], squared_distance(points.row(i), points.row(pick)));
  }
  return chosen;
}

CentroidSet kmeanspp_init(const PointSet& points, std::size_t k, Rng& rng) {
  const auto idx = kmeanspp_indices(points, k, rng);
  return CentroidSet::from_points(points, idx);
}

std::vector<std::size_t> random_indices(std::size_t n, std::size_t k, Rng& rng) {
  detail::require(k >= 1 && k <= n, "random init requires 1 <= k <= n");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> u(i, n - 1);
    std::swap(idx[i], idx[u(rng)]);
  }
  idx.resize(k);
  return idx;
}

CentroidSet random_init(const PointSet& points, std::size_t k, Rng& rng) {
  const auto idx = random_indices(points.size(), k, rng);
  return CentroidSet::from_points(points, idx);
}

}  // namespace robust_cluster
