#include "robust_cluster/estimators.hpp"

#include <algorithm>
#include <numeric>

#include "robust_cluster/error.hpp"

namespace robust_cluster {

namespace {

// Argmin over candidates of the rank-th smallest entry of `row_of(i)`.
// On ties the candidate with the smallest id(p) wins.
template <class RowFill, class Id>
std::pair<std::size_t, double> min_row_order_stat(std::size_t count, std::size_t rank,
                                                  RowFill&& fill, Id&& id) {
  std::vector<double> buf(count);
  std::size_t best = 0;
  double best_r = 0.0;
  for (std::size_t p = 0; p < count; ++p) {
    fill(p, buf);
    auto nth = buf.begin() + static_cast<std::ptrdiff_t>(rank - 1);
    std::nth_element(buf.begin(), nth, buf.end());
    if (p == 0 || *nth < best_r || (*nth == best_r && id(p) < id(best))) {
      best_r = *nth;
      best = p;
    }
  }
  return {best, best_r};
}

}  // namespace

TrimmedMeanResult trimmed_mean(const PointSet& points, double delta) {
  std::vector<std::size_t> all(points.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return trimmed_mean(points, all, delta);
}

TrimmedMeanResult trimmed_mean(const PointSet& points, std::span<const std::size_t> members,
                               double delta) {
  detail::require(!members.empty(), "trimmed_mean requires a nonempty set");
  detail::require(delta >= 0.0 && delta < 1.0, "trimmed_mean delta must be in [0, 1)");
  const std::size_t m = members.size();
  const std::size_t keep = quantile_rank(m, 1.0 - delta);

  auto [medoid_pos, radius] =
      min_row_order_stat(m, keep, [&](std::size_t p, std::vector<double>& buf) {
        const auto xi = points.row(members[p]);
        for (std::size_t q = 0; q < m; ++q) buf[q] = distance(xi, points.row(members[q]));
      },
      [&](std::size_t p) { return members[p]; });

  // Nearest `keep` members to the medoid; ties go to the smaller index.
  const auto xm = points.row(members[medoid_pos]);
  std::vector<std::pair<double, std::size_t>> by_dist(m);
  for (std::size_t q = 0; q < m; ++q)
    by_dist[q] = {distance(xm, points.row(members[q])), members[q]};
  std::partial_sort(by_dist.begin(), by_dist.begin() + static_cast<std::ptrdiff_t>(keep),
                    by_dist.end());

  TrimmedMeanResult out;
  out.medoid_index = members[medoid_pos];
  out.radius = radius;
  out.kept_indices.reserve(keep);
  for (std::size_t q = 0; q < keep; ++q) out.kept_indices.push_back(by_dist[q].second);
  std::sort(out.kept_indices.begin(), out.kept_indices.end());

  out.center.assign(points.dim(), 0.0);
  for (std::size_t i : out.kept_indices) {
    const auto r = points.row(i);
    for (std::size_t c = 0; c < r.size(); ++c) out.center[c] += r[c];
  }
  for (double& c : out.center) c /= static_cast<double>(keep);
  return out;
}

HdpResult hdp(const PointSet& points, double q) {
  detail::require(q > 0.0 && q <= 1.0, "hdp q must be in (0, 1]");
  const std::size_t n = points.size();
  const std::size_t rank = quantile_rank(n, q);
  auto [idx, radius] = min_row_order_stat(n, rank, [&](std::size_t p, std::vector<double>& buf) {
    const auto xi = points.row(p);
    for (std::size_t j = 0; j < n; ++j) buf[j] = distance(xi, points.row(j));
  }, [](std::size_t p) { return p; });
  return {idx, radius};
}

HdpResult hdp(const DistanceMatrix& dist, std::span<const std::size_t> members, std::size_t rank) {
  detail::require(!members.empty(), "hdp requires a nonempty set");
  detail::require(rank >= 1 && rank <= members.size(), "hdp rank out of range");
  auto [pos, radius] =
      min_row_order_stat(members.size(), rank, [&](std::size_t p, std::vector<double>& buf) {
        const auto row = dist.row(members[p]);
        for (std::size_t q = 0; q < members.size(); ++q) buf[q] = row[members[q]];
      },
      [&](std::size_t p) { return members[p]; });
  return {members[pos], radius};
}

}  // namespace robust_cluster
