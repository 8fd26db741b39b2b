#include "robust_cluster/iod.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "robust_cluster/error.hpp"
#include "robust_cluster/estimators.hpp"

namespace robust_cluster {

void IodParams::validate() const {
  detail::require(m1 >= 1, "IOD m1 must be >= 1");
  detail::require(m >= 1, "IOD m must be >= 1");
  detail::require(beta > 0.0 && beta < 1.0, "IOD beta must be in (0, 1)");
  detail::require(k >= 2, "IOD requires k >= 2");
}

IodParams default_params(std::size_t n, int k, double alpha) {
  detail::require(alpha > 0.0 && alpha < 1.0, "alpha must be in (0, 1)");
  detail::require(k >= 2, "IOD requires k >= 2");
  // Products within 1e-9 (relative) of an integer count as that integer.
  auto snap = [](double x) {
    const double r = std::round(x);
    return std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x)) ? r : x;
  };
  const double nd = static_cast<double>(n);
  IodParams p;
  p.k = k;
  p.m1 = static_cast<std::size_t>(std::max(1.0, std::ceil(snap(nd * alpha / 4.0))));
  if (k == 2) {
    p.beta = alpha / 4.0;
    p.m = static_cast<std::size_t>(std::max(1.0, std::floor(snap(nd * alpha * alpha / 16.0))));
  } else {
    p.beta = alpha / (4.0 * k);
    p.m = static_cast<std::size_t>(std::max(1.0, std::floor(snap(nd * p.beta * p.beta / 2.0))));
  }
  return p;
}

namespace detail {

namespace {

// Members ordered by distance to `center` (ties by index), with distances.
std::pair<std::vector<std::size_t>, std::vector<double>> order_by_distance(
    const DistanceMatrix& dist, std::span<const std::size_t> members, std::size_t center) {
  std::vector<std::pair<double, std::size_t>> tmp;
  tmp.reserve(members.size());
  for (std::size_t i : members) tmp.emplace_back(dist(center, i), i);
  std::sort(tmp.begin(), tmp.end());
  std::vector<std::size_t> order(tmp.size());
  std::vector<double> d(tmp.size());
  for (std::size_t q = 0; q < tmp.size(); ++q) {
    d[q] = tmp[q].first;
    order[q] = tmp[q].second;
  }
  return {std::move(order), std::move(d)};
}

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

IodTrace iod2_on_subset(const DistanceMatrix& dist, std::span<const std::size_t> members,
                        const IodParams& p) {
  const std::size_t n = members.size();
  if (n < p.m1 + p.m) throw InfeasibleError("IOD2 needs at least m1 + m points");

  const std::size_t first = hdp(dist, members, p.m1).index;
  const auto [order, d_first] = order_by_distance(dist, members, first);

  const std::size_t steps = ceil_div(n - p.m1, p.m);
  std::vector<double> totdist;
  std::vector<std::size_t> second;
  for (std::size_t l = 1; l <= steps; ++l) {
    const std::size_t inside = std::min(n, p.m1 + (l - 1) * p.m);
    const std::size_t outside = n - inside;
    if (outside == 0) break;
    const double dist1 = d_first[quantile_rank(inside, 1.0 - p.beta) - 1];
    std::span<const std::size_t> complement(order.data() + inside, outside);
    const HdpResult h = hdp(dist, complement, quantile_rank(outside, 1.0 - p.beta));
    totdist.push_back(dist1 + h.radius);
    second.push_back(h.index);
  }

  // argmin over l in {1, ..., steps - 1}; the last step joins only when
  // requested or when it is the only step.
  std::size_t range = totdist.size();
  if (!p.include_final_step && range == steps && range > 1) --range;
  std::size_t best = 0;
  for (std::size_t l = 1; l < range; ++l)
    if (totdist[l] < totdist[best]) best = l;

  IodTrace t;
  t.indices = {first, second[best]};
  t.totdist = totdist[best];
  t.chosen_steps = {best + 1};
  return t;
}

}  // namespace

IodTrace iod_on_subset(const DistanceMatrix& dist, std::span<const std::size_t> members, int k,
                       const IodParams& p) {
  if (k == 2) return iod2_on_subset(dist, members, p);

  const std::size_t n = members.size();
  if (n < p.m1 + p.m) throw InfeasibleError("IOD level has fewer than m1 + m points");

  const std::size_t anchor = hdp(dist, members, p.m1).index;
  const auto [order, d_anchor] = order_by_distance(dist, members, anchor);

  const std::size_t steps = (n - p.m1) / p.m;
  bool found = false;
  IodTrace best;
  std::size_t skipped = 0;
  for (std::size_t l = 1; l <= steps; ++l) {
    const std::size_t inside = p.m1 + (l - 1) * p.m;
    const std::size_t outside = n - inside;
    const double dist_k = d_anchor[quantile_rank(inside, 1.0 - p.beta) - 1];
    std::span<const std::size_t> complement(order.data() + inside, outside);
    IodTrace sub;
    try {
      sub = iod_on_subset(dist, complement, k - 1, p);
    } catch (const InfeasibleError&) {
      ++skipped;
      continue;
    }
    skipped += sub.skipped;
    const double total = dist_k + sub.totdist;
    if (!found || total < best.totdist) {
      found = true;
      best.indices = sub.indices;
      best.indices.push_back(anchor);
      best.totdist = total;
      best.chosen_steps = {l};
      best.chosen_steps.insert(best.chosen_steps.end(), sub.chosen_steps.begin(),
                               sub.chosen_steps.end());
    }
  }
  if (!found) throw InfeasibleError("every IOD recursion branch was too small");
  best.skipped = skipped;
  return best;
}

}  // namespace detail

namespace {

IodResult finish(const PointSet& points, detail::IodTrace t) {
  CentroidSet c = CentroidSet::from_points(points, t.indices);
  return {std::move(c), std::move(t.indices), t.totdist, std::move(t.chosen_steps), t.skipped};
}

}  // namespace

IodResult iod2(const PointSet& points, const IodParams& params) {
  params.validate();
  detail::require(params.k == 2, "iod2 requires k = 2");
  detail::require(points.size() >= params.m1 + params.m, "IOD2 requires n >= m1 + m");
  const DistanceMatrix dist = pairwise_distances(points);
  std::vector<std::size_t> all(points.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return finish(points, detail::iod_on_subset(dist, all, 2, params));
}

IodResult iodk(const PointSet& points, const IodParams& params) {
  params.validate();
  detail::require(static_cast<std::size_t>(params.k) <= points.size(), "k exceeds n");
  if (params.k == 2) return iod2(points, params);
  const DistanceMatrix dist = pairwise_distances(points);
  std::vector<std::size_t> all(points.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return finish(points, detail::iod_on_subset(dist, all, params.k, params));
}

}  // namespace robust_cluster
