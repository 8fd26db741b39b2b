#include "robust_cluster/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "robust_cluster/error.hpp"

namespace robust_cluster {

namespace {

using Confusion = std::vector<std::vector<double>>;

// C[g][h] = #{i : truth = g+1, est = h+1}
Confusion confusion(const LabelVector& est, const LabelVector& truth, const std::vector<bool>* mask,
                    std::size_t& used) {
  detail::require(est.size() == truth.size(), "label vectors differ in length");
  const auto K = static_cast<std::size_t>(std::max(est.k(), truth.k()));
  Confusion c(K, std::vector<double>(K, 0.0));
  used = 0;
  for (std::size_t i = 0; i < est.size(); ++i) {
    if (mask && !(*mask)[i]) continue;
    detail::require(est[i] >= 1 && truth[i] >= 1, "label 0 is only admitted outside the mask");
    c[static_cast<std::size_t>(truth[i] - 1)][static_cast<std::size_t>(est[i] - 1)] += 1.0;
    ++used;
  }
  return c;
}

std::vector<std::size_t> best_bijection(const Confusion& c) {
  const std::size_t K = c.size();
  if (K > 8) return max_weight_assignment(c);
  std::vector<std::size_t> perm(K);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<std::size_t> best = perm;
  double best_agree = -1.0;
  do {
    double agree = 0.0;
    for (std::size_t g = 0; g < K; ++g) agree += c[g][perm[g]];
    if (agree > best_agree) {
      best_agree = agree;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

double loss_from(const Confusion& c, std::size_t used, MislabelingMode mode) {
  double agree = 0.0;
  if (mode == MislabelingMode::permutations) {
    const auto perm = best_bijection(c);
    for (std::size_t g = 0; g < c.size(); ++g) agree += c[g][perm[g]];
  } else {
    for (const auto& row : c) agree += *std::max_element(row.begin(), row.end());
  }
  return 1.0 - agree / static_cast<double>(used);
}

}  // namespace

std::vector<std::size_t> max_weight_assignment(const std::vector<std::vector<double>>& weight) {
  // Shortest augmenting path with potentials on cost = -weight; 1-based
  // internal arrays.
  const std::size_t n = weight.size();
  for (const auto& r : weight) detail::require(r.size() == n, "assignment matrix must be square");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = -weight[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<std::size_t> assign(n);
  for (std::size_t j = 1; j <= n; ++j) assign[p[j] - 1] = j - 1;
  return assign;
}

double mislabeling(const LabelVector& estimated, const LabelVector& truth, MislabelingMode mode) {
  std::size_t used = 0;
  const auto c = confusion(estimated, truth, nullptr, used);
  detail::require(used > 0, "mislabeling of an empty label vector");
  return loss_from(c, used, mode);
}

double mislabeling_on_mask(const LabelVector& estimated, const LabelVector& truth,
                           const std::vector<bool>& keep_mask, MislabelingMode mode) {
  detail::require(keep_mask.size() == truth.size(), "mask length differs from labels");
  std::size_t used = 0;
  const auto c = confusion(estimated, truth, &keep_mask, used);
  detail::require(used > 0, "mislabeling_on_mask requires a nonempty mask");
  return loss_from(c, used, mode);
}

std::vector<int> best_alignment(const LabelVector& estimated, const LabelVector& truth) {
  std::size_t used = 0;
  const auto c = confusion(estimated, truth, nullptr, used);
  const auto perm = best_bijection(c);
  std::vector<int> out(perm.size());
  for (std::size_t g = 0; g < perm.size(); ++g) out[g] = static_cast<int>(perm[g]) + 1;
  return out;
}

double wcss(const PointSet& points, const CentroidSet& centroids) {
  detail::require(points.dim() == centroids.dim(), "points and centroids differ in dimension");
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t h = 0; h < centroids.k(); ++h)
      best = std::min(best, squared_distance(points.row(i), centroids.center(h)));
    total += best;
  }
  return total;
}

Diagnostics diagnostics(const PointSet& points, const LabelVector& truth,
                        const LabelVector& est_labels, const CentroidSet& true_centroids,
                        const CentroidSet& est_centroids, std::optional<double> sigma) {
  detail::require(truth.k() == est_labels.k(), "label sets differ in k");
  detail::require(static_cast<std::size_t>(truth.k()) == true_centroids.k() &&
                      true_centroids.k() == est_centroids.k(),
                  "centroid sets differ from the label k");
  detail::require(truth.size() == points.size() && est_labels.size() == points.size(),
                  "label length differs from point count");
  detail::require(true_centroids.dim() == points.dim() && est_centroids.dim() == points.dim(),
                  "centroid dimension mismatch");
  detail::require(true_centroids.k() >= 2, "diagnostics need k >= 2");

  const std::size_t k = true_centroids.k();
  const auto align = best_alignment(est_labels, truth);  // true g -> est label

  Diagnostics out;
  out.counts.assign(k, std::vector<std::size_t>(k, 0));
  std::vector<std::size_t> est_to_true(k);
  for (std::size_t g = 0; g < k; ++g) est_to_true[static_cast<std::size_t>(align[g] - 1)] = g;
  std::vector<std::size_t> n_true(k, 0), n_est(k, 0);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto g = static_cast<std::size_t>(truth[i] - 1);
    const auto h = est_to_true[static_cast<std::size_t>(est_labels[i] - 1)];
    ++out.counts[g][h];
    ++n_true[g];
    ++n_est[h];
  }

  out.H = 1.0;
  for (std::size_t g = 0; g < k; ++g) {
    const double ngg = static_cast<double>(out.counts[g][g]);
    const double a = n_true[g] ? ngg / static_cast<double>(n_true[g]) : 0.0;
    const double b = n_est[g] ? ngg / static_cast<double>(n_est[g]) : 0.0;
    out.H = std::min(out.H, std::min(a, b));
  }

  out.Delta = true_centroids.min_separation();
  double worst = 0.0;
  for (std::size_t g = 0; g < k; ++g) {
    const auto h = static_cast<std::size_t>(align[g] - 1);
    worst = std::max(worst, distance(est_centroids.center(h), true_centroids.center(g)));
  }
  out.Lambda = worst / out.Delta;
  out.alpha = static_cast<double>(*std::min_element(n_true.begin(), n_true.end())) /
              static_cast<double>(truth.size());
  if (sigma) {
    detail::require(*sigma > 0.0, "sigma must be positive");
    out.snr = out.Delta / (2.0 * *sigma);
  }
  return out;
}

MeanStderr mean_and_stderr(std::span<const double> values) {
  MeanStderr r;
  double sum = 0.0;
  for (double v : values)
    if (!std::isnan(v)) {
      sum += v;
      ++r.count;
    }
  if (r.count == 0) {
    r.mean = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  r.mean = sum / static_cast<double>(r.count);
  if (r.count > 1) {
    double ss = 0.0;
    for (double v : values)
      if (!std::isnan(v)) ss += (v - r.mean) * (v - r.mean);
    r.stderr_ = std::sqrt(ss / static_cast<double>(r.count - 1)) /
                std::sqrt(static_cast<double>(r.count));
  }
  return r;
}

}  // namespace robust_cluster
