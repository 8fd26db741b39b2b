#include "robust_cluster/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "robust_cluster/error.hpp"

namespace robust_cluster {

namespace {

double open_unit(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double x = 0.0;
  while (x <= 0.0) x = u(rng);
  return x;
}

std::vector<double> unit_direction(std::size_t d, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(d);
  double norm = 0.0;
  while (norm == 0.0) {
    for (double& x : v) x = g(rng);
    norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
  }
  for (double& x : v) x /= norm;
  return v;
}

struct LawSampler {
  std::size_t d;
  Rng& rng;

  std::vector<double> operator()(const GaussianLaw& law) const {
    detail::require(law.sigma >= 0.0, "Gaussian sigma must be >= 0");
    std::vector<double> w(d, 0.0);
    if (law.sigma == 0.0) return w;
    std::normal_distribution<double> g(0.0, law.sigma);
    for (double& x : w) x = g(rng);
    return w;
  }

  std::vector<double> operator()(const MvtLaw& law) const {
    detail::require(law.nu > 0.0, "t degrees of freedom must be > 0");
    detail::require(law.sigma > 0.0, "t scale must be > 0");
    const double s =
        law.convention == ScaleConvention::per_coordinate ? law.sigma : std::sqrt(law.sigma);
    std::normal_distribution<double> g(0.0, s);
    std::chi_squared_distribution<double> chi(law.nu);
    std::vector<double> w(d);
    for (double& x : w) x = g(rng);
    double W = 0.0;
    while (W <= 0.0) W = chi(rng);
    const double scale = 1.0 / std::sqrt(W / law.nu);
    for (double& x : w) x *= scale;
    return w;
  }

  std::vector<double> operator()(const UniformBoxLaw& law) const {
    detail::require(law.half_width >= 0.0, "box half width must be >= 0");
    std::vector<double> w(d, 0.0);
    if (law.half_width == 0.0) return w;
    std::uniform_real_distribution<double> u(-law.half_width, law.half_width);
    for (double& x : w) x = u(rng);
    return w;
  }

  std::vector<double> operator()(const RadialDecayLaw& law) const {
    detail::require(law.epsilon > 0.0 && law.epsilon < 1.0, "tail epsilon must be in (0, 1)");
    detail::require(law.scale > 0.0, "tail scale must be > 0");
    // Inverse of the survival function 1 / (1 + x^(1-eps)).
    const double u = open_unit(rng);
    const double r = law.scale * std::pow(1.0 / u - 1.0, 1.0 / (1.0 - law.epsilon));
    std::vector<double> w;
    if (d == 1) {
      std::bernoulli_distribution sign(0.5);
      w = {sign(rng) ? r : -r};
    } else {
      w = unit_direction(d, rng);
      for (double& x : w) x *= r;
    }
    return w;
  }
};

}  // namespace

std::size_t OutlierSpec::budget(std::size_t n, double alpha, double psi) {
  detail::require(alpha > 0.0 && alpha <= 1.0, "alpha must be in (0, 1]");
  detail::require(psi > 0.0 && psi <= 1.0, "psi must be in (0, 1]");
  const double x = static_cast<double>(n) * alpha * (1.0 - psi);
  const double r = std::round(x);
  return static_cast<std::size_t>(std::abs(x - r) <= 1e-9 * std::max(1.0, x) ? r : std::floor(x));
}

CentroidSet gen_centroids(std::size_t k, std::size_t d, double delta_min, Rng& rng) {
  detail::require(k >= 1 && d >= 1, "gen_centroids requires k, d >= 1");
  detail::require(delta_min > 0.0, "gen_centroids requires delta_min > 0");
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> c(k * d);
  for (;;) {
    for (double& x : c) x = u(rng);
    if (k == 1) return CentroidSet(1, d, std::move(c));
    CentroidSet raw(k, d, c);
    const double sep = raw.min_separation();
    if (sep < 1e-6) continue;  // near-coincident draw
    const double factor = delta_min / sep;
    for (double& x : c) x *= factor;
    return CentroidSet(k, d, std::move(c));
  }
}

std::vector<double> sample_error(const ErrorLaw& law, std::size_t d, Rng& rng) {
  return std::visit(LawSampler{d, rng}, law);
}

LabeledSample sample_mixture(const MixtureSpec& spec, Rng& rng) {
  const std::size_t k = spec.centroids.k();
  const std::size_t d = spec.centroids.dim();
  detail::require(spec.counts.size() == k, "one count per centroid is required");
  for (std::size_t c : spec.counts) detail::require(c >= 1, "cluster counts must be >= 1");
  if (k >= 2) detail::require(spec.centroids.min_separation() > 0.0, "centroids must be distinct");

  const std::size_t n = std::accumulate(spec.counts.begin(), spec.counts.end(), std::size_t{0});
  std::vector<double> data;
  data.reserve(n * d);
  std::vector<int> labels;
  labels.reserve(n);
  for (std::size_t h = 0; h < k; ++h) {
    const auto theta = spec.centroids.center(h);
    for (std::size_t i = 0; i < spec.counts[h]; ++i) {
      const auto w = sample_error(spec.error_law, d, rng);
      for (std::size_t j = 0; j < d; ++j) data.push_back(theta[j] + w[j]);
      labels.push_back(static_cast<int>(h) + 1);
    }
  }
  return {PointSet(n, d, std::move(data)), LabelVector(std::move(labels), static_cast<int>(k))};
}

ContaminatedSample inject_outliers(const PointSet& points, const LabelVector& labels,
                                   const CentroidSet& centroids, const OutlierSpec& spec,
                                   Rng& rng) {
  detail::require(labels.size() == points.size(), "labels and points differ in length");
  detail::require(centroids.dim() == points.dim(), "centroid dimension mismatch");
  const std::size_t n = points.size();
  const std::size_t d = points.dim();
  std::vector<bool> mask(n + spec.count, false);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(n), true);
  std::vector<int> lab = labels.values();
  lab.resize(n + spec.count, 0);
  if (spec.count == 0)
    return {points, LabelVector(std::move(lab), labels.k(), true), std::move(mask)};

  std::vector<double> extra;
  extra.reserve(spec.count * d);
  switch (spec.strategy) {
    case OutlierStrategy::far_clump: {
      const double Delta = centroids.min_separation();
      std::vector<double> mid(d, 0.0);
      for (std::size_t h = 0; h < centroids.k(); ++h)
        for (std::size_t j = 0; j < d; ++j) mid[j] += centroids.center(h)[j];
      for (double& x : mid) x /= static_cast<double>(centroids.k());
      double hull = 0.0;
      for (std::size_t h = 0; h < centroids.k(); ++h)
        hull = std::max(hull, distance(mid, centroids.center(h)));
      const auto dir = unit_direction(d, rng);
      std::vector<double> center(d);
      for (std::size_t j = 0; j < d; ++j) center[j] = mid[j] + dir[j] * (hull + spec.multiple * Delta);
      const double ball = Delta / 100.0;
      for (std::size_t i = 0; i < spec.count; ++i) {
        const auto v = unit_direction(d, rng);
        const double r = ball * std::pow(open_unit(rng), 1.0 / static_cast<double>(d));
        for (std::size_t j = 0; j < d; ++j) extra.push_back(center[j] + r * v[j]);
      }
      break;
    }
    case OutlierStrategy::midpoints: {
      detail::require(centroids.k() >= 2, "midpoint outliers need at least two centroids");
      std::vector<std::pair<std::size_t, std::size_t>> pairs;
      for (std::size_t g = 0; g < centroids.k(); ++g)
        for (std::size_t h = g + 1; h < centroids.k(); ++h) pairs.emplace_back(g, h);
      for (std::size_t i = 0; i < spec.count; ++i) {
        const auto [g, h] = pairs[i % pairs.size()];
        for (std::size_t j = 0; j < d; ++j)
          extra.push_back(0.5 * (centroids.center(g)[j] + centroids.center(h)[j]));
      }
      break;
    }
    case OutlierStrategy::ring: {
      detail::require(spec.radius >= 0.0, "ring radius must be >= 0");
      std::vector<double> mean(d, 0.0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) mean[j] += points.row(i)[j];
      for (double& x : mean) x /= static_cast<double>(n);
      for (std::size_t i = 0; i < spec.count; ++i) {
        const auto v = unit_direction(d, rng);
        for (std::size_t j = 0; j < d; ++j) extra.push_back(mean[j] + spec.radius * v[j]);
      }
      break;
    }
  }
  PointSet all = points.concat(PointSet(spec.count, d, std::move(extra)));
  return {std::move(all), LabelVector(std::move(lab), labels.k(), true), std::move(mask)};
}

ThreeCentroidPathology lloyd_pathology_three(std::size_t n, double Delta, double beta, double c,
                                             Rng& rng) {
  detail::require(beta > 0.0 && beta < 1.0, "beta must be in (0, 1)");
  detail::require(c > 2.0, "c must exceed 2");
  detail::require(Delta >= 4.0, "Delta must be at least 4 so the clusters are disjoint");
  const std::size_t per = n / 3;
  detail::require(per >= 1, "n must be at least 3");
  CentroidSet centroids(3, 1, {-Delta / 2.0, Delta / 2.0, c * Delta / (2.0 * beta)});
  MixtureSpec spec{centroids, {per, per, per}, UniformBoxLaw{1.0}};
  LabeledSample s = sample_mixture(spec, rng);

  const double x = static_cast<double>(3 * per) * beta / 3.0;
  const double xr = std::round(x);
  auto flips = static_cast<std::size_t>(std::abs(x - xr) <= 1e-9 * std::max(1.0, x) ? xr
                                                                                   : std::ceil(x));
  flips = std::min(flips, per);
  std::vector<std::size_t> third(per);
  std::iota(third.begin(), third.end(), 2 * per);
  for (std::size_t i = 0; i < flips; ++i) {
    std::uniform_int_distribution<std::size_t> u(i, per - 1);
    std::swap(third[i], third[u(rng)]);
  }
  std::vector<int> init = s.labels.values();
  for (std::size_t i = 0; i < flips; ++i) init[third[i]] = 2;
  return {std::move(s.points), std::move(s.labels), std::move(centroids),
          LabelVector(std::move(init), 3)};
}

LabeledSample lloyd_pathology_heavy(std::size_t n, double Delta, double epsilon_tail, Rng& rng) {
  detail::require(epsilon_tail > 0.0 && epsilon_tail < 1.0, "tail epsilon must be in (0, 1)");
  detail::require(n >= 2 && n % 2 == 0, "n must be even and >= 2");
  detail::require(Delta > 0.0, "Delta must be positive");
  CentroidSet centroids(2, 1, {0.0, Delta});
  MixtureSpec spec{centroids, {n / 2, n / 2}, RadialDecayLaw{epsilon_tail, 1.0}};
  return sample_mixture(spec, rng);
}

}  // namespace robust_cluster
