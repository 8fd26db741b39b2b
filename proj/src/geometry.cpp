#include "robust_cluster/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "robust_cluster/error.hpp"

namespace robust_cluster {

PointSet::PointSet(std::size_t n, std::size_t d, std::vector<double> data)
    : n_(n), d_(d), data_(std::move(data)) {
  detail::require(n >= 1, "PointSet requires at least one point");
  detail::require(d >= 1, "PointSet requires dimension >= 1");
  detail::require(data_.size() == n * d, "PointSet data size does not match n*d");
  for (double v : data_) detail::require(std::isfinite(v), "PointSet entries must be finite");
}

PointSet PointSet::from_rows(const std::vector<std::vector<double>>& rows) {
  detail::require(!rows.empty(), "PointSet requires at least one point");
  const std::size_t d = rows.front().size();
  std::vector<double> data;
  data.reserve(rows.size() * d);
  for (const auto& r : rows) {
    detail::require(r.size() == d, "ragged rows in PointSet::from_rows");
    data.insert(data.end(), r.begin(), r.end());
  }
  return PointSet(rows.size(), d, std::move(data));
}

PointSet PointSet::subset(std::span<const std::size_t> indices) const {
  std::vector<double> data;
  data.reserve(indices.size() * d_);
  for (std::size_t i : indices) {
    detail::require(i < n_, "subset index out of range");
    auto r = row(i);
    data.insert(data.end(), r.begin(), r.end());
  }
  return PointSet(indices.size(), d_, std::move(data));
}

PointSet PointSet::concat(const PointSet& other) const {
  detail::require(other.d_ == d_, "concat dimension mismatch");
  std::vector<double> data = data_;
  data.insert(data.end(), other.data_.begin(), other.data_.end());
  return PointSet(n_ + other.n_, d_, std::move(data));
}

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    const double diff = a[c] - b[c];
    s += diff * diff;
  }
  return s;
}

double distance(std::span<const double> a, std::span<const double> b) noexcept {
  return std::sqrt(squared_distance(a, b));
}

DistanceMatrix pairwise_distances(const PointSet& points) {
  const std::size_t n = points.size();
  DistanceMatrix dm(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = distance(points.row(i), points.row(j));
      dm(i, j) = v;
      dm(j, i) = v;
    }
  }
  return dm;
}

double order_stat(std::span<const double> values, std::size_t rank) {
  detail::require(rank >= 1 && rank <= values.size(), "order_stat rank out of range");
  std::vector<double> buf(values.begin(), values.end());
  auto nth = buf.begin() + static_cast<std::ptrdiff_t>(rank - 1);
  std::nth_element(buf.begin(), nth, buf.end());
  return *nth;
}

std::size_t quantile_rank(std::size_t count, double fraction) {
  detail::require(count >= 1, "quantile_rank requires count >= 1");
  detail::require(fraction > 0.0 && fraction <= 1.0, "quantile_rank fraction must be in (0, 1]");
  const double x = fraction * static_cast<double>(count);
  const double nearest = std::round(x);
  const double r = std::abs(x - nearest) <= 1e-9 * std::max(1.0, x) ? nearest : std::ceil(x);
  const auto rank = static_cast<std::size_t>(r);
  return std::clamp<std::size_t>(rank, 1, count);
}

}  // namespace robust_cluster
