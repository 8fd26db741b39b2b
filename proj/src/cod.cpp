#include "robust_cluster/cod.hpp"

#include "alternation.hpp"
#include "robust_cluster/error.hpp"
#include "robust_cluster/estimators.hpp"

namespace robust_cluster {

void CodParams::validate() const {
  detail::require(delta >= 0.0 && delta < 0.5, "COD delta must be in [0, 0.5)");
  detail::require(epsilon >= 0.0, "COD epsilon must be >= 0");
  detail::require(max_iterations >= 1, "COD max_iterations must be >= 1");
}

namespace {

CodResult run(const PointSet& points, std::optional<CentroidSet> previous, LabelVector labels,
              const CodParams& params) {
  params.validate();
  detail::LoopControl ctl{params.epsilon, params.max_iterations, detail::EmptyRule::keep_previous};
  auto tm = [&](std::span<const std::size_t> members) {
    return trimmed_mean(points, members, params.delta).center;
  };
  auto out = detail::alternate(points, std::move(previous), std::move(labels), tm, ctl, nullptr);
  CodState last = out.history.back();
  return {std::move(last), std::move(out.history)};
}

}  // namespace

CodResult cod_cluster(const PointSet& points, const CentroidSet& init, const CodParams& params) {
  detail::require(init.k() <= points.size(), "k exceeds the number of points");
  LabelVector labels = assign_labels(points, init);
  return run(points, init, std::move(labels), params);
}

CodResult cod_cluster(const PointSet& points, const LabelVector& init, const CodParams& params) {
  detail::require(!init.has_sentinel(), "initial labels must be in 1..k");
  return run(points, std::nullopt, init, params);
}

}  // namespace robust_cluster
