#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "robust_cluster/geometry.hpp"
#include "robust_cluster/partition.hpp"
#include "robust_cluster/rng.hpp"

namespace robust_cluster {

enum class ScaleConvention {
  per_coordinate,  // Sigma = sigma^2 I
  matrix_scalar,   // Sigma = sigma I, the printed t density taken literally
};

struct GaussianLaw {
  double sigma = 1.0;
};
/// w = z / sqrt(W / nu), z spherical Gaussian, W ~ chi^2_nu.
struct MvtLaw {
  double nu = 1.5;
  double sigma = 5.0;
  ScaleConvention convention = ScaleConvention::per_coordinate;
};
struct UniformBoxLaw {
  double half_width = 1.0;
};
/// Uniform direction with radius R, P[R > x] = 1 / (1 + (x/scale)^(1-epsilon)).
struct RadialDecayLaw {
  double epsilon = 0.5;
  double scale = 1.0;
};

using ErrorLaw = std::variant<GaussianLaw, MvtLaw, UniformBoxLaw, RadialDecayLaw>;

struct MixtureSpec {
  CentroidSet centroids;
  std::vector<std::size_t> counts;  // per cluster, each >= 1
  ErrorLaw error_law;
};

enum class OutlierStrategy { far_clump, midpoints, ring };

struct OutlierSpec {
  std::size_t count = 0;
  OutlierStrategy strategy = OutlierStrategy::far_clump;
  double multiple = 50.0;  // far_clump: distance in units of Delta
  double radius = 0.0;     // ring radius

  /// count = floor(n alpha (1 - psi)).
  static std::size_t budget(std::size_t n, double alpha, double psi);
};

struct LabeledSample {
  PointSet points;
  LabelVector labels;
};

struct ContaminatedSample {
  PointSet points;
  LabelVector labels;  // outliers carry sentinel 0
  std::vector<bool> keep_mask;
};

/// k points uniform in [-1,1]^d scaled so the minimum pairwise distance is
/// exactly delta_min.
CentroidSet gen_centroids(std::size_t k, std::size_t d, double delta_min, Rng& rng);

/// One error vector of dimension d.
std::vector<double> sample_error(const ErrorLaw& law, std::size_t d, Rng& rng);

/// Points grouped by cluster in label order.
LabeledSample sample_mixture(const MixtureSpec& spec, Rng& rng);

/// Appends spec.count adversarial points. far_clump and midpoints need
/// the true centroids (k >= 2).
ContaminatedSample inject_outliers(const PointSet& points, const LabelVector& labels,
                                   const CentroidSet& centroids, const OutlierSpec& spec,
                                   Rng& rng);

struct ThreeCentroidPathology {
  PointSet points;
  LabelVector truth;
  CentroidSet centroids;
  LabelVector initial_labels;
};

/// Centroids -Delta/2, Delta/2, c Delta/(2 beta) in 1-D, Uniform(-1,1)
/// errors, n/3 points each (n rounded down to a multiple of 3). The
/// initial labels move ceil(n beta / 3) random points of cluster 3 to 2.
ThreeCentroidPathology lloyd_pathology_three(std::size_t n, double Delta, double beta, double c,
                                             Rng& rng);

/// Two 1-D clusters at 0 and Delta, n/2 points each, errors +-R with
/// P[R > x] = 1 / (1 + x^(1-epsilon)).
LabeledSample lloyd_pathology_heavy(std::size_t n, double Delta, double epsilon_tail, Rng& rng);

}  // namespace robust_cluster
