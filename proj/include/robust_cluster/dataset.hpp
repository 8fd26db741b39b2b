#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "robust_cluster/geometry.hpp"
#include "robust_cluster/partition.hpp"
#include "robust_cluster/rng.hpp"

namespace robust_cluster {

struct CsvOptions {
  /// nullopt: a first row that does not parse as numbers is a header.
  std::optional<bool> has_header;
  /// 0-based column holding categorical truth labels, if any.
  std::optional<std::size_t> label_column;
  char delimiter = ',';
};

struct CsvDataset {
  PointSet points;
  std::optional<LabelVector> truth;
  std::vector<std::string> categories;  // truth label l is categories[l-1]
  std::filesystem::path source;
  std::vector<std::size_t> feature_columns;
  std::vector<bool> keep_mask;  // all true unless outliers were appended
};

/// Numeric CSV. Truth categories are numbered by first appearance.
/// Throws ParseError naming the offending line.
CsvDataset read_csv(const std::filesystem::path& path, const CsvOptions& options = {});

/// One centroid per row, no header.
CentroidSet read_centroids_csv(const std::filesystem::path& path);

/// Per-coordinate z-scores; constant columns are only centered.
PointSet standardize(const PointSet& points);

/// Subsample of a Letter Recognition file (`LETTER,f1..f16`).
///
/// `per_class` rows are drawn without replacement from each class; truth
/// labels follow the order of `classes`. `outlier_count` rows of
/// `outlier_class` are appended with sentinel label 0 and keep_mask false.
CsvDataset ingest_letters(const std::filesystem::path& path, const std::vector<char>& classes,
                          std::size_t per_class, std::optional<char> outlier_class,
                          std::size_t outlier_count, std::uint64_t seed);

/// The same, reusing already parsed rows.
struct LetterRows {
  std::vector<char> letter;
  std::vector<std::vector<double>> features;
};
LetterRows read_letters(const std::filesystem::path& path);
CsvDataset sample_letters(const LetterRows& rows, const std::vector<char>& classes,
                          std::size_t per_class, std::optional<char> outlier_class,
                          std::size_t outlier_count, Rng& rng);

}  // namespace robust_cluster
