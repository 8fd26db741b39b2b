#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace robust_cluster {

struct ReferenceCell {
  double mean = 0.0;
  double stderr_ = 0.0;
};

/// Published mislabeling tables keyed by (table, scenario, method).
///
/// File format: CSV with header `table,scenario,method,mean,stderr`.
/// Scenario keys look like `k=2 nu=10`, `k=3 sigma=5`, `k=2 d=30` and
/// `classes=WV outliers=with`. Loading validates that every mean lies in
/// [0, 1] and that every table grid is complete.
class ReferenceTables {
 public:
  static ReferenceTables load(const std::filesystem::path& csv);
  /// Loads `reference/published_tables.csv` under data_dir().
  static ReferenceTables load_default();

  /// Throws std::out_of_range for an unknown cell.
  ReferenceCell lookup(const std::string& table, const std::string& scenario,
                       const std::string& method) const;
  bool contains(const std::string& table, const std::string& scenario,
                const std::string& method) const;

  std::vector<std::string> scenarios(const std::string& table) const;
  std::vector<std::string> methods(const std::string& table) const;
  std::size_t size() const noexcept { return cells_.size(); }

 private:
  std::map<std::tuple<std::string, std::string, std::string>, ReferenceCell> cells_;
  std::map<std::string, std::vector<std::string>> scenario_order_;
  std::map<std::string, std::vector<std::string>> method_order_;
};

/// $ROBUST_CLUSTER_DATA_DIR if set, otherwise the source tree's data/.
std::filesystem::path data_dir();

}  // namespace robust_cluster
