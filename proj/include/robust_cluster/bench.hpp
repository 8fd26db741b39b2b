#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "robust_cluster/metrics.hpp"
#include "robust_cluster/reference.hpp"
#include "robust_cluster/synth.hpp"

namespace robust_cluster {

enum class InitMethod { iod, kmeanspp, random, oracle };
enum class ClusterMethod { cod, lloyd, kmedian };

struct MethodSpec {
  InitMethod init = InitMethod::iod;
  ClusterMethod cluster = ClusterMethod::cod;
  double delta = 0.3;  // COD only

  /// Display name, e.g. "COD+IOD", "Lloyd+kmeans++", "kmedian+IOD".
  std::string label() const;
};

struct MixtureScenario {
  std::size_t k = 2;
  std::size_t d = 5;
  ErrorLaw law = MvtLaw{};
  double delta_sep = 25.0;
  std::size_t per_cluster = 200;
};

struct LettersScenario {
  std::filesystem::path path;
  std::vector<char> classes{'W', 'V'};
  std::size_t per_class = 100;
  std::optional<char> outlier_class;
  std::size_t outlier_count = 0;
};

using Scenario = std::variant<MixtureScenario, LettersScenario>;

struct IodOverrides {
  std::size_t m1 = 20;
  std::size_t m = 10;
  double beta = 0.05;
};

struct ExperimentConfig {
  std::string name;
  Scenario scenario = MixtureScenario{};
  std::vector<MethodSpec> methods;
  std::size_t reps = 30;
  std::uint64_t base_seed = 1;
  std::optional<OutlierSpec> outliers;
  std::optional<IodOverrides> iod_overrides;
  double epsilon = 1e-8;     // shared by COD, Lloyd and k-median
  int max_iterations = 50;
  std::optional<double> alpha;  // IOD default-parameter alpha; else min cluster fraction
  std::size_t threads = 0;      // 0: $ROBUST_CLUSTER_THREADS or hardware concurrency

  void validate() const;
  std::uint64_t rep_seed(std::size_t rep) const noexcept { return base_seed ^ rep; }
};

struct MethodReport {
  std::string label;
  MeanStderr stats;
  std::vector<double> raw;  // per rep; NaN marks a failed rep
  std::size_t failures = 0;
  bool valid = true;  // false when more than 10% of reps failed
  double wall_seconds = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<MethodReport> methods;
  std::vector<std::uint64_t> seeds;  // seed ledger, one per rep
  double wall_seconds = 0.0;
};

/// Runs every method on the same data for every rep. Rep r uses seed
/// base_seed ^ r; data, outliers and each method draw from disjoint
/// streams derived from it, so results do not depend on thread count or
/// on which other methods are configured.
ExperimentReport run_cell(const ExperimentConfig& config);

/// Replays one (rep, method) cell in isolation.
double replay(const ExperimentConfig& config, std::size_t rep, std::size_t method);

/// `method,rep,seed,mislabeling`, one row per method x rep.
std::string report_csv(const ExperimentReport& report);

struct PublishedCellRef {
  const ReferenceTables* tables = nullptr;
  std::string table;
  std::string scenario;
};

nlohmann::json report_json(const ExperimentReport& report, const PublishedCellRef& published = {});
nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& j);

enum class TableId { nu, sigma, dim, letters };
TableId parse_table_id(const std::string& name);
std::string to_string(TableId id);

struct TableOptions {
  std::size_t reps = 30;
  double scale = 1.0;  // multiplies the per-cluster (per-class) count
  std::uint64_t seed = 1;
  std::size_t threads = 0;
  std::filesystem::path letters_path;  // required for TableId::letters
};

struct TableReport {
  TableId id = TableId::nu;
  std::vector<std::string> scenarios;  // reference-table keys
  std::vector<ExperimentReport> cells;
};

/// The experiment grid behind one published table.
std::vector<std::pair<std::string, ExperimentConfig>> table_grid(TableId id,
                                                                 const TableOptions& options);

TableReport reproduce_table(TableId id, const TableOptions& options);

/// Side-by-side text rendering against the published values.
std::string render_table(const TableReport& report, const ReferenceTables& reference);
nlohmann::json table_json(const TableReport& report, const ReferenceTables& reference);

struct PathologyConfig {
  std::size_t reps = 100;
  std::optional<std::size_t> three_reps;  // per-case overrides of reps
  std::optional<std::size_t> heavy_reps;
  std::uint64_t seed = 1;
  std::size_t threads = 0;
  // Three well-separated centroids with one far away.
  std::size_t three_n = 300;
  double three_Delta = 100.0;
  double three_beta = 0.3;
  double three_c = 3.0;
  double three_cod_delta = 0.425;
  // Two centroids with polynomially decaying tails.
  std::size_t heavy_n = 2000;
  double heavy_Delta = 20.0;
  double heavy_epsilon = 0.5;
  double heavy_cod_delta = 0.3;
  double heavy_alpha = 0.5;
  int max_iterations = 50;
  double epsilon = 1e-8;
  double lloyd_threshold = 0.25;  // Lloyd counted as failing at or above
  double cod_threshold = 0.1;     // COD counted as succeeding at or below
};

struct PathologyCase {
  std::string name;
  std::vector<double> lloyd;  // final mislabeling per rep
  std::vector<double> cod;
  MeanStderr lloyd_stats;
  MeanStderr cod_stats;
  double lloyd_fail_fraction = 0.0;  // share of reps with lloyd >= lloyd_threshold
  double cod_success_fraction = 0.0;
  std::size_t lloyd_emptied_reps = 0;  // reps where Lloyd saw an empty cluster
};

struct PathologyReport {
  PathologyCase three;
  PathologyCase heavy;
};

/// Lloyd from the corrupted labels versus COD from the same labels on the
/// three-centroid construction; Lloyd+IOD versus COD+IOD on heavy tails.
PathologyReport pathology_suite(const PathologyConfig& config);
nlohmann::json pathology_json(const PathologyReport& report);

/// Number of worker threads for `requested` (0 = environment/default).
std::size_t resolve_threads(std::size_t requested);

}  // namespace robust_cluster
